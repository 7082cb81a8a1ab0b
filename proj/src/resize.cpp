#include "mattekit/resize.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace mattekit {
namespace {

struct Tap {
  int i0;
  int i1;
  float t;
};

std::vector<Tap> taps(int src_n, int dst_n) {
  std::vector<Tap> out(dst_n);
  const double scale = static_cast<double>(src_n) / dst_n;
  for (int i = 0; i < dst_n; ++i) {
    double s = (i + 0.5) * scale - 0.5;
    s = std::clamp(s, 0.0, static_cast<double>(src_n - 1));
    const int i0 = static_cast<int>(std::floor(s));
    const int i1 = std::min(i0 + 1, src_n - 1);
    out[i] = {i0, i1, static_cast<float>(s - i0)};
  }
  return out;
}

}  // namespace

Plane<float> resize_bilinear(const Plane<float>& src, int width, int height) {
  if (width <= 0 || height <= 0) throw Error("resize: target dims must be positive");
  if (src.empty()) throw Error("resize: empty source");
  if (src.width() == width && src.height() == height) return src;

  const auto tx = taps(src.width(), width);
  const auto ty = taps(src.height(), height);
  Plane<float> out(width, height);
  for (int y = 0; y < height; ++y) {
    const float* r0 = src.row(ty[y].i0);
    const float* r1 = src.row(ty[y].i1);
    const float wy = ty[y].t;
    float* dst = out.row(y);
    for (int x = 0; x < width; ++x) {
      const Tap& t = tx[x];
      const float top = r0[t.i0] + t.t * (r0[t.i1] - r0[t.i0]);
      const float bot = r1[t.i0] + t.t * (r1[t.i1] - r1[t.i0]);
      float v = top + wy * (bot - top);
      // Guard against rounding just outside the hull of the four taps.
      const float lo = std::min({r0[t.i0], r0[t.i1], r1[t.i0], r1[t.i1]});
      const float hi = std::max({r0[t.i0], r0[t.i1], r1[t.i0], r1[t.i1]});
      dst[x] = std::clamp(v, lo, hi);
    }
  }
  return out;
}

GrayMap resize_bilinear(const GrayMap& src, int width, int height) {
  return GrayMap(resize_bilinear(static_cast<const Plane<float>&>(src), width, height));
}

AlphaMatte resize_bilinear(const AlphaMatte& src, int width, int height) {
  return AlphaMatte::clamped(
      resize_bilinear(static_cast<const Plane<float>&>(src), width, height));
}

Image resize_bilinear(const Image& src, int width, int height) {
  return Image(resize_bilinear(src.channel(0), width, height),
               resize_bilinear(src.channel(1), width, height),
               resize_bilinear(src.channel(2), width, height));
}

Trimap resize_nearest(const Trimap& src, int width, int height) {
  if (width <= 0 || height <= 0) throw Error("resize: target dims must be positive");
  if (src.width() == width && src.height() == height) return src;
  Trimap out(width, height);
  for (int y = 0; y < height; ++y) {
    const int sy = static_cast<int>(static_cast<long long>(y) * src.height() / height);
    const auto* s = src.row(sy);
    auto* d = out.row(y);
    for (int x = 0; x < width; ++x) {
      d[x] = s[static_cast<long long>(x) * src.width() / width];
    }
  }
  return out;
}

Image crop(const Image& src, int x0, int y0, int width, int height) {
  return Image(crop(src.channel(0), x0, y0, width, height),
               crop(src.channel(1), x0, y0, width, height),
               crop(src.channel(2), x0, y0, width, height));
}

Image flip_horizontal(const Image& src) {
  return Image(flip_horizontal(src.channel(0)), flip_horizontal(src.channel(1)),
               flip_horizontal(src.channel(2)));
}

}  // namespace mattekit

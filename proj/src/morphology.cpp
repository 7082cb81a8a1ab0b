#include "mattekit/morphology.hpp"

#include <cmath>
#include <limits>

namespace mattekit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Lower envelope of parabolas (Felzenszwalb & Huttenlocher) over the finite
// samples f[q] at positions pos[q]; writes min_q f[q] + (i - pos[q])^2 for
// i in [0, n).
void envelope_1d(const std::vector<double>& pos, const std::vector<double>& f,
                 std::vector<int>& hull, std::vector<double>& bounds,
                 double* out, int n) {
  const int m = static_cast<int>(pos.size());
  if (m == 0) {
    for (int i = 0; i < n; ++i) out[i] = kInf;
    return;
  }
  hull.assign(m, 0);
  bounds.assign(m + 1, 0.0);
  int k = 0;
  hull[0] = 0;
  bounds[0] = -kInf;
  bounds[1] = kInf;
  for (int q = 1; q < m; ++q) {
    auto meet = [&](int v) {
      return ((f[q] + pos[q] * pos[q]) - (f[v] + pos[v] * pos[v])) /
             (2.0 * (pos[q] - pos[v]));
    };
    double s = meet(hull[k]);
    while (s <= bounds[k]) {
      --k;
      s = meet(hull[k]);
    }
    ++k;
    hull[k] = q;
    bounds[k] = s;
    bounds[k + 1] = kInf;
  }
  k = 0;
  for (int i = 0; i < n; ++i) {
    while (bounds[k + 1] < i) ++k;
    const double d = i - pos[hull[k]];
    out[i] = d * d + f[hull[k]];
  }
}

}  // namespace

std::vector<double> squared_distance_to(const BinaryMask& seeds, Frame frame) {
  const int w = seeds.width();
  const int h = seeds.height();
  std::vector<double> cols(static_cast<std::size_t>(w) * h, kInf);

  // Column pass: 1D distance to the nearest seed in the same column.
  std::vector<double> above(h);
  for (int x = 0; x < w; ++x) {
    double last = frame == Frame::kSeed ? -1.0 : -kInf;
    for (int y = 0; y < h; ++y) {
      if (seeds.test(x, y)) last = y;
      above[y] = y - last;
    }
    double next = frame == Frame::kSeed ? static_cast<double>(h) : kInf;
    for (int y = h - 1; y >= 0; --y) {
      if (seeds.test(x, y)) next = y;
      const double d = std::min(above[y], next - y);
      cols[static_cast<std::size_t>(y) * w + x] = d * d;
    }
  }

  // Row pass over the column distances; frame columns contribute f = 0.
  std::vector<double> out(cols.size());
  std::vector<double> pos, f, bounds;
  std::vector<int> hull;
  pos.reserve(w + 2);
  f.reserve(w + 2);
  for (int y = 0; y < h; ++y) {
    pos.clear();
    f.clear();
    if (frame == Frame::kSeed) {
      pos.push_back(-1.0);
      f.push_back(0.0);
    }
    const double* row = cols.data() + static_cast<std::size_t>(y) * w;
    for (int x = 0; x < w; ++x) {
      if (std::isfinite(row[x])) {
        pos.push_back(x);
        f.push_back(row[x]);
      }
    }
    if (frame == Frame::kSeed) {
      pos.push_back(w);
      f.push_back(0.0);
    }
    envelope_1d(pos, f, hull, bounds, out.data() + static_cast<std::size_t>(y) * w, w);
  }
  return out;
}

GrayMap distance_transform(const BinaryMask& mask) {
  const auto sq = squared_distance_to(mask.complement(), Frame::kSeed);
  GrayMap out(mask.size());
  auto dst = out.pixels();
  auto src = mask.pixels();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    dst[i] = src[i] ? static_cast<float>(std::sqrt(sq[i])) : 0.0f;
  }
  return out;
}

BinaryMask dilate(const BinaryMask& mask, int radius) {
  if (radius < 0) throw Error("dilate: negative radius");
  if (radius == 0) return mask;
  const auto sq = squared_distance_to(mask, Frame::kIgnore);
  const double r2 = static_cast<double>(radius) * radius;
  BinaryMask out(mask.size());
  auto dst = out.pixels();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = sq[i] <= r2 ? 1 : 0;
  return out;
}

BinaryMask erode(const BinaryMask& mask, int radius) {
  if (radius < 0) throw Error("erode: negative radius");
  if (radius == 0) return mask;
  const auto sq = squared_distance_to(mask.complement(), Frame::kSeed);
  const double r2 = static_cast<double>(radius) * radius;
  BinaryMask out(mask.size());
  auto dst = out.pixels();
  auto src = mask.pixels();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    dst[i] = (src[i] && sq[i] > r2) ? 1 : 0;
  }
  return out;
}

BinaryMask boundary(const BinaryMask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  BinaryMask out(mask.size());
  auto is_set = [&](int x, int y) {
    return x >= 0 && y >= 0 && x < w && y < h && mask.test(x, y);
  };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask.test(x, y)) continue;
      if (!is_set(x - 1, y) || !is_set(x + 1, y) || !is_set(x, y - 1) ||
          !is_set(x, y + 1)) {
        out.set(x, y);
      }
    }
  }
  return out;
}

}  // namespace mattekit

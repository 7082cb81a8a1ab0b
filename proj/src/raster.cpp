#include "mattekit/raster.hpp"

#include <algorithm>

namespace mattekit {

std::string to_string(Size s) {
  return std::to_string(s.width) + "x" + std::to_string(s.height);
}

AlphaMatte AlphaMatte::clamped(const Plane<float>& p) {
  AlphaMatte out(p.size());
  auto src = p.pixels();
  auto dst = out.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i] = std::clamp(src[i], 0.0f, 1.0f);
  }
  return out;
}

std::size_t BinaryMask::count() const {
  auto px = pixels();
  return static_cast<std::size_t>(
      std::count_if(px.begin(), px.end(), [](std::uint8_t v) { return v != 0; }));
}

BinaryMask BinaryMask::complement() const {
  BinaryMask out(size());
  auto src = pixels();
  auto dst = out.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] ? 0 : 1;
  return out;
}

namespace {

template <typename Op>
BinaryMask combine(const BinaryMask& a, const BinaryMask& b, Op op,
                   const char* what) {
  require_same_size(a, b, what);
  BinaryMask out(a.size());
  auto pa = a.pixels();
  auto pb = b.pixels();
  auto dst = out.pixels();
  for (std::size_t i = 0; i < pa.size(); ++i) {
    dst[i] = op(pa[i] != 0, pb[i] != 0) ? 1 : 0;
  }
  return out;
}

}  // namespace

BinaryMask operator&(const BinaryMask& a, const BinaryMask& b) {
  return combine(a, b, [](bool x, bool y) { return x && y; }, "mask and");
}

BinaryMask operator|(const BinaryMask& a, const BinaryMask& b) {
  return combine(a, b, [](bool x, bool y) { return x || y; }, "mask or");
}

BinaryMask operator-(const BinaryMask& a, const BinaryMask& b) {
  return combine(a, b, [](bool x, bool y) { return x && !y; }, "mask minus");
}

BinaryMask Trimap::region(std::uint8_t value) const {
  BinaryMask out(size());
  auto src = pixels();
  auto dst = out.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] == value ? 1 : 0;
  return out;
}

bool Trimap::valid() const {
  auto px = pixels();
  return std::all_of(px.begin(), px.end(), [](std::uint8_t v) {
    return v == kBackground || v == kUnknown || v == kForeground;
  });
}

Image::Image(int width, int height, float fill)
    : channels_{Plane<float>(width, height, fill), Plane<float>(width, height, fill),
                Plane<float>(width, height, fill)} {}

Image::Image(Plane<float> r, Plane<float> g, Plane<float> b)
    : channels_{std::move(r), std::move(g), std::move(b)} {
  if (channels_[0].size() != channels_[1].size() ||
      channels_[0].size() != channels_[2].size()) {
    throw Error("image channels differ in size");
  }
}

}  // namespace mattekit

#pragma once

#include "mattekit/raster.hpp"

namespace mattekit {

/// Bilinear resampling with pixel-center alignment and edge clamping. Output
/// is a convex combination of source samples, so the source value range is
/// preserved; unchanged dimensions return an exact copy.
Plane<float> resize_bilinear(const Plane<float>& src, int width, int height);
GrayMap resize_bilinear(const GrayMap& src, int width, int height);
AlphaMatte resize_bilinear(const AlphaMatte& src, int width, int height);
Image resize_bilinear(const Image& src, int width, int height);

/// Nearest-neighbor resampling that maps destination x to source
/// floor(x * src_width / width). Keeps trimap labels intact and sends the
/// window center (width/2) to the source center (src_width/2) whenever the
/// two sizes share that center exactly.
Trimap resize_nearest(const Trimap& src, int width, int height);

/// Works for any single-plane raster type (Plane, GrayMap, AlphaMatte, Trimap, ...).
template <typename R>
R crop(const R& src, int x0, int y0, int width, int height) {
  if (x0 < 0 || y0 < 0 || width < 0 || height < 0 ||
      x0 + width > src.width() || y0 + height > src.height()) {
    throw Error("crop window out of bounds");
  }
  R out(width, height);
  for (int y = 0; y < height; ++y) {
    const auto* s = src.row(y0 + y) + x0;
    std::copy(s, s + width, out.row(y));
  }
  return out;
}

template <typename R>
R flip_horizontal(const R& src) {
  R out(src.size());
  for (int y = 0; y < src.height(); ++y) {
    std::reverse_copy(src.row(y), src.row(y) + src.width(), out.row(y));
  }
  return out;
}

Image crop(const Image& src, int x0, int y0, int width, int height);
Image flip_horizontal(const Image& src);

}  // namespace mattekit

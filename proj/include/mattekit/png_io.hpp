#pragma once

#include <filesystem>

#include "mattekit/raster.hpp"

namespace mattekit {

/// Trimap read from disk. `snapped` is set when any byte had to be moved to
/// the nearest of {0, 128, 255}.
struct LoadedTrimap {
  Trimap trimap;
  bool snapped = false;
};

// Readers accept 8- and 16-bit PNGs and normalize samples by the full-scale
// value (255 or 65535). Grayscale kinds require a single-channel PNG; the
// color reader requires RGB or RGBA (alpha is ignored).
Image load_image(const std::filesystem::path& path);
GrayMap load_gray(const std::filesystem::path& path);
/// Samples >= 0.5 of full scale become true.
BinaryMask load_mask(const std::filesystem::path& path);
LoadedTrimap load_trimap(const std::filesystem::path& path);
/// Gray PNGs load as-is; gray+alpha and RGBA PNGs yield their alpha channel,
/// which covers cut-out PNGs collected from the web.
AlphaMatte load_alpha(const std::filesystem::path& path);

/// Nearest of {0,128,255}; equidistant bytes go to 128.
std::uint8_t snap_trimap_byte(std::uint8_t b);

// Writers emit 8-bit PNGs, rounding to the nearest byte after clamping to
// [0,1]. Masks are written as 0/255.
void save_png(const Image& image, const std::filesystem::path& path);
void save_png(const Plane<float>& plane, const std::filesystem::path& path);
void save_png(const BinaryMask& mask, const std::filesystem::path& path);
void save_png(const Trimap& trimap, const std::filesystem::path& path);

}  // namespace mattekit

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>

#include "mattekit/raster.hpp"

namespace mattekit {

/// Per-pixel distribution over (background, unknown, foreground).
struct ProbTrimap {
  Plane<float> bg;
  Plane<float> unknown;
  Plane<float> fg;

  ProbTrimap() = default;
  ProbTrimap(int width, int height);
  explicit ProbTrimap(Size s) : ProbTrimap(s.width, s.height) {}

  Size size() const { return bg.size(); }
  int width() const { return bg.width(); }
  int height() const { return bg.height(); }

  /// Planes in [0,1] summing to 1 within `tolerance` at every pixel.
  bool valid(float tolerance = 1e-4f) const;

  friend bool operator==(const ProbTrimap&, const ProbTrimap&) = default;
};

/// alpha_f = F + U * alpha_m, clamped to [0,1].
AlphaMatte fuse(const ProbTrimap& prob, const AlphaMatte& alpha_m);

/// Per-pixel argmax over (B, U, F) mapped to {0, 128, 255}. A pixel whose
/// maximum is not unique becomes unknown.
Trimap harden(const ProbTrimap& prob);

/// One-hot lift; harden(soften(t)) == t.
ProbTrimap soften(const Trimap& trimap);

// PTM file layout, all little-endian:
//   8 bytes  magic "PTMAP\0\0\1"
//   u32      width
//   u32      height
//   f32[w*h] background plane, then unknown, then foreground (row-major)
inline constexpr std::array<char, 8> kPtmMagic = {'P', 'T', 'M', 'A', 'P', '\0', '\0', '\1'};

struct PtmReadResult {
  ProbTrimap prob;
  /// Pixels whose planes summed to more than 1e-4 away from 1 and were rescaled.
  std::size_t renormalized = 0;
};

void write_ptm(const ProbTrimap& prob, const std::filesystem::path& path);
PtmReadResult read_ptm(const std::filesystem::path& path);

}  // namespace mattekit

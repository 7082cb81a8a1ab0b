#pragma once

// Small synthetic datasets written to disk for pipeline tests.

#include <filesystem>
#include <random>
#include <string>

#include "mattekit/png_io.hpp"
#include "oracles.hpp"

namespace fixture {

using namespace mattekit;

/// Soft-edged disk matte with a textured RGB foreground. The disk's top edge
/// runs through the image center, so windows of any size centered there
/// straddle the object boundary.
inline void write_foreground(const std::filesystem::path& fg_dir,
                             const std::filesystem::path& alpha_dir, const std::string& stem,
                             int w, int h, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  const double r = 0.3 * std::min(w, h);
  const double cx = w / 2.0 + (u(rng) - 0.5) * 0.1 * w, cy = h / 2.0 + r;
  AlphaMatte a(w, h);
  Image fg(w, h);
  const float tint[3] = {u(rng), u(rng), u(rng)};
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double d = std::hypot(x - cx, y - cy);
      a.at(x, y) = static_cast<float>(std::clamp((r - d) / 6.0 + 0.5, 0.0, 1.0));
      for (int c = 0; c < 3; ++c)
        fg.channel(c).at(x, y) = std::clamp(tint[c] + 0.2f * (u(rng) - 0.5f), 0.0f, 1.0f);
    }
  std::filesystem::create_directories(fg_dir);
  std::filesystem::create_directories(alpha_dir);
  save_png(fg, fg_dir / (stem + ".png"));
  save_png(a, alpha_dir / (stem + ".png"));
}

inline void write_background(const std::filesystem::path& dir, const std::string& stem, int w,
                             int h, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  Image bg(w, h);
  for (int c = 0; c < 3; ++c)
    for (float& v : bg.channel(c).pixels()) v = u(rng);
  std::filesystem::create_directories(dir);
  save_png(bg, dir / (stem + ".png"));
}

/// fg/, alpha/ with `n_fg` pairs (one of them smaller than the largest crop)
/// and bg0..bg{n_bg_dirs-1}/ with two backgrounds each.
inline void write_dataset(const std::filesystem::path& root, int n_fg, int n_bg_dirs) {
  for (int i = 0; i < n_fg; ++i) {
    const int w = i == 0 ? 400 : 680 + 10 * i;
    const int h = i == 0 ? 360 : 660;
    write_foreground(root / "fg", root / "alpha", "obj" + std::to_string(i), w, h, 100 + i);
  }
  for (int d = 0; d < n_bg_dirs; ++d)
    for (int k = 0; k < 2; ++k)
      write_background(root / ("bg" + std::to_string(d)), "b" + std::to_string(k), 500 + 40 * k,
                       420, 900 + 10 * d + k);
}

}  // namespace fixture

#include "mattekit/pyramid.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace mattekit {
namespace {

void check_levels(Size s, int levels) {
  if (levels < 1) throw Error("pyramid: need at least one level");
  if (s.width <= 0 || s.height <= 0) throw Error("pyramid: empty input");
  const long long need = 1LL << (levels - 1);
  if (s.width < need || s.height < need) {
    throw Error("pyramid: " + to_string(s) + " too small for " +
                std::to_string(levels) + " levels");
  }
}

template <typename T>
Plane<T> blur_impl(const Plane<T>& src) {
  constexpr T k[5] = {T(1) / 16, T(4) / 16, T(6) / 16, T(4) / 16, T(1) / 16};
  const int w = src.width();
  const int h = src.height();
  Plane<T> tmp(w, h);
  for (int y = 0; y < h; ++y) {
    const T* s = src.row(y);
    T* d = tmp.row(y);
    for (int x = 0; x < w; ++x) {
      T acc = 0;
      for (int i = -2; i <= 2; ++i) acc += k[i + 2] * s[std::clamp(x + i, 0, w - 1)];
      d[x] = acc;
    }
  }
  Plane<T> out(w, h);
  for (int y = 0; y < h; ++y) {
    T* d = out.row(y);
    for (int x = 0; x < w; ++x) {
      T acc = 0;
      for (int i = -2; i <= 2; ++i) acc += k[i + 2] * tmp.at(x, std::clamp(y + i, 0, h - 1));
      d[x] = acc;
    }
  }
  return out;
}

template <typename T>
Plane<T> down_impl(const Plane<T>& src) {
  const Plane<T> smooth = blur_impl(src);
  Plane<T> out((src.width() + 1) / 2, (src.height() + 1) / 2);
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) out.at(x, y) = smooth.at(2 * x, 2 * y);
  }
  return out;
}

template <typename T>
Plane<T> up_impl(const Plane<T>& coarse, Size fine) {
  const int cw = coarse.width();
  const int ch = coarse.height();
  Plane<T> out(fine);
  for (int y = 0; y < fine.height; ++y) {
    const int y0 = std::min(y / 2, ch - 1);
    const int y1 = std::min(y0 + 1, ch - 1);
    const T ty = (y % 2 == 1 && y0 + 1 < ch) ? T(0.5) : T(0);
    for (int x = 0; x < fine.width; ++x) {
      const int x0 = std::min(x / 2, cw - 1);
      const int x1 = std::min(x0 + 1, cw - 1);
      const T tx = (x % 2 == 1 && x0 + 1 < cw) ? T(0.5) : T(0);
      const T top = coarse.at(x0, y0) + tx * (coarse.at(x1, y0) - coarse.at(x0, y0));
      const T bot = coarse.at(x0, y1) + tx * (coarse.at(x1, y1) - coarse.at(x0, y1));
      out.at(x, y) = top + ty * (bot - top);
    }
  }
  return out;
}

template <typename T>
std::vector<Plane<T>> laplacian_impl(const Plane<T>& src, int levels) {
  check_levels(src.size(), levels);
  std::vector<Plane<T>> g{src};
  for (int i = 1; i < levels; ++i) g.push_back(down_impl(g.back()));
  std::vector<Plane<T>> lap;
  lap.reserve(levels);
  for (int i = 0; i + 1 < levels; ++i) {
    Plane<T> band = up_impl(g[i + 1], g[i].size());
    auto fine = g[i].pixels();
    for (std::size_t k = 0; k < fine.size(); ++k) band[k] = fine[k] - band[k];
    lap.push_back(std::move(band));
  }
  lap.push_back(std::move(g.back()));
  return lap;
}

}  // namespace

GrayMap blur_binomial(const Plane<float>& src) { return GrayMap(blur_impl(src)); }

GrayMap pyr_down(const Plane<float>& src) { return GrayMap(down_impl(src)); }

GrayMap pyr_up(const Plane<float>& coarse, Size fine) { return GrayMap(up_impl(coarse, fine)); }

PyramidStack gaussian_pyramid(const Plane<float>& src, int levels) {
  check_levels(src.size(), levels);
  PyramidStack g;
  g.levels.reserve(levels);
  g.levels.emplace_back(src);
  for (int i = 1; i < levels; ++i) g.levels.push_back(pyr_down(g.levels.back()));
  return g;
}

PyramidStack laplacian_pyramid(const Plane<float>& src, int levels) {
  PyramidStack lap;
  for (auto& level : laplacian_impl(src, levels)) lap.levels.emplace_back(std::move(level));
  return lap;
}

std::vector<Plane<double>> laplacian_pyramid_f64(const Plane<double>& src, int levels) {
  return laplacian_impl(src, levels);
}

GrayMap reconstruct(const PyramidStack& laplacian) {
  if (laplacian.levels.empty()) throw Error("reconstruct: empty pyramid");
  GrayMap current = laplacian.levels.back();
  for (int i = laplacian.count() - 2; i >= 0; --i) {
    const GrayMap& band = laplacian.levels[i];
    GrayMap up = pyr_up(current, band.size());
    auto b = band.pixels();
    auto u = up.pixels();
    for (std::size_t k = 0; k < u.size(); ++k) u[k] += b[k];
    current = std::move(up);
  }
  return current;
}

}  // namespace mattekit

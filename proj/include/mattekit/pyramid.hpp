#pragma once

#include <vector>

#include "mattekit/raster.hpp"

namespace mattekit {

/// Ordered levels, finest first. Level i+1 has ceil(size_i / 2) per axis.
struct PyramidStack {
  std::vector<GrayMap> levels;

  int count() const { return static_cast<int>(levels.size()); }
};

/// Separable [1,4,6,4,1]/16 smoothing with edge-replicate padding.
GrayMap blur_binomial(const Plane<float>& src);

/// Smooth, then keep every second sample starting at index 0.
GrayMap pyr_down(const Plane<float>& src);

/// Bilinear expansion onto a finer grid of size `fine`: fine sample x sits
/// at coarse coordinate x/2, clamped to the last coarse sample.
GrayMap pyr_up(const Plane<float>& coarse, Size fine);

PyramidStack gaussian_pyramid(const Plane<float>& src, int levels);

/// L_i = G_i - pyr_up(G_{i+1}) for the first levels-1 entries; the last
/// entry is the coarsest Gaussian level. Throws when either axis is smaller
/// than 2^(levels-1).
PyramidStack laplacian_pyramid(const Plane<float>& src, int levels);

/// Same construction carried out in double precision.
std::vector<Plane<double>> laplacian_pyramid_f64(const Plane<double>& src, int levels);

/// Inverts laplacian_pyramid: G_i = L_i + pyr_up(G_{i+1}).
GrayMap reconstruct(const PyramidStack& laplacian);

}  // namespace mattekit

#pragma once

#include <vector>

#include "mattekit/raster.hpp"

namespace mattekit {

/// Whether pixels just outside the raster act as seeds of the transform.
enum class Frame { kIgnore, kSeed };

/// Exact squared Euclidean distance from every pixel to the nearest seed
/// (true pixel of `seeds`), row-major. Pixels with no reachable seed hold
/// +infinity. Separable lower-envelope transform, O(width*height).
std::vector<double> squared_distance_to(const BinaryMask& seeds, Frame frame);

/// Euclidean distance from each true pixel to the nearest false pixel; the
/// frame counts as false. False pixels map to 0.
GrayMap distance_transform(const BinaryMask& mask);

/// Disk structuring element: true at p iff a true pixel lies within
/// Euclidean distance <= radius. Radius 0 is the identity.
BinaryMask dilate(const BinaryMask& mask, int radius);

/// Dual of dilate with the frame treated as false, so pixels within
/// `radius` of the frame erode away.
BinaryMask erode(const BinaryMask& mask, int radius);

/// True pixels with at least one false 4-neighbor (frame counts as false).
BinaryMask boundary(const BinaryMask& mask);

}  // namespace mattekit

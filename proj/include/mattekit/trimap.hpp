#pragma once

#include <cstdint>

#include "mattekit/raster.hpp"

namespace mattekit {

enum class BoundaryClass : std::uint8_t { kNone = 0, kHair, kFur, kSolid };

/// Per-pixel boundary label; non-none labels only sit on mask boundary pixels.
class BoundaryClassMap : public Plane<BoundaryClass> {
 public:
  using Plane::Plane;
  std::size_t count(BoundaryClass c) const;
};

/// Output of an external human-parsing step reduced to two classes. Pixels
/// the parser did not label (e.g. scene background) may be left unlabeled.
enum class ParsingLabel : std::uint8_t { kUnlabeled = 0, kNonHair, kHair };

class ParsingMap : public Plane<ParsingLabel> {
 public:
  using Plane::Plane;
  /// true -> hair, false -> non-hair.
  static ParsingMap from_hair_mask(const BinaryMask& hair);
  /// Byte encoding used on disk: 255 hair, 0 non-hair, 128 unlabeled
  /// (bytes are snapped to the nearest of the three).
  static ParsingMap from_bytes(const Plane<std::uint8_t>& bytes);
};

/// Object scale D and per-class dilation rates (fractions of D).
struct TrimapParams {
  double object_scale = 0.0;
  double rate_hair = 0.035;
  double rate_fur = 0.025;
  double rate_solid = 0.015;
  int min_radius = 1;

  double rate(BoundaryClass c) const;
  /// max(min_radius, round-half-up(rate * D)).
  int radius(BoundaryClass c) const;
};

/// Maximum of the Euclidean distance map (frame as background); 0 when empty.
double object_scale(const BinaryMask& mask);

/// Labels the mask's boundary pixels. With `fur_object` every boundary pixel
/// is fur. Otherwise, with a parsing map, a boundary pixel is hair when its
/// nearest labeled parsing pixel is hair (ties go to hair) and solid
/// otherwise. Without either hint all boundary pixels are solid.
BoundaryClassMap classify_boundary(const BinaryMask& mask,
                                   const ParsingMap* parsing = nullptr,
                                   bool fur_object = false);

/// Unknown band = union over classes of dilate(boundary pixels of class c,
/// radius_c); the rest of the mask is foreground, everything else background.
Trimap adaptive_trimap(const BinaryMask& mask, const BoundaryClassMap& classes,
                       const TrimapParams& params);

/// Erosion-dilation trimap from a ground-truth matte with a disk of radius k:
/// unknown = (dilate(B,k) \ erode(B,k)) | dilate(P,k) with B = {a > 0.5} and
/// P = {0 < a < 1}; foreground = erode(B,k) \ unknown.
Trimap conventional_trimap(const AlphaMatte& alpha, int kernel_radius);

/// Radius drawn uniformly from [k_min, k_max] by a generator seeded with `seed`.
int draw_kernel_radius(std::uint64_t seed, int k_min, int k_max);

/// conventional_trimap with radius draw_kernel_radius(seed, k_min, k_max).
Trimap noisy_trimap(const AlphaMatte& alpha, std::uint64_t seed, int k_min, int k_max);

}  // namespace mattekit

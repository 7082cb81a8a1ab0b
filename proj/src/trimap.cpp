#include "mattekit/trimap.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mattekit/morphology.hpp"
#include "mattekit/png_io.hpp"

namespace mattekit {

std::size_t BoundaryClassMap::count(BoundaryClass c) const {
  auto px = pixels();
  return static_cast<std::size_t>(std::count(px.begin(), px.end(), c));
}

ParsingMap ParsingMap::from_hair_mask(const BinaryMask& hair) {
  ParsingMap out(hair.size());
  auto src = hair.pixels();
  auto dst = out.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i] = src[i] ? ParsingLabel::kHair : ParsingLabel::kNonHair;
  }
  return out;
}

ParsingMap ParsingMap::from_bytes(const Plane<std::uint8_t>& bytes) {
  ParsingMap out(bytes.size());
  auto src = bytes.pixels();
  auto dst = out.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) {
    switch (snap_trimap_byte(src[i])) {
      case Trimap::kForeground: dst[i] = ParsingLabel::kHair; break;
      case Trimap::kBackground: dst[i] = ParsingLabel::kNonHair; break;
      default: dst[i] = ParsingLabel::kUnlabeled; break;
    }
  }
  return out;
}

double TrimapParams::rate(BoundaryClass c) const {
  switch (c) {
    case BoundaryClass::kHair: return rate_hair;
    case BoundaryClass::kFur: return rate_fur;
    case BoundaryClass::kSolid: return rate_solid;
    case BoundaryClass::kNone: break;
  }
  return 0.0;
}

int TrimapParams::radius(BoundaryClass c) const {
  const auto r = static_cast<int>(std::floor(rate(c) * object_scale + 0.5));
  return std::max(min_radius, r);
}

double object_scale(const BinaryMask& mask) {
  const GrayMap dt = distance_transform(mask);
  auto px = dt.pixels();
  if (px.empty()) return 0.0;
  return *std::max_element(px.begin(), px.end());
}

BoundaryClassMap classify_boundary(const BinaryMask& mask, const ParsingMap* parsing,
                                   bool fur_object) {
  if (parsing && fur_object) {
    throw Error("classify_boundary: fur objects take no parsing map");
  }
  if (parsing) require_same_size(mask, *parsing, "classify_boundary");

  const BinaryMask edge = boundary(mask);
  BoundaryClassMap out(mask.size(), BoundaryClass::kNone);
  auto e = edge.pixels();
  auto dst = out.pixels();

  if (!parsing) {
    const auto label = fur_object ? BoundaryClass::kFur : BoundaryClass::kSolid;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i]) dst[i] = label;
    }
    return out;
  }

  BinaryMask hair(mask.size());
  BinaryMask non_hair(mask.size());
  auto labels = parsing->pixels();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    hair[i] = labels[i] == ParsingLabel::kHair;
    non_hair[i] = labels[i] == ParsingLabel::kNonHair;
  }
  const auto to_hair = squared_distance_to(hair, Frame::kIgnore);
  const auto to_other = squared_distance_to(non_hair, Frame::kIgnore);
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (!e[i]) continue;
    const bool is_hair = std::isfinite(to_hair[i]) && to_hair[i] <= to_other[i];
    dst[i] = is_hair ? BoundaryClass::kHair : BoundaryClass::kSolid;
  }
  return out;
}

Trimap adaptive_trimap(const BinaryMask& mask, const BoundaryClassMap& classes,
                       const TrimapParams& params) {
  require_same_size(mask, classes, "adaptive_trimap");
  BinaryMask unknown(mask.size());
  auto cls = classes.pixels();
  for (auto c : {BoundaryClass::kHair, BoundaryClass::kFur, BoundaryClass::kSolid}) {
    BinaryMask seeds(mask.size());
    bool any = false;
    for (std::size_t i = 0; i < cls.size(); ++i) {
      if (cls[i] == c) {
        seeds[i] = 1;
        any = true;
      }
    }
    if (any) unknown = unknown | dilate(seeds, params.radius(c));
  }

  Trimap out(mask.size());
  auto m = mask.pixels();
  auto u = unknown.pixels();
  auto dst = out.pixels();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    dst[i] = u[i] ? Trimap::kUnknown : (m[i] ? Trimap::kForeground : Trimap::kBackground);
  }
  return out;
}

Trimap conventional_trimap(const AlphaMatte& alpha, int kernel_radius) {
  if (kernel_radius < 1) throw Error("conventional_trimap: kernel radius must be >= 1");
  BinaryMask solid(alpha.size());
  BinaryMask partial(alpha.size());
  auto a = alpha.pixels();
  for (std::size_t i = 0; i < a.size(); ++i) {
    solid[i] = a[i] > 0.5f;
    partial[i] = a[i] > 0.0f && a[i] < 1.0f;
  }
  const BinaryMask inner = erode(solid, kernel_radius);
  const BinaryMask unknown =
      (dilate(solid, kernel_radius) - inner) | dilate(partial, kernel_radius);

  Trimap out(alpha.size());
  auto u = unknown.pixels();
  auto in = inner.pixels();
  auto dst = out.pixels();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    dst[i] = u[i] ? Trimap::kUnknown : (in[i] ? Trimap::kForeground : Trimap::kBackground);
  }
  return out;
}

int draw_kernel_radius(std::uint64_t seed, int k_min, int k_max) {
  if (k_min < 1 || k_max < k_min) {
    throw Error("noisy_trimap: need 1 <= k_min <= k_max");
  }
  std::mt19937_64 rng(seed);
  return std::uniform_int_distribution<int>(k_min, k_max)(rng);
}

Trimap noisy_trimap(const AlphaMatte& alpha, std::uint64_t seed, int k_min, int k_max) {
  return conventional_trimap(alpha, draw_kernel_radius(seed, k_min, k_max));
}

}  // namespace mattekit

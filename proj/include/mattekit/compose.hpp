#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mattekit/raster.hpp"

namespace mattekit {

/// I = alpha * F + (1 - alpha) * B, per channel.
Image composite(const Image& fg, const Image& bg, const AlphaMatte& alpha);

struct CompositeSample {
  Image foreground;
  Image background;
  AlphaMatte alpha;
  Image composite;
};

CompositeSample make_sample(Image fg, Image bg, AlphaMatte alpha);

struct CropOrigin {
  int x = 0;
  int y = 0;

  friend bool operator==(const CropOrigin&, const CropOrigin&) = default;
};

inline constexpr int kCropSizes[] = {320, 480, 640};

bool is_allowed_crop_size(int size);

/// Picks a size x size window whose center pixel (origin + size/2) is an
/// unknown trimap pixel, uniformly among unknown pixels whose window fits in
/// the frame. When no unknown pixel admits a fitting window, one is drawn
/// uniformly and the window is clamped to the frame. Throws when the trimap
/// has no unknown pixel or is smaller than the window.
CropOrigin sample_crop(const Trimap& trimap, int size, std::uint64_t seed);

/// Horizontal flip of every raster (when `flip`), then per-channel
/// multiplicative jitter of foreground and background by independent factors
/// in [1 - strength, 1 + strength], clamped to [0,1]. Alpha is never
/// jittered; the composite is recomputed.
CompositeSample augment(const CompositeSample& sample, bool flip,
                        std::uint64_t jitter_seed, float jitter_strength);

/// One line of a synthesis manifest.
struct SynthRecord {
  std::string fg_path;
  std::string alpha_path;
  std::string bg_path;
  CropOrigin crop_origin;
  int crop_size = 320;
  bool flip = false;
  std::uint64_t jitter_seed = 0;

  friend bool operator==(const SynthRecord&, const SynthRecord&) = default;
};

/// JSON object with keys fg, alpha, bg, x, y, size, flip, jitter_seed.
std::string to_json_line(const SynthRecord& r);
SynthRecord record_from_json_line(const std::string& line);

void write_manifest(const std::vector<SynthRecord>& records,
                    const std::filesystem::path& path);
std::vector<SynthRecord> read_manifest(const std::filesystem::path& path);

struct SynthOptions {
  int per_fg = 1;
  std::uint64_t seed = 0;
  // Radius range for the noisy erosion-dilation trimap of each record.
  int k_min = 3;
  int k_max = 25;
  float jitter_strength = 0.2f;
  int out_size = 320;
};

/// Smallest uniform bilinear upscale making both axes >= `size`; identity
/// when the raster already fits. Manifest crop origins live in this frame.
Size fitted_size(Size source, int size);

/// Trimap of a record's (fitted) alpha: noisy erosion-dilation keyed by the
/// record's jitter seed.
Trimap record_trimap(const AlphaMatte& fitted_alpha, std::uint64_t jitter_seed,
                     const SynthOptions& options);

/// Pairs foregrounds with alphas by file stem, then emits `per_fg` records
/// per foreground. Background directories are used round-robin over pools
/// shuffled once from `seed`; crop sizes are uniform over {320, 480, 640}.
std::vector<SynthRecord> synthesize_manifest(
    const std::filesystem::path& fg_dir, const std::filesystem::path& alpha_dir,
    const std::vector<std::filesystem::path>& bg_dirs, const SynthOptions& options);

struct RenderedSample {
  CompositeSample sample;
  Trimap trimap;
};

/// Loads, crops, resizes to out_size, pairs with an independent background
/// crop, augments and composites one record.
RenderedSample render_record(const SynthRecord& record, const SynthOptions& options);

/// Sorted PNG files of a directory, keyed by stem.
std::vector<std::filesystem::path> list_pngs(const std::filesystem::path& dir);

}  // namespace mattekit

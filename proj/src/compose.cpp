#include "mattekit/compose.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include <json.hpp>

#include "mattekit/log.hpp"
#include "mattekit/png_io.hpp"
#include "mattekit/resize.hpp"
#include "mattekit/trimap.hpp"

namespace mattekit {
namespace {

// Decorrelates the background-crop stream from the jitter stream that shares
// the record's seed.
constexpr std::uint64_t kBackgroundStream = 0x9E3779B97F4A7C15ULL;

}  // namespace

Image composite(const Image& fg, const Image& bg, const AlphaMatte& alpha) {
  require_same_size(fg, bg, "composite");
  require_same_size(fg, alpha, "composite");
  Image out(fg.size());
  auto a = alpha.pixels();
  for (int c = 0; c < 3; ++c) {
    auto f = fg.channel(c).pixels();
    auto b = bg.channel(c).pixels();
    auto d = out.channel(c).pixels();
    for (std::size_t i = 0; i < d.size(); ++i) {
      d[i] = std::clamp(a[i] * f[i] + (1.0f - a[i]) * b[i], 0.0f, 1.0f);
    }
  }
  return out;
}

CompositeSample make_sample(Image fg, Image bg, AlphaMatte alpha) {
  Image comp = composite(fg, bg, alpha);
  return {std::move(fg), std::move(bg), std::move(alpha), std::move(comp)};
}

bool is_allowed_crop_size(int size) {
  return std::find(std::begin(kCropSizes), std::end(kCropSizes), size) !=
         std::end(kCropSizes);
}

CropOrigin sample_crop(const Trimap& trimap, int size, std::uint64_t seed) {
  const int w = trimap.width();
  const int h = trimap.height();
  if (size <= 0 || w < size || h < size) {
    throw Error("sample_crop: " + to_string(trimap.size()) +
                " source smaller than crop size " + std::to_string(size));
  }
  const int half = size / 2;
  std::vector<std::size_t> fitting;
  std::vector<std::size_t> all;
  auto px = trimap.pixels();
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (px[i] != Trimap::kUnknown) continue;
      all.push_back(i);
      if (x - half >= 0 && x - half + size <= w && y - half >= 0 && y - half + size <= h) {
        fitting.push_back(i);
      }
    }
  }
  if (all.empty()) throw Error("sample_crop: trimap has no unknown pixels");

  if (fitting.empty()) {
    warn("sample_crop: no unknown pixel admits a centered " + std::to_string(size) +
         " window; clamping to the frame");
  }
  const auto& pool = fitting.empty() ? all : fitting;
  std::mt19937_64 rng(seed);
  const std::size_t pick =
      pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
  const int cx = static_cast<int>(pick % w);
  const int cy = static_cast<int>(pick / w);
  return {std::clamp(cx - half, 0, w - size), std::clamp(cy - half, 0, h - size)};
}

CompositeSample augment(const CompositeSample& sample, bool flip,
                        std::uint64_t jitter_seed, float jitter_strength) {
  if (!(jitter_strength >= 0.0f && jitter_strength <= 1.0f)) {
    throw Error("augment: jitter strength must lie in [0,1]");
  }
  Image fg = flip ? flip_horizontal(sample.foreground) : sample.foreground;
  Image bg = flip ? flip_horizontal(sample.background) : sample.background;
  AlphaMatte alpha = flip ? flip_horizontal(sample.alpha) : sample.alpha;

  if (jitter_strength > 0.0f) {
    std::mt19937_64 rng(jitter_seed);
    std::uniform_real_distribution<float> factor(1.0f - jitter_strength,
                                                 1.0f + jitter_strength);
    for (Image* img : {&fg, &bg}) {
      for (int c = 0; c < 3; ++c) {
        const float k = factor(rng);
        for (float& v : img->channel(c).pixels()) v = std::clamp(v * k, 0.0f, 1.0f);
      }
    }
  }
  return make_sample(std::move(fg), std::move(bg), std::move(alpha));
}

std::string to_json_line(const SynthRecord& r) {
  nlohmann::json j = {
      {"fg", r.fg_path},           {"alpha", r.alpha_path},
      {"bg", r.bg_path},           {"x", r.crop_origin.x},
      {"y", r.crop_origin.y},      {"size", r.crop_size},
      {"flip", r.flip},            {"jitter_seed", r.jitter_seed},
  };
  return j.dump();
}

SynthRecord record_from_json_line(const std::string& line) {
  try {
    const auto j = nlohmann::json::parse(line);
    SynthRecord r;
    r.fg_path = j.at("fg").get<std::string>();
    r.alpha_path = j.at("alpha").get<std::string>();
    r.bg_path = j.at("bg").get<std::string>();
    r.crop_origin = {j.at("x").get<int>(), j.at("y").get<int>()};
    r.crop_size = j.at("size").get<int>();
    r.flip = j.at("flip").get<bool>();
    r.jitter_seed = j.at("jitter_seed").get<std::uint64_t>();
    if (!is_allowed_crop_size(r.crop_size)) {
      throw Error("crop size " + std::to_string(r.crop_size) + " not in {320,480,640}");
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("bad manifest line: ") + e.what());
  }
}

void write_manifest(const std::vector<SynthRecord>& records,
                    const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  for (const auto& r : records) out << to_json_line(r) << '\n';
  if (!out) throw Error("write failed: " + path.string());
}

std::vector<SynthRecord> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::vector<SynthRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(record_from_json_line(line));
  }
  return out;
}

Size fitted_size(Size source, int size) {
  const int short_side = std::min(source.width, source.height);
  if (short_side <= 0) throw Error("fitted_size: empty source");
  if (short_side >= size) return source;
  const double scale = static_cast<double>(size) / short_side;
  auto up = [&](int n) {
    return std::max(size, static_cast<int>(std::ceil(n * scale - 1e-9)));
  };
  return {up(source.width), up(source.height)};
}

Trimap record_trimap(const AlphaMatte& fitted_alpha, std::uint64_t jitter_seed,
                     const SynthOptions& options) {
  return noisy_trimap(fitted_alpha, jitter_seed, options.k_min, options.k_max);
}

std::vector<std::filesystem::path> list_pngs(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error("not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (ext == ".png") out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<SynthRecord> synthesize_manifest(
    const std::filesystem::path& fg_dir, const std::filesystem::path& alpha_dir,
    const std::vector<std::filesystem::path>& bg_dirs, const SynthOptions& options) {
  if (options.per_fg < 0) throw Error("per_fg must be non-negative");
  if (bg_dirs.empty()) throw Error("no background directories given");

  const auto fgs = list_pngs(fg_dir);
  const auto alphas = list_pngs(alpha_dir);
  if (fgs.empty()) throw Error("no foreground PNGs in " + fg_dir.string());
  std::map<std::string, std::filesystem::path> alpha_by_stem;
  for (const auto& a : alphas) alpha_by_stem[a.stem().string()] = a;

  std::vector<std::string> unpaired;
  std::map<std::string, bool> used;
  for (const auto& f : fgs) {
    auto it = alpha_by_stem.find(f.stem().string());
    if (it == alpha_by_stem.end()) {
      unpaired.push_back(f.string());
    } else {
      used[it->first] = true;
    }
  }
  for (const auto& [stem, path] : alpha_by_stem) {
    if (!used.count(stem)) unpaired.push_back(path.string());
  }
  if (!unpaired.empty()) {
    std::string msg = "unpaired foreground/alpha files:";
    for (const auto& u : unpaired) msg += " " + u;
    throw Error(msg);
  }

  std::mt19937_64 rng(options.seed);
  std::vector<std::vector<std::filesystem::path>> pools;
  for (const auto& d : bg_dirs) {
    auto pool = list_pngs(d);
    if (pool.empty()) throw Error("empty background pool: " + d.string());
    std::shuffle(pool.begin(), pool.end(), rng);
    pools.push_back(std::move(pool));
  }
  std::vector<std::size_t> cursor(pools.size(), 0);
  std::size_t next_pool = 0;

  std::vector<SynthRecord> records;
  records.reserve(fgs.size() * options.per_fg);
  std::uniform_int_distribution<int> size_pick(0, 2);
  std::uniform_int_distribution<int> coin(0, 1);
  for (const auto& fg : fgs) {
    if (options.per_fg == 0) break;
    const auto& alpha_path = alpha_by_stem.at(fg.stem().string());
    const AlphaMatte alpha = load_alpha(alpha_path);
    for (int j = 0; j < options.per_fg; ++j) {
      SynthRecord r;
      r.fg_path = fg.string();
      r.alpha_path = alpha_path.string();
      const std::size_t p = next_pool++ % pools.size();
      r.bg_path = pools[p][cursor[p]++ % pools[p].size()].string();
      r.crop_size = kCropSizes[size_pick(rng)];
      r.flip = coin(rng) == 1;
      r.jitter_seed = rng() & 0xFFFFFFFFULL;
      const std::uint64_t crop_seed = rng();

      const Size fit = fitted_size(alpha.size(), r.crop_size);
      const AlphaMatte fitted = resize_bilinear(alpha, fit.width, fit.height);
      r.crop_origin = sample_crop(record_trimap(fitted, r.jitter_seed, options),
                                  r.crop_size, crop_seed);
      records.push_back(std::move(r));
    }
  }
  return records;
}

RenderedSample render_record(const SynthRecord& record, const SynthOptions& options) {
  if (!is_allowed_crop_size(record.crop_size)) {
    throw Error("render_record: crop size not in {320,480,640}");
  }
  const int size = record.crop_size;
  const int out = options.out_size;

  Image fg = load_image(record.fg_path);
  AlphaMatte alpha = load_alpha(record.alpha_path);
  require_same_size(fg, alpha, "render_record (fg vs alpha)");
  const Size fit = fitted_size(fg.size(), size);
  fg = resize_bilinear(fg, fit.width, fit.height);
  alpha = resize_bilinear(alpha, fit.width, fit.height);
  const Trimap full_trimap = record_trimap(alpha, record.jitter_seed, options);

  const auto [x, y] = record.crop_origin;
  Image fg_crop = resize_bilinear(crop(fg, x, y, size, size), out, out);
  AlphaMatte alpha_crop = resize_bilinear(crop(alpha, x, y, size, size), out, out);
  Trimap trimap = resize_nearest(crop(full_trimap, x, y, size, size), out, out);

  Image bg = load_image(record.bg_path);
  const Size bg_fit = fitted_size(bg.size(), size);
  bg = resize_bilinear(bg, bg_fit.width, bg_fit.height);
  std::mt19937_64 rng(record.jitter_seed ^ kBackgroundStream);
  const int bx = std::uniform_int_distribution<int>(0, bg.width() - size)(rng);
  const int by = std::uniform_int_distribution<int>(0, bg.height() - size)(rng);
  Image bg_crop = resize_bilinear(crop(bg, bx, by, size, size), out, out);

  RenderedSample rendered{
      augment(make_sample(std::move(fg_crop), std::move(bg_crop), std::move(alpha_crop)),
              record.flip, record.jitter_seed, options.jitter_strength),
      record.flip ? flip_horizontal(trimap) : std::move(trimap)};
  return rendered;
}

}  // namespace mattekit

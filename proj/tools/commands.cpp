#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mattekit/compose.hpp"
#include "mattekit/fuse.hpp"
#include "mattekit/log.hpp"
#include "mattekit/metrics.hpp"
#include "mattekit/png_io.hpp"
#include "mattekit/pyramid.hpp"
#include "mattekit/trimap.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace mattekit::cli {
namespace {

struct Globals {
  std::uint64_t seed = 0;
  int threads = 0;
  bool verbose = false;
};

void log_info(const Globals& g, const std::string& msg) {
  if (g.verbose) std::cerr << "[mattekit] " << msg << '\n';
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("MATTEKIT_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring MATTEKIT_THREADS=" << env << '\n';
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Returns the
/// failures in index order as (index, message).
std::vector<std::pair<std::size_t, std::string>> parallel_for(
    std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  std::vector<std::optional<std::string>> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const int count = static_cast<int>(std::min<std::size_t>(std::max(1, threads), n));
  std::vector<std::thread> pool;
  for (int t = 1; t < count; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<std::pair<std::size_t, std::string>> failed;
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) failed.emplace_back(i, *errors[i]);
  }
  return failed;
}

void require_file(const std::string& path, const char* flag) {
  if (!fs::is_regular_file(path)) {
    throw Error(std::string(flag) + ": no such file: " + path);
  }
}

void require_parent(const std::string& path) {
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty() && !fs::is_directory(parent)) {
    throw Error("output directory does not exist: " + parent.string());
  }
}

std::vector<double> parse_rates(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || !(v > 0.0)) {
      throw Error("--rates: '" + item + "' is not a positive number");
    }
    out.push_back(v);
  }
  if (out.size() != 3) throw Error("--rates expects three values: hair,fur,solid");
  return out;
}

// ---------------------------------------------------------------- trimap

struct TrimapArgs {
  std::string mask;
  std::string hair_mask;
  bool fur = false;
  std::string rates;
  int min_radius = 1;
  std::string out;
};

int cmd_trimap(const TrimapArgs& a, const Globals& g) {
  require_file(a.mask, "--mask");
  if (!a.hair_mask.empty()) require_file(a.hair_mask, "--hair-mask");
  require_parent(a.out);

  const BinaryMask mask = load_mask(a.mask);
  TrimapParams params;
  if (!a.rates.empty()) {
    const auto r = parse_rates(a.rates);
    params.rate_hair = r[0];
    params.rate_fur = r[1];
    params.rate_solid = r[2];
  }
  params.min_radius = a.min_radius;
  params.object_scale = object_scale(mask);

  std::optional<ParsingMap> parsing;
  if (!a.hair_mask.empty()) {
    // Bytes snap to hair (255) / non-hair (0) / unlabeled (128).
    LoadedTrimap raw = load_trimap(a.hair_mask);
    parsing = ParsingMap::from_bytes(raw.trimap);
  }
  const BoundaryClassMap classes =
      classify_boundary(mask, parsing ? &*parsing : nullptr, a.fur);
  const Trimap trimap = adaptive_trimap(mask, classes, params);
  save_png(trimap, a.out);
  log_info(g, "wrote " + a.out);

  json j = {
      {"D", params.object_scale},
      {"radius",
       {{"hair", params.radius(BoundaryClass::kHair)},
        {"fur", params.radius(BoundaryClass::kFur)},
        {"solid", params.radius(BoundaryClass::kSolid)}}},
      {"boundary_pixels",
       {{"hair", classes.count(BoundaryClass::kHair)},
        {"fur", classes.count(BoundaryClass::kFur)},
        {"solid", classes.count(BoundaryClass::kSolid)}}},
      {"unknown_pixels", trimap.unknown().count()},
      {"out", a.out},
  };
  std::cout << j.dump() << '\n';
  return 0;
}

// ----------------------------------------------------------- trimap-conv

struct TrimapConvArgs {
  std::string alpha;
  int radius = 0;
  int k_min = 0;
  int k_max = 0;
  std::string out;
};

int cmd_trimap_conv(const TrimapConvArgs& a, const Globals& g) {
  require_file(a.alpha, "--alpha");
  require_parent(a.out);
  const AlphaMatte alpha = load_alpha(a.alpha);
  int k = a.radius;
  if (k == 0) {
    if (a.k_min == 0 || a.k_max == 0) {
      throw Error("give either --radius or both --k-min and --k-max");
    }
    k = draw_kernel_radius(g.seed, a.k_min, a.k_max);
  }
  const Trimap trimap = conventional_trimap(alpha, k);
  save_png(trimap, a.out);
  log_info(g, "wrote " + a.out);
  json j = {{"radius", k}, {"unknown_pixels", trimap.unknown().count()}, {"out", a.out}};
  std::cout << j.dump() << '\n';
  return 0;
}

// ----------------------------------------------------------------- synth

struct SynthArgs {
  std::string fg_dir;
  std::string alpha_dir;
  std::vector<std::string> bg_dirs;
  int per_fg = 1;
  std::string out_dir;
  std::string manifest;
  int k_min = 3;
  int k_max = 25;
  float jitter = 0.2f;
  int out_size = 320;
};

int cmd_synth(const SynthArgs& a, const Globals& g) {
  for (const auto& d : {a.fg_dir, a.alpha_dir}) {
    if (!fs::is_directory(d)) throw Error("not a directory: " + d);
  }
  for (const auto& d : a.bg_dirs) {
    if (!fs::is_directory(d)) throw Error("not a directory: " + d);
  }
  require_parent(a.manifest);

  SynthOptions opt;
  opt.per_fg = a.per_fg;
  opt.seed = g.seed;
  opt.k_min = a.k_min;
  opt.k_max = a.k_max;
  opt.jitter_strength = a.jitter;
  opt.out_size = a.out_size;

  std::vector<fs::path> bg_dirs(a.bg_dirs.begin(), a.bg_dirs.end());
  const auto records = synthesize_manifest(a.fg_dir, a.alpha_dir, bg_dirs, opt);
  write_manifest(records, a.manifest);
  log_info(g, "manifest: " + std::to_string(records.size()) + " records");

  const fs::path out_dir(a.out_dir);
  for (const char* sub : {"composite", "alpha", "trimap"}) fs::create_directories(out_dir / sub);

  // Shared stem per triplet: <fg stem>_<index within that foreground>.
  std::vector<std::string> stems(records.size());
  std::map<std::string, int> seen;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const std::string fg_stem = fs::path(records[i].fg_path).stem().string();
    char suffix[16];
    std::snprintf(suffix, sizeof suffix, "_%04d", seen[fg_stem]++);
    stems[i] = fg_stem + suffix;
  }

  const auto failed = parallel_for(records.size(), resolve_threads(g.threads), [&](std::size_t i) {
    const RenderedSample s = render_record(records[i], opt);
    const std::string name = stems[i] + ".png";
    save_png(s.sample.composite, out_dir / "composite" / name);
    save_png(s.sample.alpha, out_dir / "alpha" / name);
    save_png(s.trimap, out_dir / "trimap" / name);
  });
  for (const auto& [i, msg] : failed) {
    std::cerr << "error: record " << i << " (" << records[i].fg_path << "): " << msg << '\n';
  }

  json j = {{"records", records.size()},
            {"written", records.size() - failed.size()},
            {"failed", failed.size()},
            {"manifest", a.manifest},
            {"out_dir", a.out_dir}};
  std::cout << j.dump() << '\n';
  return failed.empty() ? 0 : 1;
}

// --------------------------------------------------------------- compose

struct ComposeArgs {
  std::string fg, bg, alpha, out;
};

int cmd_compose(const ComposeArgs& a, const Globals& g) {
  require_file(a.fg, "--fg");
  require_file(a.bg, "--bg");
  require_file(a.alpha, "--alpha");
  require_parent(a.out);
  const Image result = composite(load_image(a.fg), load_image(a.bg), load_alpha(a.alpha));
  save_png(result, a.out);
  log_info(g, "wrote " + a.out);
  json j = {{"width", result.width()}, {"height", result.height()}, {"out", a.out}};
  std::cout << j.dump() << '\n';
  return 0;
}

// ------------------------------------------------------------ fuse/harden

struct FuseArgs {
  std::string ptm, alpha, out;
};

int cmd_fuse(const FuseArgs& a, const Globals& g) {
  require_file(a.ptm, "--ptm");
  require_file(a.alpha, "--alpha");
  require_parent(a.out);
  const PtmReadResult prob = read_ptm(a.ptm);
  const AlphaMatte fused = fuse(prob.prob, load_alpha(a.alpha));
  save_png(fused, a.out);
  log_info(g, "wrote " + a.out);
  json j = {{"width", fused.width()},
            {"height", fused.height()},
            {"renormalized_pixels", prob.renormalized},
            {"out", a.out}};
  std::cout << j.dump() << '\n';
  return 0;
}

struct HardenArgs {
  std::string ptm, out;
};

int cmd_harden(const HardenArgs& a, const Globals& g) {
  require_file(a.ptm, "--ptm");
  require_parent(a.out);
  const PtmReadResult prob = read_ptm(a.ptm);
  const Trimap trimap = harden(prob.prob);
  save_png(trimap, a.out);
  log_info(g, "wrote " + a.out);
  json j = {{"foreground_pixels", trimap.region(Trimap::kForeground).count()},
            {"unknown_pixels", trimap.unknown().count()},
            {"background_pixels", trimap.region(Trimap::kBackground).count()},
            {"out", a.out}};
  std::cout << j.dump() << '\n';
  return 0;
}

// ------------------------------------------------------------------ eval

struct EvalArgs {
  std::string pred, gt, trimap, region = "whole", csv;
};

struct EvalItem {
  std::string name;
  fs::path pred, gt, trimap;
};

json report_json(const MetricsReport& r) { return json::parse(to_json(r)); }

void append_csv(const std::string& path, const std::vector<std::pair<std::string, MetricsReport>>& rows) {
  const bool fresh = !fs::exists(path) || fs::file_size(path) == 0;
  std::ofstream out(path, std::ios::app);
  if (!out) throw Error("cannot write " + path);
  out.precision(10);
  if (fresh) out << "name,sad,mse,mse_x100,grad,conn,region,pixels\n";
  for (const auto& [name, r] : rows) {
    out << name << ',' << r.sad << ',' << r.mse << ',' << r.mse_x100() << ',' << r.grad << ','
        << r.conn << ',' << to_string(r.region) << ',' << r.pixel_count << '\n';
  }
  if (!out) throw Error("write failed: " + path);
}

std::map<std::string, fs::path> by_stem(const fs::path& dir) {
  std::map<std::string, fs::path> out;
  for (const auto& p : list_pngs(dir)) out[p.stem().string()] = p;
  return out;
}

int cmd_eval(const EvalArgs& a, const Globals& g) {
  const RegionMode mode = parse_region_mode(a.region);
  if (mode == RegionMode::kUnknown && a.trimap.empty()) {
    throw Error("--region unknown requires --trimap");
  }
  if (!a.csv.empty()) require_parent(a.csv);

  const bool batch = fs::is_directory(a.pred);
  std::vector<EvalItem> items;
  if (batch) {
    if (!fs::is_directory(a.gt)) throw Error("--pred is a directory, so --gt must be one too");
    const auto preds = by_stem(a.pred);
    const auto gts = by_stem(a.gt);
    std::map<std::string, fs::path> tris;
    if (!a.trimap.empty()) {
      if (!fs::is_directory(a.trimap)) throw Error("--trimap must be a directory in batch mode");
      tris = by_stem(a.trimap);
    }
    std::vector<std::string> mismatched;
    for (const auto& [stem, path] : preds) {
      if (!gts.count(stem)) mismatched.push_back(path.string());
      if (!a.trimap.empty() && !tris.count(stem)) mismatched.push_back(path.string() + " (no trimap)");
    }
    for (const auto& [stem, path] : gts) {
      if (!preds.count(stem)) mismatched.push_back(path.string());
    }
    if (!mismatched.empty()) {
      std::string msg = "unpaired files:";
      for (const auto& m : mismatched) msg += " " + m;
      throw Error(msg);
    }
    if (preds.empty()) throw Error("no PNGs in " + a.pred);
    for (const auto& [stem, path] : preds) {
      items.push_back({stem, path, gts.at(stem), a.trimap.empty() ? fs::path() : tris.at(stem)});
    }
  } else {
    require_file(a.pred, "--pred");
    require_file(a.gt, "--gt");
    if (!a.trimap.empty()) require_file(a.trimap, "--trimap");
    items.push_back({fs::path(a.pred).stem().string(), a.pred, a.gt, a.trimap});
  }

  std::vector<MetricsReport> reports(items.size());
  const auto failed = parallel_for(items.size(), resolve_threads(g.threads), [&](std::size_t i) {
    const AlphaMatte pred = load_alpha(items[i].pred);
    const AlphaMatte gt = load_alpha(items[i].gt);
    std::optional<Trimap> trimap;
    if (!items[i].trimap.empty()) {
      LoadedTrimap t = load_trimap(items[i].trimap);
      if (t.snapped) warn(items[i].trimap.string() + ": trimap bytes snapped to {0,128,255}");
      trimap = std::move(t.trimap);
    }
    reports[i] = evaluate(pred, gt, trimap ? &*trimap : nullptr, mode);
  });
  for (const auto& [i, msg] : failed) {
    std::cerr << "error: " << items[i].pred.string() << ": " << msg << '\n';
  }
  if (!failed.empty()) return 1;

  json out;
  std::vector<std::pair<std::string, MetricsReport>> rows;
  if (batch) {
    json per = json::array();
    for (std::size_t i = 0; i < items.size(); ++i) {
      json r = report_json(reports[i]);
      r["name"] = items[i].name;
      per.push_back(std::move(r));
      rows.emplace_back(items[i].name, reports[i]);
    }
    const MetricsReport mean = mean_report(reports);
    rows.emplace_back("mean", mean);
    out = {{"images", std::move(per)}, {"mean", report_json(mean)}};
  } else {
    out = report_json(reports[0]);
    rows.emplace_back(items[0].name, reports[0]);
  }
  if (!a.csv.empty()) append_csv(a.csv, rows);
  std::cout << out.dump() << '\n';
  return 0;
}

// --------------------------------------------------------------- pyramid

struct PyramidArgs {
  std::string input;
  int levels = 5;
  std::string out_dir;
};

int cmd_pyramid(const PyramidArgs& a, const Globals& g) {
  require_file(a.input, "--input");
  const AlphaMatte src = load_alpha(a.input);
  const PyramidStack lap = laplacian_pyramid(src, a.levels);
  if (!a.out_dir.empty()) fs::create_directories(a.out_dir);

  json levels = json::array();
  for (int i = 0; i < lap.count(); ++i) {
    const GrayMap& level = lap.levels[i];
    auto px = level.pixels();
    const auto [lo, hi] = std::minmax_element(px.begin(), px.end());
    double sum = 0.0;
    for (float v : px) sum += v;
    json entry = {{"level", i + 1},        {"width", level.width()}, {"height", level.height()},
                  {"min", *lo},            {"max", *hi},             {"sum", sum}};
    if (!a.out_dir.empty()) {
      // Band-pass levels are signed; shift by 0.5 for viewing.
      GrayMap view = level;
      if (i + 1 < lap.count()) {
        for (float& v : view.pixels()) v += 0.5f;
      }
      const fs::path path = fs::path(a.out_dir) / ("level_" + std::to_string(i + 1) + ".png");
      save_png(view, path);
      entry["out"] = path.string();
    }
    levels.push_back(std::move(entry));
  }
  log_info(g, "pyramid with " + std::to_string(lap.count()) + " levels");
  std::cout << json{{"levels", std::move(levels)}}.dump() << '\n';
  return 0;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"mattekit: trimap generation, matting data synthesis, fusion and evaluation"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Seed for every random choice (default 0)");
  app.add_option("--threads", g.threads,
                 "Worker threads for batch work (default: $MATTEKIT_THREADS, else all cores)")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("-v,--verbose", g.verbose, "Log progress to stderr");

  std::function<int()> action;

  TrimapArgs trimap_args;
  auto* trimap = app.add_subcommand("trimap", "Adaptive trimap from a coarse mask");
  trimap->add_option("--mask", trimap_args.mask, "Coarse binary mask PNG")->required();
  auto* hair = trimap->add_option("--hair-mask", trimap_args.hair_mask,
                                  "Parsing PNG: 255 hair, 0 non-hair, 128 unlabeled");
  auto* fur = trimap->add_flag("--fur", trimap_args.fur, "Mark every boundary pixel as fur");
  fur->excludes(hair);
  trimap->add_option("--rates", trimap_args.rates, "Dilation rates hair,fur,solid (fractions of D)");
  trimap->add_option("--min-radius", trimap_args.min_radius, "Smallest band radius in pixels")
      ->check(CLI::NonNegativeNumber);
  trimap->add_option("--out", trimap_args.out, "Output trimap PNG")->required();
  trimap->callback([&] { action = [&] { return cmd_trimap(trimap_args, g); }; });

  TrimapConvArgs conv_args;
  auto* conv = app.add_subcommand("trimap-conv", "Erosion-dilation trimap from an alpha matte");
  conv->add_option("--alpha", conv_args.alpha, "Alpha PNG (gray, or the alpha channel of RGBA)")
      ->required();
  auto* radius = conv->add_option("--radius", conv_args.radius, "Fixed kernel radius")
                     ->check(CLI::PositiveNumber);
  auto* kmin = conv->add_option("--k-min", conv_args.k_min, "Random radius lower bound")
                   ->check(CLI::PositiveNumber);
  auto* kmax = conv->add_option("--k-max", conv_args.k_max, "Random radius upper bound")
                   ->check(CLI::PositiveNumber);
  radius->excludes(kmin)->excludes(kmax);
  conv->add_option("--out", conv_args.out, "Output trimap PNG")->required();
  conv->callback([&] { action = [&] { return cmd_trimap_conv(conv_args, g); }; });

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "Build a composition manifest and render it");
  synth->add_option("--fg-dir", synth_args.fg_dir, "Foreground RGB PNGs")->required();
  synth->add_option("--alpha-dir", synth_args.alpha_dir, "Alpha PNGs, paired by stem")->required();
  synth->add_option("--bg-dir", synth_args.bg_dirs, "Background pool (repeatable)")->required();
  synth->add_option("--per-fg", synth_args.per_fg, "Samples per foreground")
      ->check(CLI::NonNegativeNumber);
  synth->add_option("--out-dir", synth_args.out_dir, "Output root for triplets")->required();
  synth->add_option("--manifest", synth_args.manifest, "Manifest path (JSON Lines)")->required();
  synth->add_option("--k-min", synth_args.k_min, "Trimap radius lower bound")->check(CLI::PositiveNumber);
  synth->add_option("--k-max", synth_args.k_max, "Trimap radius upper bound")->check(CLI::PositiveNumber);
  synth->add_option("--jitter", synth_args.jitter, "Color jitter strength")->check(CLI::Range(0.0, 1.0));
  synth->add_option("--out-size", synth_args.out_size, "Rendered side length")->check(CLI::PositiveNumber);
  synth->callback([&] { action = [&] { return cmd_synth(synth_args, g); }; });

  ComposeArgs compose_args;
  auto* comp = app.add_subcommand("compose", "Alpha-composite a foreground over a background");
  comp->add_option("--fg", compose_args.fg, "Foreground RGB PNG")->required();
  comp->add_option("--bg", compose_args.bg, "Background RGB PNG")->required();
  comp->add_option("--alpha", compose_args.alpha, "Alpha PNG")->required();
  comp->add_option("--out", compose_args.out, "Output RGB PNG")->required();
  comp->callback([&] { action = [&] { return cmd_compose(compose_args, g); }; });

  FuseArgs fuse_args;
  auto* fu = app.add_subcommand("fuse", "Fuse a probabilistic trimap with a matting output");
  fu->add_option("--ptm", fuse_args.ptm, "Probabilistic trimap (.ptm)")->required();
  fu->add_option("--alpha", fuse_args.alpha, "Matting network alpha PNG")->required();
  fu->add_option("--out", fuse_args.out, "Fused alpha PNG")->required();
  fu->callback([&] { action = [&] { return cmd_fuse(fuse_args, g); }; });

  HardenArgs harden_args;
  auto* hard = app.add_subcommand("harden", "Argmax a probabilistic trimap into a trimap PNG");
  hard->add_option("--ptm", harden_args.ptm, "Probabilistic trimap (.ptm)")->required();
  hard->add_option("--out", harden_args.out, "Output trimap PNG")->required();
  hard->callback([&] { action = [&] { return cmd_harden(harden_args, g); }; });

  EvalArgs eval_args;
  auto* ev = app.add_subcommand("eval", "SAD, MSE, gradient and connectivity errors");
  ev->add_option("--pred", eval_args.pred, "Predicted alpha PNG or directory")->required();
  ev->add_option("--gt", eval_args.gt, "Ground-truth alpha PNG or directory")->required();
  ev->add_option("--trimap", eval_args.trimap, "Trimap PNG or directory");
  ev->add_option("--region", eval_args.region, "whole | unknown")
      ->check(CLI::IsMember({"whole", "unknown"}));
  ev->add_option("--csv", eval_args.csv, "Append CSV rows here");
  ev->callback([&] { action = [&] { return cmd_eval(eval_args, g); }; });

  PyramidArgs pyr_args;
  auto* pyr = app.add_subcommand("pyramid", "Dump Laplacian pyramid levels of a gray PNG");
  pyr->add_option("--input", pyr_args.input, "Gray PNG")->required();
  pyr->add_option("--levels", pyr_args.levels, "Level count")->check(CLI::PositiveNumber);
  pyr->add_option("--out-dir", pyr_args.out_dir, "Write level_<i>.png here");
  pyr->callback([&] { action = [&] { return cmd_pyramid(pyr_args, g); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    return action ? action() : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace mattekit::cli

#include "mattekit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include <json.hpp>

#include "mattekit/compose.hpp"
#include "mattekit/log.hpp"
#include "mattekit/pyramid.hpp"

namespace mattekit {
namespace {

void check_pair(const Plane<float>& pred, const Plane<float>& gt,
                const BinaryMask* region, const char* what) {
  require_same_size(pred, gt, what);
  if (region) require_same_size(pred, *region, what);
}

bool in_region(const BinaryMask* region, std::size_t i) {
  return !region || (*region)[i] != 0;
}

/// Separable form of the Gaussian-derivative kernel: hx(row i, col j) =
/// g(i) * dg(j) / norm, hy = hx transposed.
struct DerivativeKernel {
  int half = 0;
  std::vector<double> gauss;
  std::vector<double> dgauss;
  double norm = 1.0;
};

DerivativeKernel derivative_kernel(double sigma) {
  constexpr double kEpsilon = 1e-2;
  const double pi = std::acos(-1.0);
  DerivativeKernel k;
  k.half = static_cast<int>(
      std::ceil(sigma * std::sqrt(-2.0 * std::log(std::sqrt(2.0 * pi) * sigma * kEpsilon))));
  double sg = 0.0, sd = 0.0;
  for (int u = -k.half; u <= k.half; ++u) {
    const double g = std::exp(-u * u / (2.0 * sigma * sigma)) / (sigma * std::sqrt(2.0 * pi));
    const double d = -u * g / (sigma * sigma);
    k.gauss.push_back(g);
    k.dgauss.push_back(d);
    sg += g * g;
    sd += d * d;
  }
  k.norm = std::sqrt(sg * sd);
  return k;
}

/// Correlates `src` with `along_x` horizontally and `along_y` vertically.
std::vector<double> separable(const Plane<float>& src, const std::vector<double>& along_x,
                              const std::vector<double>& along_y, int half) {
  const int w = src.width();
  const int h = src.height();
  std::vector<double> tmp(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int j = -half; j <= half; ++j) {
        acc += along_x[j + half] * src.at(std::clamp(x + j, 0, w - 1), y);
      }
      tmp[static_cast<std::size_t>(y) * w + x] = acc;
    }
  }
  std::vector<double> out(tmp.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -half; i <= half; ++i) {
        acc += along_y[i + half] * tmp[static_cast<std::size_t>(std::clamp(y + i, 0, h - 1)) * w + x];
      }
      out[static_cast<std::size_t>(y) * w + x] = acc;
    }
  }
  return out;
}

/// Pixels of the largest 4-connected component of `mask`. Components are
/// discovered in column-major order and the first one found wins size ties.
std::vector<std::uint8_t> largest_component(const std::vector<std::uint8_t>& mask, int w, int h) {
  std::vector<int> label(mask.size(), -1);
  std::vector<std::size_t> sizes;
  std::queue<std::size_t> q;
  for (int x = 0; x < w; ++x) {
    for (int y = 0; y < h; ++y) {
      const std::size_t start = static_cast<std::size_t>(y) * w + x;
      if (!mask[start] || label[start] >= 0) continue;
      const int id = static_cast<int>(sizes.size());
      std::size_t n = 0;
      label[start] = id;
      q.push(start);
      while (!q.empty()) {
        const std::size_t i = q.front();
        q.pop();
        ++n;
        const int px = static_cast<int>(i % w);
        const int py = static_cast<int>(i / w);
        const std::pair<int, int> nbrs[4] = {{px - 1, py}, {px + 1, py}, {px, py - 1}, {px, py + 1}};
        for (auto [nx, ny] : nbrs) {
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          const std::size_t j = static_cast<std::size_t>(ny) * w + nx;
          if (mask[j] && label[j] < 0) {
            label[j] = id;
            q.push(j);
          }
        }
      }
      sizes.push_back(n);
    }
  }
  std::vector<std::uint8_t> out(mask.size(), 0);
  if (sizes.empty()) return out;
  int best = 0;
  for (int i = 1; i < static_cast<int>(sizes.size()); ++i) {
    if (sizes[i] > sizes[best]) best = i;
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = label[i] == best;
  return out;
}

}  // namespace

double sad(const Plane<float>& pred, const Plane<float>& gt, const BinaryMask* region) {
  check_pair(pred, gt, region, "sad");
  auto p = pred.pixels();
  auto g = gt.pixels();
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (in_region(region, i)) acc += std::abs(static_cast<double>(p[i]) - g[i]);
  }
  return acc;
}

double mse(const Plane<float>& pred, const Plane<float>& gt, const BinaryMask* region) {
  check_pair(pred, gt, region, "mse");
  auto p = pred.pixels();
  auto g = gt.pixels();
  double acc = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!in_region(region, i)) continue;
    const double d = static_cast<double>(p[i]) - g[i];
    acc += d * d;
    ++n;
  }
  if (n == 0) throw Error("mse: empty evaluation region");
  return acc / static_cast<double>(n);
}

double gradient_error(const Plane<float>& pred, const Plane<float>& gt,
                      const BinaryMask* region, double sigma, double q) {
  check_pair(pred, gt, region, "gradient_error");
  if (!(sigma > 0.0)) throw Error("gradient_error: sigma must be positive");
  const DerivativeKernel k = derivative_kernel(sigma);
  const auto px = separable(pred, k.dgauss, k.gauss, k.half);
  const auto py = separable(pred, k.gauss, k.dgauss, k.half);
  const auto gx = separable(gt, k.dgauss, k.gauss, k.half);
  const auto gy = separable(gt, k.gauss, k.dgauss, k.half);
  double acc = 0.0;
  for (std::size_t i = 0; i < px.size(); ++i) {
    if (!in_region(region, i)) continue;
    const double dx = (px[i] - gx[i]) / k.norm;
    const double dy = (py[i] - gy[i]) / k.norm;
    acc += std::pow(dx * dx + dy * dy, q / 2.0);
  }
  return acc;
}

double connectivity_error(const Plane<float>& pred, const Plane<float>& gt,
                          const BinaryMask* region, double theta_step) {
  check_pair(pred, gt, region, "connectivity_error");
  if (!(theta_step > 0.0 && theta_step <= 1.0)) {
    throw Error("connectivity_error: theta step must lie in (0,1]");
  }
  const int w = pred.width();
  const int h = pred.height();
  auto p = pred.pixels();
  auto g = gt.pixels();
  const int steps = static_cast<int>(std::lround(1.0 / theta_step));

  std::vector<double> level(p.size(), -1.0);
  std::vector<std::uint8_t> both(p.size());
  bool any_source = false;
  for (int s = 1; s <= steps; ++s) {
    const double theta = s * theta_step;
    for (std::size_t i = 0; i < p.size(); ++i) both[i] = p[i] >= theta && g[i] >= theta;
    const auto source = largest_component(both, w, h);
    const double previous = (s - 1) * theta_step;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (source[i]) {
        any_source = true;
      } else if (level[i] < 0.0) {
        level[i] = previous;
      }
    }
  }
  if (!any_source) {
    warn("connectivity_error: no common component at any threshold; returning 0");
    return 0.0;
  }

  auto phi = [](double a, double l) {
    const double d = a - l;
    return 1.0 - (d >= 0.15 ? d : 0.0);
  };
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!in_region(region, i)) continue;
    const double l = level[i] < 0.0 ? 1.0 : level[i];
    acc += std::abs(phi(p[i], l) - phi(g[i], l));
  }
  return acc;
}

double laplacian_loss(const Plane<float>& pred, const Plane<float>& gt, int levels) {
  require_same_size(pred, gt, "laplacian_loss");
  // The pyramid is linear, so L_i(pred) - L_i(gt) = L_i(pred - gt).
  Plane<double> diff(pred.size());
  for (std::size_t k = 0; k < diff.pixel_count(); ++k) {
    diff[k] = static_cast<double>(pred[k]) - gt[k];
  }
  const auto lap = laplacian_pyramid_f64(diff, levels);
  double total = 0.0;
  for (int i = 0; i < levels; ++i) {
    double l1 = 0.0;
    for (double v : lap[i].pixels()) l1 += std::abs(v);
    total += std::ldexp(l1, i);
  }
  return total;
}

double matting_loss(const MattingLossInputs& in, const LossWeights& w) {
  require_same_size(in.pred_alpha, in.gt_alpha, "matting_loss");
  require_same_size(in.pred_alpha, in.real_image, "matting_loss");
  double total = 0.0;
  if (w.alpha != 0.0) total += w.alpha * sad(in.pred_alpha, in.gt_alpha, in.region);
  if (w.composition != 0.0) {
    const Image predicted = composite(in.fg, in.bg, in.pred_alpha);
    double l1 = 0.0;
    for (int c = 0; c < 3; ++c) l1 += sad(predicted.channel(c), in.real_image.channel(c), in.region);
    total += w.composition * l1;
  }
  if (w.laplacian != 0.0) {
    total += w.laplacian * laplacian_loss(in.pred_alpha, in.gt_alpha, in.laplacian_levels);
  }
  return total;
}

double foreground_constraint(const JointBatchSupervision& s) {
  require_same_size(s.coarse_fg, s.predicted_fg, "foreground_constraint");
  auto truth = s.coarse_fg.pixels();
  auto est = s.predicted_fg.pixels();
  double acc = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] > 0.0f) acc += std::abs(static_cast<double>(est[i]) - truth[i]);
  }
  return acc;
}

double joint_loss(const MattingLossInputs& in, const JointBatchSupervision& s,
                  const LossWeights& w) {
  return matting_loss(in, w) + w.foreground * foreground_constraint(s);
}

double stn_ce_loss(const ProbTrimap& prob, const Trimap& gt) {
  require_same_size(prob, gt, "stn_ce_loss");
  auto t = gt.pixels();
  if (t.empty()) throw Error("stn_ce_loss: empty input");
  double acc = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    float p;
    switch (t[i]) {
      case Trimap::kBackground: p = prob.bg[i]; break;
      case Trimap::kForeground: p = prob.fg[i]; break;
      case Trimap::kUnknown: p = prob.unknown[i]; break;
      default: throw Error("stn_ce_loss: ground truth is not a valid trimap");
    }
    acc -= std::log(std::clamp(static_cast<double>(p), 1e-7, 1.0));
  }
  return acc / static_cast<double>(t.size());
}

const char* to_string(RegionMode m) {
  return m == RegionMode::kWhole ? "whole" : "unknown";
}

RegionMode parse_region_mode(const std::string& s) {
  if (s == "whole") return RegionMode::kWhole;
  if (s == "unknown") return RegionMode::kUnknown;
  throw Error("region must be 'whole' or 'unknown', got '" + s + "'");
}

MetricsReport evaluate(const Plane<float>& pred, const Plane<float>& gt,
                       const Trimap* trimap, RegionMode mode) {
  require_same_size(pred, gt, "evaluate");
  MetricsReport r;
  r.region = mode;
  BinaryMask unknown;
  const BinaryMask* region = nullptr;
  if (mode == RegionMode::kUnknown) {
    if (!trimap) throw Error("evaluate: unknown-region mode needs a trimap");
    require_same_size(pred, *trimap, "evaluate");
    unknown = trimap->unknown();
    region = &unknown;
    r.pixel_count = unknown.count();
  } else {
    r.pixel_count = pred.pixel_count();
  }
  r.sad = sad(pred, gt, region);
  r.mse = mse(pred, gt, region);
  r.grad = gradient_error(pred, gt, region);
  r.conn = connectivity_error(pred, gt, region);
  return r;
}

std::string to_json(const MetricsReport& r) {
  nlohmann::ordered_json j = {
      {"sad", r.sad},   {"mse", r.mse},   {"mse_x100", r.mse_x100()},
      {"grad", r.grad}, {"conn", r.conn}, {"region", to_string(r.region)},
      {"pixels", r.pixel_count},
  };
  return j.dump();
}

MetricsReport mean_report(const std::vector<MetricsReport>& reports) {
  MetricsReport m;
  if (reports.empty()) return m;
  m.region = reports.front().region;
  for (const auto& r : reports) {
    m.sad += r.sad;
    m.mse += r.mse;
    m.grad += r.grad;
    m.conn += r.conn;
    m.pixel_count += r.pixel_count;
  }
  const double n = static_cast<double>(reports.size());
  m.sad /= n;
  m.mse /= n;
  m.grad /= n;
  m.conn /= n;
  return m;
}

}  // namespace mattekit

#pragma once

#include <string>
#include <vector>

#include "mattekit/fuse.hpp"
#include "mattekit/raster.hpp"

namespace mattekit {

// Every function below takes an optional evaluation region; nullptr means
// the whole raster. Sums are unnormalized and run over [0,1] alphas.

double sad(const Plane<float>& pred, const Plane<float>& gt,
           const BinaryMask* region = nullptr);

/// Mean squared error over the evaluated pixels; throws on an empty region.
double mse(const Plane<float>& pred, const Plane<float>& gt,
           const BinaryMask* region = nullptr);

/// First-order Gaussian derivative filters at scale `sigma` (support chosen
/// so the Gaussian tail drops below 1e-2, kernel normalized to unit L2 norm,
/// replicate padding). Returns sum over region of |grad pred - grad gt|^q.
double gradient_error(const Plane<float>& pred, const Plane<float>& gt,
                      const BinaryMask* region = nullptr, double sigma = 1.4,
                      double q = 2.0);

/// Connectivity error with thresholds step, 2*step, ..., 1 and 4-connected
/// components. Each pixel's level l is the last threshold before it left the
/// largest component of {pred >= t} & {gt >= t} (1 if it never did);
/// phi(a) = 1 - (a - l) * [a - l >= 0.15]; error = sum |phi(pred) - phi(gt)|.
/// Returns 0 with a warning when no threshold has a common component.
double connectivity_error(const Plane<float>& pred, const Plane<float>& gt,
                          const BinaryMask* region = nullptr, double theta_step = 0.1);

/// sum_{i=1..levels} 2^(i-1) * ||L_i(pred) - L_i(gt)||_1.
double laplacian_loss(const Plane<float>& pred, const Plane<float>& gt, int levels = 5);

struct LossWeights {
  double alpha = 1.0;        // w1
  double composition = 1.0;  // w2
  double laplacian = 1.0;    // w3
  double foreground = 1.0;   // w4, joint loss only
};

/// Everything the matting loss reads. `region` restricts the two L1 terms
/// (pre-training evaluates them on the trimap unknown band only).
struct MattingLossInputs {
  const AlphaMatte& pred_alpha;
  const AlphaMatte& gt_alpha;
  const Image& fg;
  const Image& bg;
  const Image& real_image;
  const BinaryMask* region = nullptr;
  int laplacian_levels = 5;
};

/// w1*||a_p - a_g||_1 + w2*||composite(fg, bg, a_p) - real||_1 + w3*L_lap.
double matting_loss(const MattingLossInputs& in, const LossWeights& w);

/// Coarse-annotation supervision of the trimap network's foreground plane.
struct JointBatchSupervision {
  const Plane<float>& coarse_fg;     // ground truth F_s
  const Plane<float>& predicted_fg;  // F_s estimate
};

/// sum over pixels with F_s > 0 of |F_s estimate - F_s|.
double foreground_constraint(const JointBatchSupervision& s);

/// matting_loss + w4 * foreground_constraint.
double joint_loss(const MattingLossInputs& in, const JointBatchSupervision& s,
                  const LossWeights& w);

/// Mean over pixels of -log(p of the ground-truth class), p clamped to [1e-7, 1].
double stn_ce_loss(const ProbTrimap& prob, const Trimap& gt);

enum class RegionMode { kWhole, kUnknown };

const char* to_string(RegionMode m);
RegionMode parse_region_mode(const std::string& s);

struct MetricsReport {
  double sad = 0.0;
  double mse = 0.0;
  double grad = 0.0;
  double conn = 0.0;
  RegionMode region = RegionMode::kWhole;
  std::size_t pixel_count = 0;

  double mse_x100() const { return mse * 100.0; }
};

/// All four metrics over the whole raster or over the trimap's unknown band.
MetricsReport evaluate(const Plane<float>& pred, const Plane<float>& gt,
                       const Trimap* trimap, RegionMode mode);

/// Single-line JSON object: sad, mse, mse_x100, grad, conn, region, pixels.
std::string to_json(const MetricsReport& r);

/// Element-wise mean of reports sharing one region mode (pixel counts summed).
MetricsReport mean_report(const std::vector<MetricsReport>& reports);

}  // namespace mattekit

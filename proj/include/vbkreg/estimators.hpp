#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "vbkreg/clipping.hpp"
#include "vbkreg/kernels.hpp"

namespace vbkreg {

// Averaged density denominators below this are flagged rather than divided by.
inline constexpr double kDenomFloor = 1e-12;

// Paired observations (X_i, Y_i); immutable after construction.
struct Sample {
  std::vector<double> x;
  std::vector<double> y;

  Sample() = default;
  Sample(std::vector<double> xs, std::vector<double> ys);
  std::size_t n() const { return x.size(); }
};

struct BandwidthPlan {
  double h1;  // pilot
  double h2;  // final
};

// h1 = 0.6 n^{-1/7}, h2 = n^{-1/9}/4
BandwidthPlan default_plan(std::size_t n);

struct EstimateAtPoint {
  double t = 0.0;
  double value = 0.0;
  double denom = 0.0;  // averaged density denominator actually used
  bool ok = false;     // false iff denom < kDenomFloor
};

// Parzen-Rosenblatt density (1/(n h)) sum K((t - X_i)/h).
double pr_density(const Sample& sample, double t, double h, const Kernel& kernel);

// Nadaraya-Watson ratio ghat/fhat.
EstimateAtPoint nw_estimate(const Sample& sample, double t, double h, const Kernel& kernel);

// d/dt of the NW estimate: (fhat ghat' - ghat fhat') / fhat^2.
EstimateAtPoint nw_derivative(const Sample& sample, double t, double h, const Kernel& kernel);

// Pilot qhat(x; h1) = fhat(x; h1) sqrt(|rhat'(x; h1)|).
EstimateAtPoint pilot_q_hat(const Sample& sample, double x, double h1, const Kernel& kernel);

// Variable-bandwidth estimate given per-observation alpha values.
EstimateAtPoint vb_estimate_with_alphas(const Sample& sample, double t, double h,
                                        const Kernel& kernel,
                                        std::span<const double> alphas);

// Ideal estimator: weights K((t - X_i) alpha(q(X_i)) / h) alpha(q(X_i)).
EstimateAtPoint ideal_vb_estimate(const Sample& sample, double t, double h,
                                  const Kernel& kernel, const ClipSpec& clip,
                                  const std::function<double(double)>& q_true);

// alpha(qhat(X_i; h1)) for every observation; degenerate pilots fall back to
// the clipping floor (qhat treated as 0).
std::vector<double> pilot_alphas(const Sample& sample, double h1, const Kernel& kernel,
                                 const ClipSpec& clip);

// Two-stage estimator: pilot qhat at bandwidth h1, final ratio at h2.
EstimateAtPoint true_vb_estimate(const Sample& sample, double t, const BandwidthPlan& plan,
                                 const Kernel& kernel, const ClipSpec& clip);

// Normalized weights w_i; sums to 1. Throws on a degenerate denominator.
std::vector<double> vb_weights(const Sample& sample, double t, double h,
                               const Kernel& kernel, std::span<const double> alpha_vals);

// Variable-bandwidth density (1/(n h)) sum K((t - X_i) alpha(q_i)/h) alpha(q_i).
double vb_density(const Sample& sample, double t, double h, const Kernel& kernel,
                  const ClipSpec& clip, std::span<const double> q_vals);

}  // namespace vbkreg

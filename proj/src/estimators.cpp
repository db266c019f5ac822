#include "vbkreg/estimators.hpp"

#include <cmath>
#include <limits>

namespace vbkreg {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

Sample::Sample(std::vector<double> xs, std::vector<double> ys)
    : x(std::move(xs)), y(std::move(ys)) {
  if (x.size() != y.size()) throw std::invalid_argument("Sample: x and y lengths differ");
  if (x.empty()) throw std::invalid_argument("Sample: empty");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i]))
      throw std::invalid_argument("Sample: non-finite entry at index " + std::to_string(i));
  }
}

BandwidthPlan default_plan(std::size_t n) {
  const double dn = static_cast<double>(n);
  return {0.6 * std::pow(dn, -1.0 / 7.0), std::pow(dn, -1.0 / 9.0) / 4.0};
}

double pr_density(const Sample& sample, double t, double h, const Kernel& kernel) {
  if (h <= 0.0) throw std::invalid_argument("pr_density: h must be positive");
  const double Th = kernel.support_halfwidth * h;
  double acc = 0.0;
  for (double xi : sample.x) {
    const double d = t - xi;
    if (std::abs(d) > Th) continue;
    acc += kernel.eval(d / h);
  }
  return acc / (static_cast<double>(sample.n()) * h);
}

EstimateAtPoint nw_estimate(const Sample& sample, double t, double h, const Kernel& kernel) {
  if (h <= 0.0) throw std::invalid_argument("nw_estimate: h must be positive");
  const double Th = kernel.support_halfwidth * h;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < sample.n(); ++i) {
    const double d = t - sample.x[i];
    if (std::abs(d) > Th) continue;
    const double k = kernel.eval(d / h);
    num += k * sample.y[i];
    den += k;
  }
  EstimateAtPoint out;
  out.t = t;
  out.denom = den / (static_cast<double>(sample.n()) * h);
  out.ok = out.denom >= kDenomFloor;
  out.value = out.ok ? num / den : kNaN;
  return out;
}

EstimateAtPoint nw_derivative(const Sample& sample, double t, double h, const Kernel& kernel) {
  if (h <= 0.0) throw std::invalid_argument("nw_derivative: h must be positive");
  const double Th = kernel.support_halfwidth * h;
  const double n = static_cast<double>(sample.n());
  double f = 0.0, g = 0.0, fp = 0.0, gp = 0.0;
  for (std::size_t i = 0; i < sample.n(); ++i) {
    const double d = t - sample.x[i];
    if (std::abs(d) > Th) continue;
    const double u = d / h;
    const double k = kernel.eval(u);
    const double kp = kernel.deriv(u);
    f += k;
    g += k * sample.y[i];
    fp += kp;
    gp += kp * sample.y[i];
  }
  f /= n * h;
  g /= n * h;
  fp /= n * h * h;
  gp /= n * h * h;
  EstimateAtPoint out;
  out.t = t;
  out.denom = f;
  out.ok = f >= kDenomFloor;
  out.value = out.ok ? (f * gp - g * fp) / (f * f) : kNaN;
  return out;
}

EstimateAtPoint pilot_q_hat(const Sample& sample, double x, double h1, const Kernel& kernel) {
  EstimateAtPoint d = nw_derivative(sample, x, h1, kernel);
  EstimateAtPoint out;
  out.t = x;
  out.denom = d.denom;
  out.ok = d.ok;
  out.value = d.ok ? d.denom * std::sqrt(std::abs(d.value)) : kNaN;
  return out;
}

EstimateAtPoint vb_estimate_with_alphas(const Sample& sample, double t, double h,
                                        const Kernel& kernel,
                                        std::span<const double> alphas) {
  if (h <= 0.0) throw std::invalid_argument("vb_estimate: h must be positive");
  if (alphas.size() != sample.n())
    throw std::invalid_argument("vb_estimate: alphas length mismatch");
  const double Th = kernel.support_halfwidth * h;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < sample.n(); ++i) {
    const double a = alphas[i];
    const double d = (t - sample.x[i]) * a;
    if (std::abs(d) > Th) continue;
    const double w = kernel.eval(d / h) * a;
    num += w * sample.y[i];
    den += w;
  }
  EstimateAtPoint out;
  out.t = t;
  out.denom = den / (static_cast<double>(sample.n()) * h);
  out.ok = out.denom >= kDenomFloor;
  out.value = out.ok ? num / den : kNaN;
  return out;
}

EstimateAtPoint ideal_vb_estimate(const Sample& sample, double t, double h,
                                  const Kernel& kernel, const ClipSpec& clip,
                                  const std::function<double(double)>& q_true) {
  std::vector<double> alphas(sample.n());
  for (std::size_t i = 0; i < sample.n(); ++i)
    alphas[i] = clip_alpha(clip, q_true(sample.x[i]));
  return vb_estimate_with_alphas(sample, t, h, kernel, alphas);
}

std::vector<double> pilot_alphas(const Sample& sample, double h1, const Kernel& kernel,
                                 const ClipSpec& clip) {
  std::vector<double> alphas(sample.n());
  for (std::size_t i = 0; i < sample.n(); ++i) {
    const EstimateAtPoint q = pilot_q_hat(sample, sample.x[i], h1, kernel);
    alphas[i] = clip_alpha(clip, q.ok ? q.value : 0.0);
  }
  return alphas;
}

EstimateAtPoint true_vb_estimate(const Sample& sample, double t, const BandwidthPlan& plan,
                                 const Kernel& kernel, const ClipSpec& clip) {
  if (plan.h1 <= 0.0 || plan.h2 <= 0.0)
    throw std::invalid_argument("true_vb_estimate: bandwidths must be positive");
  const std::vector<double> alphas = pilot_alphas(sample, plan.h1, kernel, clip);
  return vb_estimate_with_alphas(sample, t, plan.h2, kernel, alphas);
}

std::vector<double> vb_weights(const Sample& sample, double t, double h,
                               const Kernel& kernel, std::span<const double> alpha_vals) {
  if (alpha_vals.size() != sample.n())
    throw std::invalid_argument("vb_weights: alpha length mismatch");
  const double n = static_cast<double>(sample.n());
  std::vector<double> w(sample.n());
  double den = 0.0;
  for (std::size_t i = 0; i < sample.n(); ++i) {
    const double a = alpha_vals[i];
    w[i] = kernel.eval((t - sample.x[i]) * a / h) * a / (n * h);
    den += w[i];
  }
  if (den < kDenomFloor) throw std::runtime_error("vb_weights: degenerate denominator");
  for (double& wi : w) wi /= den;
  return w;
}

double vb_density(const Sample& sample, double t, double h, const Kernel& kernel,
                  const ClipSpec& clip, std::span<const double> q_vals) {
  if (h <= 0.0) throw std::invalid_argument("vb_density: h must be positive");
  if (q_vals.size() != sample.n())
    throw std::invalid_argument("vb_density: q length mismatch");
  const double Th = kernel.support_halfwidth * h;
  double acc = 0.0;
  for (std::size_t i = 0; i < sample.n(); ++i) {
    const double a = clip_alpha(clip, q_vals[i]);
    const double d = (t - sample.x[i]) * a;
    if (std::abs(d) > Th) continue;
    acc += kernel.eval(d / h) * a;
  }
  return acc / (static_cast<double>(sample.n()) * h);
}

}  // namespace vbkreg

#include "vbkreg/kernels.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "vbkreg/quadrature.hpp"

namespace vbkreg {

namespace {

constexpr double kTricubeNorm = 70.0 / 81.0;
constexpr double kGaussTrunc = 4.0;
const double kInvSqrt2Pi = 0.3989422804014326779;
// mass of the standard normal on [-4, 4]
const double kGaussTruncMass = std::erf(kGaussTrunc / std::sqrt(2.0));

double tricube(double u) {
  const double a = std::abs(u);
  if (a >= 1.0) return 0.0;
  const double w = 1.0 - a * a * a;
  return kTricubeNorm * w * w * w;
}

double tricube_deriv(double u) {
  const double a = std::abs(u);
  if (a >= 1.0) return 0.0;
  const double w = 1.0 - a * a * a;
  // d/du (1-|u|^3)^3 = -9 u^2 sign(u) (1-|u|^3)^2
  const double s = (u > 0.0) ? 1.0 : (u < 0.0 ? -1.0 : 0.0);
  return kTricubeNorm * (-9.0) * u * u * s * w * w;
}

double epanechnikov(double u) {
  if (std::abs(u) >= 1.0) return 0.0;
  return 0.75 * (1.0 - u * u);
}

double epanechnikov_deriv(double u) {
  if (std::abs(u) >= 1.0) return 0.0;
  return -1.5 * u;
}

double gaussian_truncated(double u) {
  if (std::abs(u) >= kGaussTrunc) return 0.0;
  return kInvSqrt2Pi * std::exp(-0.5 * u * u) / kGaussTruncMass;
}

double gaussian_truncated_deriv(double u) {
  if (std::abs(u) >= kGaussTrunc) return 0.0;
  return -u * kInvSqrt2Pi * std::exp(-0.5 * u * u) / kGaussTruncMass;
}

}  // namespace

double Kernel::eval(double u) const {
  switch (id) {
    case KernelId::tricube:
      return tricube(u);
    case KernelId::epanechnikov:
      return epanechnikov(u);
    case KernelId::gaussian_truncated:
      return gaussian_truncated(u);
  }
  return 0.0;
}

double Kernel::deriv(double u) const {
  switch (id) {
    case KernelId::tricube:
      return tricube_deriv(u);
    case KernelId::epanechnikov:
      return epanechnikov_deriv(u);
    case KernelId::gaussian_truncated:
      return gaussian_truncated_deriv(u);
  }
  return 0.0;
}

Kernel kernel_by_id(KernelId id) {
  switch (id) {
    case KernelId::tricube:
      return {KernelId::tricube, 1.0};
    case KernelId::epanechnikov:
      return {KernelId::epanechnikov, 1.0};
    case KernelId::gaussian_truncated:
      return {KernelId::gaussian_truncated, kGaussTrunc};
  }
  throw std::invalid_argument("unknown kernel id");
}

Kernel kernel_by_name(std::string_view name) {
  if (name == "tricube") return kernel_by_id(KernelId::tricube);
  if (name == "epanechnikov") return kernel_by_id(KernelId::epanechnikov);
  if (name == "gaussian_truncated") return kernel_by_id(KernelId::gaussian_truncated);
  throw std::invalid_argument("unknown kernel: " + std::string(name));
}

std::string kernel_name(KernelId id) {
  switch (id) {
    case KernelId::tricube:
      return "tricube";
    case KernelId::epanechnikov:
      return "epanechnikov";
    case KernelId::gaussian_truncated:
      return "gaussian_truncated";
  }
  return "?";
}

double kernel_moment(const Kernel& kernel, int k, int p) {
  if (k < 0 || p < 1) throw std::invalid_argument("kernel_moment: require k >= 0, p >= 1");
  static std::map<std::tuple<KernelId, int, int>, double> cache;
  static std::mutex mu;
  const auto key = std::make_tuple(kernel.id, k, p);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  const double T = kernel.support_halfwidth;
  const double val = quad::integrate(
      [&](double u) { return std::pow(u, k) * std::pow(kernel.eval(u), p); }, -T, T, 1e-12);
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(key, val);
  return val;
}

}  // namespace vbkreg

#include "vbkreg/theory.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "vbkreg/estimators.hpp"
#include "vbkreg/quadrature.hpp"

namespace vbkreg {

namespace fd {

namespace {

// 9-point central stencil coefficients, offsets -4..4.
// Orders 1,2 are 8th-order accurate; orders 3,4 are 6th-order accurate.
constexpr std::array<double, 9> kD1 = {1.0 / 280, -4.0 / 105, 1.0 / 5, -4.0 / 5, 0.0,
                                       4.0 / 5,   -1.0 / 5,   4.0 / 105, -1.0 / 280};
constexpr std::array<double, 9> kD2 = {-1.0 / 560, 8.0 / 315, -1.0 / 5,
                                       8.0 / 5,    -205.0 / 72, 8.0 / 5,
                                       -1.0 / 5,   8.0 / 315,  -1.0 / 560};
constexpr std::array<double, 9> kD3 = {-7.0 / 240,  3.0 / 10, -169.0 / 120,
                                       61.0 / 30,   0.0,      -61.0 / 30,
                                       169.0 / 120, -3.0 / 10, 7.0 / 240};
constexpr std::array<double, 9> kD4 = {7.0 / 240,   -2.0 / 5, 169.0 / 60,
                                       -122.0 / 15, 91.0 / 8, -122.0 / 15,
                                       169.0 / 60,  -2.0 / 5, 7.0 / 240};

}  // namespace

double deriv(const RealFn& fn, double t, int k, double h) {
  if (k == 0) return fn(t);
  const std::array<double, 9>* c = nullptr;
  switch (k) {
    case 1: c = &kD1; break;
    case 2: c = &kD2; break;
    case 3: c = &kD3; break;
    case 4: c = &kD4; break;
    default: throw std::invalid_argument("fd::deriv: order must be in 0..4");
  }
  double acc = 0.0;
  for (int j = -4; j <= 4; ++j) acc += (*c)[j + 4] * fn(t + j * h);
  return acc / std::pow(h, k);
}

}  // namespace fd

double theta_coefficient(const TrueModel& model, double t, double fd_step) {
  return theta_coefficient(model, t, kernel_by_id(KernelId::tricube), fd_step);
}

double theta_coefficient(const TrueModel& model, double t, const Kernel& kernel,
                         double fd_step) {
  const double step = fd_step * std::max(1.0, std::abs(t));
  for (int j = -4; j <= 4; ++j) {
    const double s = t + j * step;
    if (model.f(s) < kDenomFloor)
      throw std::domain_error("theta_coefficient: density below floor on stencil");
    if (model.rprime(s) == 0.0)
      throw std::domain_error("theta_coefficient: r' vanishes on stencil");
  }
  const RealFn A = [&](double s) {
    return model.r(s) / (model.f(s) * std::abs(model.rprime(s)));
  };
  const RealFn B = [&](double s) { return 1.0 / (model.f(s) * std::abs(model.rprime(s))); };
  const double mu41 = kernel_moment(kernel, 4, 1);
  const double d4a = fd::deriv(A, t, 4, step);
  const double d4b = fd::deriv(B, t, 4, step);
  return mu41 / (24.0 * model.f(t)) * (d4a - model.r(t) * d4b);
}

double asymptotic_variance(const TrueModel& model, double t, const Kernel& kernel) {
  const double ft = model.f(t);
  if (ft <= 0.0) throw std::domain_error("asymptotic_variance: f(t) <= 0");
  const double mu02 = kernel_moment(kernel, 0, 2);
  return mu02 * std::pow(std::abs(model.rprime(t)), 0.25) * model.sigma2(t) / std::sqrt(ft);
}

double optimal_bandwidth(const TrueModel& model, const Kernel& kernel, std::size_t n,
                         Interval region, double quad_tol) {
  if (!(region.hi > region.lo)) throw std::invalid_argument("optimal_bandwidth: bad region");
  const double mu02 = kernel_moment(kernel, 0, 2);
  const double int_theta2 = quad::integrate(
      [&](double t) {
        const double th = theta_coefficient(model, t);
        return th * th;
      },
      region.lo, region.hi, 1e-10);
  if (int_theta2 < quad_tol)
    throw std::domain_error("optimal_bandwidth: integral of theta^2 below tolerance");
  const double int_var = quad::integrate(
      [&](double t) {
        return model.sigma2(t) * std::pow(std::abs(model.rprime(t)), 0.25) /
               std::sqrt(model.f(t));
      },
      region.lo, region.hi, 1e-10);
  const double bracket = mu02 * int_var / (8.0 * int_theta2);
  return std::pow(static_cast<double>(n), -1.0 / 9.0) * std::pow(bracket, 1.0 / 9.0);
}

ExpansionReport expansion_check(const RealFn& eta, const RealFn& xi, double t, double h,
                                const Kernel& kernel, bool squared, double xi_floor,
                                double fd_step) {
  if (h <= 0.0) throw std::invalid_argument("expansion_check: h must be positive");
  if (xi_floor <= 0.0) throw std::invalid_argument("expansion_check: xi_floor must be positive");
  const double radius = kernel.support_halfwidth * h / xi_floor;
  const double lhs = quad::integrate(
      [&](double s) {
        const double xs = xi(s);
        const double u = (t - s) * xs / h;
        if (std::abs(u) > kernel.support_halfwidth) return 0.0;
        const double k = kernel.eval(u);
        return (squared ? k * k * xs * xs : k * xs) * eta(s) / h;
      },
      t - radius, t + radius, 1e-13, 20);

  const double step = fd_step * std::max(1.0, std::abs(t));
  double series = 0.0;
  if (!squared) {
    for (int k = 0; k <= 4; ++k) {
      const double muk = kernel_moment(kernel, k, 1);
      if (muk == 0.0) continue;
      const RealFn comp = [&, k](double s) { return eta(s) / std::pow(xi(s), k); };
      double fact = 1.0;
      for (int j = 2; j <= k; ++j) fact *= j;
      const double ak = ((k % 2 == 0) ? 1.0 : -1.0) * muk / fact * fd::deriv(comp, t, k, step);
      series += ak * std::pow(h, k);
    }
  } else {
    for (int k = 0; k <= 2; ++k) {
      const double mu2k = kernel_moment(kernel, 2 * k, 2);
      const RealFn comp = [&, k](double s) { return eta(s) / std::pow(xi(s), 2 * k - 1); };
      double fact = 1.0;
      for (int j = 2; j <= 2 * k; ++j) fact *= j;
      const double a2k = mu2k / fact * fd::deriv(comp, t, 2 * k, step);
      series += a2k * std::pow(h, 2 * k);
    }
  }
  return {lhs, series, lhs - series, h};
}

}  // namespace vbkreg

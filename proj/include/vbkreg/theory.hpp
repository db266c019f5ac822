#pragma once

#include <functional>

#include "vbkreg/kernels.hpp"

namespace vbkreg {

using RealFn = std::function<double(double)>;

// Ground-truth model used by the theoretical formulas and the Monte Carlo
// diagnostics: density f of X, regression r, its derivative, and the
// conditional noise variance sigma^2(t).
struct TrueModel {
  RealFn f;
  RealFn r;
  RealFn rprime;
  RealFn sigma2;
};

namespace fd {

// Central k-th derivative on a 9-point stencil, step h.
double deriv(const RealFn& fn, double t, int k, double h);

}  // namespace fd

// Leading h^4 bias coefficient
// theta(t) = (mu_{4,1} / (24 f(t))) [ D4(r/(f|r'|))(t) - r(t) D4(1/(f|r'|))(t) ],
// fourth derivatives by central differences with step fd_step * max(1, |t|).
// Throws if any stencil point has f below the denominator floor or r' = 0.
double theta_coefficient(const TrueModel& model, double t, double fd_step = 1e-2);
double theta_coefficient(const TrueModel& model, double t, const Kernel& kernel,
                         double fd_step);

// Variance of the limiting normal: mu_{0,2} |r'(t)|^{1/4} sigma^2(t) / sqrt(f(t)).
// Var(rbar(t)) ~ this / (n h).
double asymptotic_variance(const TrueModel& model, double t, const Kernel& kernel);

struct Interval {
  double lo, hi;
};

// h2* = n^{-1/9} [ mu_{0,2} int sigma^2 |r'|^{1/4} / sqrt(f) / (8 int theta^2) ]^{1/9}
// with both integrals over `region`. sigma^2(t) is evaluated inside the first
// integrand. Throws if int theta^2 < quad_tol.
double optimal_bandwidth(const TrueModel& model, const Kernel& kernel, std::size_t n,
                         Interval region, double quad_tol = 1e-12);

struct ExpansionReport {
  double lhs;       // quadrature value of the kernel integral
  double series;    // sum a_k h^k, k = 0..4
  double residual;  // lhs - series
  double h;
};

// Numerical check of the series expansion of
//   (1/h) int K((t-s) xi(s)/h) xi(s) eta(s) ds            (squared = false)
//   (1/h) int K^2((t-s) xi(s)/h) xi^2(s) eta(s) ds        (squared = true)
// against sum_{k<=4} a_k(t) h^k with
//   a_k = (-1)^k (mu_{k,1}/k!) D_k(eta/xi^k)              (plain)
//   a_{2k} = (mu_{2k,2}/(2k)!) D_{2k}(eta/xi^{2k-1}), odd a_k = 0  (squared)
// xi_floor must be a positive lower bound for xi; it sets the integration
// radius T h / xi_floor.
ExpansionReport expansion_check(const RealFn& eta, const RealFn& xi, double t, double h,
                                const Kernel& kernel, bool squared, double xi_floor,
                                double fd_step = 2e-2);

}  // namespace vbkreg

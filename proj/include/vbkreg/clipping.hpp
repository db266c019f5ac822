#pragma once

#include <cmath>
#include <functional>

namespace vbkreg {

// Clipping map alpha(w) = c * sqrt(p(w / c^2)) with p >= 1, p(u) = u for
// u >= t0.  alpha follows the square-root law alpha(w) = sqrt(w) once
// w >= t0 c^2 and is floored at c in sparse regions.
struct ClipSpec {
  double c = 1e-6;
  double t0 = 2.0;
  // Custom clipping polynomial; empty means the built-in degree-5-smooth
  // piecewise polynomial with junctions at 0 and 2.
  std::function<double(double)> p_eval;
  int p_deriv_order = 4;
};

// The five-times differentiable clipping polynomial with t0 = 2:
// 1 for u <= 0, u for u >= 2, and
// 1 + (u^6/64)(1 - 2(u-2) + (9/4)(u-2)^2 - (7/4)(u-2)^3 + (7/8)(u-2)^4)
// in between.
double clip_p_default(double u);

double clip_p(const ClipSpec& spec, double u);

// alpha(w) = c sqrt(p(w/c^2)); branches to sqrt(w) when w >= t0 c^2 so the
// square-root branch stays exact at tiny c.
double clip_alpha(const ClipSpec& spec, double w);

// q(x) = f(x) sqrt(|r'(x)|)
inline double q_of(double f_val, double rprime_val) {
  return f_val * std::sqrt(std::abs(rprime_val));
}

// Estimation region D_rf = { t : q(t) >= 2 t0 c^2 }.
inline bool in_region_drf(const ClipSpec& spec, double q_val) {
  return q_val >= 2.0 * spec.t0 * spec.c * spec.c;
}

}  // namespace vbkreg

#include "vbkreg/clipping.hpp"

namespace vbkreg {

double clip_p_default(double u) {
  if (u <= 0.0) return 1.0;
  if (u >= 2.0) return u;
  const double v = u - 2.0;
  const double u3 = u * u * u;
  const double bracket =
      1.0 + v * (-2.0 + v * (2.25 + v * (-1.75 + v * 0.875)));
  return 1.0 + (u3 * u3 / 64.0) * bracket;
}

double clip_p(const ClipSpec& spec, double u) {
  return spec.p_eval ? spec.p_eval(u) : clip_p_default(u);
}

double clip_alpha(const ClipSpec& spec, double w) {
  if (w >= spec.t0 * spec.c * spec.c) return std::sqrt(w);
  return spec.c * std::sqrt(clip_p(spec, w / (spec.c * spec.c)));
}

}  // namespace vbkreg

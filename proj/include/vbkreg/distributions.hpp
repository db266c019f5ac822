#pragma once

#include <string>
#include <string_view>

#include "vbkreg/rng.hpp"

namespace vbkreg {

struct Distribution {
  enum class Kind { uniform, normal, student_t, cauchy };
  Kind kind = Kind::normal;
  // uniform: (a, b); normal: (mu, sd); student_t: (df, -); cauchy: (loc, scale)
  double p1 = 0.0;
  double p2 = 1.0;

  static Distribution uniform(double a, double b);
  static Distribution normal(double mu, double sd);
  static Distribution student_t(int df);
  static Distribution cauchy(double loc, double scale);

  // "uniform(-0.5,0.5)", "normal(0,1)", "student_t(4)", "cauchy(3,4)"
  static Distribution parse(std::string_view text);
  std::string to_string() const;
};

double draw(const Distribution& dist, Rng& rng);

// Density; defined for all four kinds.
double pdf(const Distribution& dist, double t);

// Inverse CDF, used for deterministic quantile designs.
double quantile(const Distribution& dist, double p);

// Standard normal inverse CDF.
double normal_quantile(double p);

}  // namespace vbkreg

#include "vbkreg/distributions.hpp"

#include <cmath>
#include <charconv>
#include <stdexcept>
#include <vector>

namespace vbkreg {

namespace {

constexpr double kPi = 3.14159265358979323846;
const double kInvSqrt2Pi = 0.3989422804014326779;

// shortest decimal form that round-trips, e.g. "-0.5", "3", "0.1"
std::string num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

Distribution Distribution::uniform(double a, double b) {
  if (!(b > a)) throw std::invalid_argument("uniform: require b > a");
  return {Kind::uniform, a, b};
}

Distribution Distribution::normal(double mu, double sd) {
  if (!(sd > 0.0)) throw std::invalid_argument("normal: require sd > 0");
  return {Kind::normal, mu, sd};
}

Distribution Distribution::student_t(int df) {
  if (df < 1) throw std::invalid_argument("student_t: require df >= 1");
  return {Kind::student_t, static_cast<double>(df), 0.0};
}

Distribution Distribution::cauchy(double loc, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("cauchy: require scale > 0");
  return {Kind::cauchy, loc, scale};
}

Distribution Distribution::parse(std::string_view text) {
  const auto open = text.find('(');
  const auto close = text.rfind(')');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open)
    throw std::invalid_argument("distribution: expected name(args): " + std::string(text));
  const std::string_view name = text.substr(0, open);
  const std::string args(text.substr(open + 1, close - open - 1));
  std::vector<double> vals;
  std::size_t pos = 0;
  while (pos < args.size()) {
    std::size_t comma = args.find(',', pos);
    if (comma == std::string::npos) comma = args.size();
    vals.push_back(std::stod(args.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  if (name == "uniform" && vals.size() == 2) return uniform(vals[0], vals[1]);
  if (name == "normal" && vals.size() == 2) return normal(vals[0], vals[1]);
  if (name == "student_t" && vals.size() == 1)
    return student_t(static_cast<int>(vals[0]));
  if (name == "cauchy" && vals.size() == 2) return cauchy(vals[0], vals[1]);
  throw std::invalid_argument("unknown distribution: " + std::string(text));
}

std::string Distribution::to_string() const {
  switch (kind) {
    case Kind::uniform:
      return "uniform(" + num(p1) + "," + num(p2) + ")";
    case Kind::normal:
      return "normal(" + num(p1) + "," + num(p2) + ")";
    case Kind::student_t:
      return "student_t(" + std::to_string(static_cast<int>(p1)) + ")";
    case Kind::cauchy:
      return "cauchy(" + num(p1) + "," + num(p2) + ")";
  }
  return "?";
}

double draw(const Distribution& dist, Rng& rng) {
  switch (dist.kind) {
    case Distribution::Kind::uniform:
      return rng.uniform(dist.p1, dist.p2);
    case Distribution::Kind::normal:
      return dist.p1 + dist.p2 * rng.normal();
    case Distribution::Kind::student_t: {
      const int df = static_cast<int>(dist.p1);
      const double z = rng.normal();
      double v = 0.0;
      for (int i = 0; i < df; ++i) {
        const double w = rng.normal();
        v += w * w;
      }
      return z / std::sqrt(v / df);
    }
    case Distribution::Kind::cauchy:
      return dist.p1 + dist.p2 * std::tan(kPi * (rng.uniform01() - 0.5));
  }
  throw std::logic_error("draw: unreachable");
}

double pdf(const Distribution& dist, double t) {
  switch (dist.kind) {
    case Distribution::Kind::uniform:
      return (t >= dist.p1 && t <= dist.p2) ? 1.0 / (dist.p2 - dist.p1) : 0.0;
    case Distribution::Kind::normal: {
      const double z = (t - dist.p1) / dist.p2;
      return kInvSqrt2Pi * std::exp(-0.5 * z * z) / dist.p2;
    }
    case Distribution::Kind::student_t: {
      const double df = dist.p1;
      const double lognorm = std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df) -
                             0.5 * std::log(df * kPi);
      return std::exp(lognorm - 0.5 * (df + 1.0) * std::log1p(t * t / df));
    }
    case Distribution::Kind::cauchy: {
      const double z = (t - dist.p1) / dist.p2;
      return 1.0 / (kPi * dist.p2 * (1.0 + z * z));
    }
  }
  throw std::logic_error("pdf: unreachable");
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile: p outside (0,1)");
  // Acklam's rational approximation, then one Halley refinement.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p > 1.0 - plow) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  const double u = e * std::sqrt(2.0 * kPi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

double quantile(const Distribution& dist, double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("quantile: p outside (0,1)");
  switch (dist.kind) {
    case Distribution::Kind::uniform:
      return dist.p1 + p * (dist.p2 - dist.p1);
    case Distribution::Kind::normal:
      return dist.p1 + dist.p2 * normal_quantile(p);
    case Distribution::Kind::cauchy:
      return dist.p1 + dist.p2 * std::tan(kPi * (p - 0.5));
    case Distribution::Kind::student_t:
      throw std::invalid_argument("quantile: not available for student_t");
  }
  throw std::logic_error("quantile: unreachable");
}

}  // namespace vbkreg

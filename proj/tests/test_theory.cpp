#include <doctest.h>

#include <cmath>
#include <vector>

#include "vbkreg/theory.hpp"

using namespace vbkreg;

namespace {

const double kInvSqrt2Pi = 0.3989422804014326779;

double phi(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

// f = N(0,1) density, r = 1/(1+x^2), sigma^2 = 0.03
TrueModel rational_model() {
  TrueModel m;
  m.f = [](double x) { return phi(x); };
  m.r = [](double x) { return 1.0 / (1.0 + x * x); };
  m.rprime = [](double x) {
    const double d = 1.0 + x * x;
    return -2.0 * x / (d * d);
  };
  m.sigma2 = [](double) { return 0.03; };
  return m;
}

const Kernel tricube = kernel_by_id(KernelId::tricube);

}  // namespace

TEST_CASE("finite differences recover polynomial derivatives") {
  const RealFn poly = [](double x) { return 1.0 + x + x * x * x * x; };
  CHECK(fd::deriv(poly, 0.5, 1, 0.05) == doctest::Approx(1.0 + 4 * 0.125).epsilon(1e-10));
  CHECK(fd::deriv(poly, 0.5, 4, 0.05) == doctest::Approx(24.0).epsilon(1e-8));
}

TEST_CASE("theta vanishes for linear r and flat f") {
  TrueModel m;
  m.f = [](double) { return 0.4; };
  m.r = [](double x) { return 3.0 * x; };
  m.rprime = [](double) { return 3.0; };
  m.sigma2 = [](double) { return 1.0; };
  CHECK(std::abs(theta_coefficient(m, 0.7)) < 1e-6);
}

TEST_CASE("theta frozen value for the rational model") {
  // high-precision symbolic-differentiation oracle value at t = 1
  const double expected = -1.0998142559503836;
  const double got = theta_coefficient(rational_model(), 1.0);
  CHECK(got == doctest::Approx(expected).epsilon(1e-5));
}

TEST_CASE("theta Richardson consistency") {
  const TrueModel m = rational_model();
  const double a = theta_coefficient(m, 1.0, 1e-2);
  const double b = theta_coefficient(m, 1.0, 5e-3);
  CHECK(std::abs(a - b) <= 0.05 * std::abs(b));
}

TEST_CASE("theta error paths") {
  TrueModel m = rational_model();
  m.rprime = [](double) { return 0.0; };
  CHECK_THROWS(theta_coefficient(m, 1.0));
  TrueModel m2 = rational_model();
  m2.f = [](double) { return 0.0; };
  CHECK_THROWS(theta_coefficient(m2, 1.0));
}

TEST_CASE("asymptotic variance") {
  SUBCASE("all factors unity") {
    TrueModel m;
    m.f = [](double) { return 1.0; };
    m.r = [](double) { return 0.0; };
    m.rprime = [](double) { return 1.0; };
    m.sigma2 = [](double) { return 1.0; };
    CHECK(asymptotic_variance(m, 0.0, tricube) ==
          doctest::Approx(kernel_moment(tricube, 0, 2)).epsilon(1e-14));
  }
  SUBCASE("noiseless gives zero") {
    TrueModel m = rational_model();
    m.sigma2 = [](double) { return 0.0; };
    CHECK(asymptotic_variance(m, 1.0, tricube) == 0.0);
  }
  SUBCASE("frozen value for the rational model at t = 1") {
    CHECK(asymptotic_variance(rational_model(), 1.0, tricube) ==
          doctest::Approx(0.036334855617766546).epsilon(1e-12));
  }
  SUBCASE("homogeneous in sigma^2") {
    TrueModel m = rational_model();
    const double base = asymptotic_variance(m, 1.0, tricube);
    m.sigma2 = [](double) { return 0.03 * 7.0; };
    CHECK(asymptotic_variance(m, 1.0, tricube) == doctest::Approx(7.0 * base).epsilon(1e-14));
  }
  SUBCASE("nonpositive density throws") {
    TrueModel m = rational_model();
    m.f = [](double) { return 0.0; };
    CHECK_THROWS(asymptotic_variance(m, 1.0, tricube));
  }
}

TEST_CASE("optimal bandwidth") {
  const TrueModel m = rational_model();
  const Interval region{0.6, 1.4};
  SUBCASE("frozen value from the quadrature oracle") {
    CHECK(optimal_bandwidth(m, tricube, 1000, region) ==
          doctest::Approx(0.22037629000152052).epsilon(1e-4));
  }
  SUBCASE("exact n^{-1/9} scaling") {
    const double a = optimal_bandwidth(m, tricube, 1000, region);
    const double b = optimal_bandwidth(m, tricube, 2000, region);
    CHECK(a / b == doctest::Approx(std::pow(2.0, 1.0 / 9.0)).epsilon(1e-12));
  }
  SUBCASE("vanishing theta integral throws") {
    TrueModel flat;
    flat.f = [](double) { return 0.4; };
    flat.r = [](double x) { return 3.0 * x; };
    flat.rprime = [](double) { return 3.0; };
    flat.sigma2 = [](double) { return 1.0; };
    CHECK_THROWS(optimal_bandwidth(flat, tricube, 1000, region, 1e-8));
  }
}

TEST_CASE("expansion check: classical density bias expansion") {
  const RealFn eta = [](double s) { return phi(s); };
  const RealFn one = [](double) { return 1.0; };
  SUBCASE("series head matches closed forms as h shrinks") {
    const ExpansionReport rep = expansion_check(eta, one, 0.0, 0.05, tricube, false, 1.0);
    const double mu21 = kernel_moment(tricube, 2, 1);
    const double expect = phi(0.0) - 0.5 * mu21 * phi(0.0) * 0.05 * 0.05;
    // a4 term is tiny here; the lhs should sit within O(h^4) of the truncation
    CHECK(rep.lhs == doctest::Approx(expect).epsilon(1e-5));
    CHECK(std::abs(rep.residual) < 1e-9);
  }
  SUBCASE("residual is o(h^4): bounded residual/h^4 under halving") {
    double prev_ratio = 0.0;
    for (double h : {0.2, 0.1, 0.05}) {
      const ExpansionReport rep = expansion_check(eta, one, 0.0, h, tricube, false, 1.0);
      const double ratio = std::abs(rep.residual) / std::pow(h, 4);
      if (prev_ratio > 0.0) CHECK(ratio < prev_ratio);
      prev_ratio = ratio;
    }
  }
  SUBCASE("eta = 0 gives zero on both sides") {
    const RealFn zero = [](double) { return 0.0; };
    const ExpansionReport rep = expansion_check(zero, one, 0.0, 0.2, tricube, false, 1.0);
    CHECK(rep.lhs == 0.0);
    CHECK(rep.series == 0.0);
  }
  SUBCASE("squared variant leading term") {
    const ExpansionReport rep = expansion_check(eta, one, 0.0, 0.01, tricube, true, 1.0);
    CHECK(rep.lhs == doctest::Approx(kernel_moment(tricube, 0, 2) * phi(0.0)).epsilon(1e-3));
  }
}

TEST_CASE("expansion residual slope with a varying scale function") {
  const RealFn eta = [](double s) { return phi(s); };
  const RealFn xi = [](double s) { return 1.0 + 0.3 * std::sin(s); };
  for (bool squared : {false, true}) {
    std::vector<double> lh, lr;
    for (double h : {0.4, 0.2, 0.1, 0.05}) {
      const ExpansionReport rep = expansion_check(eta, xi, 0.3, h, tricube, squared, 0.7);
      REQUIRE(std::abs(rep.residual) > 0.0);
      lh.push_back(std::log(h));
      lr.push_back(std::log(std::abs(rep.residual)));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(lh.size());
    for (std::size_t i = 0; i < lh.size(); ++i) {
      sx += lh[i];
      sy += lr[i];
      sxx += lh[i] * lh[i];
      sxy += lh[i] * lr[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CAPTURE(squared);
    CHECK(slope >= 4.3);
  }
}

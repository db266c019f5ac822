#include <doctest.h>

#include <cmath>

#include "vbkreg/kernels.hpp"
#include "vbkreg/quadrature.hpp"
#include "vbkreg/rng.hpp"

using namespace vbkreg;

TEST_CASE("tricube point values") {
  const Kernel k = kernel_by_id(KernelId::tricube);
  CHECK(k.eval(0.0) == doctest::Approx(70.0 / 81.0).epsilon(1e-14));
  CHECK(k.eval(1.5) == 0.0);
  CHECK(k.eval(-1.0) == 0.0);
  // (70/81)(1 - 0.125)^3 = (70/81) * 0.669921875
  CHECK(k.eval(-0.5) == doctest::Approx((70.0 / 81.0) * 0.669921875).epsilon(1e-14));
}

TEST_CASE("tricube derivative point values") {
  const Kernel k = kernel_by_id(KernelId::tricube);
  CHECK(k.deriv(0.0) == 0.0);
  CHECK(k.deriv(2.0) == 0.0);
  // central finite difference of eval, step 1e-6
  const double step = 1e-6;
  const double fd = (k.eval(0.5 + step) - k.eval(0.5 - step)) / (2.0 * step);
  CHECK(k.deriv(0.5) == doctest::Approx(fd).epsilon(1e-8));
}

TEST_CASE("kernel symmetry and positivity at random points") {
  for (const char* name : {"tricube", "epanechnikov", "gaussian_truncated"}) {
    const Kernel k = kernel_by_name(name);
    Rng rng(7, 0);
    const double T = k.support_halfwidth;
    for (int i = 0; i < 200; ++i) {
      const double u = rng.uniform(-T - 1.0, T + 1.0);
      CAPTURE(name);
      CAPTURE(u);
      CHECK(k.eval(u) == doctest::Approx(k.eval(-u)).epsilon(1e-14));
      CHECK(k.deriv(u) == doctest::Approx(-k.deriv(-u)).epsilon(1e-14));
      CHECK(k.eval(u) >= 0.0);
      if (std::abs(u) > T) CHECK(k.eval(u) == 0.0);
    }
  }
}

TEST_CASE("kernels integrate to 1") {
  for (const char* name : {"tricube", "epanechnikov", "gaussian_truncated"}) {
    const Kernel k = kernel_by_name(name);
    CAPTURE(name);
    CHECK(kernel_moment(k, 0, 1) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("tricube moments") {
  const Kernel k = kernel_by_id(KernelId::tricube);
  CHECK(std::abs(kernel_moment(k, 1, 1)) < 1e-12);
  CHECK(kernel_moment(k, 2, 1) == doctest::Approx(35.0 / 243.0).epsilon(1e-12));
  // mu_{4,1} = 1/22 and mu_{0,2} = 175/247 (closed forms for the tricube)
  CHECK(kernel_moment(k, 4, 1) == doctest::Approx(1.0 / 22.0).epsilon(1e-12));
  CHECK(kernel_moment(k, 0, 2) == doctest::Approx(175.0 / 247.0).epsilon(1e-12));
}

TEST_CASE("odd moments vanish for all kernels") {
  for (const char* name : {"tricube", "epanechnikov", "gaussian_truncated"}) {
    const Kernel k = kernel_by_name(name);
    for (int kk = 0; kk <= 2; ++kk) {
      CAPTURE(name);
      CHECK(std::abs(kernel_moment(k, 2 * kk + 1, 1)) < 1e-12);
    }
  }
}

TEST_CASE("derivative matches central differences at interior points") {
  for (const char* name : {"tricube", "epanechnikov", "gaussian_truncated"}) {
    const Kernel k = kernel_by_name(name);
    const double T = k.support_halfwidth;
    const double step = 1e-6;
    for (int i = 0; i < 100; ++i) {
      const double u = -0.95 * T + 1.9 * T * (i + 0.5) / 100.0;
      const double fd = (k.eval(u + step) - k.eval(u - step)) / (2.0 * step);
      CAPTURE(name);
      CAPTURE(u);
      CHECK(std::abs(k.deriv(u) - fd) < 1e-7);
    }
  }
}

TEST_CASE("quadrature sanity") {
  CHECK(quad::integrate([](double x) { return x * x; }, 0.0, 1.0) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(quad::integrate([](double x) { return std::sin(x); }, 0.0, 3.14159265358979) ==
        doctest::Approx(2.0).epsilon(1e-12));
}

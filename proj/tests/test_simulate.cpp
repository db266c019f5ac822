#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "vbkreg/simulate.hpp"

using namespace vbkreg;

namespace {

double sample_mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<double> draws(const Distribution& d, std::size_t n, std::uint64_t seed) {
  Rng rng(seed, 0);
  std::vector<double> out(n);
  for (auto& x : out) x = draw(d, rng);
  return out;
}

}  // namespace

TEST_CASE("distribution parse / to_string") {
  const Distribution d = Distribution::parse("cauchy(3,4)");
  CHECK(d.kind == Distribution::Kind::cauchy);
  CHECK(d.p1 == 3.0);
  CHECK(d.p2 == 4.0);
  CHECK(d.to_string() == "cauchy(3,4)");
  CHECK(Distribution::parse("student_t(4)").to_string() == "student_t(4)");
  CHECK(Distribution::parse("uniform(-0.5,0.5)").kind == Distribution::Kind::uniform);
  CHECK_THROWS(Distribution::parse("gamma(1,1)"));
  CHECK_THROWS(Distribution::parse("normal(0)"));
  CHECK_THROWS(Distribution::parse("normal(0,1"));
}

TEST_CASE("pdf values") {
  CHECK(pdf(Distribution::normal(0, 1), 0.0) ==
        doctest::Approx(0.3989422804014327).epsilon(1e-14));
  CHECK(pdf(Distribution::uniform(-0.5, 0.5), 0.2) == doctest::Approx(1.0));
  CHECK(pdf(Distribution::uniform(-0.5, 0.5), 0.7) == 0.0);
  // t(1) is standard Cauchy
  CHECK(pdf(Distribution::student_t(1), 0.3) ==
        doctest::Approx(pdf(Distribution::cauchy(0, 1), 0.3)).epsilon(1e-12));
  CHECK(pdf(Distribution::cauchy(3, 4), 3.0) ==
        doctest::Approx(1.0 / (3.14159265358979324 * 4.0)).epsilon(1e-12));
}

TEST_CASE("normal quantile") {
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(normal_quantile(0.975) == doctest::Approx(1.9599639845400545).epsilon(1e-10));
  CHECK(normal_quantile(0.1) == doctest::Approx(-normal_quantile(0.9)).epsilon(1e-12));
  CHECK(quantile(Distribution::normal(2, 3), 0.975) ==
        doctest::Approx(2.0 + 3.0 * 1.9599639845400545).epsilon(1e-10));
  CHECK(quantile(Distribution::uniform(-1, 3), 0.25) == doctest::Approx(0.0));
  CHECK(quantile(Distribution::cauchy(0, 1), 0.75) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS(quantile(Distribution::student_t(4), 0.5));
}

TEST_CASE("draw moments: uniform and normal") {
  const auto u = draws(Distribution::uniform(-0.5, 0.5), 100000, 3);
  CHECK(std::abs(sample_mean(u)) < 0.005);
  double v = 0.0;
  for (double x : u) v += x * x;
  CHECK(v / 100000.0 == doctest::Approx(1.0 / 12.0).epsilon(0.02));

  const auto z = draws(Distribution::normal(1.0, 2.0), 100000, 4);
  CHECK(sample_mean(z) == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("draw quantiles: heavy-tailed kinds") {
  // variance estimates converge too slowly for t(4) and do not exist for
  // cauchy; probe the distribution through stable tail probabilities instead
  const auto t4 = draws(Distribution::student_t(4), 100000, 5);
  double inside = 0.0;
  for (double x : t4)
    if (std::abs(x) <= 1.0) inside += 1.0;
  CHECK(inside / 100000.0 == doctest::Approx(0.62610).epsilon(0.02));

  const auto c = draws(Distribution::cauchy(3, 4), 100000, 6);
  CHECK(sample_median(c) == doctest::Approx(3.0).epsilon(0.03));
  double below = 0.0;
  for (double x : c)
    if (x <= 7.0) below += 1.0;  // loc + scale is the 75% point
  CHECK(below / 100000.0 == doctest::Approx(0.75).epsilon(0.02));
}

TEST_CASE("dist_variance") {
  CHECK(dist_variance(Distribution::uniform(-0.5, 0.5)) ==
        doctest::Approx(1.0 / 12.0).epsilon(1e-14));
  CHECK(dist_variance(Distribution::normal(0, 3)) == doctest::Approx(9.0));
  CHECK(dist_variance(Distribution::student_t(4)) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS(dist_variance(Distribution::student_t(2)));
  CHECK_THROWS(dist_variance(Distribution::cauchy(0, 1)));
}

TEST_CASE("regression functions") {
  CHECK(reg_fun(1, 0.0) == doctest::Approx(2.0));
  CHECK(reg_fun(1, 1.0) == doctest::Approx(2.0 + std::sin(0.75)));
  CHECK(reg_fun(2, 1.0) == doctest::Approx(0.5));
  CHECK(reg_fun(3, std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(reg_fun_deriv(1, 0.0) == doctest::Approx(0.75));
  CHECK(reg_fun_deriv(2, 1.0) == doctest::Approx(-0.5));
  CHECK(reg_fun_deriv(3, 2.0) == doctest::Approx(0.5));
  CHECK_THROWS(reg_fun(4, 0.0));
}

TEST_CASE("effective_plan") {
  ScenarioConfig cfg;
  cfg.n = 5000;
  const BandwidthPlan p = effective_plan(cfg);
  CHECK(p.h1 == doctest::Approx(0.6 * std::pow(5000.0, -1.0 / 7.0)).epsilon(1e-14));
  CHECK(p.h2 == doctest::Approx(std::pow(5000.0, -1.0 / 9.0) / 4.0).epsilon(1e-14));
  cfg.plan = {0.3, 0.2};
  const BandwidthPlan q = effective_plan(cfg);
  CHECK(q.h1 == 0.3);
  CHECK(q.h2 == 0.2);
}

TEST_CASE("gen_regression_sample determinism and structure") {
  ScenarioConfig cfg;
  cfg.n = 500;
  cfg.seed = 42;
  const Sample a = gen_regression_sample(cfg, 3);
  const Sample b = gen_regression_sample(cfg, 3);
  CHECK(a.x == b.x);
  CHECK(a.y == b.y);
  const Sample c = gen_regression_sample(cfg, 4);
  CHECK(a.x != c.x);

  // zero noise scale makes the responses exact
  ScenarioConfig noiseless = cfg;
  noiseless.noise_scale = 0.0;
  const Sample d = gen_regression_sample(noiseless, 0);
  for (std::size_t i = 0; i < d.n(); ++i)
    CHECK(d.y[i] == doctest::Approx(reg_fun(2, d.x[i])).epsilon(1e-14));

  ScenarioConfig logcfg = cfg;
  logcfg.reg_id = 3;
  const Sample e = gen_regression_sample(logcfg, 0);
  for (double x : e.x) CHECK(x != 0.0);
}

TEST_CASE("scenario_model matches the generator") {
  ScenarioConfig cfg;
  cfg.noise_scale = 0.3;
  const TrueModel m = scenario_model(cfg);
  CHECK(m.r(1.0) == doctest::Approx(0.5));
  CHECK(m.rprime(1.0) == doctest::Approx(-0.5));
  CHECK(m.f(0.7) == doctest::Approx(pdf(Distribution::student_t(4), 0.7)).epsilon(1e-14));
  CHECK(m.sigma2(0.0) == doctest::Approx(0.09 / 12.0).epsilon(1e-14));
}

TEST_CASE("rmse") {
  const std::vector<double> truth{0.0, 0.0};
  const std::vector<double> est{1.0, -1.0};
  CHECK(rmse(truth, est) == doctest::Approx(1.0).epsilon(1e-15));

  const std::vector<double> t2{1.0, 2.0, 3.0};
  const std::vector<double> e2{1.0, 5.0, 3.0};
  const std::vector<unsigned char> ok{1, 0, 1};
  std::size_t excluded = 0;
  CHECK(rmse(t2, e2, ok, &excluded) == doctest::Approx(0.0));
  CHECK(excluded == 1);
  const std::vector<unsigned char> none{0, 0, 0};
  CHECK_THROWS(rmse(t2, e2, none));
}

TEST_CASE("mc_rmse on a noiseless scenario is near-exact") {
  ScenarioConfig cfg;
  cfg.name = "smoke";
  cfg.noise_scale = 0.0;
  cfg.n = 300;
  cfg.reps = 3;
  cfg.seed = 9;
  const MCReport rep = mc_rmse(cfg);
  CHECK(rep.scenario == "smoke");
  CHECK(rep.per_rep_vkre.size() == 3);
  CHECK(rep.per_rep_nwe.size() == 3);
  CHECK(rep.vkre_rmse > 0.0);
  CHECK(rep.vkre_rmse < 0.1);
  CHECK(rep.nwe_rmse < 0.1);
}

TEST_CASE("mc_rmse is byte-identical across worker counts") {
  ScenarioConfig cfg;
  cfg.eps_dist = Distribution::uniform(-0.5, 0.5);
  cfg.n = 200;
  cfg.reps = 4;
  cfg.seed = 17;
  setenv("VBKREG_THREADS", "1", 1);
  const MCReport one = mc_rmse(cfg);
  setenv("VBKREG_THREADS", "3", 1);
  CHECK(worker_count() == 3);
  const MCReport three = mc_rmse(cfg);
  unsetenv("VBKREG_THREADS");
  CHECK(one.per_rep_vkre == three.per_rep_vkre);
  CHECK(one.per_rep_nwe == three.per_rep_nwe);
  CHECK(one.vkre_rmse == three.vkre_rmse);
}

TEST_CASE("mc_mse_points layout") {
  ScenarioConfig cfg;
  cfg.n = 300;
  cfg.reps = 3;
  cfg.seed = 21;
  const std::vector<double> pts{-1.0, 0.0, 1.0};
  const MCReport rep = mc_mse_points(cfg, pts);
  REQUIRE(rep.points.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(rep.points[i].t == pts[i]);
    CHECK(rep.points[i].vkre_mse >= 0.0);
    CHECK(rep.points[i].nwe_mse >= 0.0);
  }
}

TEST_CASE("nw_cv_bandwidth") {
  ScenarioConfig cfg;
  cfg.reg_id = 1;
  cfg.x_dist = Distribution::normal(0, 1);
  cfg.n = 400;
  cfg.seed = 31;
  const Sample s = gen_regression_sample(cfg, 0);
  const Kernel k = kernel_by_id(KernelId::gaussian_truncated);

  const std::vector<double> grid = nw_cv_default_grid(s.n());
  REQUIRE(grid.size() == 20);
  CHECK(grid.front() == doctest::Approx(0.05 * std::pow(400.0, -0.2)).epsilon(1e-12));
  CHECK(grid.back() == doctest::Approx(2.0 * std::pow(400.0, -0.2)).epsilon(1e-12));
  const double h = nw_cv_bandwidth(s, k, grid);
  CHECK(std::find(grid.begin(), grid.end(), h) != grid.end());
  // sensible noise level keeps CV off the tiny undersmoothing end
  CHECK(h > grid.front());

  // a grid so small that every leave-one-out window is empty must throw
  const Sample wide({0.0, 100.0}, {1.0, 2.0});
  const Kernel tric = kernel_by_id(KernelId::tricube);
  const std::vector<double> tiny{1e-4, 2e-4};
  CHECK_THROWS(nw_cv_bandwidth(wide, tric, tiny));
}

TEST_CASE("bias_slope for the classical estimator is near order 2") {
  ScenarioConfig cfg;
  cfg.reg_id = 1;
  cfg.x_dist = Distribution::normal(0, 1);
  const TrueModel m = scenario_model(cfg);
  const std::vector<double> h_grid{0.5, 0.35, 0.25, 0.18};
  const BiasSlopeReport rep =
      bias_slope(m, cfg.x_dist, DesignKind::quantile, 1.0, h_grid, 4000, 1, 7,
                 EstimatorKind::nw, kernel_by_id(KernelId::tricube), cfg.clip);
  REQUIRE(rep.rows.size() == 4);
  CHECK(rep.slope == doctest::Approx(2.0).epsilon(0.45));
}

TEST_CASE("clt_check returns a coherent diagnostic set") {
  ScenarioConfig cfg;
  const TrueModel m = scenario_model(cfg);
  const BandwidthPlan plan = effective_plan(cfg);
  const auto diag =
      clt_check(m, cfg.x_dist, cfg.eps_dist, cfg.noise_scale, 1.0, 500, plan.h2, 60, 77,
                EstimatorKind::ideal_vb, kernel_by_id(KernelId::tricube), cfg.clip);
  REQUIRE(diag.count("reps_ok") == 1);
  REQUIRE(diag.count("variance_theory") == 1);
  REQUIRE(diag.count("ks_stat") == 1);
  CHECK(diag.at("reps_ok") > 50.0);
  CHECK(diag.at("variance_theory") > 0.0);
  CHECK(std::isfinite(diag.at("mean")));
  CHECK(diag.at("ks_stat") > 0.0);
  CHECK(diag.at("ks_stat") < 1.0);
  CHECK(diag.at("ks_crit_1pct") == doctest::Approx(1.63 / std::sqrt(diag.at("reps_ok"))));
}

#include "vbkreg/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <thread>

namespace vbkreg {

namespace {

// Runs fn(j) for j in [0, count) across workers; each index is processed
// exactly once and results must be written to per-index slots so aggregation
// stays order-independent.
template <class Fn>
void parallel_for_index(std::size_t count, const Fn& fn) {
  unsigned workers = worker_count();
  if (workers > count) workers = static_cast<unsigned>(count);
  if (workers <= 1) {
    for (std::size_t j = 0; j < count; ++j) fn(j);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t j = w; j < count; j += workers) fn(j);
    });
  }
  for (auto& th : pool) th.join();
}

// NW numerator/denominator sums at every sample point for one bandwidth,
// exploiting kernel symmetry. S0/S1 include the self term.
void nw_sums_at_sample_points(const Sample& sample, const Kernel& kernel, double h,
                              std::vector<double>& s0, std::vector<double>& s1) {
  const std::size_t n = sample.n();
  const double Th = kernel.support_halfwidth * h;
  const double k0 = kernel.eval(0.0);
  s0.assign(n, k0);
  s1.resize(n);
  for (std::size_t i = 0; i < n; ++i) s1[i] = k0 * sample.y[i];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double xi = sample.x[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = xi - sample.x[j];
      if (std::abs(d) > Th) continue;
      const double k = kernel.eval(d / h);
      s0[i] += k;
      s1[i] += k * sample.y[j];
      s0[j] += k;
      s1[j] += k * sample.y[i];
    }
  }
}

struct RepOutcome {
  double nwe = 0.0, vkre = 0.0;
  bool nwe_ok = false, vkre_ok = false;
  std::size_t nwe_excluded = 0, vkre_excluded = 0;
};

}  // namespace

unsigned worker_count() {
  if (const char* env = std::getenv("VBKREG_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

double reg_fun(int reg_id, double x) {
  switch (reg_id) {
    case 1:
      return 2.0 + std::sin(0.75 * x);
    case 2:
      return 1.0 / (1.0 + x * x);
    case 3:
      return std::log(std::abs(x));
  }
  throw std::invalid_argument("reg_fun: reg_id must be 1, 2 or 3");
}

double reg_fun_deriv(int reg_id, double x) {
  switch (reg_id) {
    case 1:
      return 0.75 * std::cos(0.75 * x);
    case 2: {
      const double d = 1.0 + x * x;
      return -2.0 * x / (d * d);
    }
    case 3:
      return 1.0 / x;
  }
  throw std::invalid_argument("reg_fun_deriv: reg_id must be 1, 2 or 3");
}

BandwidthPlan effective_plan(const ScenarioConfig& cfg) {
  const BandwidthPlan def = default_plan(cfg.n);
  return {cfg.plan.h1 > 0.0 ? cfg.plan.h1 : def.h1,
          cfg.plan.h2 > 0.0 ? cfg.plan.h2 : def.h2};
}

double dist_variance(const Distribution& dist) {
  switch (dist.kind) {
    case Distribution::Kind::uniform: {
      const double w = dist.p2 - dist.p1;
      return w * w / 12.0;
    }
    case Distribution::Kind::normal:
      return dist.p2 * dist.p2;
    case Distribution::Kind::student_t: {
      const double df = dist.p1;
      if (df <= 2.0) throw std::domain_error("dist_variance: t with df <= 2 has no variance");
      return df / (df - 2.0);
    }
    case Distribution::Kind::cauchy:
      throw std::domain_error("dist_variance: cauchy has no variance");
  }
  throw std::logic_error("dist_variance: unreachable");
}

TrueModel scenario_model(const ScenarioConfig& cfg) {
  const Distribution xd = cfg.x_dist;
  const int reg = cfg.reg_id;
  const double s2 = cfg.noise_scale * cfg.noise_scale * dist_variance(cfg.eps_dist);
  TrueModel m;
  m.f = [xd](double t) { return pdf(xd, t); };
  m.r = [reg](double t) { return reg_fun(reg, t); };
  m.rprime = [reg](double t) { return reg_fun_deriv(reg, t); };
  m.sigma2 = [s2](double) { return s2; };
  return m;
}

Sample gen_regression_sample(const ScenarioConfig& cfg, std::size_t rep_index) {
  if (cfg.n < 1) throw std::invalid_argument("gen_regression_sample: n < 1");
  Rng rng(cfg.seed, rep_index);
  std::vector<double> xs(cfg.n), ys(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    double xi = draw(cfg.x_dist, rng);
    while (cfg.reg_id == 3 && xi == 0.0) xi = draw(cfg.x_dist, rng);
    const double eps = draw(cfg.eps_dist, rng);
    xs[i] = xi;
    ys[i] = reg_fun(cfg.reg_id, xi) + cfg.noise_scale * eps;
  }
  return Sample(std::move(xs), std::move(ys));
}

double rmse(std::span<const double> truth, std::span<const double> est) {
  if (truth.size() != est.size()) throw std::invalid_argument("rmse: length mismatch");
  if (truth.empty()) throw std::invalid_argument("rmse: empty");
  double acc = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double d = truth[i] - est[i];
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(truth.size()));
}

double rmse(std::span<const double> truth, std::span<const double> est,
            std::span<const unsigned char> ok, std::size_t* excluded) {
  if (truth.size() != est.size() || truth.size() != ok.size())
    throw std::invalid_argument("rmse: length mismatch");
  double acc = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (!ok[i]) continue;
    const double d = truth[i] - est[i];
    acc += d * d;
    ++used;
  }
  if (excluded) *excluded = truth.size() - used;
  if (used == 0) throw std::runtime_error("rmse: every point excluded");
  return std::sqrt(acc / static_cast<double>(used));
}

std::vector<double> nw_cv_default_grid(std::size_t n) {
  const double scale = std::pow(static_cast<double>(n), -0.2);
  const double lo = 0.05, hi = 2.0;
  std::vector<double> grid(20);
  for (int i = 0; i < 20; ++i)
    grid[i] = scale * lo * std::pow(hi / lo, static_cast<double>(i) / 19.0);
  return grid;
}

double nw_cv_bandwidth(const Sample& sample, const Kernel& kernel,
                       std::span<const double> h_grid) {
  if (h_grid.empty()) throw std::invalid_argument("nw_cv_bandwidth: empty grid");
  std::vector<double> grid(h_grid.begin(), h_grid.end());
  std::sort(grid.begin(), grid.end());
  const std::size_t n = sample.n();
  const double k0 = kernel.eval(0.0);
  double best_h = 0.0;
  double best_score = std::numeric_limits<double>::infinity();
  std::vector<double> s0, s1;
  for (double h : grid) {
    nw_sums_at_sample_points(sample, kernel, h, s0, s1);
    double err = 0.0;
    std::size_t used = 0;
    const double floor_sum = kDenomFloor * static_cast<double>(n) * h;
    for (std::size_t i = 0; i < n; ++i) {
      const double den = s0[i] - k0;
      if (den < floor_sum) continue;
      const double pred = (s1[i] - k0 * sample.y[i]) / den;
      const double d = sample.y[i] - pred;
      err += d * d;
      ++used;
    }
    if (used == 0) continue;
    const double score = err / static_cast<double>(used);
    if (score < best_score) {
      best_score = score;
      best_h = h;
    }
  }
  if (best_h == 0.0) throw std::runtime_error("nw_cv_bandwidth: all grid points degenerate");
  return best_h;
}

MCReport mc_rmse(const ScenarioConfig& cfg) {
  if (cfg.n < 10) throw std::invalid_argument("mc_rmse: n < 10");
  if (cfg.reps < 1) throw std::invalid_argument("mc_rmse: reps < 1");
  const BandwidthPlan plan = effective_plan(cfg);
  const Kernel vk = kernel_by_id(cfg.vkre_kernel);
  const Kernel nk = kernel_by_id(cfg.nwe_kernel);
  const std::vector<double> cv_grid = nw_cv_default_grid(cfg.n);

  std::vector<RepOutcome> out(cfg.reps);
  parallel_for_index(cfg.reps, [&](std::size_t j) {
    const Sample sample = gen_regression_sample(cfg, j);
    const std::size_t n = sample.n();
    std::vector<double> truth(n);
    for (std::size_t i = 0; i < n; ++i) truth[i] = reg_fun(cfg.reg_id, sample.x[i]);
    RepOutcome& r = out[j];

    // VKRE: pilot alphas once, then the two-stage ratio at every X_i.
    try {
      const std::vector<double> alphas = pilot_alphas(sample, plan.h1, vk, cfg.clip);
      std::vector<double> est(n);
      std::vector<unsigned char> ok(n);
      for (std::size_t i = 0; i < n; ++i) {
        const EstimateAtPoint e = vb_estimate_with_alphas(sample, sample.x[i], plan.h2, vk, alphas);
        est[i] = e.ok ? e.value : 0.0;
        ok[i] = e.ok ? 1 : 0;
      }
      r.vkre = rmse(truth, est, ok, &r.vkre_excluded);
      r.vkre_ok = true;
    } catch (const std::exception&) {
      r.vkre_ok = false;
    }

    // NWE baseline: LOO-CV bandwidth, then the full-sample fit at every X_i.
    try {
      const double h = nw_cv_bandwidth(sample, nk, cv_grid);
      std::vector<double> s0, s1;
      nw_sums_at_sample_points(sample, nk, h, s0, s1);
      const double floor_sum = kDenomFloor * static_cast<double>(n) * h;
      std::vector<double> est(n);
      std::vector<unsigned char> ok(n);
      for (std::size_t i = 0; i < n; ++i) {
        ok[i] = s0[i] >= floor_sum ? 1 : 0;
        est[i] = ok[i] ? s1[i] / s0[i] : 0.0;
      }
      r.nwe = rmse(truth, est, ok, &r.nwe_excluded);
      r.nwe_ok = true;
    } catch (const std::exception&) {
      r.nwe_ok = false;
    }
  });

  MCReport rep;
  rep.scenario = cfg.name;
  double nsum = 0.0, vsum = 0.0;
  std::size_t nok = 0, vok = 0, nexc = 0, vexc = 0;
  rep.per_rep_nwe.reserve(cfg.reps);
  rep.per_rep_vkre.reserve(cfg.reps);
  for (const RepOutcome& r : out) {
    if (r.nwe_ok) {
      nsum += r.nwe;
      ++nok;
      nexc += r.nwe_excluded;
      rep.per_rep_nwe.push_back(r.nwe);
    }
    if (r.vkre_ok) {
      vsum += r.vkre;
      ++vok;
      vexc += r.vkre_excluded;
      rep.per_rep_vkre.push_back(r.vkre);
    }
  }
  if (nok == 0 && vok == 0) throw std::runtime_error("mc_rmse: every replication failed");
  rep.nwe_rmse = nok ? nsum / static_cast<double>(nok) : std::numeric_limits<double>::quiet_NaN();
  rep.vkre_rmse = vok ? vsum / static_cast<double>(vok) : std::numeric_limits<double>::quiet_NaN();
  rep.diagnostics["reps"] = static_cast<double>(cfg.reps);
  rep.diagnostics["nwe_failed_reps"] = static_cast<double>(cfg.reps - nok);
  rep.diagnostics["vkre_failed_reps"] = static_cast<double>(cfg.reps - vok);
  rep.diagnostics["nwe_excluded_points"] = static_cast<double>(nexc);
  rep.diagnostics["vkre_excluded_points"] = static_cast<double>(vexc);
  rep.diagnostics["h1"] = plan.h1;
  rep.diagnostics["h2"] = plan.h2;
  return rep;
}

MCReport mc_mse_points(const ScenarioConfig& cfg, std::span<const double> points) {
  if (points.empty()) throw std::invalid_argument("mc_mse_points: no points");
  if (cfg.reps < 1) throw std::invalid_argument("mc_mse_points: reps < 1");
  const BandwidthPlan plan = effective_plan(cfg);
  const Kernel vk = kernel_by_id(cfg.vkre_kernel);
  const Kernel nk = kernel_by_id(cfg.nwe_kernel);
  const std::vector<double> cv_grid = nw_cv_default_grid(cfg.n);
  const std::size_t m = points.size();

  struct PointRep {
    std::vector<double> nwe_sq, vkre_sq;
    std::vector<unsigned char> nwe_ok, vkre_ok;
  };
  std::vector<PointRep> out(cfg.reps);
  parallel_for_index(cfg.reps, [&](std::size_t j) {
    const Sample sample = gen_regression_sample(cfg, j);
    PointRep& r = out[j];
    r.nwe_sq.assign(m, 0.0);
    r.vkre_sq.assign(m, 0.0);
    r.nwe_ok.assign(m, 0);
    r.vkre_ok.assign(m, 0);
    const std::vector<double> alphas = pilot_alphas(sample, plan.h1, vk, cfg.clip);
    double h_cv = 0.0;
    try {
      h_cv = nw_cv_bandwidth(sample, nk, cv_grid);
    } catch (const std::exception&) {
      h_cv = 0.0;
    }
    for (std::size_t p = 0; p < m; ++p) {
      const double t = points[p];
      const double truth = reg_fun(cfg.reg_id, t);
      const EstimateAtPoint v = vb_estimate_with_alphas(sample, t, plan.h2, vk, alphas);
      if (v.ok) {
        const double d = v.value - truth;
        r.vkre_sq[p] = d * d;
        r.vkre_ok[p] = 1;
      }
      if (h_cv > 0.0) {
        const EstimateAtPoint e = nw_estimate(sample, t, h_cv, nk);
        if (e.ok) {
          const double d = e.value - truth;
          r.nwe_sq[p] = d * d;
          r.nwe_ok[p] = 1;
        }
      }
    }
  });

  MCReport rep;
  rep.scenario = cfg.name;
  rep.points.resize(m);
  std::size_t any_ok = 0;
  for (std::size_t p = 0; p < m; ++p) {
    double nsum = 0.0, vsum = 0.0;
    std::size_t nok = 0, vok = 0;
    for (const PointRep& r : out) {
      if (r.nwe_ok[p]) {
        nsum += r.nwe_sq[p];
        ++nok;
      }
      if (r.vkre_ok[p]) {
        vsum += r.vkre_sq[p];
        ++vok;
      }
    }
    any_ok += nok + vok;
    rep.points[p] = {points[p],
                     nok ? nsum / static_cast<double>(nok)
                         : std::numeric_limits<double>::quiet_NaN(),
                     vok ? vsum / static_cast<double>(vok)
                         : std::numeric_limits<double>::quiet_NaN(),
                     cfg.reps - nok, cfg.reps - vok};
  }
  if (any_ok == 0) throw std::runtime_error("mc_mse_points: every replication failed");
  rep.diagnostics["reps"] = static_cast<double>(cfg.reps);
  rep.diagnostics["h1"] = plan.h1;
  rep.diagnostics["h2"] = plan.h2;
  return rep;
}

BiasSlopeReport bias_slope(const TrueModel& model, const Distribution& x_dist,
                           DesignKind design, double t, std::span<const double> h_grid,
                           std::size_t n, std::size_t reps, std::uint64_t seed,
                           EstimatorKind kind, const Kernel& kernel, const ClipSpec& clip) {
  if (h_grid.size() < 4) throw std::invalid_argument("bias_slope: need >= 4 bandwidths");
  if (reps < 1) throw std::invalid_argument("bias_slope: reps < 1");
  const double rt = model.r(t);
  const std::function<double(double)> q_true = [&](double x) {
    return q_of(model.f(x), model.rprime(x));
  };

  std::vector<double> quantile_x;
  if (design == DesignKind::quantile) {
    quantile_x.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      quantile_x[i] = quantile(x_dist, (static_cast<double>(i) + 0.5) / static_cast<double>(n));
  }

  BiasSlopeReport report;
  report.rows.resize(h_grid.size());
  for (std::size_t k = 0; k < h_grid.size(); ++k) {
    const double h = h_grid[k];
    double sum = 0.0, sumsq = 0.0;
    std::size_t used = 0;
    for (std::size_t j = 0; j < reps; ++j) {
      std::vector<double> xs;
      if (design == DesignKind::quantile) {
        xs = quantile_x;
      } else {
        Rng rng(seed, (k << 32) | j);
        xs.resize(n);
        for (auto& x : xs) x = draw(x_dist, rng);
      }
      std::vector<double> ys(n);
      for (std::size_t i = 0; i < n; ++i) ys[i] = model.r(xs[i]);
      const Sample sample(std::move(xs), std::move(ys));
      const EstimateAtPoint e = (kind == EstimatorKind::ideal_vb)
                                    ? ideal_vb_estimate(sample, t, h, kernel, clip, q_true)
                                    : nw_estimate(sample, t, h, kernel);
      if (!e.ok) continue;
      const double d = e.value - rt;
      sum += d;
      sumsq += d * d;
      ++used;
    }
    BiasSlopeReport::Row& row = report.rows[k];
    row.h = h;
    if (used == 0) {
      row.bias = 0.0;
      row.se = 0.0;
      row.used = false;
      continue;
    }
    row.bias = sum / static_cast<double>(used);
    row.se = used > 1 ? std::sqrt(std::max(0.0, sumsq / used - row.bias * row.bias) /
                                  static_cast<double>(used - 1))
                      : 0.0;
    row.used = std::abs(row.bias) > 10.0 * row.se && row.bias != 0.0;
  }

  // least squares on log|bias| vs log h over usable rows
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t m = 0;
  for (const auto& row : report.rows) {
    if (!row.used) continue;
    const double lx = std::log(row.h);
    const double ly = std::log(std::abs(row.bias));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  if (m < 3) throw std::runtime_error("bias_slope: fewer than 3 usable bandwidths");
  const double dm = static_cast<double>(m);
  report.slope = (dm * sxy - sx * sy) / (dm * sxx - sx * sx);
  return report;
}

std::map<std::string, double> clt_check(const TrueModel& model, const Distribution& x_dist,
                                        const Distribution& eps_dist, double noise_scale,
                                        double t, std::size_t n, double h, std::size_t reps,
                                        std::uint64_t seed, EstimatorKind kind,
                                        const Kernel& kernel, const ClipSpec& clip) {
  if (reps < 2) throw std::invalid_argument("clt_check: reps < 2");
  const double rt = model.r(t);
  const std::function<double(double)> q_true = [&](double x) {
    return q_of(model.f(x), model.rprime(x));
  };
  const double scale = std::sqrt(static_cast<double>(n) * h);

  std::vector<double> z(reps, std::numeric_limits<double>::quiet_NaN());
  parallel_for_index(reps, [&](std::size_t j) {
    Rng rng(seed, j);
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = draw(x_dist, rng);
      ys[i] = model.r(xs[i]) + noise_scale * draw(eps_dist, rng);
    }
    const Sample sample(std::move(xs), std::move(ys));
    const EstimateAtPoint e = (kind == EstimatorKind::ideal_vb)
                                  ? ideal_vb_estimate(sample, t, h, kernel, clip, q_true)
                                  : nw_estimate(sample, t, h, kernel);
    if (e.ok) z[j] = scale * (e.value - rt);
  });

  std::vector<double> zs;
  zs.reserve(reps);
  for (double v : z)
    if (std::isfinite(v)) zs.push_back(v);
  if (zs.size() < 2) throw std::runtime_error("clt_check: too few successful replications");

  double mean = 0.0;
  for (double v : zs) mean += v;
  mean /= static_cast<double>(zs.size());
  double var = 0.0;
  for (double v : zs) var += (v - mean) * (v - mean);
  var /= static_cast<double>(zs.size() - 1);

  const double theta = theta_coefficient(model, t, kernel, 1e-2);
  const double lambda_hat = std::pow(h, 4) * scale;
  const double mean_theory = lambda_hat * theta;
  const double var_theory = asymptotic_variance(model, t, kernel);

  // KS statistic against the limiting normal
  std::sort(zs.begin(), zs.end());
  const double sd = std::sqrt(var_theory);
  double ks = 0.0;
  const double m = static_cast<double>(zs.size());
  for (std::size_t i = 0; i < zs.size(); ++i) {
    const double cdf = 0.5 * std::erfc(-(zs[i] - mean_theory) / (sd * std::sqrt(2.0)));
    ks = std::max(ks, std::max((i + 1) / m - cdf, cdf - i / m));
  }

  return {{"reps_ok", static_cast<double>(zs.size())},
          {"mean", mean},
          {"mean_theory", mean_theory},
          {"variance", var},
          {"variance_theory", var_theory},
          {"variance_ratio", var / var_theory},
          {"theta", theta},
          {"lambda_hat", lambda_hat},
          {"ks_stat", ks},
          {"ks_crit_1pct", 1.63 / std::sqrt(m)}};
}

}  // namespace vbkreg

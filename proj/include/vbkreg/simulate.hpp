#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "vbkreg/distributions.hpp"
#include "vbkreg/estimators.hpp"
#include "vbkreg/theory.hpp"

namespace vbkreg {

enum class EstimatorKind { ideal_vb, nw };
enum class DesignKind { random, quantile };

// The three regression functions of the simulation study.
double reg_fun(int reg_id, double x);
double reg_fun_deriv(int reg_id, double x);

struct ScenarioConfig {
  std::string name = "custom";
  int reg_id = 2;
  Distribution x_dist = Distribution::student_t(4);
  Distribution eps_dist = Distribution::uniform(-0.5, 0.5);
  double noise_scale = 0.3;
  std::size_t n = 5000;
  std::size_t reps = 250;
  std::uint64_t seed = 1;
  // h1 <= 0 or h2 <= 0 selects the default rules 0.6 n^{-1/7} and n^{-1/9}/4.
  BandwidthPlan plan{0.0, 0.0};
  ClipSpec clip;
  KernelId vkre_kernel = KernelId::tricube;
  KernelId nwe_kernel = KernelId::gaussian_truncated;
};

BandwidthPlan effective_plan(const ScenarioConfig& cfg);

// Variance of a draw; infinite kinds (cauchy, t with df <= 2) throw.
double dist_variance(const Distribution& dist);

// Ground truth implied by a scenario (homoscedastic noise).
TrueModel scenario_model(const ScenarioConfig& cfg);

// Deterministic in (cfg.seed, rep_index).
Sample gen_regression_sample(const ScenarioConfig& cfg, std::size_t rep_index);

// Root mean squared deviation; all points included.
double rmse(std::span<const double> truth, std::span<const double> est);
// ok == 0 entries are excluded pairwise; throws when nothing remains.
double rmse(std::span<const double> truth, std::span<const double> est,
            std::span<const unsigned char> ok, std::size_t* excluded = nullptr);

struct MCReport {
  std::string scenario;
  double nwe_rmse = 0.0;
  double vkre_rmse = 0.0;
  struct PointRow {
    double t;
    double nwe_mse, vkre_mse;
    std::size_t nwe_excluded, vkre_excluded;
  };
  std::vector<PointRow> points;
  std::vector<double> per_rep_nwe, per_rep_vkre;
  std::map<std::string, double> diagnostics;
};

// RMSE at the sampled X_i, averaged over replications (Tables 1-3 layout).
MCReport mc_rmse(const ScenarioConfig& cfg);

// Per-point Monte Carlo MSE at fixed evaluation points (Tables 4-7 layout).
MCReport mc_mse_points(const ScenarioConfig& cfg, std::span<const double> points);

struct BiasSlopeReport {
  double slope = 0.0;
  struct Row {
    double h, bias, se;
    bool used;
  };
  std::vector<Row> rows;
};

// Log-log slope of |E(estimate) - r(t)| against h. Noiseless responses; the
// design is either random draws from x_dist or its deterministic quantile grid.
BiasSlopeReport bias_slope(const TrueModel& model, const Distribution& x_dist,
                           DesignKind design, double t, std::span<const double> h_grid,
                           std::size_t n, std::size_t reps, std::uint64_t seed,
                           EstimatorKind kind, const Kernel& kernel, const ClipSpec& clip);

// Distribution of z = sqrt(nh)(rhat(t) - r(t)) against the limiting normal
// N(lambda theta(t), asymptotic variance) with lambda = h^4 sqrt(nh).
std::map<std::string, double> clt_check(const TrueModel& model, const Distribution& x_dist,
                                        const Distribution& eps_dist, double noise_scale,
                                        double t, std::size_t n, double h, std::size_t reps,
                                        std::uint64_t seed, EstimatorKind kind,
                                        const Kernel& kernel, const ClipSpec& clip);

// Leave-one-out CV over a bandwidth grid; ties go to the smaller h.
double nw_cv_bandwidth(const Sample& sample, const Kernel& kernel,
                       std::span<const double> h_grid);

// 20-point log grid [0.05, 2] * n^{-1/5}.
std::vector<double> nw_cv_default_grid(std::size_t n);

// Worker cap from VBKREG_THREADS (0 or unset = hardware concurrency).
unsigned worker_count();

}  // namespace vbkreg

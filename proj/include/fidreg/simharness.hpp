#pragma once

#include "fidreg/inference.hpp"
#include "fidreg/rng.hpp"
#include "fidreg/types.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace fidreg {

/// One experimental configuration: the generation model is
/// y = b (X_1 + ... + X_d) + eps with standard normal errors and AR(1)
/// covariates, cor(X_i, X_j) = rho^|i-j|.
struct SimConfig {
  Index n = 0;
  Index p = 0;
  Index d = 0;
  double b = 0.0;
  double rho = 0.0;
  Index reps = 1;
  Index draws_per_rep = 2000;
  double gamma = 1.0;
  std::vector<double> levels{0.90, 0.95, 0.99};
  std::uint64_t seed = 0;
  Index keep = 0;       // 0 -> default_keep(n, p)
  Index size_cap = 0;   // 0 -> floor(n / 2)
  Index max_steps = 0;  // 0 -> min(screened count, n - 2)
  int threads = 1;      // 0 -> all hardware threads
};

void validate(const SimConfig& cfg);

struct Truth {
  ModelId support;  // {0, ..., d-1}
  Vector beta;      // dense length p: b on the support, 0 elsewhere
  double sigma = 1.0;
};

/// Synthetic dataset for replicate `rep`, drawn from stream (cfg.seed, rep).
std::pair<Dataset, Truth> generate_synthetic(const SimConfig& cfg, Index rep);

/// Same, continuing an existing stream (run_experiment shares one stream per
/// replicate across generation, design-row selection and fiducial sampling).
std::pair<Dataset, Truth> generate_synthetic(const SimConfig& cfg, RngStream& rng);

/// Classical inference on the true model: sigma^2_hat = RSS / (n - d) with an
/// RSS / chi^2 interval, and t intervals for beta_1 and for the mean function
/// at the given design rows. The infeasible benchmark column of the tables.
struct OracleRow {
  double sigma2_hat = 0.0;
  std::vector<Interval> sigma2_cis;  // aligned with levels
  double beta1_hat = 0.0;
  std::vector<Interval> beta1_cis;
  std::vector<double> mean_hat;                 // per design row
  std::vector<std::vector<Interval>> mean_cis;  // [row][level]
};

OracleRow oracle_run(const Dataset& d, const Truth& truth, const std::vector<double>& levels,
                     const std::vector<Index>& design_rows);

struct LevelStats {
  double level = 0.0;
  double coverage = 0.0;
  double mean_width = 0.0;
};

struct EstimatorResult {
  double sigma2_bias = 0.0;  // mean of sigma^2_hat - sigma^2_true, raw proportion
  double sigma2_bias_se = 0.0;
  std::vector<LevelStats> sigma2;
  std::vector<LevelStats> beta1;
  std::vector<LevelStats> mean_fn;
  double beta1_not_significant_rate = 0.0;  // proposed only; 0 for the oracle
};

struct SimResult {
  EstimatorResult proposed;
  EstimatorResult oracle;
  Index reps_completed = 0;
  Index excluded_reps = 0;
  double median_true_model_prob = 0.0;
  std::vector<double> true_model_probs;  // r(M_0) per completed rep
};

/// Full study for one configuration: per replicate, generate -> screen ->
/// path -> score -> sample -> summarize, recorded against the truth;
/// replicates that lose every candidate are excluded and counted. The result
/// is a pure function of cfg regardless of thread count.
SimResult run_experiment(const SimConfig& cfg);

}  // namespace fidreg

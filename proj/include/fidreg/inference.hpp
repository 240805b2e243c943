#pragma once

#include "fidreg/fiducial.hpp"
#include "fidreg/sampling.hpp"
#include "fidreg/types.hpp"

#include <utility>
#include <vector>

namespace fidreg {

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

/// Dimensionless summaries below all use the same percentile rule: linear
/// interpolation between closest order statistics ("type 7"), with the CI at
/// level L spanning the (1-L)/2 and (1+L)/2 empirical percentiles.

struct SigmaSummary {
  double estimate = 0.0;          // mean of sigma~^2 over draws
  std::vector<Interval> cis;      // aligned with the requested levels
};

struct CoefficientSummary {
  double inclusion_prob = 0.0;    // exact fraction of draws containing j
  bool significant = false;       // inclusion_prob strictly above 0.5
  double estimate = 0.0;          // mean of the non-zero draw values; valid iff significant
  std::vector<Interval> cis;      // percentile intervals over non-zero values; empty unless significant
};

struct MeanSummary {
  double estimate = 0.0;
  std::vector<Interval> cis;
};

/// Draws below the documented floor give unstable percentiles.
inline constexpr Index kMinDraws = 100;

SigmaSummary summarize_sigma(const std::vector<FiducialDraw>& draws,
                             const std::vector<double>& levels);

CoefficientSummary summarize_coefficient(const std::vector<FiducialDraw>& draws, Index j,
                                         const std::vector<double>& levels);

MeanSummary summarize_mean(const std::vector<FiducialDraw>& draws,
                           Eigen::Ref<const Vector> x_row,
                           const std::vector<double>& levels);

/// Exact normalized model probabilities (not Monte Carlo frequencies),
/// sorted descending, ties by lexicographic support order.
std::vector<std::pair<ModelId, double>> aggregate_model_probs(const ScoredClass& sc);

/// Everything cmd_fit reports: model probabilities, the sigma^2 summary, and
/// per-column coefficient summaries for every column that appears in at least
/// one draw (all other columns have inclusion probability exactly 0).
struct InferenceReport {
  Index n = 0;
  Index p = 0;
  Index draw_count = 0;
  Index dropped_candidates = 0;
  std::vector<double> levels;
  std::vector<std::pair<ModelId, double>> model_probs;
  SigmaSummary sigma2;
  std::vector<std::pair<Index, CoefficientSummary>> coefficients;  // sorted by column
};

InferenceReport make_report(const Dataset& d, const ScoredClass& sc,
                            const std::vector<FiducialDraw>& draws,
                            const std::vector<double>& levels, Index top_models);

}  // namespace fidreg

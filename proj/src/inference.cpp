#include "fidreg/inference.hpp"

#include "fidreg/stats.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace fidreg {

namespace {

void check_draws(const std::vector<FiducialDraw>& draws) {
  if (static_cast<Index>(draws.size()) < kMinDraws)
    throw TooFewDrawsError("need at least " + std::to_string(kMinDraws) + " draws, got " +
                           std::to_string(draws.size()));
}

void check_levels(const std::vector<double>& levels) {
  for (double l : levels)
    if (!(l > 0.0 && l < 1.0))
      throw std::invalid_argument("confidence level outside (0,1)");
}

std::vector<Interval> percentile_intervals(std::vector<double> values,
                                           const std::vector<double>& levels) {
  std::sort(values.begin(), values.end());
  std::span<const double> sorted(values);
  std::vector<Interval> cis;
  cis.reserve(levels.size());
  for (double l : levels) {
    const double alpha = 1.0 - l;
    cis.push_back({percentile_sorted(sorted, 0.5 * alpha),
                   percentile_sorted(sorted, 1.0 - 0.5 * alpha)});
  }
  return cis;
}

}  // namespace

SigmaSummary summarize_sigma(const std::vector<FiducialDraw>& draws,
                             const std::vector<double>& levels) {
  check_draws(draws);
  check_levels(levels);
  std::vector<double> s2;
  s2.reserve(draws.size());
  for (const auto& dr : draws) s2.push_back(dr.sigma * dr.sigma);
  SigmaSummary out;
  out.estimate = 0.0;
  for (double v : s2) out.estimate += v;
  out.estimate /= static_cast<double>(s2.size());
  out.cis = percentile_intervals(std::move(s2), levels);
  return out;
}

CoefficientSummary summarize_coefficient(const std::vector<FiducialDraw>& draws, Index j,
                                         const std::vector<double>& levels) {
  check_draws(draws);
  check_levels(levels);
  std::vector<double> nonzero;
  for (const auto& dr : draws) {
    const auto& sup = dr.model.support();
    auto it = std::lower_bound(sup.begin(), sup.end(), j);
    if (it != sup.end() && *it == j)
      nonzero.push_back(dr.beta[static_cast<Index>(it - sup.begin())]);
  }
  CoefficientSummary out;
  out.inclusion_prob =
      static_cast<double>(nonzero.size()) / static_cast<double>(draws.size());
  out.significant = out.inclusion_prob > 0.5;  // strictly: exactly 50% is not significant
  if (out.significant) {
    out.estimate = 0.0;
    for (double v : nonzero) out.estimate += v;
    out.estimate /= static_cast<double>(nonzero.size());
    out.cis = percentile_intervals(std::move(nonzero), levels);
  }
  return out;
}

MeanSummary summarize_mean(const std::vector<FiducialDraw>& draws,
                           Eigen::Ref<const Vector> x_row,
                           const std::vector<double>& levels) {
  check_draws(draws);
  check_levels(levels);
  std::vector<double> means;
  means.reserve(draws.size());
  for (const auto& dr : draws) means.push_back(dr.mean_at(x_row));
  MeanSummary out;
  out.estimate = 0.0;
  for (double v : means) out.estimate += v;
  out.estimate /= static_cast<double>(means.size());
  out.cis = percentile_intervals(std::move(means), levels);
  return out;
}

std::vector<std::pair<ModelId, double>> aggregate_model_probs(const ScoredClass& sc) {
  std::vector<std::pair<ModelId, double>> out;
  out.reserve(sc.models.size());
  for (std::size_t i = 0; i < sc.models.size(); ++i)
    out.emplace_back(sc.models[i], sc.probs[static_cast<Index>(i)]);
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return out;
}

InferenceReport make_report(const Dataset& d, const ScoredClass& sc,
                            const std::vector<FiducialDraw>& draws,
                            const std::vector<double>& levels, Index top_models) {
  check_draws(draws);
  check_levels(levels);
  InferenceReport rep;
  rep.n = d.n();
  rep.p = d.p();
  rep.draw_count = static_cast<Index>(draws.size());
  rep.dropped_candidates = sc.dropped;
  rep.levels = levels;

  rep.model_probs = aggregate_model_probs(sc);
  if (top_models > 0 && static_cast<Index>(rep.model_probs.size()) > top_models)
    rep.model_probs.resize(static_cast<std::size_t>(top_models));

  rep.sigma2 = summarize_sigma(draws, levels);

  std::map<Index, bool> seen;
  for (const auto& dr : draws)
    for (Index j : dr.model.support()) seen[j] = true;
  for (const auto& [j, _] : seen)
    rep.coefficients.emplace_back(j, summarize_coefficient(draws, j, levels));
  return rep;
}

}  // namespace fidreg

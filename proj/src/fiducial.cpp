#include "fidreg/fiducial.hpp"

#include "fidreg/leastsq.hpp"
#include "fidreg/stats.hpp"

#include <cmath>
#include <numbers>

namespace fidreg {

double log_penalty(Index p, Index m, Index n, double gamma) {
  if (m < 0 || m > p) throw std::invalid_argument("log_penalty: need 0 <= m <= p");
  if (n < 3) throw std::invalid_argument("log_penalty: need n >= 3");
  if (gamma <= 0.0) throw std::invalid_argument("log_penalty: gamma must be positive");
  // log base e^{1/gamma} of C(p, m) is gamma * ln C(p, m).
  return 0.5 * static_cast<double>(m) * std::log(static_cast<double>(n)) +
         gamma * log_binomial(p, m);
}

double log_fiducial_score(Index n, Index p, Index m, double rss, double gamma) {
  if (m < 0 || m > n - 2) throw std::invalid_argument("log_fiducial_score: need 0 <= m <= n - 2");
  if (gamma <= 0.0) throw std::invalid_argument("log_fiducial_score: gamma must be positive");
  if (!(rss > 0.0) || !std::isfinite(rss))
    throw DegenerateFitError("log_fiducial_score: rss must be positive and finite");
  const auto nd = static_cast<double>(n);
  const auto md = static_cast<double>(m);
  return std::lgamma(0.5 * (nd - md)) -
         0.5 * (nd - md - 1.0) * std::log(std::numbers::pi * rss) -
         0.5 * (md + 1.0) * std::log(nd) - gamma * log_binomial(p, m);
}

ScoredClass score_class(const Dataset& d, const CandidateClass& candidates, double gamma) {
  if (candidates.models.empty())
    throw std::invalid_argument("score_class: no candidates");

  // Candidates arrive lexicographically sorted from build_candidates; sort
  // anyway so scoring order (and hence output) never depends on the caller.
  std::vector<ModelId> sorted = candidates.models;
  std::sort(sorted.begin(), sorted.end());

  ScoredClass sc;
  std::vector<double> scores;
  for (const ModelId& m : sorted) {
    try {
      ModelFit fit = fit_model(d, m);
      double s = log_fiducial_score(d.n(), d.p(), m.size(), fit.rss, gamma);
      sc.models.push_back(m);
      sc.fits.push_back(std::move(fit));
      scores.push_back(s);
    } catch (const RankDeficientError&) {
      ++sc.dropped;
    } catch (const DegenerateFitError&) {
      ++sc.dropped;
    }
  }
  if (sc.models.empty())
    throw EmptyClassError("score_class: every candidate was dropped");

  sc.log_scores = Eigen::Map<const Vector>(scores.data(), static_cast<Index>(scores.size()));
  const double lse = log_sum_exp(scores);
  sc.probs = (sc.log_scores.array() - lse).exp();
  return sc;
}

}  // namespace fidreg

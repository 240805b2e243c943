#pragma once

#include "fidreg/lars.hpp"
#include "fidreg/types.hpp"

namespace fidreg {

/// MDL model-complexity cost q(M) = (m/2) ln n + gamma * ln C(p, m).
/// The combinatorial term prices encoding which coefficients stay at zero.
double log_penalty(Index p, Index m, Index n, double gamma);

/// Log of the (unnormalized) fiducial model weight
///   R(M) = Gamma((n-m)/2) (pi rss)^{-(n-m-1)/2} n^{-(m+1)/2} C(p,m)^{-gamma},
/// evaluated with log-gamma throughout; the direct form overflows for n in
/// the hundreds. Throws DegenerateFitError when rss is non-positive or
/// non-finite (saturated model).
double log_fiducial_score(Index n, Index p, Index m, double rss, double gamma);

/// Candidate models with fiducial probabilities normalized over the class.
/// models/log_scores/probs/fits are aligned; models are in lexicographic
/// support order. `dropped` counts candidates removed for rank deficiency or
/// degenerate fits.
struct ScoredClass {
  std::vector<ModelId> models;
  std::vector<ModelFit> fits;
  Vector log_scores;
  Vector probs;
  Index dropped = 0;
};

/// Fits and scores every candidate, drops rank-deficient or saturated ones,
/// and normalizes the scores with log-sum-exp. Throws EmptyClassError if
/// nothing survives.
ScoredClass score_class(const Dataset& d, const CandidateClass& candidates, double gamma);

}  // namespace fidreg

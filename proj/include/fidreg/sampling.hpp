#pragma once

#include "fidreg/fiducial.hpp"
#include "fidreg/rng.hpp"
#include "fidreg/types.hpp"

#include <cmath>
#include <vector>

namespace fidreg {

/// One realization (M~, sigma~, beta~) of the generalized fiducial
/// distribution. Coefficients are stored support-aligned; beta_dense
/// materializes the length-p vector with exact zeros off the support, so a
/// large p never inflates a stored sample.
struct FiducialDraw {
  ModelId model;
  double sigma = 0.0;
  Vector beta;  // aligned with model.support()

  Vector beta_dense(Index p) const {
    Vector full = Vector::Zero(p);
    Index k = 0;
    for (Index j : model.support()) full[j] = beta[k++];
    return full;
  }

  double mean_at(Eigen::Ref<const Vector> x_row) const {
    double acc = 0.0;
    Index k = 0;
    for (Index j : model.support()) acc += x_row[j] * beta[k++];
    return acc;
  }
};

/// Categorical draw over sc.probs by inverse CDF in the stored model order.
template <RandomSource R>
Index sample_model(const ScoredClass& sc, R& rng) {
  const double u = rng.next_uniform();
  double cum = 0.0;
  const Index k = static_cast<Index>(sc.models.size());
  for (Index i = 0; i < k; ++i) {
    cum += sc.probs[i];
    if (u < cum) return i;
  }
  return k - 1;  // u landed in the rounding slack past the last boundary
}

/// sigma given the model: rss / sigma^2 ~ chi^2(n - |M|).
template <RandomSource R>
double sample_sigma(const ModelFit& fit, Index n, R& rng) {
  if (!(fit.rss > 0.0) || !std::isfinite(fit.rss))
    throw DegenerateFitError("sample_sigma: rss must be positive and finite");
  if (n - fit.model.size() < 2)
    throw std::invalid_argument("sample_sigma: need n - |M| >= 2");
  const double v = rng.next_chi_squared(static_cast<double>(n - fit.model.size()));
  return std::sqrt(fit.rss / v);
}

/// beta given the model and sigma: beta_ml + sigma * R^{-1} z with z iid
/// standard normal, i.e. N(beta_ml, sigma^2 (X_M' X_M)^{-1}).
template <RandomSource R>
Vector sample_beta(const ModelFit& fit, double sigma, R& rng) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sample_beta: sigma must be positive");
  const Index k = fit.model.size();
  if (k == 0) return Vector(0);
  Vector z(k);
  for (Index i = 0; i < k; ++i) z[i] = rng.next_normal();
  return fit.beta_ml + sigma * fit.r_factor.triangularView<Eigen::Upper>().solve(z);
}

/// `count` independent draws from the three-stage hierarchy: model, then
/// sigma given the model, then beta given both. Models whose sigma draw is
/// degenerate are removed from the (local) class, probabilities renormalized,
/// and sampling continues; `dropped_models` reports how many were lost.
template <RandomSource R>
std::vector<FiducialDraw> fiducial_sample(const Dataset& d, const ScoredClass& sc,
                                          Index count, R& rng,
                                          Index* dropped_models = nullptr) {
  if (sc.models.empty()) throw std::invalid_argument("fiducial_sample: empty class");
  if (count < 1) throw std::invalid_argument("fiducial_sample: count must be >= 1");

  ScoredClass local = sc;
  Index dropped = 0;
  std::vector<FiducialDraw> draws;
  draws.reserve(static_cast<std::size_t>(count));
  while (static_cast<Index>(draws.size()) < count) {
    const Index mi = sample_model(local, rng);
    const ModelFit& fit = local.fits[static_cast<std::size_t>(mi)];
    double sigma;
    try {
      sigma = sample_sigma(fit, d.n(), rng);
    } catch (const DegenerateFitError&) {
      // Drop the offending model, renormalize the rest, and keep going.
      local.probs[mi] = 0.0;
      const double total = local.probs.sum();
      if (total <= 0.0)
        throw EmptyClassError("fiducial_sample: every candidate degenerate");
      local.probs /= total;
      ++dropped;
      continue;
    }
    FiducialDraw draw;
    draw.model = fit.model;
    draw.sigma = sigma;
    draw.beta = sample_beta(fit, sigma, rng);
    draws.push_back(std::move(draw));
  }
  if (dropped_models) *dropped_models = dropped;
  return draws;
}

}  // namespace fidreg

#include "fidreg/lars.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace fidreg {

namespace {

constexpr double kCorrTol = 1e-12;  // residual-correlation stopping threshold, relative to |y|

std::vector<Index> sorted_copy(const std::vector<Index>& v) {
  std::vector<Index> out = v;
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

LarsPath lars_path(const Matrix& x_screened, const Vector& y, Index max_steps) {
  const Index n = x_screened.rows();
  const Index p = x_screened.cols();
  if (p < 1) throw std::invalid_argument("lars_path: need at least one column");
  if (max_steps < 1) throw std::invalid_argument("lars_path: max_steps must be >= 1");
  if (y.size() != n) throw std::invalid_argument("lars_path: y length mismatch");

  // LARS assumes standardized predictors; rescale to unit norm here only.
  // Zero columns keep scale 1 and can never enter (their correlation is 0).
  Matrix x = x_screened;
  for (Index j = 0; j < p; ++j) {
    double nrm = x.col(j).norm();
    if (nrm > 0.0) x.col(j) /= nrm;
  }

  const Index active_limit = std::min({max_steps, p, n - 2});
  const double corr_floor = kCorrTol * y.norm();

  LarsPath path;
  Vector beta = Vector::Zero(p);
  Vector r = y;
  std::vector<Index> active;
  std::vector<bool> is_active(p, false);

  path.steps.push_back({{}, beta, (x.transpose() * r).cwiseAbs().maxCoeff()});

  bool just_dropped = false;
  const Index iter_cap = 8 * active_limit + 16;
  for (Index iter = 0; iter < iter_cap; ++iter) {
    Vector c = x.transpose() * r;
    const double c_all = c.cwiseAbs().maxCoeff();
    if (c_all <= corr_floor) break;

    bool added = false;
    if (!just_dropped) {
      // Entering variable: largest |correlation| among inactive, lowest index on ties.
      Index enter = -1;
      double best = corr_floor;
      for (Index j = 0; j < p; ++j) {
        if (is_active[j]) continue;
        if (std::abs(c[j]) > best) {
          best = std::abs(c[j]);
          enter = j;
        }
      }
      if (enter < 0) break;
      active.push_back(enter);
      is_active[enter] = true;
      added = true;
    }
    just_dropped = false;

    const Index k = static_cast<Index>(active.size());
    Vector signs(k);
    Matrix gram(k, k);
    for (Index a = 0; a < k; ++a) signs[a] = (c[active[a]] >= 0.0) ? 1.0 : -1.0;
    for (Index a = 0; a < k; ++a)
      for (Index b = a; b < k; ++b) {
        double g = signs[a] * signs[b] * x.col(active[a]).dot(x.col(active[b]));
        gram(a, b) = g;
        gram(b, a) = g;
      }

    Eigen::LLT<Matrix> llt(gram);
    bool degenerate = llt.info() != Eigen::Success;
    if (!degenerate && k > 0) {
      // An exactly singular Gram can still pass LLT with a roundoff-sized
      // pivot; catch it through the factor's diagonal ratio.
      Vector ld = llt.matrixLLT().diagonal();
      degenerate = !(ld.minCoeff() > 1e-7 * ld.maxCoeff());
    }
    double a_norm = 0.0;
    Vector w;
    if (!degenerate) {
      w = llt.solve(Vector::Ones(k));
      double ssum = w.sum();
      degenerate = !(ssum > 0.0) || !std::isfinite(ssum);
      if (!degenerate) a_norm = 1.0 / std::sqrt(ssum);
    }
    if (degenerate) {
      // Singular active Gram: truncate at the last valid step.
      if (added) {
        is_active[active.back()] = false;
        active.pop_back();
      }
      path.truncated = true;
      break;
    }

    if (added) {
      path.steps.push_back({sorted_copy(active), beta, c_all});
      if (k >= active_limit) break;
    }

    // Equiangular direction u and its correlations with all columns.
    Vector u = Vector::Zero(n);
    Vector db = Vector::Zero(p);  // step direction in (scaled) coefficient space
    for (Index a = 0; a < k; ++a) {
      double step_a = a_norm * w[a];
      u += signs[a] * step_a * x.col(active[a]);
      db[active[a]] = signs[a] * step_a;
    }
    Vector xu = x.transpose() * u;

    const double c_max = [&] {
      double m = 0.0;
      for (Index a = 0; a < k; ++a) m = std::max(m, std::abs(c[active[a]]));
      return m;
    }();
    const double gamma_full = c_max / a_norm;
    const double gamma_floor = 1e-12 * gamma_full;

    double gamma = gamma_full;
    for (Index j = 0; j < p; ++j) {
      if (is_active[j]) continue;
      // t = 0 is a legitimate co-entry (exact correlation tie); the tie-broken
      // variable then joins on a zero-length step. NaN from 0/0 (duplicate
      // columns) fails the comparison and is skipped.
      for (double t : {(c_max - c[j]) / (a_norm - xu[j]), (c_max + c[j]) / (a_norm + xu[j])}) {
        if (t >= 0.0 && t < gamma) gamma = t;
      }
    }

    // LASSO modification: stop where a coefficient path crosses zero and drop
    // that variable.
    double gamma_drop = std::numeric_limits<double>::infinity();
    Index drop_pos = -1;
    for (Index a = 0; a < k; ++a) {
      Index j = active[a];
      if (db[j] == 0.0) continue;
      double t = -beta[j] / db[j];
      if (t > gamma_floor && t < gamma_drop) {
        gamma_drop = t;
        drop_pos = a;
      }
    }

    if (drop_pos >= 0 && gamma_drop < gamma) {
      Index j_drop = active[drop_pos];
      beta += gamma_drop * db;
      beta[j_drop] = 0.0;  // crossed zero by construction
      active.erase(active.begin() + drop_pos);
      is_active[j_drop] = false;
      r = y - x * beta;
      path.steps.push_back({sorted_copy(active), beta,
                            (x.transpose() * r).cwiseAbs().maxCoeff()});
      just_dropped = true;
      continue;
    }

    beta += gamma * db;
    r = y - x * beta;
  }

  return path;
}

CandidateClass build_candidates(const Dataset& d, const std::vector<Index>& screened,
                                Index size_cap, Index max_steps) {
  if (screened.empty()) throw std::invalid_argument("build_candidates: screened set empty");

  Matrix xs(d.n(), static_cast<Index>(screened.size()));
  for (std::size_t j = 0; j < screened.size(); ++j) {
    if (screened[j] < 0 || screened[j] >= d.p())
      throw std::invalid_argument("build_candidates: screened index out of range");
    xs.col(static_cast<Index>(j)) = d.x().col(screened[j]);
  }

  LarsPath path = lars_path(xs, d.y(), max_steps);

  const Index cap = std::min(size_cap, d.n() - 2);
  std::set<ModelId> models;
  models.insert(ModelId{});  // the empty model is always a candidate
  for (const LarsStep& step : path.steps) {
    if (static_cast<Index>(step.active.size()) > cap) continue;
    std::vector<Index> orig;
    orig.reserve(step.active.size());
    for (Index j : step.active) orig.push_back(screened[static_cast<std::size_t>(j)]);
    models.insert(ModelId(std::move(orig)));
  }

  CandidateClass cc;
  cc.models.assign(models.begin(), models.end());
  cc.screen_map = screened;
  cc.path_truncated = path.truncated;
  return cc;
}

}  // namespace fidreg

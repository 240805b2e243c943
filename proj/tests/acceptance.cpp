// Acceptance suite: prints one pass/fail line per criterion and exits with
// the number of failures.

#include "fidreg/fiducial.hpp"
#include "fidreg/inference.hpp"
#include "fidreg/lars.hpp"
#include "fidreg/leastsq.hpp"
#include "fidreg/report_io.hpp"
#include "fidreg/rng.hpp"
#include "fidreg/sampling.hpp"
#include "fidreg/screening.hpp"
#include "fidreg/simharness.hpp"
#include "fidreg/stats.hpp"

#include "brute_force_oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

using namespace fidreg;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%d] %-28s %s  (%s)\n", id, name.c_str(), pass ? "PASS" : "FAIL",
              detail.c_str());
  if (!pass) ++failures;
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- criterion 1: exhaustive brute-force equivalence -----------------------

void criterion_oracle_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  RngStream rng(1234, 0);
  const Index n = 30, p = 10;
  Matrix x(n, p);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < p; ++j) x(i, j) = rng.next_normal();
  Vector y(n);
  for (Index i = 0; i < n; ++i) y[i] = 1.5 * x(i, 2) - 0.8 * x(i, 7) + rng.next_normal();
  Dataset d(std::move(x), std::move(y));

  CandidateClass cc;
  cc.models.push_back(ModelId{});
  for (Index j = 0; j < p; ++j) cc.models.push_back(ModelId({j}));
  for (Index j = 0; j < p; ++j)
    for (Index k = j + 1; k < p; ++k) cc.models.push_back(ModelId({j, k}));

  ScoredClass sc = score_class(d, cc, 1.0);
  testing::OracleResult oracle = testing::brute_force_probs(d.x(), d.y(), 1.0);

  double max_err = 0.0;
  bool all_found = sc.models.size() == 56;
  for (std::size_t i = 0; i < sc.models.size(); ++i) {
    auto it = std::find(oracle.models.begin(), oracle.models.end(), sc.models[i]);
    if (it == oracle.models.end()) {
      all_found = false;
      break;
    }
    const auto oi = static_cast<std::size_t>(it - oracle.models.begin());
    max_err = std::max(max_err, std::abs(sc.probs[static_cast<Index>(i)] -
                                         static_cast<double>(oracle.probs[oi])));
  }
  const double secs = elapsed_s(t0);
  char buf[128];
  std::snprintf(buf, sizeof(buf), "56 models, max |err| = %.3g, %.2fs", max_err, secs);
  report(1, "oracle equivalence", all_found && max_err < 1e-10 && secs < 1.0, buf);
}

// ---- criteria 2-5: desk-scale coverage experiment ---------------------------

SimConfig table_config() {
  SimConfig cfg;
  cfg.n = 200;
  cfg.p = 2000;
  cfg.d = 3;
  cfg.b = 3.0 / std::sqrt(3.0);
  cfg.rho = 0.0;
  cfg.reps = 300;
  cfg.draws_per_rep = 2000;
  cfg.seed = 20130429;
  cfg.threads = 0;
  return cfg;
}

bool within(const std::vector<LevelStats>& got, const double (&want)[3], double tol,
            std::string& detail) {
  bool ok = true;
  char buf[160];
  std::string acc;
  for (int l = 0; l < 3; ++l) {
    const bool this_ok = std::abs(got[static_cast<std::size_t>(l)].coverage - want[l]) <= tol;
    ok = ok && this_ok;
    std::snprintf(buf, sizeof(buf), "%s%.3f vs %.3f", l ? ", " : "",
                  got[static_cast<std::size_t>(l)].coverage, want[l]);
    acc += buf;
  }
  detail = acc;
  return ok;
}

void criteria_tables(const SimResult& res) {
  std::string detail;
  const double sigma2_want[3] = {0.884, 0.941, 0.986};
  bool ok = within(res.proposed.sigma2, sigma2_want, 0.04, detail);
  report(2, "sigma^2 coverage", ok, detail + ", tol 0.04");

  const double beta1_want[3] = {0.892, 0.947, 0.987};
  ok = within(res.proposed.beta1, beta1_want, 0.05, detail);
  report(3, "beta_1 coverage", ok, detail + ", tol 0.05");

  char buf[160];
  std::snprintf(buf, sizeof(buf), "bias = %.4f (se %.4f), |bias| <= 0.015",
                res.proposed.sigma2_bias, res.proposed.sigma2_bias_se);
  report(4, "sigma^2 bias", std::abs(res.proposed.sigma2_bias) <= 0.015, buf);

  const double mean_want[3] = {0.911, 0.956, 0.991};
  ok = within(res.proposed.mean_fn, mean_want, 0.05, detail);
  report(5, "mean-function coverage", ok, detail + ", tol 0.05");
}

// ---- criterion 6: consistency trend ----------------------------------------

void criterion_consistency() {
  std::vector<double> medians;
  for (Index n : {100, 200, 400}) {
    SimConfig cfg;
    cfg.n = n;
    cfg.p = 2000;
    cfg.d = 3;
    cfg.b = 3.0 / std::sqrt(3.0);
    cfg.rho = 0.0;
    cfg.reps = 100;
    cfg.draws_per_rep = 200;  // draws do not affect r(M_0)
    cfg.seed = 77;
    cfg.threads = 0;
    medians.push_back(run_experiment(cfg).median_true_model_prob);
  }
  const bool ok = medians[0] <= medians[1] && medians[1] <= medians[2] && medians[2] > 0.9;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "median r(M0) = %.3f / %.3f / %.3f at n = 100/200/400",
                medians[0], medians[1], medians[2]);
  report(6, "consistency trend", ok, buf);
}

// ---- criterion 7: sampling distribution checks ------------------------------

void criterion_sampling() {
  // chi-squared goodness of fit for rss / sigma~^2 at df = n - m = 197.
  RngStream gen(5150, 0);
  const Index n = 200;
  Matrix x(n, 3);
  Vector y(n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < 3; ++j) x(i, j) = gen.next_normal();
    y[i] = x(i, 0) + 0.5 * x(i, 1) - x(i, 2) + gen.next_normal();
  }
  Dataset d(std::move(x), std::move(y));
  ModelFit fit = fit_model(d, ModelId({0, 1, 2}));
  const double df = static_cast<double>(n - 3);

  RngStream rng(6280, 1);
  std::vector<double> v;
  v.reserve(10000);
  for (int i = 0; i < 10000; ++i) {
    const double s = sample_sigma(fit, n, rng);
    v.push_back(fit.rss / (s * s));
  }
  std::sort(v.begin(), v.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double f = chi_squared_cdf(v[i], df);
    ks = std::max(ks, std::abs(f - static_cast<double>(i) / 10000.0));
    ks = std::max(ks, std::abs(static_cast<double>(i + 1) / 10000.0 - f));
  }
  const double ks_crit = 1.6276 / std::sqrt(10000.0);  // alpha = 0.01

  // beta~ covariance against sigma^2 (X_M' X_M)^{-1}, 5% relative, entrywise.
  const double sigma = 1.3;
  Matrix xm = select_columns(d.x(), fit.model);
  Matrix cov_want = sigma * sigma * (xm.transpose() * xm).inverse();
  Matrix acc = Matrix::Zero(3, 3);
  for (int i = 0; i < 100000; ++i) {
    Vector e = sample_beta(fit, sigma, rng) - fit.beta_ml;
    acc += e * e.transpose();
  }
  acc /= 100000.0;
  double rel = 0.0;
  for (Index r = 0; r < 3; ++r)
    for (Index c = 0; c < 3; ++c)
      rel = std::max(rel, std::abs(acc(r, c) - cov_want(r, c)) / std::abs(cov_want(r, c)));

  char buf[128];
  std::snprintf(buf, sizeof(buf), "KS = %.4f (crit %.4f), max cov rel err = %.3f", ks,
                ks_crit, rel);
  report(7, "sampling distributions", ks < ks_crit && rel < 0.05, buf);
}

// ---- criterion 8: invariant suite -------------------------------------------

Dataset invariant_instance(double y_scale) {
  RngStream rng(2025, 0);
  const Index n = 60, p = 12;
  Matrix x(n, p);
  Vector y(n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < p; ++j) x(i, j) = rng.next_normal();
    y[i] = 3.0 * x(i, 1) - 2.0 * x(i, 4) + rng.next_normal();
  }
  return Dataset(std::move(x), y_scale * y);
}

InferenceReport invariant_report(const Dataset& d, std::uint64_t seed) {
  const auto screened = sis_screen(d, default_keep(d.n(), d.p()));
  const CandidateClass cc = build_candidates(d, screened, d.n() / 2, d.n() - 2);
  const ScoredClass sc = score_class(d, cc, 1.0);
  RngStream rng(seed, 0);
  const auto draws = fiducial_sample(d, sc, 2000, rng);
  return make_report(d, sc, draws, {0.90, 0.95, 0.99}, 10);
}

void criterion_invariants() {
  bool ok = true;
  std::string why;

  // Normalization and shift invariance of the log-sum-exp route.
  {
    Dataset d = invariant_instance(1.0);
    const auto screened = sis_screen(d, default_keep(d.n(), d.p()));
    const ScoredClass sc =
        score_class(d, build_candidates(d, screened, d.n() / 2, d.n() - 2), 1.0);
    if (std::abs(sc.probs.sum() - 1.0) > 1e-12) {
      ok = false;
      why += "normalization; ";
    }
    std::vector<double> logs(sc.log_scores.data(), sc.log_scores.data() + sc.log_scores.size());
    const double lse = log_sum_exp(logs);
    std::vector<double> shifted = logs;
    for (double& s : shifted) s += 500.0;
    const double lse2 = log_sum_exp(shifted) - 500.0;
    for (std::size_t i = 0; i < logs.size(); ++i)
      if (std::abs(std::exp(logs[i] - lse) - std::exp(shifted[i] - 500.0 - lse2)) > 1e-12) {
        ok = false;
        why += "shift invariance; ";
        break;
      }
  }

  // CI nesting across levels.
  {
    Dataset d = invariant_instance(1.0);
    InferenceReport rep = invariant_report(d, 7);
    for (std::size_t l = 1; l < rep.levels.size(); ++l)
      if (rep.sigma2.cis[l].lower > rep.sigma2.cis[l - 1].lower ||
          rep.sigma2.cis[l].upper < rep.sigma2.cis[l - 1].upper) {
        ok = false;
        why += "CI nesting; ";
      }
  }

  // y-rescaling equivariance, bitwise for c = 2 on a fixed seed. Model
  // weights are not scale-free (scores shift by -(n - |M| - 1) ln c), so the
  // end-to-end check conditions on the model sequence via a one-model class;
  // the score shift itself is verified analytically on a multi-model class.
  {
    Dataset d1 = invariant_instance(1.0);
    Dataset d2 = invariant_instance(2.0);
    {
      const auto screened = sis_screen(d1, default_keep(d1.n(), d1.p()));
      const CandidateClass cc = build_candidates(d1, screened, d1.n() / 2, d1.n() - 2);
      const ScoredClass s1 = score_class(d1, cc, 1.0);
      const ScoredClass s2 = score_class(d2, cc, 1.0);
      const double nn = static_cast<double>(d1.n());
      for (std::size_t i = 0; i < s1.models.size(); ++i) {
        const double m = static_cast<double>(s1.models[i].size());
        const double want = -(nn - m - 1.0) * std::log(2.0);
        const double got = s2.log_scores[static_cast<Index>(i)] -
                           s1.log_scores[static_cast<Index>(i)];
        if (std::abs(got - want) > 1e-9 * std::max(1.0, std::abs(want))) {
          ok = false;
          why += "score shift under rescaling; ";
          break;
        }
      }
    }
    auto single_report = [](const Dataset& d) {
      CandidateClass cc;
      cc.models = {ModelId({1, 4})};
      const ScoredClass sc = score_class(d, cc, 1.0);
      RngStream rng(31, 0);
      const auto draws = fiducial_sample(d, sc, 2000, rng);
      return make_report(d, sc, draws, {0.90, 0.95, 0.99}, 10);
    };
    InferenceReport r1 = single_report(d1);
    InferenceReport r2 = single_report(d2);
    bool eq = r2.sigma2.estimate == 4.0 * r1.sigma2.estimate;
    for (std::size_t l = 0; l < r1.levels.size() && eq; ++l)
      eq = r2.sigma2.cis[l].lower == 4.0 * r1.sigma2.cis[l].lower &&
           r2.sigma2.cis[l].upper == 4.0 * r1.sigma2.cis[l].upper;
    eq = eq && r1.coefficients.size() == r2.coefficients.size();
    for (std::size_t i = 0; i < r1.coefficients.size() && eq; ++i) {
      const auto& s1 = r1.coefficients[i].second;
      const auto& s2 = r2.coefficients[i].second;
      eq = s1.inclusion_prob == s2.inclusion_prob;
      if (s1.significant && eq)
        for (std::size_t l = 0; l < r1.levels.size() && eq; ++l)
          eq = s2.cis[l].lower == 2.0 * s1.cis[l].lower &&
               s2.cis[l].upper == 2.0 * s1.cis[l].upper;
    }
    if (!eq) {
      ok = false;
      why += "rescaling equivariance; ";
    }
  }

  // LARS equal-correlation invariant at every breakpoint.
  {
    RngStream rng(404, 2);
    Matrix x(40, 9);
    Vector y(40);
    for (Index i = 0; i < 40; ++i) {
      for (Index j = 0; j < 9; ++j) x(i, j) = rng.next_normal();
      y[i] = rng.next_normal();
    }
    y += 2.0 * x.col(2) - x.col(5);
    LarsPath path = lars_path(x, y, 38);
    Matrix xu = x;
    for (Index j = 0; j < xu.cols(); ++j) xu.col(j) /= xu.col(j).norm();
    for (const LarsStep& step : path.steps) {
      if (step.active.empty()) continue;
      Vector c = xu.transpose() * (y - xu * step.beta);
      double cmax = 0.0, cmin = 1e300;
      for (Index j : step.active) {
        cmax = std::max(cmax, std::abs(c[j]));
        cmin = std::min(cmin, std::abs(c[j]));
      }
      bool step_ok = (cmax - cmin) <= 1e-8 * std::max(1.0, cmax);
      for (Index j = 0; j < c.size() && step_ok; ++j)
        if (!std::binary_search(step.active.begin(), step.active.end(), j))
          step_ok = std::abs(c[j]) <= cmax + 1e-8 * std::max(1.0, cmax);
      if (!step_ok) {
        ok = false;
        why += "LARS equal correlation; ";
        break;
      }
    }
  }

  // Bit-identical reruns for fixed seeds.
  {
    Dataset d = invariant_instance(1.0);
    const auto screened = sis_screen(d, default_keep(d.n(), d.p()));
    const ScoredClass sc =
        score_class(d, build_candidates(d, screened, d.n() / 2, d.n() - 2), 1.0);
    RngStream r1(99, 3), r2(99, 3);
    const auto a = fiducial_sample(d, sc, 500, r1);
    const auto b = fiducial_sample(d, sc, 500, r2);
    bool eq = a.size() == b.size();
    for (std::size_t i = 0; i < a.size() && eq; ++i)
      eq = a[i].model == b[i].model && a[i].sigma == b[i].sigma &&
           std::equal(a[i].beta.data(), a[i].beta.data() + a[i].beta.size(), b[i].beta.data());
    if (!eq) {
      ok = false;
      why += "bit-identical reruns; ";
    }

    SimConfig cfg;
    cfg.n = 60;
    cfg.p = 100;
    cfg.d = 2;
    cfg.b = 1.5;
    cfg.rho = 0.0;
    cfg.reps = 2;
    cfg.draws_per_rep = 200;
    cfg.seed = 8;
    cfg.threads = 2;
    if (sim_result_to_json(cfg, run_experiment(cfg)) !=
        sim_result_to_json(cfg, run_experiment(cfg))) {
      ok = false;
      why += "experiment rerun; ";
    }
  }

  report(8, "invariant suite", ok, ok ? "all invariants hold" : why);
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  criterion_oracle_equivalence();

  const SimConfig cfg = table_config();
  const auto t1 = std::chrono::steady_clock::now();
  const SimResult res = run_experiment(cfg);
  std::printf("    (table experiment: %lld reps, %lld excluded, %.1fs)\n",
              static_cast<long long>(res.reps_completed),
              static_cast<long long>(res.excluded_reps), elapsed_s(t1));
  criteria_tables(res);

  criterion_consistency();
  criterion_sampling();
  criterion_invariants();

  std::printf("acceptance: %s (%d failure%s, %.1fs total)\n",
              failures == 0 ? "PASS" : "FAIL", failures, failures == 1 ? "" : "s",
              elapsed_s(t0));
  return failures;
}

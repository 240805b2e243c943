#include "fidreg/simharness.hpp"

#include "fidreg/fiducial.hpp"
#include "fidreg/lars.hpp"
#include "fidreg/leastsq.hpp"
#include "fidreg/sampling.hpp"
#include "fidreg/screening.hpp"
#include "fidreg/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

namespace fidreg {

void validate(const SimConfig& cfg) {
  if (cfg.n < 4) throw std::invalid_argument("SimConfig: need n >= 4");
  if (cfg.p < 1) throw std::invalid_argument("SimConfig: need p >= 1");
  if (cfg.d < 1 || cfg.d > cfg.p) throw std::invalid_argument("SimConfig: need 1 <= d <= p");
  if (cfg.d > cfg.n - 2) throw std::invalid_argument("SimConfig: need d <= n - 2");
  if (!(cfg.rho >= 0.0 && cfg.rho < 1.0))
    throw std::invalid_argument("SimConfig: rho must lie in [0, 1)");
  if (cfg.reps < 1) throw std::invalid_argument("SimConfig: need reps >= 1");
  if (cfg.draws_per_rep < kMinDraws)
    throw std::invalid_argument("SimConfig: draws_per_rep below the floor of 100");
  if (cfg.gamma <= 0.0) throw std::invalid_argument("SimConfig: gamma must be positive");
  if (cfg.levels.empty()) throw std::invalid_argument("SimConfig: levels empty");
  for (double l : cfg.levels)
    if (!(l > 0.0 && l < 1.0)) throw std::invalid_argument("SimConfig: level outside (0,1)");
  if (cfg.keep < 0 || cfg.keep > cfg.p)
    throw std::invalid_argument("SimConfig: keep must lie in [0, p]");
  if (cfg.size_cap < 0 || cfg.max_steps < 0 || cfg.threads < 0)
    throw std::invalid_argument("SimConfig: negative override");
}

std::pair<Dataset, Truth> generate_synthetic(const SimConfig& cfg, RngStream& rng) {
  validate(cfg);
  const Index n = cfg.n;
  const Index p = cfg.p;

  // AR(1) recursion X_1 = Z_1, X_j = rho X_{j-1} + sqrt(1 - rho^2) Z_j gives
  // exactly cor(X_i, X_j) = rho^|i-j| with standard normal margins.
  Matrix x(n, p);
  const double mix = std::sqrt(1.0 - cfg.rho * cfg.rho);
  for (Index j = 0; j < p; ++j) {
    for (Index i = 0; i < n; ++i) {
      const double z = rng.next_normal();
      x(i, j) = (j == 0) ? z : cfg.rho * x(i, j - 1) + mix * z;
    }
  }

  Vector y(n);
  for (Index i = 0; i < n; ++i) y[i] = rng.next_normal();  // eps ~ N(0, 1)
  if (cfg.d > 0 && cfg.b != 0.0)
    y += cfg.b * x.leftCols(cfg.d).rowwise().sum();

  Truth truth;
  std::vector<Index> sup(static_cast<std::size_t>(cfg.d));
  for (Index j = 0; j < cfg.d; ++j) sup[static_cast<std::size_t>(j)] = j;
  truth.support = ModelId(std::move(sup));
  truth.beta = Vector::Zero(p);
  truth.beta.head(cfg.d).setConstant(cfg.b);
  truth.sigma = 1.0;
  return {Dataset(std::move(x), std::move(y)), std::move(truth)};
}

std::pair<Dataset, Truth> generate_synthetic(const SimConfig& cfg, Index rep) {
  RngStream rng(cfg.seed, static_cast<std::uint64_t>(rep));
  return generate_synthetic(cfg, rng);
}

OracleRow oracle_run(const Dataset& d, const Truth& truth, const std::vector<double>& levels,
                     const std::vector<Index>& design_rows) {
  const ModelFit fit = fit_model(d, truth.support);
  const Index k = d.n() - truth.support.size();
  const auto kd = static_cast<double>(k);

  OracleRow row;
  row.sigma2_hat = fit.rss / kd;
  const double sigma_hat = std::sqrt(row.sigma2_hat);

  // (X_M' X_M)^{-1} from the triangular factor.
  const Index m = truth.support.size();
  Matrix rinv = fit.r_factor.triangularView<Eigen::Upper>().solve(Matrix::Identity(m, m));
  Matrix gram_inv = rinv * rinv.transpose();

  const Index j1_pos = 0;  // beta_1 is the first true-support coefficient
  row.beta1_hat = fit.beta_ml[j1_pos];
  const double se1 = sigma_hat * std::sqrt(gram_inv(j1_pos, j1_pos));

  row.mean_hat.reserve(design_rows.size());
  row.mean_cis.resize(design_rows.size());
  std::vector<double> se_mean(design_rows.size());
  for (std::size_t r = 0; r < design_rows.size(); ++r) {
    Vector xm(m);
    Index c = 0;
    for (Index j : truth.support.support()) xm[c++] = d.x()(design_rows[r], j);
    row.mean_hat.push_back(fit.beta_ml.dot(xm));
    se_mean[r] = sigma_hat * std::sqrt(xm.dot(gram_inv * xm));
  }

  for (double level : levels) {
    const double alpha = 1.0 - level;
    row.sigma2_cis.push_back({fit.rss / chi_squared_quantile(1.0 - 0.5 * alpha, kd),
                              fit.rss / chi_squared_quantile(0.5 * alpha, kd)});
    const double t = student_t_quantile(1.0 - 0.5 * alpha, kd);
    row.beta1_cis.push_back({row.beta1_hat - t * se1, row.beta1_hat + t * se1});
    for (std::size_t r = 0; r < design_rows.size(); ++r)
      row.mean_cis[r].push_back(
          {row.mean_hat[r] - t * se_mean[r], row.mean_hat[r] + t * se_mean[r]});
  }
  return row;
}

namespace {

struct RepRecord {
  bool ok = false;
  double r_true = 0.0;
  bool b1_significant = false;
  double s2_err_prop = 0.0;
  double s2_err_oracle = 0.0;
  // Per level, aligned with cfg.levels.
  std::vector<char> s2_cov_p, s2_cov_o, b1_cov_p, b1_cov_o;
  std::vector<double> s2_w_p, s2_w_o, b1_w_p, b1_w_o;
  std::vector<double> mf_cov_p, mf_cov_o, mf_w_p, mf_w_o;  // already averaged over rows
};

bool covers(const Interval& ci, double value) {
  return ci.lower <= value && value <= ci.upper;
}

std::vector<Index> choose_rows(Index n, Index k, RngStream& rng) {
  // Partial Fisher-Yates over [0, n); consumes exactly k uniforms.
  std::vector<Index> idx(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
  for (Index i = 0; i < k; ++i) {
    const auto span = static_cast<double>(n - i);
    auto off = static_cast<Index>(rng.next_uniform() * span);
    if (off >= n - i) off = n - i - 1;
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(i + off)]);
  }
  idx.resize(static_cast<std::size_t>(k));
  return idx;
}

RepRecord run_one_rep(const SimConfig& cfg, Index rep) {
  RepRecord rec;
  const std::size_t nl = cfg.levels.size();
  rec.s2_cov_p.assign(nl, 0);
  rec.s2_cov_o.assign(nl, 0);
  rec.b1_cov_p.assign(nl, 0);
  rec.b1_cov_o.assign(nl, 0);
  rec.s2_w_p.assign(nl, 0.0);
  rec.s2_w_o.assign(nl, 0.0);
  rec.b1_w_p.assign(nl, 0.0);
  rec.b1_w_o.assign(nl, 0.0);
  rec.mf_cov_p.assign(nl, 0.0);
  rec.mf_cov_o.assign(nl, 0.0);
  rec.mf_w_p.assign(nl, 0.0);
  rec.mf_w_o.assign(nl, 0.0);

  RngStream rng(cfg.seed, static_cast<std::uint64_t>(rep));
  auto [data, truth] = generate_synthetic(cfg, rng);
  const std::vector<Index> rows = choose_rows(cfg.n, std::min<Index>(50, cfg.n), rng);

  const Index keep = cfg.keep > 0 ? cfg.keep : default_keep(cfg.n, cfg.p);
  const Index size_cap = cfg.size_cap > 0 ? cfg.size_cap : cfg.n / 2;
  const Index max_steps = cfg.max_steps > 0 ? cfg.max_steps : std::min(keep, cfg.n - 2);

  ScoredClass sc;
  try {
    const std::vector<Index> screened = sis_screen(data, keep);
    const CandidateClass cands = build_candidates(data, screened, size_cap, max_steps);
    sc = score_class(data, cands, cfg.gamma);
  } catch (const EmptyClassError&) {
    return rec;  // rep excluded
  }

  auto it = std::lower_bound(sc.models.begin(), sc.models.end(), truth.support);
  if (it != sc.models.end() && *it == truth.support)
    rec.r_true = sc.probs[static_cast<Index>(it - sc.models.begin())];

  const std::vector<FiducialDraw> draws =
      fiducial_sample(data, sc, cfg.draws_per_rep, rng);

  const double s2_true = truth.sigma * truth.sigma;
  const Index j1 = truth.support.support().front();
  const double b1_true = truth.beta[j1];

  const SigmaSummary s2 = summarize_sigma(draws, cfg.levels);
  const CoefficientSummary b1 = summarize_coefficient(draws, j1, cfg.levels);
  rec.s2_err_prop = s2.estimate - s2_true;
  rec.b1_significant = b1.significant;
  for (std::size_t l = 0; l < nl; ++l) {
    rec.s2_cov_p[l] = covers(s2.cis[l], s2_true);
    rec.s2_w_p[l] = s2.cis[l].upper - s2.cis[l].lower;
    if (b1.significant) {
      rec.b1_cov_p[l] = covers(b1.cis[l], b1_true);
      rec.b1_w_p[l] = b1.cis[l].upper - b1.cis[l].lower;
    }
  }
  for (Index r : rows) {
    const double mu_true = data.x().row(r).dot(truth.beta);
    const MeanSummary ms = summarize_mean(draws, data.x().row(r).transpose(), cfg.levels);
    for (std::size_t l = 0; l < nl; ++l) {
      rec.mf_cov_p[l] += covers(ms.cis[l], mu_true);
      rec.mf_w_p[l] += ms.cis[l].upper - ms.cis[l].lower;
    }
  }

  OracleRow orc;
  try {
    orc = oracle_run(data, truth, cfg.levels, rows);
  } catch (const RankDeficientError&) {
    return rec;  // true design block collinear; rep excluded
  }
  rec.s2_err_oracle = orc.sigma2_hat - s2_true;
  for (std::size_t l = 0; l < nl; ++l) {
    rec.s2_cov_o[l] = covers(orc.sigma2_cis[l], s2_true);
    rec.s2_w_o[l] = orc.sigma2_cis[l].upper - orc.sigma2_cis[l].lower;
    rec.b1_cov_o[l] = covers(orc.beta1_cis[l], b1_true);
    rec.b1_w_o[l] = orc.beta1_cis[l].upper - orc.beta1_cis[l].lower;
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const double mu_true = data.x().row(rows[r]).dot(truth.beta);
    for (std::size_t l = 0; l < nl; ++l) {
      rec.mf_cov_o[l] += covers(orc.mean_cis[r][l], mu_true);
      rec.mf_w_o[l] += orc.mean_cis[r][l].upper - orc.mean_cis[r][l].lower;
    }
  }
  const auto nrows = static_cast<double>(rows.size());
  for (std::size_t l = 0; l < nl; ++l) {
    rec.mf_cov_p[l] /= nrows;
    rec.mf_cov_o[l] /= nrows;
    rec.mf_w_p[l] /= nrows;
    rec.mf_w_o[l] /= nrows;
  }

  rec.ok = true;
  return rec;
}

}  // namespace

SimResult run_experiment(const SimConfig& cfg) {
  validate(cfg);

  std::vector<RepRecord> records(static_cast<std::size_t>(cfg.reps));
  unsigned want = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                  : std::max(1u, std::thread::hardware_concurrency());
  want = std::min<unsigned>(want, static_cast<unsigned>(cfg.reps));

  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::atomic<Index> next{0};
  auto worker = [&] {
    for (;;) {
      const Index rep = next.fetch_add(1);
      if (rep >= cfg.reps) return;
      try {
        records[static_cast<std::size_t>(rep)] = run_one_rep(cfg, rep);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  if (want <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(want);
    for (unsigned t = 0; t < want; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  // Deterministic fold in rep order.
  SimResult out;
  const std::size_t nl = cfg.levels.size();
  auto make_stats = [&](EstimatorResult& er) {
    er.sigma2.resize(nl);
    er.beta1.resize(nl);
    er.mean_fn.resize(nl);
    for (std::size_t l = 0; l < nl; ++l)
      er.sigma2[l].level = er.beta1[l].level = er.mean_fn[l].level = cfg.levels[l];
  };
  make_stats(out.proposed);
  make_stats(out.oracle);

  std::vector<double> err_p, err_o;
  Index b1_sig_count = 0;
  std::vector<double> b1_w_p_sum(nl, 0.0);
  for (const RepRecord& rec : records) {
    if (!rec.ok) {
      ++out.excluded_reps;
      continue;
    }
    ++out.reps_completed;
    out.true_model_probs.push_back(rec.r_true);
    err_p.push_back(rec.s2_err_prop);
    err_o.push_back(rec.s2_err_oracle);
    if (rec.b1_significant) ++b1_sig_count;
    for (std::size_t l = 0; l < nl; ++l) {
      out.proposed.sigma2[l].coverage += rec.s2_cov_p[l];
      out.proposed.sigma2[l].mean_width += rec.s2_w_p[l];
      out.oracle.sigma2[l].coverage += rec.s2_cov_o[l];
      out.oracle.sigma2[l].mean_width += rec.s2_w_o[l];
      out.proposed.beta1[l].coverage += rec.b1_cov_p[l];
      b1_w_p_sum[l] += rec.b1_w_p[l];
      out.oracle.beta1[l].coverage += rec.b1_cov_o[l];
      out.oracle.beta1[l].mean_width += rec.b1_w_o[l];
      out.proposed.mean_fn[l].coverage += rec.mf_cov_p[l];
      out.proposed.mean_fn[l].mean_width += rec.mf_w_p[l];
      out.oracle.mean_fn[l].coverage += rec.mf_cov_o[l];
      out.oracle.mean_fn[l].mean_width += rec.mf_w_o[l];
    }
  }
  if (out.reps_completed == 0) return out;

  const auto m = static_cast<double>(out.reps_completed);
  auto mean_se = [](const std::vector<double>& v, double& mean, double& se) {
    mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    if (v.size() < 2) {
      se = 0.0;
      return;
    }
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    se = std::sqrt(ss / (static_cast<double>(v.size()) - 1.0) / static_cast<double>(v.size()));
  };
  mean_se(err_p, out.proposed.sigma2_bias, out.proposed.sigma2_bias_se);
  mean_se(err_o, out.oracle.sigma2_bias, out.oracle.sigma2_bias_se);

  for (std::size_t l = 0; l < nl; ++l) {
    out.proposed.sigma2[l].coverage /= m;
    out.proposed.sigma2[l].mean_width /= m;
    out.oracle.sigma2[l].coverage /= m;
    out.oracle.sigma2[l].mean_width /= m;
    out.proposed.beta1[l].coverage /= m;
    // Width only defined for replicates where beta_1 was significant.
    out.proposed.beta1[l].mean_width =
        b1_sig_count > 0 ? b1_w_p_sum[l] / static_cast<double>(b1_sig_count) : 0.0;
    out.oracle.beta1[l].coverage /= m;
    out.oracle.beta1[l].mean_width /= m;
    out.proposed.mean_fn[l].coverage /= m;
    out.proposed.mean_fn[l].mean_width /= m;
    out.oracle.mean_fn[l].coverage /= m;
    out.oracle.mean_fn[l].mean_width /= m;
  }
  out.proposed.beta1_not_significant_rate = 1.0 - static_cast<double>(b1_sig_count) / m;

  std::vector<double> probs = out.true_model_probs;
  out.median_true_model_prob = percentile(std::move(probs), 0.5);
  return out;
}

}  // namespace fidreg

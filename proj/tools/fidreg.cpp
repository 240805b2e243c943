#include "fidreg/csv.hpp"
#include "fidreg/fiducial.hpp"
#include "fidreg/inference.hpp"
#include "fidreg/lars.hpp"
#include "fidreg/report_io.hpp"
#include "fidreg/sampling.hpp"
#include "fidreg/screening.hpp"
#include "fidreg/simharness.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

namespace {

using namespace fidreg;

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 2;
constexpr int kExitEmptyClass = 3;

struct FitOptions {
  std::string x_path;
  std::string y_path;
  std::string out_path = "-";
  double gamma = 1.0;
  Index samples = 10000;
  std::uint64_t seed = 0;
  Index keep = 0;      // 0 -> default
  Index size_cap = 0;  // 0 -> default
  Index max_steps = 0;
  std::vector<double> levels{0.90, 0.95, 0.99};
  bool add_intercept = false;
  Index top_models = 10;
};

Dataset load_dataset(const FitOptions& opt) {
  Matrix x = read_csv_matrix(opt.x_path);
  Vector y = read_csv_vector(opt.y_path);
  if (x.rows() != y.size())
    throw CsvError("row count mismatch: x has " + std::to_string(x.rows()) +
                   " rows, y has " + std::to_string(y.size()));
  if (opt.add_intercept) {
    Matrix xi(x.rows(), x.cols() + 1);
    xi.col(0).setOnes();
    xi.rightCols(x.cols()) = x;
    x = std::move(xi);
  }
  return Dataset(std::move(x), std::move(y));
}

void check_fit_options(const FitOptions& opt) {
  if (opt.samples < kMinDraws)
    throw std::invalid_argument("--samples below the floor of " + std::to_string(kMinDraws));
  if (opt.gamma <= 0.0) throw std::invalid_argument("--gamma must be positive");
  for (double l : opt.levels)
    if (!(l > 0.0 && l < 1.0)) throw std::invalid_argument("--levels entries must lie in (0,1)");
}

ScoredClass run_pipeline(const Dataset& d, const FitOptions& opt) {
  const Index keep = opt.keep > 0 ? opt.keep : default_keep(d.n(), d.p());
  const Index size_cap = opt.size_cap > 0 ? opt.size_cap : d.n() / 2;
  const Index max_steps = opt.max_steps > 0 ? opt.max_steps : std::min(keep, d.n() - 2);
  const std::vector<Index> screened = sis_screen(d, std::min(keep, d.p()));
  const CandidateClass cands = build_candidates(d, screened, size_cap, max_steps);
  ScoredClass sc = score_class(d, cands, opt.gamma);
  if (sc.dropped > 0)
    std::cerr << "note: dropped " << sc.dropped << " degenerate candidate model(s)\n";
  if (cands.path_truncated) std::cerr << "note: LASSO path truncated early\n";
  return sc;
}

void write_output(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

int cmd_fit(const FitOptions& opt) {
  check_fit_options(opt);
  const Dataset d = load_dataset(opt);
  const ScoredClass sc = run_pipeline(d, opt);
  RngStream rng(opt.seed, 0);
  const auto draws = fiducial_sample(d, sc, opt.samples, rng);
  const InferenceReport rep = make_report(d, sc, draws, opt.levels, opt.top_models);
  write_output(opt.out_path, report_to_json(rep));
  return kExitOk;
}

int cmd_inspect(const FitOptions& opt) {
  check_fit_options(opt);
  const Dataset d = load_dataset(opt);
  const ScoredClass sc = run_pipeline(d, opt);
  std::printf("%-30s %14s %16s %12s\n", "support", "rss", "log_score", "probability");
  for (std::size_t i = 0; i < sc.models.size(); ++i) {
    std::string sup = "{";
    for (Index j : sc.models[i].support()) {
      if (sup.size() > 1) sup += ",";
      sup += std::to_string(j);
    }
    sup += "}";
    std::printf("%-30s %14.6g %16.6f %12.6f\n", sup.c_str(),
                sc.fits[i].rss, sc.log_scores[static_cast<Index>(i)],
                sc.probs[static_cast<Index>(i)]);
  }
  return kExitOk;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir, int threads) {
  std::ifstream in(config_path);
  if (!in) throw CsvError("cannot open '" + config_path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::vector<SimConfig> configs = parse_sim_configs(text);

  std::filesystem::create_directories(out_dir);
  std::ofstream csv(std::filesystem::path(out_dir) / "results.csv");
  std::ofstream json(std::filesystem::path(out_dir) / "results.json");
  if (!csv || !json) throw std::runtime_error("cannot write into '" + out_dir + "'");

  csv << sim_result_csv_header() << '\n';
  json << "[\n";
  for (std::size_t i = 0; i < configs.size(); ++i) {
    SimConfig cfg = configs[i];
    if (threads > 0) cfg.threads = threads;
    const SimResult res = run_experiment(cfg);
    csv << sim_result_to_csv_rows(cfg, res);
    if (i > 0) json << ",\n";
    json << sim_result_to_json(cfg, res);
    std::printf(
        "%s: n=%lld p=%lld d=%lld reps=%lld cov95(sigma2)=%.3f cov95(beta1)=%.3f "
        "bias=%.4f excluded=%lld\n",
        config_hash(cfg).c_str(), static_cast<long long>(cfg.n),
        static_cast<long long>(cfg.p), static_cast<long long>(cfg.d),
        static_cast<long long>(res.reps_completed),
        res.proposed.sigma2.size() > 1 ? res.proposed.sigma2[1].coverage : 0.0,
        res.proposed.beta1.size() > 1 ? res.proposed.beta1[1].coverage : 0.0,
        res.proposed.sigma2_bias, static_cast<long long>(res.excluded_reps));
  }
  json << "]\n";
  return kExitOk;
}

void add_fit_flags(CLI::App* sub, FitOptions& opt) {
  sub->add_option("--x", opt.x_path, "design matrix CSV (n rows, p columns)")->required();
  sub->add_option("--y", opt.y_path, "response CSV (single column)")->required();
  sub->add_option("--out", opt.out_path, "output path, '-' for stdout");
  sub->add_option("--gamma", opt.gamma, "penalty constant gamma");
  sub->add_option("--samples", opt.samples, "fiducial sample size");
  sub->add_option("--seed", opt.seed, "RNG seed");
  sub->add_option("--keep", opt.keep, "SIS screening size (0 = n/log n)");
  sub->add_option("--size-cap", opt.size_cap, "largest candidate size (0 = n/2)");
  sub->add_option("--max-steps", opt.max_steps, "LASSO path step limit (0 = auto)");
  sub->add_option("--levels", opt.levels, "confidence levels")->delimiter(',');
  sub->add_flag("--add-intercept", opt.add_intercept, "prepend a constant column");
  sub->add_option("--top-models", opt.top_models, "models to report");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generalized fiducial inference for sparse linear regression"};
  app.require_subcommand(1);

  FitOptions fit_opt;
  CLI::App* fit = app.add_subcommand("fit", "screen, score, sample and summarize");
  add_fit_flags(fit, fit_opt);

  FitOptions inspect_opt;
  CLI::App* inspect =
      app.add_subcommand("inspect", "print the scored candidate class without sampling");
  add_fit_flags(inspect, inspect_opt);

  std::string config_path, out_dir = ".";
  int threads = 0;
  CLI::App* simulate = app.add_subcommand("simulate", "run coverage experiments");
  simulate->add_option("--config", config_path, "SimConfig JSON (object or list)")->required();
  simulate->add_option("--out-dir", out_dir, "directory for results.csv / results.json");
  simulate->add_option("--threads", threads, "worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadInput;
  }

  try {
    if (fit->parsed()) return cmd_fit(fit_opt);
    if (inspect->parsed()) return cmd_inspect(inspect_opt);
    if (simulate->parsed()) return cmd_simulate(config_path, out_dir, threads);
  } catch (const EmptyClassError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitEmptyClass;
  } catch (const CsvError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}

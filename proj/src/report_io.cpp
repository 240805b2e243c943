#include "fidreg/report_io.hpp"

#include <json.hpp>

#include <charconv>
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <set>
#include <sstream>

namespace fidreg {

namespace {

using ordered_json = nlohmann::ordered_json;

// Shortest round-trip representation, same as the JSON writer uses, so CSV
// and JSON agree byte for byte across runs.
std::string fmt(double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

ordered_json interval_json(const Interval& ci) {
  return ordered_json{{"lower", ci.lower}, {"upper", ci.upper}};
}

ordered_json intervals_json(const std::vector<double>& levels,
                            const std::vector<Interval>& cis) {
  ordered_json out = ordered_json::array();
  for (std::size_t i = 0; i < levels.size(); ++i) {
    ordered_json o = interval_json(cis[i]);
    o["level"] = levels[i];
    out.push_back(std::move(o));
  }
  return out;
}

// Canonical JSON of a config with every field explicit; keys sorted by the
// default nlohmann object so the hash is independent of construction order.
nlohmann::json canonical_config(const SimConfig& cfg) {
  nlohmann::json j;
  j["n"] = cfg.n;
  j["p"] = cfg.p;
  j["d"] = cfg.d;
  j["b"] = cfg.b;
  j["rho"] = cfg.rho;
  j["reps"] = cfg.reps;
  j["draws_per_rep"] = cfg.draws_per_rep;
  j["gamma"] = cfg.gamma;
  j["levels"] = cfg.levels;
  j["seed"] = cfg.seed;
  j["keep"] = cfg.keep;
  j["size_cap"] = cfg.size_cap;
  j["max_steps"] = cfg.max_steps;
  return j;
}

SimConfig config_from_json(const nlohmann::json& j) {
  static const std::set<std::string> known = {
      "n",     "p",    "d",    "b",        "rho",      "reps",    "draws_per_rep",
      "gamma", "levels", "seed", "keep",   "size_cap", "max_steps", "threads"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) throw ConfigError("unknown config key '" + it.key() + "'");
  for (const char* req : {"n", "p", "d", "b", "rho", "reps"})
    if (!j.contains(req)) throw ConfigError(std::string("missing config key '") + req + "'");

  SimConfig cfg;
  try {
    cfg.n = j.at("n").get<Index>();
    cfg.p = j.at("p").get<Index>();
    cfg.d = j.at("d").get<Index>();
    cfg.b = j.at("b").get<double>();
    cfg.rho = j.at("rho").get<double>();
    cfg.reps = j.at("reps").get<Index>();
    if (j.contains("draws_per_rep")) cfg.draws_per_rep = j.at("draws_per_rep").get<Index>();
    if (j.contains("gamma")) cfg.gamma = j.at("gamma").get<double>();
    if (j.contains("levels")) cfg.levels = j.at("levels").get<std::vector<double>>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("keep")) cfg.keep = j.at("keep").get<Index>();
    if (j.contains("size_cap")) cfg.size_cap = j.at("size_cap").get<Index>();
    if (j.contains("max_steps")) cfg.max_steps = j.at("max_steps").get<Index>();
    if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  try {
    validate(cfg);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

}  // namespace

std::string report_to_json(const InferenceReport& rep) {
  ordered_json j;
  j["n"] = rep.n;
  j["p"] = rep.p;
  j["draws"] = rep.draw_count;
  j["dropped_candidates"] = rep.dropped_candidates;
  j["levels"] = rep.levels;

  ordered_json models = ordered_json::array();
  for (const auto& [m, prob] : rep.model_probs) {
    ordered_json o;
    o["support"] = m.support();
    o["probability"] = prob;
    models.push_back(std::move(o));
  }
  j["model_probs"] = std::move(models);

  j["sigma2"] = ordered_json{{"estimate", rep.sigma2.estimate},
                             {"cis", intervals_json(rep.levels, rep.sigma2.cis)}};

  ordered_json coefs = ordered_json::array();
  for (const auto& [col, s] : rep.coefficients) {
    ordered_json o;
    o["column"] = col;
    o["inclusion_prob"] = s.inclusion_prob;
    o["significant"] = s.significant;
    if (s.significant) {
      o["estimate"] = s.estimate;
      o["cis"] = intervals_json(rep.levels, s.cis);
    }
    coefs.push_back(std::move(o));
  }
  j["coefficients"] = std::move(coefs);
  return j.dump(2) + "\n";
}

std::vector<SimConfig> parse_sim_configs(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  std::vector<SimConfig> out;
  if (j.is_array()) {
    for (const auto& item : j) out.push_back(config_from_json(item));
  } else if (j.is_object()) {
    out.push_back(config_from_json(j));
  } else {
    throw ConfigError("config must be a JSON object or array of objects");
  }
  if (out.empty()) throw ConfigError("config list is empty");
  return out;
}

std::string config_hash(const SimConfig& cfg) {
  const std::string canon = canonical_config(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return buf;
}

std::string sim_result_csv_header() {
  return "config_hash,estimator,quantity,level,coverage,mean_width,bias,bias_se,excluded_reps";
}

std::string sim_result_to_csv_rows(const SimConfig& cfg, const SimResult& res) {
  const std::string hash = config_hash(cfg);
  std::ostringstream out;
  auto emit = [&](const char* estimator, const char* quantity,
                  const std::vector<LevelStats>& stats, double bias, double bias_se,
                  bool with_bias) {
    for (const LevelStats& ls : stats) {
      out << hash << ',' << estimator << ',' << quantity << ',' << fmt(ls.level) << ','
          << fmt(ls.coverage) << ',' << fmt(ls.mean_width) << ',';
      if (with_bias) out << fmt(bias) << ',' << fmt(bias_se);
      else out << ',';
      out << ',' << res.excluded_reps << '\n';
    }
  };
  emit("proposed", "sigma2", res.proposed.sigma2, res.proposed.sigma2_bias,
       res.proposed.sigma2_bias_se, true);
  emit("proposed", "beta1", res.proposed.beta1, 0, 0, false);
  emit("proposed", "mean_fn", res.proposed.mean_fn, 0, 0, false);
  emit("oracle", "sigma2", res.oracle.sigma2, res.oracle.sigma2_bias,
       res.oracle.sigma2_bias_se, true);
  emit("oracle", "beta1", res.oracle.beta1, 0, 0, false);
  emit("oracle", "mean_fn", res.oracle.mean_fn, 0, 0, false);
  return out.str();
}

std::string sim_result_to_json(const SimConfig& cfg, const SimResult& res) {
  ordered_json j;
  j["config_hash"] = config_hash(cfg);
  j["config"] = ordered_json::parse(canonical_config(cfg).dump());
  j["reps_completed"] = res.reps_completed;
  j["excluded_reps"] = res.excluded_reps;
  j["median_true_model_prob"] = res.median_true_model_prob;

  auto estimator_json = [&](const EstimatorResult& er, bool proposed) {
    ordered_json e;
    e["sigma2_bias"] = er.sigma2_bias;
    e["sigma2_bias_se"] = er.sigma2_bias_se;
    auto stats_json = [&](const std::vector<LevelStats>& stats) {
      ordered_json arr = ordered_json::array();
      for (const LevelStats& ls : stats)
        arr.push_back(ordered_json{{"level", ls.level},
                                   {"coverage", ls.coverage},
                                   {"mean_width", ls.mean_width}});
      return arr;
    };
    e["sigma2"] = stats_json(er.sigma2);
    e["beta1"] = stats_json(er.beta1);
    e["mean_fn"] = stats_json(er.mean_fn);
    if (proposed) e["beta1_not_significant_rate"] = er.beta1_not_significant_rate;
    return e;
  };
  j["proposed"] = estimator_json(res.proposed, true);
  j["oracle"] = estimator_json(res.oracle, false);
  return j.dump(2) + "\n";
}

}  // namespace fidreg

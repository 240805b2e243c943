#pragma once

#include "fidreg/inference.hpp"
#include "fidreg/simharness.hpp"

#include <string>
#include <vector>

namespace fidreg {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// InferenceReport as a JSON document with stable field order.
std::string report_to_json(const InferenceReport& rep);

/// Parse one SimConfig or a list of them from a JSON document. Field names
/// mirror SimConfig in snake_case; unknown keys are errors, not warnings.
std::vector<SimConfig> parse_sim_configs(const std::string& json_text);

/// Canonical 16-hex-digit hash of a configuration (FNV-1a over the canonical
/// JSON form with all fields explicit).
std::string config_hash(const SimConfig& cfg);

/// CSV rows for one experiment, header
/// config_hash,estimator,quantity,level,coverage,mean_width,bias,bias_se,excluded_reps
/// with bias columns populated on sigma2 rows only.
std::string sim_result_csv_header();
std::string sim_result_to_csv_rows(const SimConfig& cfg, const SimResult& res);

/// Full structured result for one experiment.
std::string sim_result_to_json(const SimConfig& cfg, const SimResult& res);

}  // namespace fidreg

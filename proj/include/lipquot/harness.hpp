#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lipquot/json_io.hpp"

namespace lipquot {

inline constexpr const char* kToolVersion = "0.3.0";

struct ExperimentConfig {
  std::uint64_t seed = 1;
  std::size_t trials = 20;
  // Instance sizes are drawn from [min_n, max_n], clipped to what each check
  // can afford.
  std::size_t min_n = 4;
  std::size_t max_n = 40;
  std::vector<std::string> tags;
  // Slack allowed on every measured inequality.
  double tolerance = 1e-9;
  unsigned threads = 1;  // does not affect the report
};

// The default tolerance: $LIPQUOT_TOL when set and parseable, else 1e-9.
double default_tolerance();

Json config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const Json& doc);
// FNV-1a over the canonical JSON of the report-relevant fields, hex encoded.
std::string config_hash(const ExperimentConfig& config);

const std::vector<std::string>& suite_tags();
bool is_suite_tag(const std::string& tag);

struct TrialResult {
  std::string tag;
  std::size_t trial = 0;
  std::uint64_t seed = 0;  // config.seed + trial
  bool passed = true;
  Json summary;  // instance description and measured numbers
  Json metrics;  // numbers aggregated as maxima across trials
};

// One trial of one tag, driven by a fresh engine seeded with seed + trial.
// Library errors are caught and reported as a failed trial.
TrialResult run_trial(const std::string& tag, const ExperimentConfig& config, std::size_t trial);

struct SuiteReport {
  Json document;
  bool passed = true;
  std::size_t failures = 0;
};

// Runs every trial of every tag. Throws InputError on an unknown tag.
SuiteReport run_suite(const ExperimentConfig& config);

// Re-runs the trial named by a failure witness taken from a suite report.
TrialResult replay(const Json& witness);

}  // namespace lipquot

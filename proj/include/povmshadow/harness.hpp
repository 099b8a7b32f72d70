#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace povmshadow::harness {

inline constexpr int kSchemaVersion = 1;
inline constexpr std::string_view kVersion = "0.1.0";

const std::vector<std::string>& suite_names();

struct ExperimentConfig {
  std::string suite;
  std::uint64_t seed = 1;
  std::size_t trials = 1;
  std::size_t workers = 1;
  std::string out = "out";

  std::size_t d = 4;
  std::size_t k = 4;
  std::size_t m = 8;
  std::size_t t = 500;  // rounds (regret)
  std::size_t l = 8;    // packing-net size (lowerbound)
  double epsilon = 0.1;
  double delta = 0.05;
  double c0 = 512.0;
  double c1 = 8.0;
  double c2 = 8.0;
  std::optional<double> eta;
  std::string trigger;  // threshold/shadow: oracle|sampled; regret: always|exact|search
  bool nb_log_m_squared = false;
  std::string instance;  // optional JSON instance file (threshold, shadow)
  std::size_t max_retries = 100;
  std::vector<std::size_t> k_values{2, 4, 8, 16};
  double decode_accuracy = 0.0;  // lowerbound: run_shadow decoding at this eps' (0 = off)

  // Every key that affects results, as it would be written in a config file.
  std::map<std::string, std::string> echo() const;
};

// Flat `key = value` lines; `#` starts a comment; blank lines ignored.
// Throws Parse on a line without '=' or an empty key.
std::map<std::string, std::string> parse_key_values(std::string_view text);

// Merges suite defaults < file < flags and validates the result against the
// suite's preconditions. `flags` may carry `suite`.
// Throws UnknownKey, OutOfRange (bad value or range) or MissingRequired (no suite).
ExperimentConfig parse_config(std::string_view file_text,
                              const std::map<std::string, std::string>& flags = {});

struct TrialRecord {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::string status = "ok";  // ok | fail | error
  std::string error;
  double wall_seconds = 0.0;
};

struct RunManifest {
  nlohmann::json json;
  std::vector<TrialRecord> trials;
  bool failures = false;  // any trial not ok, or the suite-level check failed
};

// Runs the configured suite, writing <out>/results.csv and <out>/manifest.json.
// Per-trial errors are recorded, not thrown; Io errors on the output directory
// propagate.
RunManifest run_suite(const ExperimentConfig& config);

// Seed of trial `index`: derive_seed(master, index, suite).
std::uint64_t trial_seed(const ExperimentConfig& config, std::size_t index);

}  // namespace povmshadow::harness

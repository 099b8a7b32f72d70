#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "povmshadow/harness.hpp"

namespace povmshadow::harness {

struct TrialOutput {
  std::vector<std::string> rows;  // CSV lines without trailing newline
  std::string status = "ok";
  std::string error;
  nlohmann::json metrics = nlohmann::json::object();  // consumed by summarize
  nlohmann::json artifact;                            // optional per-trial JSON output
};

struct Suite {
  std::string header;  // CSV header, starts with schema_version
  TrialOutput (*run)(const ExperimentConfig&, std::size_t trial, std::uint64_t seed);
  // Fills summary statistics; returns false when the suite-level check fails.
  bool (*summarize)(const ExperimentConfig&, const std::vector<TrialOutput>&, nlohmann::json& summary);
  const char* artifact_file;  // nullptr when the suite writes no extra JSON
};

const Suite& suite_for(const std::string& name);

// Shortest round-trip decimal form; identical across runs on one platform.
std::string fmt(double v);

}  // namespace povmshadow::harness

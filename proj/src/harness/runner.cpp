#include <atomic>
#include <chrono>
#include <fstream>
#include <thread>

#include "povmshadow/error.hpp"
#include "povmshadow/harness.hpp"
#include "povmshadow/io.hpp"
#include "suites.hpp"

namespace povmshadow::harness {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

RunManifest run_suite(const ExperimentConfig& config) {
  const Suite& suite = suite_for(config.suite);
  const std::filesystem::path dir(config.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());

  const auto start = Clock::now();
  const std::size_t n = config.trials;
  std::vector<TrialOutput> outputs(n);
  std::vector<TrialRecord> records(n);
  std::atomic<std::size_t> next{0};

  // Each trial owns its seed and output slot, so scheduling cannot change results.
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      const auto t0 = Clock::now();
      TrialRecord& rec = records[i];
      rec.trial = i;
      rec.seed = trial_seed(config, i);
      try {
        outputs[i] = suite.run(config, i, rec.seed);
      } catch (const std::exception& e) {
        outputs[i] = TrialOutput{};
        outputs[i].status = "error";
        outputs[i].error = e.what();
      }
      rec.status = outputs[i].status;
      rec.error = outputs[i].error;
      rec.wall_seconds = seconds_since(t0);
    }
  };
  const std::size_t threads = std::min(config.workers, n);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(worker);
  }

  {
    std::ofstream csv(dir / "results.csv", std::ios::binary);
    if (!csv) throw Error(ErrorCode::Io, "cannot write " + (dir / "results.csv").string());
    csv << suite.header << '\n';
    for (const auto& o : outputs) {
      for (const auto& r : o.rows) csv << r << '\n';
    }
  }

  RunManifest manifest;
  manifest.trials = records;
  nlohmann::json summary = nlohmann::json::object();
  const bool suite_pass = suite.summarize(config, outputs, summary);
  manifest.failures = !suite_pass;
  nlohmann::json trials = nlohmann::json::array();
  for (const auto& r : records) {
    if (r.status != "ok") manifest.failures = true;
    nlohmann::json t{{"trial", r.trial}, {"seed", r.seed}, {"status", r.status},
                     {"wall_seconds", r.wall_seconds}};
    if (!r.error.empty()) t["error"] = r.error;
    trials.push_back(std::move(t));
  }
  summary["suite_check_passed"] = suite_pass;

  manifest.json = {{"tool", "povmshadow"},
                   {"version", kVersion},
                   {"schema_version", kSchemaVersion},
                   {"suite", config.suite},
                   {"config", config.echo()},
                   {"master_seed", config.seed},
                   {"trials", std::move(trials)},
                   {"wall_seconds", seconds_since(start)},
                   {"summary", std::move(summary)},
                   {"failures", manifest.failures}};
  io::write_json_file(dir / "manifest.json", manifest.json);

  if (suite.artifact_file != nullptr) {
    nlohmann::json artifacts = nlohmann::json::array();
    for (const auto& o : outputs) artifacts.push_back(o.artifact);
    io::write_json_file(dir / suite.artifact_file, artifacts);
  }
  return manifest;
}

}  // namespace povmshadow::harness

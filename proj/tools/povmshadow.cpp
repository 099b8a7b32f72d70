// povmshadow <suite> --config <file> [--seed N] [--out DIR] [--trials N] [--workers N] [key=value ...]
//
// Exit codes: 0 success, 1 usage error, 2 suite failures present.

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "povmshadow/error.hpp"
#include "povmshadow/harness.hpp"

namespace ph = povmshadow::harness;

int main(int argc, char** argv) {
  CLI::App app{"Seeded experiment runner for online shadow tomography of POVM families"};
  std::string suite;
  std::string config_path;
  std::vector<std::string> overrides;
  std::map<std::string, std::string> flags;

  std::string suites;
  for (const auto& s : ph::suite_names()) suites += (suites.empty() ? "" : ", ") + s;
  app.add_option("suite", suite, "one of: " + suites);
  app.add_option("overrides", overrides, "key=value settings (highest precedence)");
  app.add_option("--config", config_path, "flat key=value file, # comments");
  auto* seed = app.add_option("--seed", "master seed");
  auto* out = app.add_option("--out", "output directory");
  auto* trials = app.add_option("--trials", "number of trials");
  auto* workers = app.add_option("--workers", "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    std::string text;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) {
        std::cerr << "error: cannot read config file " << config_path << '\n';
        return 1;
      }
      std::stringstream ss;
      ss << in.rdbuf();
      text = ss.str();
    }
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) {
        std::cerr << "error: expected key=value, got '" << kv << "'\n";
        return 1;
      }
      flags[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    for (auto [opt, key] : {std::pair{seed, "seed"}, {out, "out"}, {trials, "trials"}, {workers, "workers"}}) {
      if (opt->count() > 0) flags[key] = opt->as<std::string>();
    }
    if (!suite.empty()) flags["suite"] = suite;

    const ph::ExperimentConfig config = ph::parse_config(text, flags);
    const ph::RunManifest manifest = ph::run_suite(config);
    std::size_t bad = 0;
    for (const auto& t : manifest.trials) bad += t.status != "ok";
    std::cout << config.suite << ": " << manifest.trials.size() << " trials, " << bad
              << " not ok, suite check " << (manifest.json["summary"]["suite_check_passed"].get<bool>() ? "passed" : "FAILED")
              << "; wrote " << config.out << "/results.csv and manifest.json\n";
    return manifest.failures ? 2 : 0;
  } catch (const povmshadow::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == povmshadow::ErrorCode::Io ? 2 : 1;
  }
}

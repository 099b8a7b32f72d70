#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "povmshadow/harness.hpp"
#include "povmshadow/instances.hpp"
#include "povmshadow/io.hpp"
#include "test_util.hpp"

using namespace povmshadow;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("povmshadow_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST(io, matrix_round_trip) {
  Rng rng(1);
  const CMatrix m = ginibre(5, 5, rng);
  const CMatrix back = io::matrix_from_json(io::Json::parse(io::matrix_to_json(m).dump()));
  EXPECT_EQ(max_abs(m - back), 0.0);
  EXPECT_CODE(io::matrix_from_json(io::Json{{"dim", 2}, {"re", {1, 2, 3}}}), ErrorCode::BadDimensions);
  EXPECT_CODE(io::matrix_from_json(io::Json{{"re", {1}}}), ErrorCode::Parse);
}

TEST(io, threshold_instance_round_trip) {
  Rng rng(2);
  const DensityMatrix rho = random_density(3, rng);
  std::vector<Povm> povms{random_povm(3, 3, rng), random_projective_povm(3, 3, rng)};
  const ThresholdInstance inst{povms, {DistVector::uniform(3), DistVector({0.2, 0.8, 0.0})}, 0.1, 0.05};
  const auto loaded = io::threshold_instance_from_json(io::Json::parse(io::threshold_instance_to_json(inst, rho).dump()));
  ASSERT_EQ(loaded.instance.povms.size(), 2u);
  EXPECT_EQ(loaded.instance.epsilon, 0.1);
  EXPECT_EQ(loaded.instance.delta, 0.05);
  EXPECT_EQ(loaded.instance.thresholds[1][1], 0.8);
  EXPECT_LE(max_abs(loaded.instance.povms[0][2].matrix() - povms[0][2].matrix()), 1e-15);
  ASSERT_TRUE(loaded.state.has_value());
  EXPECT_LE(max_abs(loaded.state->matrix() - rho.matrix()), 1e-12);

  io::Json j = io::threshold_instance_to_json(inst);
  j.erase("thresholds");
  const auto defaulted = io::threshold_instance_from_json(j);
  EXPECT_EQ(defaulted.instance.thresholds[1][0], 1.0 / 3.0);
  EXPECT_FALSE(defaulted.state.has_value());
}

TEST(io, packing_net_round_trip) {
  Rng rng(3);
  const PackingNet net = build_packing_net(16, 4, 3, 0.01, 100, rng);
  const PackingNet back = io::packing_net_from_json(io::Json::parse(io::packing_net_to_json(net, 9).dump()));
  EXPECT_EQ(back.dim, 16u);
  EXPECT_EQ(back.blocks, 4u);
  EXPECT_EQ(back.epsilon, 0.01);
  ASSERT_EQ(back.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(max_abs(back.partitions[i].basis - net.partitions[i].basis), 0.0);
  EXPECT_NEAR(worst_overlap_deviation(back.partitions), net.worst_deviation, 1e-15);
}

TEST(io, missing_file_is_io_error) {
  EXPECT_CODE(io::read_json_file("/nonexistent/dir/x.json"), ErrorCode::Io);
  const fs::path p = scratch("bad.json");
  { std::ofstream(p) << "{not json"; }
  EXPECT_CODE(io::read_json_file(p), ErrorCode::Parse);
}

TEST(config, errors) {
  EXPECT_CODE(harness::parse_config(""), ErrorCode::MissingRequired);
  EXPECT_CODE(harness::parse_config("suite = threshold\nepsilon = 0.7\n"), ErrorCode::OutOfRange);
  EXPECT_CODE(harness::parse_config("suite = threshold\nepsilom = 0.1\n"), ErrorCode::UnknownKey);
  EXPECT_CODE(harness::parse_config("suite = nope\n"), ErrorCode::OutOfRange);
  EXPECT_CODE(harness::parse_config("suite = regret\nT = abc\n"), ErrorCode::OutOfRange);
  EXPECT_CODE(harness::parse_config("suite = lowerbound\nK = 3\n"), ErrorCode::OutOfRange);
  EXPECT_CODE(harness::parse_key_values("suite threshold\n"), ErrorCode::Parse);
}

TEST(config, precedence_and_comments) {
  const auto defaults = harness::parse_config("suite = threshold");
  EXPECT_EQ(defaults.m, 32u);
  EXPECT_EQ(defaults.trials, 500u);
  const std::string file = "# comment\nsuite = threshold\n\nM = 10  # trailing\nepsilon = 0.2\n";
  const auto from_file = harness::parse_config(file);
  EXPECT_EQ(from_file.m, 10u);
  EXPECT_EQ(from_file.epsilon, 0.2);
  const auto flagged = harness::parse_config(file, {{"M", "12"}, {"seed", "99"}});
  EXPECT_EQ(flagged.m, 12u);
  EXPECT_EQ(flagged.epsilon, 0.2);
  EXPECT_EQ(flagged.seed, 99u);
  EXPECT_EQ(flagged.echo().at("M"), "12");
  const auto kscale = harness::parse_config("suite = kscaling\nk_values = 2,4,8\n");
  EXPECT_EQ(kscale.k_values, (std::vector<std::size_t>{2, 4, 8}));
  EXPECT_EQ(kscale.trials, 3u);
}

TEST(harness, trial_seeds_are_distinct_and_stable) {
  auto c = harness::parse_config("suite = regret");
  EXPECT_NE(harness::trial_seed(c, 0), harness::trial_seed(c, 1));
  EXPECT_EQ(harness::trial_seed(c, 3), derive_seed(c.seed, 3, "regret"));
}

TEST(harness, regret_run_is_deterministic_across_workers) {
  const fs::path a = scratch("regret_a");
  const fs::path b = scratch("regret_b");
  auto c = harness::parse_config("suite = regret\nT = 60\ntrials = 3\nseed = 5\n");
  c.out = a.string();
  c.workers = 1;
  const auto ma = harness::run_suite(c);
  c.out = b.string();
  c.workers = 3;
  const auto mb = harness::run_suite(c);
  EXPECT_FALSE(ma.failures);
  EXPECT_FALSE(mb.failures);
  const std::string csv = slurp(a / "results.csv");
  EXPECT_EQ(csv, slurp(b / "results.csv"));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "schema_version,trial,t,loss,tv_prediction_truth,bad_flag,eta,regret_bound");
  const auto manifest = io::read_json_file(a / "manifest.json");
  EXPECT_EQ(manifest.at("schema_version"), harness::kSchemaVersion);
  EXPECT_EQ(manifest.at("master_seed"), 5);
  EXPECT_EQ(manifest.at("trials").size(), 3u);
}

TEST(harness, unwritable_output_is_io_error) {
  auto c = harness::parse_config("suite = kscaling");
  c.out = "/proc/povmshadow_cannot_write_here";
  EXPECT_CODE(harness::run_suite(c), ErrorCode::Io);
}

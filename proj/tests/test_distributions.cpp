#include <cmath>

#include <gtest/gtest.h>

#include "povmshadow/distributions.hpp"
#include "povmshadow/instances.hpp"
#include "test_util.hpp"

using namespace povmshadow;

namespace {

DistVector random_dist(std::size_t k, Rng& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> w(k);
  double s = 0.0;
  for (auto& x : w) s += (x = e(rng));
  for (auto& x : w) x /= s;
  return DistVector(std::move(w));
}

}  // namespace

TEST(dist_vector, validation) {
  EXPECT_CODE(DistVector({0.5, 0.6}), ErrorCode::ParameterOutOfRange);
  EXPECT_CODE(DistVector({1.5, -0.5}), ErrorCode::ParameterOutOfRange);
  EXPECT_CODE(DistVector(std::vector<double>{}), ErrorCode::ParameterOutOfRange);
  const std::vector<std::uint64_t> counts{3, 1};
  const DistVector p = DistVector::from_counts(counts);
  EXPECT_DOUBLE_EQ(p[0], 0.75);
}

TEST(distance, spec_examples) {
  const DistVector a({1.0, 0.0});
  const DistVector b({0.0, 1.0});
  for (Norm n : {Norm::TV, Norm::L2, Norm::LINF}) EXPECT_EQ(distance(a, a, n), 0.0);
  EXPECT_DOUBLE_EQ(distance(a, b, Norm::TV), 1.0);
  EXPECT_DOUBLE_EQ(distance(a, b, Norm::L2), std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(distance(a, b, Norm::LINF), 1.0);
  EXPECT_NEAR(tv_distance(DistVector({0.5, 0.5}), DistVector({0.6, 0.4})), 0.1, 1e-15);
  EXPECT_CODE(tv_distance(a, DistVector::uniform(3)), ErrorCode::LengthMismatch);
}

TEST(distance, metric_properties_on_random_triples) {
  Rng rng(1);
  for (int rep = 0; rep < 500; ++rep) {
    const auto p = random_dist(6, rng);
    const auto q = random_dist(6, rng);
    const auto r = random_dist(6, rng);
    for (Norm n : {Norm::TV, Norm::L2, Norm::LINF}) {
      EXPECT_EQ(distance(p, q, n), distance(q, p, n));
      EXPECT_LE(distance(p, r, n), distance(p, q, n) + distance(q, r, n) + 1e-12);
    }
  }
}

TEST(tv_l2_relation, equality_case_and_random_pairs) {
  EXPECT_TRUE(tv_l2_relation_holds(DistVector({1.0, 0.0}), DistVector({0.0, 1.0})));
  EXPECT_TRUE(tv_l2_relation_holds(DistVector::uniform(4), DistVector::uniform(4)));
  Rng rng(2);
  for (int rep = 0; rep < 10000; ++rep) {
    EXPECT_TRUE(tv_l2_relation_holds(random_dist(8, rng), random_dist(8, rng)));
  }
}

TEST(bernstein_tail, examples) {
  EXPECT_NEAR(bernstein_tail(32, 0.5, 1.0), std::exp(-0.75), 1e-15);
  EXPECT_NEAR(bernstein_tail(32, 0.5, 1.0), 0.4724, 1e-4);
  // Inverting the formula: m = 8 sigma^2 ln(1/delta') / eps^2 with delta' = delta e^{-1/4}.
  const double delta = 0.05;
  const double eps = 0.25;
  const double m = 8.0 * std::log(1.0 / (delta * std::exp(-0.25))) / (eps * eps);
  EXPECT_NEAR(std::exp(-m * eps * eps / 8.0 + 0.25), delta, 1e-12);
  EXPECT_LE(bernstein_tail(static_cast<std::uint64_t>(std::ceil(m)), eps, 1.0), delta);
  double prev = 2.0;
  for (std::uint64_t k = 1; k < 2000; k *= 2) {
    const double b = bernstein_tail(k, 0.5, 1.0);
    EXPECT_LT(b, prev);
    prev = b;
  }
  EXPECT_CODE(bernstein_tail(10, 1.5, 1.0), ErrorCode::ParameterOutOfRange);
  EXPECT_CODE(bernstein_tail(0, 0.5, 1.0), ErrorCode::ParameterOutOfRange);
}

TEST(required_samples, worked_example_and_scaling) {
  EXPECT_EQ(required_samples(2, 0.1, 0.05), 1299u);
  // Independent oracle: smallest m with exp(-m eps^2/(2K) + 1/4) <= delta, by search.
  for (std::size_t k : {2u, 3u, 8u}) {
    for (double eps : {0.05, 0.1, 0.3}) {
      std::uint64_t m = 1;
      while (std::exp(-static_cast<double>(m) * eps * eps / (2.0 * k) + 0.25) > 0.05) ++m;
      EXPECT_EQ(required_samples(k, eps, 0.05), m) << k << " " << eps;
    }
  }
  const auto base = static_cast<double>(required_samples(4, 0.1, 0.05));
  EXPECT_NEAR(static_cast<double>(required_samples(8, 0.1, 0.05)) / base, 2.0, 2.0 / base);
  EXPECT_NEAR(static_cast<double>(required_samples(4, 0.05, 0.05)) / base, 4.0, 4.0 / base);
  EXPECT_CODE(required_samples(2, 0.5, 0.05), ErrorCode::ParameterOutOfRange);
  EXPECT_CODE(required_samples(2, 0.1, 0.0), ErrorCode::ParameterOutOfRange);
}

TEST(required_samples, monotone) {
  for (std::size_t k = 2; k < 20; ++k) {
    EXPECT_LE(required_samples(k, 0.1, 0.05), required_samples(k + 1, 0.1, 0.05));
  }
  for (double e = 0.01; e < 0.49; e += 0.01) {
    EXPECT_GE(required_samples(4, e, 0.05), required_samples(4, e + 0.005, 0.05));
  }
  for (double d = 0.01; d < 0.49; d += 0.01) {
    EXPECT_GE(required_samples(4, 0.1, d), required_samples(4, 0.1, d + 0.005));
  }
}

TEST(estimate_distribution, deterministic_truth_and_copies) {
  Rng rng(3);
  const Estimate e = estimate_distribution(DistVector::point_mass(5, 0), 0.1, 0.05, rng);
  EXPECT_EQ(e.distribution[0], 1.0);
  EXPECT_EQ(e.copies, required_samples(5, 0.1, 0.05));
}

TEST(estimate_distribution, from_povm_counts_copies) {
  Rng rng(4);
  const Povm povm = random_povm(3, 4, rng);
  const Estimate e = estimate_distribution(povm, random_density(3, rng), 0.2, 0.1, rng);
  EXPECT_EQ(e.copies, required_samples(4, 0.2, 0.1));
}

TEST(estimate_distribution, uniform_truth_failure_rate) {
  Rng rng(5);
  int failures = 0;
  for (int t = 0; t < 2000; ++t) {
    const Estimate e = estimate_distribution(DistVector::uniform(4), 0.1, 0.05, rng);
    failures += tv_distance(e.distribution, DistVector::uniform(4)) >= 0.1;
  }
  EXPECT_LE(failures, 100);
}

TEST(estimate_distribution, single_sample_mean_is_unbiased) {
  Rng rng(6);
  const DistVector p({0.15, 0.35, 0.5});
  std::vector<double> mean(3, 0.0);
  const int n = 100000;
  for (int t = 0; t < n; ++t) {
    const auto c = sample_counts(p, 1, rng);
    for (std::size_t j = 0; j < 3; ++j) mean[j] += static_cast<double>(c[j]);
  }
  for (std::size_t j = 0; j < 3; ++j) {
    EXPECT_NEAR(mean[j] / n, p[j], 5.0 * std::sqrt(p[j] * (1.0 - p[j]) / n));
  }
}

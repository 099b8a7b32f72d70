#include <cmath>

#include <gtest/gtest.h>

#include "povmshadow/distributions.hpp"
#include "povmshadow/instances.hpp"
#include "povmshadow/online_learner.hpp"
#include "povmshadow/shadow.hpp"
#include "test_util.hpp"

using namespace povmshadow;
using povmshadow::testing::diag;

namespace {

// sum_i P_i where P_i is `single` on qubit i (qubit 0 most significant).
CMatrix sum_of_local(const CMatrix& single, std::size_t n) {
  const auto d = static_cast<Eigen::Index>(1) << n;
  CMatrix s = CMatrix::Zero(d, d);
  for (std::size_t i = 0; i < n; ++i) {
    CMatrix term = CMatrix::Identity(1, 1);
    for (std::size_t q = 0; q < n; ++q) term = kron(term, q == i ? single : CMatrix::Identity(2, 2));
    s += term;
  }
  return s;
}

}  // namespace

TEST(plan_batches, worked_examples) {
  ShadowConfig c;
  c.c0 = 1.0;
  c.epsilon = 0.1;
  c.delta = 0.1;
  const BatchPlan p = plan_batches(c, 16, 4, 10);
  EXPECT_EQ(p.t0, 279u);
  EXPECT_NEAR(p.delta0, 0.1 / 558.0, 1e-18);
  EXPECT_NEAR(p.delta0, 1.792e-4, 1e-7);
  EXPECT_EQ(p.n0, quantum_budget_copies(4, 10, 0.1, p.delta0, c.c1));
  EXPECT_EQ(p.nb, static_cast<std::uint64_t>(std::ceil(8.0 * 4 * std::log(1.0 / p.delta0) / 0.01)));
  EXPECT_EQ(p.total, p.t0 * (p.n0 + p.nb));
  c.nb_log_m_squared = true;
  const BatchPlan q = plan_batches(c, 16, 4, 10);
  EXPECT_EQ(q.nb, static_cast<std::uint64_t>(
                      std::ceil(8.0 * 4 * std::log(1.0 / p.delta0) * std::pow(std::log(10.0), 2) / 0.01)));
}

TEST(plan_batches, scaling_in_k_and_epsilon) {
  ShadowConfig c;
  c.epsilon = 0.1;
  const BatchPlan a = plan_batches(c, 8, 4, 20);
  const BatchPlan b = plan_batches(c, 8, 8, 20);
  EXPECT_NEAR(static_cast<double>(b.n0) / static_cast<double>(a.n0), 2.0, 1e-4);
  EXPECT_NEAR(static_cast<double>(b.nb) / static_cast<double>(a.nb), 2.0, 1e-4);
  c.epsilon = 0.05;
  const BatchPlan h = plan_batches(c, 8, 4, 20);
  // T0 x4 and N0 x4, plus a slow ln(1/delta0) drift from the larger T0.
  const double ratio = static_cast<double>(h.total) / static_cast<double>(a.total);
  EXPECT_GT(ratio, 16.0);
  EXPECT_LT(ratio, 16.0 * 1.2);
}

TEST(plan_batches, rejects_bad_config) {
  ShadowConfig c;
  c.epsilon = 0.6;
  EXPECT_CODE(plan_batches(c, 4, 2, 2), ErrorCode::ParameterOutOfRange);
  c.epsilon = 0.1;
  c.c0 = 0.0;
  EXPECT_CODE(plan_batches(c, 4, 2, 2), ErrorCode::ParameterOutOfRange);
}

TEST(run_shadow, maximally_mixed_truth_certifies_immediately) {
  Rng rng(1);
  std::vector<Povm> povms;
  for (int i = 0; i < 6; ++i) povms.push_back(random_povm(4, 3, rng));
  ShadowConfig c;
  c.epsilon = 0.15;
  const ShadowResult r = run_shadow(maximally_mixed(4), povms, c, rng);
  EXPECT_TRUE(r.certified);
  EXPECT_EQ(r.bad_iterations, 0u);
  EXPECT_EQ(r.rounds, 1u);
  EXPECT_TRUE(r.verified);
}

TEST(run_shadow, success_rate_ledger_and_output_consistency) {
  int ok = 0;
  const int trials = 30;
  for (int t = 0; t < trials; ++t) {
    Rng rng(derive_seed(2, static_cast<std::uint64_t>(t), "shadow-test"));
    const DensityMatrix rho = random_density(4, rng);
    std::vector<Povm> povms;
    for (int i = 0; i < 8; ++i) povms.push_back(i % 2 ? random_povm(4, 3, rng) : random_projective_povm(4, 3, rng));
    ShadowConfig c;
    c.epsilon = 0.15;
    c.delta = 0.1;
    const ShadowResult r = run_shadow(rho, povms, c, rng);
    ok += r.verified;
    EXPECT_EQ(r.quantum.charged(), r.rounds * (r.plan.n0 + r.plan.nb));
    EXPECT_LE(r.rounds, r.plan.t0);
    EXPECT_LE(r.bad_iterations, bad_iteration_cap(4, 0.15));
    for (std::size_t i = 0; i < povms.size(); ++i) {
      const DistVector exact = outcome_distribution(povms[i], r.hypothesis);
      for (std::size_t j = 0; j < exact.size(); ++j) EXPECT_EQ(r.outputs[i][j], exact[j]);
    }
  }
  EXPECT_GE(ok, 27);
}

TEST(run_shadow, budget_exhaustion_is_flagged) {
  Rng rng(3);
  const DensityMatrix rho = pure_state(CVector::Unit(4, 0));
  std::vector<Povm> povms{Povm({QuantumEvent(HermitianMatrix(diag({1, 0, 0, 0}))),
                                QuantumEvent(HermitianMatrix(diag({0, 1, 1, 1})))})};
  ShadowConfig c;
  c.epsilon = 0.1;
  c.c0 = 0.001;  // T0 = 2
  const ShadowResult r = run_shadow(rho, povms, c, rng);
  EXPECT_EQ(r.plan.t0, 2u);
  EXPECT_TRUE(r.budget_exhausted);
  EXPECT_FALSE(r.certified);
  EXPECT_EQ(r.rounds, 2u);
  EXPECT_FALSE(r.verified);
}

TEST(run_shadow, input_validation) {
  Rng rng(4);
  ShadowConfig c;
  EXPECT_CODE(run_shadow(maximally_mixed(2), {}, c, rng), ErrorCode::EmptyInstance);
  std::vector<Povm> povms{random_povm(3, 2, rng)};
  EXPECT_CODE(run_shadow(maximally_mixed(2), povms, c, rng), ErrorCode::DimensionMismatch);
}

TEST(operator_expectations, identity_is_exact) {
  Rng rng(5);
  const Povm p = random_povm(3, 3, rng);
  const auto r = estimate_operator_expectations(random_density(3, rng), {HermitianMatrix::identity(3)}, {p},
                                                {{1.0, 1.0, 1.0}}, 0.1, 0.1, rng);
  EXPECT_NEAR(r.values[0], 1.0, 1e-12);
}

TEST(operator_expectations, pauli_z_on_diagonal_state) {
  Rng rng(6);
  const Povm z({QuantumEvent(HermitianMatrix(diag({1, 0}))), QuantumEvent(HermitianMatrix(diag({0, 1})))});
  const double eps = 0.1;
  const auto r = estimate_operator_expectations(make_density(HermitianMatrix(diag({0.7, 0.3}))),
                                                {HermitianMatrix(diag({1, -1}))}, {z}, {{1.0, -1.0}}, eps,
                                                0.1, rng);
  EXPECT_NEAR(r.values[0], 0.4, eps);
  EXPECT_NEAR(r.distribution_accuracy, eps / 2.0, 1e-15);
}

TEST(operator_expectations, errors) {
  Rng rng(7);
  const Povm z({QuantumEvent(HermitianMatrix(diag({1, 0}))), QuantumEvent(HermitianMatrix(diag({0, 1})))});
  const DensityMatrix rho = maximally_mixed(2);
  EXPECT_CODE(estimate_operator_expectations(rho, {HermitianMatrix(diag({1, -1}))}, {z}, {{1.0}}, 0.1, 0.1, rng),
              ErrorCode::ValueLengthMismatch);
  EXPECT_CODE(estimate_operator_expectations(rho, {HermitianMatrix(diag({1, 1}))}, {z}, {{1.0, -1.0}}, 0.1, 0.1,
                                             rng),
              ErrorCode::OperatorMismatch);
}

TEST(operator_expectations, holder_bound_on_random_cases) {
  Rng rng(8);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::exponential_distribution<double> e(1.0);
  for (int rep = 0; rep < 2000; ++rep) {
    const std::size_t k = 2 + static_cast<std::size_t>(rep % 6);
    std::vector<double> b(k), p(k), v(k);
    double sb = 0, sp = 0, vmax = 0;
    for (std::size_t j = 0; j < k; ++j) {
      sb += (b[j] = e(rng));
      sp += (p[j] = e(rng));
      v[j] = u(rng);
      vmax = std::max(vmax, std::abs(v[j]));
    }
    double lhs = 0;
    for (std::size_t j = 0; j < k; ++j) {
      b[j] /= sb;
      p[j] /= sp;
    }
    for (std::size_t j = 0; j < k; ++j) lhs += v[j] * (b[j] - p[j]);
    EXPECT_LE(std::abs(lhs), 2.0 * vmax * tv_distance(DistVector(b), DistVector(p)) + 1e-12);
  }
}

TEST(spin_povm, two_qubits_z) {
  const SpinMeasurement s = spin_povm(2);
  ASSERT_EQ(s.povm.outcomes(), 3u);
  EXPECT_EQ(s.values, (std::vector<double>{2.0, 0.0, -2.0}));
  EXPECT_LE(max_abs(s.povm[0].matrix() - diag({1, 0, 0, 0})), 1e-15);
  EXPECT_LE(max_abs(s.povm[1].matrix() - diag({0, 1, 1, 0})), 1e-15);
  EXPECT_LE(max_abs(s.povm[2].matrix() - diag({0, 0, 0, 1})), 1e-15);
  const DistVector p = outcome_distribution(s.povm, pure_state(CVector::Unit(4, 0)));
  EXPECT_EQ(p[0], 1.0);
  // HS norm sqrt(Tr S^2) = sqrt(n 2^n) = sqrt(8).
  EXPECT_NEAR(s.observable.matrix().norm(), std::sqrt(8.0), 1e-12);
}

TEST(spin_povm, norms_projectors_and_local_sum_oracle) {
  CMatrix x(2, 2), y(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  y << 0, Complex(0, -1), Complex(0, 1), 0;
  z << 1, 0, 0, -1;
  for (std::size_t n = 1; n <= 6; ++n) {
    for (auto [axis, pauli] : {std::pair{SpinAxis::x(), x}, {SpinAxis::y(), y}, {SpinAxis::z(), z}}) {
      const SpinMeasurement s = spin_povm(n, axis);
      const auto d = static_cast<Eigen::Index>(1) << n;
      EXPECT_LE(max_abs(s.observable.matrix() - sum_of_local(pauli, n)), 1e-10) << n;
      EXPECT_NEAR(spectral_norm(s.observable), static_cast<double>(n), 1e-9);
      EXPECT_NEAR(s.observable.matrix().squaredNorm(), static_cast<double>(n * (std::size_t{1} << n)), 1e-8);
      CMatrix sum = CMatrix::Zero(d, d);
      for (const auto& e : s.povm.events()) {
        EXPECT_LE(max_abs(e.matrix() * e.matrix() - e.matrix()), 1e-9);
        sum += e.matrix();
      }
      EXPECT_LE(max_abs(sum - CMatrix::Identity(d, d)), 1e-10);
    }
  }
}

TEST(spin_povm, too_large) { EXPECT_CODE(spin_povm(11), ErrorCode::TooLarge); }

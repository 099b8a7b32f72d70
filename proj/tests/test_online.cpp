#include <cmath>

#include <gtest/gtest.h>

#include "povmshadow/distributions.hpp"
#include "povmshadow/instances.hpp"
#include "povmshadow/online_learner.hpp"
#include "test_util.hpp"

using namespace povmshadow;
using povmshadow::testing::diag;

namespace {

// f(x) = d_TV((x, 1 - sum x), b) on R^{K-1}; defined off the simplex too.
double tv_free(const std::vector<double>& x, const DistVector& b) {
  double last = 1.0;
  double s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    s += std::abs(x[j] - b[j]);
    last -= x[j];
  }
  return 0.5 * (s + std::abs(last - b[x.size()]));
}

std::vector<double> as_gradient(const SubgradientPartition& p, std::size_t free) {
  std::vector<double> g(free, 0.0);
  for (auto j : p.plus) g[j] = 1.0;
  for (auto j : p.minus) g[j] = -1.0;
  return g;
}

// g is a subgradient at mu iff f(y) >= f(mu) + g.(y - mu) for all y; probed
// with random y near and far from mu.
bool is_subgradient(const DistVector& mu, const DistVector& b, const std::vector<double>& g, Rng& rng) {
  const std::size_t free = mu.size() - 1;
  std::vector<double> x(mu.begin(), mu.begin() + static_cast<long>(free));
  const double fx = tv_free(x, b);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int rep = 0; rep < 4000; ++rep) {
    const double scale = rep % 2 ? 1e-3 : 0.5;
    std::vector<double> y = x;
    double lin = 0.0;
    for (std::size_t j = 0; j < free; ++j) {
      const double step = scale * n(rng);
      y[j] += step;
      lin += g[j] * step;
    }
    if (tv_free(y, b) < fx + lin - 1e-12) return false;
  }
  return true;
}

}  // namespace

TEST(loss, examples) {
  EXPECT_EQ(loss(DistVector::uniform(3), DistVector::uniform(3)), 0.0);
  EXPECT_DOUBLE_EQ(loss(DistVector({1.0, 0.0}), DistVector({0.0, 1.0})), 1.0);
  EXPECT_NEAR(loss(DistVector({0.5, 0.5}), DistVector({0.6, 0.4})), 0.1, 1e-15);
  EXPECT_CODE(loss(DistVector::uniform(2), DistVector::uniform(3)), ErrorCode::LengthMismatch);
}

TEST(subgradient, equal_inputs_are_all_zero) {
  const auto p = subgradient_partition(DistVector::uniform(4), DistVector::uniform(4));
  EXPECT_TRUE(p.plus.empty());
  EXPECT_TRUE(p.minus.empty());
  EXPECT_EQ(p.zero.size(), 3u);
}

TEST(subgradient, two_outcomes) {
  const auto p = subgradient_partition(DistVector({0.7, 0.3}), DistVector({0.4, 0.6}));
  EXPECT_EQ(p.plus, std::vector<std::size_t>{0});
  EXPECT_TRUE(p.minus.empty());
}

TEST(subgradient, half_valued_case_stays_a_true_subgradient) {
  // Per-coordinate rounding of +-1/2 to 0 would give the zero vector here,
  // which claims a minimum at a point with loss 0.2 > 0.
  const DistVector mu({0.5, 0.3, 0.2});
  const DistVector b({0.3, 0.5, 0.2});
  Rng rng(1);
  EXPECT_FALSE(is_subgradient(mu, b, {0.0, 0.0}, rng));
  const auto p = subgradient_partition(mu, b);
  EXPECT_EQ(p.zero, std::vector<std::size_t>{0});
  EXPECT_EQ(p.minus, std::vector<std::size_t>{1});
  EXPECT_TRUE(is_subgradient(mu, b, as_gradient(p, 2), rng));
}

TEST(subgradient, random_kinked_inputs_are_valid) {
  Rng rng(2);
  std::uniform_int_distribution<int> coin(0, 2);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t k = 2 + static_cast<std::size_t>(rep % 4);
    std::vector<double> mu(k);
    std::vector<double> b(k);
    std::exponential_distribution<double> e(1.0);
    double sm = 0;
    for (auto& v : mu) sm += (v = e(rng));
    for (auto& v : mu) v /= sm;
    // Copy some coordinates exactly to create kinks, then fix b's sum on the
    // remaining coordinates.
    double rest = 1.0;
    std::vector<std::size_t> free_idx;
    for (std::size_t j = 0; j < k; ++j) {
      if (coin(rng) == 0) {
        b[j] = mu[j];
        rest -= mu[j];
      } else {
        free_idx.push_back(j);
      }
    }
    if (free_idx.empty()) continue;
    double sw = 0;
    for (auto j : free_idx) sw += (b[j] = e(rng));
    for (auto j : free_idx) b[j] *= rest / sw;
    const DistVector mv(mu);
    const DistVector bv(b);
    const auto p = subgradient_partition(mv, bv);
    EXPECT_EQ(p.plus.size() + p.minus.size() + p.zero.size(), k - 1);
    EXPECT_TRUE(is_subgradient(mv, bv, as_gradient(p, k - 1), rng)) << "rep " << rep;
  }
}

TEST(build_gradient, examples) {
  Rng rng(3);
  const Povm p4 = random_projective_povm(4, 4, rng);
  const auto zero = build_gradient(p4, {});
  EXPECT_EQ(max_abs(zero.matrix.matrix()), 0.0);
  const auto one = build_gradient(p4, {{0}, {}, {}});
  EXPECT_NEAR(one.spectral_norm, 1.0, 1e-12);
  EXPECT_LE(max_abs(one.matrix.matrix() - p4[0].matrix()), 1e-15);
  const auto mixed = build_gradient(p4, {{0, 1}, {2}, {}});
  const auto ev = hermitian_eig(mixed.matrix).eigenvalues;
  EXPECT_LE(std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1))), 2.0 + 1e-9);
  EXPECT_CODE(build_gradient(p4, {{3}, {}, {}}), ErrorCode::IndexOutOfRange);
}

TEST(build_gradient, norm_bound_for_projective_povms) {
  Rng rng(4);
  for (int rep = 0; rep < 200; ++rep) {
    const Povm p = random_projective_povm(6, 4, rng);
    const auto part = subgradient_partition(outcome_distribution(p, random_density(6, rng)),
                                            outcome_distribution(p, random_density(6, rng)));
    EXPECT_LE(build_gradient(p, part).spectral_norm, 2.0 + 1e-9);
  }
}

TEST(gibbs, initial_state_is_maximally_mixed) {
  const LearnerState s = LearnerState::initial(5, 0.1);
  EXPECT_LE(max_abs(s.hypothesis.matrix() - maximally_mixed(5).matrix()), 1e-15);
  EXPECT_LE(max_abs(gibbs_state(HermitianMatrix::zero(5), 0.3).matrix() - maximally_mixed(5).matrix()),
            1e-15);
  EXPECT_CODE(LearnerState::initial(2, 0.5), ErrorCode::ParameterOutOfRange);
}

TEST(gibbs, two_level_closed_form) {
  const double eta = 0.3;
  const DensityMatrix w = gibbs_state(HermitianMatrix(diag({1.0, -1.0})), eta);
  const double z = std::exp(-eta) + std::exp(eta);
  EXPECT_NEAR(w.matrix()(0, 0).real(), std::exp(-eta) / z, 1e-15);
  EXPECT_NEAR(w.matrix()(1, 1).real(), std::exp(eta) / z, 1e-15);
}

TEST(gibbs, commuting_gradients_match_scalar_exponentiated_gradient) {
  Rng rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double eta = 0.2;
  LearnerState s = LearnerState::initial(4, eta);
  std::vector<double> w(4, 0.25);
  for (int t = 0; t < 30; ++t) {
    RVector g(4);
    for (int j = 0; j < 4; ++j) g(j) = u(rng);
    s = rftl_update(s, GradientMatrix{HermitianMatrix::diagonal(g), {}, 0.0});
    double z = 0.0;
    for (int j = 0; j < 4; ++j) z += (w[static_cast<std::size_t>(j)] *= std::exp(-eta * g(j)));
    for (auto& x : w) x /= z;
    for (int j = 0; j < 4; ++j) EXPECT_NEAR(s.hypothesis.matrix()(j, j).real(), w[static_cast<std::size_t>(j)], 1e-10);
  }
}

TEST(gibbs, minimizes_the_regularized_objective) {
  Rng rng(6);
  for (std::size_t d : {2u, 3u, 4u}) {
    const CMatrix g = ginibre(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d), rng);
    const HermitianMatrix a = HermitianMatrix::hermitian_part(g + g.adjoint());
    const double eta = 0.4;
    const double best = rftl_objective(a, eta, gibbs_state(a, eta));
    for (int rep = 0; rep < 10000; ++rep) {
      const DensityMatrix phi = rep % 2 ? random_density(d, rng) : random_pure_state(d, rng);
      EXPECT_LE(best, rftl_objective(a, eta, phi) + 1e-9);
    }
  }
}

TEST(rftl, convexity_surrogate) {
  // l(mu_t) - l(tau) <= Tr(grad (omega - phi)) for the selected subgradient.
  Rng rng(7);
  for (int rep = 0; rep < 500; ++rep) {
    const std::size_t d = 2 + static_cast<std::size_t>(rep % 4);
    const std::size_t k = 2 + static_cast<std::size_t>(rep % 3);
    const Povm p = rep % 2 && k <= d ? random_projective_povm(d, k, rng) : random_povm(d, k, rng);
    const DensityMatrix omega = random_density(d, rng);
    const DensityMatrix phi = random_density(d, rng);
    const DistVector b = outcome_distribution(p, random_density(d, rng));
    const DistVector mu = outcome_distribution(p, omega);
    const DistVector tau = outcome_distribution(p, phi);
    const auto grad = build_gradient(p, subgradient_partition(mu, b));
    const double rhs = trace_product(grad.matrix.matrix(), omega.matrix() - phi.matrix()).real();
    EXPECT_LE(loss(mu, b) - loss(tau, b), rhs + 1e-9);
  }
}

TEST(eta_for, formula_clamp_and_monotonicity) {
  const auto e = eta_for(500, 8);
  EXPECT_NEAR(e.value, std::sqrt(std::log(8.0) / 4000.0), 1e-15);
  EXPECT_FALSE(e.clamped);
  // ln 3000 > 8, T = 1: raw > 1, clamped just below 1/2.
  const auto big = eta_for(1, 3000);
  EXPECT_GT(big.raw, 1.0);
  EXPECT_TRUE(big.clamped);
  EXPECT_LT(big.value, 0.5);
  EXPECT_EQ(big.value, std::nextafter(0.5, 0.0));
  // raw slightly above 1/2 (ln 55 / 16 > 1/4).
  EXPECT_TRUE(eta_for(2, 55).clamped);
  double prev = 1.0;
  for (std::size_t t = 1; t < 5000; t += 37) {
    EXPECT_LE(eta_for(t, 8).raw, prev);
    prev = eta_for(t, 8).raw;
  }
}

TEST(regret_bound, equals_closed_form_at_tuned_eta) {
  for (std::size_t t : {10u, 500u, 47322u}) {
    for (std::size_t d : {2u, 8u, 16u}) {
      EXPECT_NEAR(regret_bound(eta_for(t, d).value, t, d), 4.0 * std::sqrt(2.0 * t * std::log(double(d))),
                  1e-9 * t);
    }
  }
  EXPECT_EQ(bad_iteration_cap(8, 0.2), static_cast<std::uint64_t>(std::ceil(512.0 * std::log(8.0) / 0.04)));
}

TEST(run_online, truth_already_learned) {
  Rng rng(8);
  std::vector<Povm> seq;
  for (int t = 0; t < 50; ++t) seq.push_back(random_povm(4, 3, rng));
  const OnlineRun run = run_online(maximally_mixed(4), seq, exact_feedback(), 0.2);
  EXPECT_EQ(run.report.updates, 0u);
  EXPECT_EQ(run.report.regret, 0.0);
  for (const auto& r : run.records) {
    EXPECT_FALSE(r.bad);
    EXPECT_FALSE(r.gradient.has_value());
  }
}

TEST(run_online, adversarial_exact_trigger_respects_cap_and_regret) {
  for (std::uint64_t family = 0; family < 3; ++family) {
    Rng rng(100 + family);
    const DensityMatrix rho = random_density(8, rng);
    OnlineOptions opt;
    opt.trigger = Trigger::ExactTV;
    const OnlineRun run = run_online(rho, 500, adversarial_source(rho, 4, family), exact_feedback(), 0.2, opt);
    EXPECT_LE(run.report.updates, bad_iteration_cap(8, 0.2));
    EXPECT_LE(run.report.regret, run.report.bound);
    for (const auto& r : run.records) {
      EXPECT_EQ(r.bad, r.gradient.has_value());
      EXPECT_LE(r.hypothesis_trace_error, 1e-10);
      EXPECT_GE(r.hypothesis_min_eigenvalue, -1e-10);
    }
  }
}

TEST(run_online, always_trigger_regret_bound) {
  Rng rng(9);
  const DensityMatrix rho = random_density(8, rng);
  OnlineOptions opt;
  opt.trigger = Trigger::Always;
  const OnlineRun run = run_online(rho, 300, adversarial_source(rho, 4, 77), exact_feedback(), 0.2, opt);
  EXPECT_EQ(run.report.updates, 300u);
  EXPECT_NEAR(run.report.bound, 4.0 * std::sqrt(2.0 * 300 * std::log(8.0)), 1e-9);
  EXPECT_LE(run.report.regret, run.report.bound);
  EXPECT_NEAR(run.report.regret, run.report.learner_loss - run.report.comparator_loss, 1e-12);
}

TEST(run_online, feedback_violation_is_reported) {
  const DensityMatrix rho = pure_state(CVector::Unit(2, 1));
  const FeedbackPolicy liar = [](std::size_t, const Povm& p, const DistVector&, Rng&) {
    return DistVector::point_mass(p.outcomes(), 0);
  };
  OnlineOptions opt;
  opt.trigger = Trigger::Always;
  const std::vector<Povm> seq{Povm({QuantumEvent(HermitianMatrix(diag({1.0, 0.0}))),
                                    QuantumEvent(HermitianMatrix(diag({0.0, 1.0})))})};
  EXPECT_CODE(run_online(rho, seq, liar, 0.2, opt), ErrorCode::FeedbackViolation);
}

TEST(run_online, threshold_search_trigger_runs) {
  Rng rng(11);
  const DensityMatrix rho = random_density(4, rng);
  OnlineOptions opt;
  opt.trigger = Trigger::ThresholdSearch;
  opt.seed = 5;
  const OnlineRun run = run_online(rho, 40, adversarial_source(rho, 2, 3), exact_feedback(), 0.2, opt);
  EXPECT_GT(run.copies, 0u);
  EXPECT_LE(run.report.updates, 40u);
}

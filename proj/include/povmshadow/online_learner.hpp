#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "povmshadow/dist_vector.hpp"
#include "povmshadow/qstate.hpp"
#include "povmshadow/random.hpp"

namespace povmshadow {

// Loss of a prediction against feedback: d_TV(mu, b).
double loss(const DistVector& mu, const DistVector& b);

// Index sets over the K-1 free coordinates (0-based, j < K-1) on which the
// chosen subgradient of the loss takes the values +1, -1 and 0.
struct SubgradientPartition {
  std::vector<std::size_t> plus;
  std::vector<std::size_t> minus;
  std::vector<std::size_t> zero;
};

// Subgradient of x -> d_TV((x, 1 - sum x), b) at x = mu[0..K-2]. Coordinate j
// has derivative (s_j - s_K)/2 where s_j is a sign of mu_j - b_j; at a kink
// (mu_j == b_j) the sign may be any value in [-1, 1]. The selection here picks
// s_K in {-1, +1} when mu_K == b_K (majority of the other signs, +1 on ties)
// and s_j = s_K when mu_j == b_j, so every coordinate lands in {-1, 0, +1}
// while remaining a true subgradient.
SubgradientPartition subgradient_partition(const DistVector& mu, const DistVector& b);

struct GradientMatrix {
  HermitianMatrix matrix;  // sum_{plus} E_j - sum_{minus} E_j
  SubgradientPartition partition;
  double spectral_norm = 0.0;
};

// Throws IndexOutOfRange for partition indices >= K-1.
GradientMatrix build_gradient(const Povm& povm, const SubgradientPartition& partition);

struct LearnerState {
  DensityMatrix hypothesis;
  HermitianMatrix gradient_sum;
  double eta = 0.0;
  std::size_t iteration = 0;

  // omega_1 = I/d, empty gradient sum. Requires 0 < eta < 1/2.
  static LearnerState initial(std::size_t dim, double eta);
};

// exp(-eta A) / Tr exp(-eta A), computed in the eigenbasis of A with the
// smallest eigenvalue shifted out before exponentiation.
DensityMatrix gibbs_state(const HermitianMatrix& gradient_sum, double eta);

// eta Tr(A phi) + sum_i lambda_i(phi) ln lambda_i(phi); gibbs_state(A, eta)
// minimizes it over density matrices.
double rftl_objective(const HermitianMatrix& gradient_sum, double eta, const DensityMatrix& phi);

// A <- A + grad; omega <- gibbs_state(A, eta).
LearnerState rftl_update(const LearnerState& state, const GradientMatrix& gradient);

struct EtaChoice {
  double value = 0.0;  // usable step size, always < 1/2
  double raw = 0.0;    // sqrt(ln d / (8 T))
  bool clamped = false;
};

// sqrt(ln d / (8T)) (natural log), clamped to the largest double below 1/2.
EtaChoice eta_for(std::size_t iterations, std::size_t dim);

// 8 eta T + ln d / eta: the regret guarantee for T updates at step size eta.
// Equals 4 sqrt(2 T ln d) when eta = eta_for(T, d).
double regret_bound(double eta, std::size_t updates, std::size_t dim);

// ceil(512 ln d / eps^2): the bad-iteration cap implied by the regret bound
// when every update suffers loss >= eps/2 and the truth suffers <= eps/4.
std::uint64_t bad_iteration_cap(std::size_t dim, double epsilon);

enum class Trigger {
  Always,           // every round updates (plain RFTL)
  ExactTV,          // update iff d_TV(mu_t, p_t) > 3 eps / 4, using the known state
  ThresholdSearch,  // update iff a single-measurement Sampled threshold search flags it
};

struct IterationRecord {
  std::size_t t = 0;  // 1-based round
  DistVector prediction;
  std::optional<DistVector> feedback;  // present iff bad
  double loss = 0.0;                   // d_TV(prediction, feedback); 0 when not bad
  double tv_prediction_truth = 0.0;
  bool bad = false;
  std::optional<GradientMatrix> gradient;  // present iff bad
  double eta = 0.0;
  double regret_bound = 0.0;  // for the updates performed so far
  double hypothesis_trace_error = 0.0;
  double hypothesis_min_eigenvalue = 0.0;
};

struct RegretReport {
  double learner_loss = 0.0;
  double comparator_loss = 0.0;
  std::string comparator = "rho";
  double regret = 0.0;  // learner_loss - comparator_loss
  double bound = 0.0;
  std::size_t updates = 0;
  std::size_t iterations = 0;
};

// Supplies the round-t measurement; may adapt to the current hypothesis.
using PovmSource = std::function<Povm(std::size_t t, const DensityMatrix& hypothesis)>;
// Supplies b_t given the true outcome distribution p_t.
using FeedbackPolicy =
    std::function<DistVector(std::size_t t, const Povm& povm, const DistVector& truth, Rng& rng)>;

FeedbackPolicy exact_feedback();

struct OnlineOptions {
  Trigger trigger = Trigger::ExactTV;
  // Defaults to eta_for(T, d) for Trigger::Always and to
  // eta_for(bad_iteration_cap(d, eps), d) otherwise.
  std::optional<double> eta;
  std::optional<DensityMatrix> comparator;  // defaults to the true state
  double search_delta = 0.05;               // Trigger::ThresholdSearch only
  std::uint64_t seed = 0;
};

struct OnlineRun {
  std::vector<IterationRecord> records;
  RegretReport report;
  LearnerState final_state;
  std::uint64_t copies = 0;  // sampled copies consumed by triggers and feedback
};

// Throws FeedbackViolation when, under an exact trigger (Always or ExactTV), an
// update receives b_t with d_TV(b_t, p_t) > eps / 4.
OnlineRun run_online(const DensityMatrix& state, std::size_t rounds, const PovmSource& povms,
                     const FeedbackPolicy& feedback, double epsilon,
                     const OnlineOptions& options = {});

OnlineRun run_online(const DensityMatrix& state, const std::vector<Povm>& povms,
                     const FeedbackPolicy& feedback, double epsilon,
                     const OnlineOptions& options = {});

}  // namespace povmshadow

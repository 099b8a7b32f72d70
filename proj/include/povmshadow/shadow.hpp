#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "povmshadow/dist_vector.hpp"
#include "povmshadow/qstate.hpp"
#include "povmshadow/random.hpp"
#include "povmshadow/threshold_search.hpp"

namespace povmshadow {

struct ShadowConfig {
  double epsilon = 0.1;
  double delta = 0.1;
  double c0 = 512.0;
  double c1 = 8.0;
  double c2 = 8.0;
  SearchMode trigger = SearchMode::Sampled;
  // Multiply N_b by ln^2(max(M, 2)) like N_0. Off by default: the estimation
  // step it pays for has no M dependence.
  bool nb_log_m_squared = false;
  std::optional<double> eta;  // defaults to eta_for(T0, d)

  // Throws ParameterOutOfRange.
  void validate() const;
};

struct BatchPlan {
  std::uint64_t t0 = 0;      // iteration (batch) cap: ceil(C0 ln d / eps^2) + 1
  double delta0 = 0.0;       // delta / (2 T0)
  std::uint64_t n0 = 0;      // threshold-search copies per batch
  std::uint64_t nb = 0;      // estimation copies per batch
  std::uint64_t total = 0;   // T0 (N0 + Nb)
};

// Requires d >= 2, K >= 2, M >= 1 and a valid config.
BatchPlan plan_batches(const ShadowConfig& config, std::size_t dim, std::size_t outcomes,
                       std::size_t measurements);

struct ShadowResult {
  DensityMatrix hypothesis;
  std::vector<DistVector> outputs;  // outcome distribution of `hypothesis` per measurement
  std::size_t bad_iterations = 0;
  std::size_t rounds = 0;           // batches consumed, <= T0
  BatchPlan plan;
  double eta = 0.0;
  CopyLedger quantum{LedgerMode::QuantumBudget};     // rounds * (N0 + Nb)
  CopyLedger honest{LedgerMode::ClassicalHonest};    // copies actually sampled
  bool certified = false;         // the last threshold search returned AllClose
  bool budget_exhausted = false;  // T0 batches used without certification
  double max_tv_to_truth = 0.0;   // max_i d_TV(outputs[i], p_i), from the known state
  bool verified = false;          // max_tv_to_truth <= epsilon
};

// Online shadow tomography: starting from I/d, each round spends one batch on
// a threshold search against the hypothesis' own predictions; a flagged
// measurement is re-estimated to eps/4 and fed to one RFTL update, the rest of
// the batch is abandoned. Stops at the first AllClose or after T0 batches.
ShadowResult run_shadow(const DensityMatrix& state, const std::vector<Povm>& povms,
                        const ShadowConfig& config, Rng& rng);

struct OperatorEstimates {
  std::vector<double> values;
  double distribution_accuracy = 0.0;
  ShadowResult shadow;
};

// Estimates Tr(O_i rho) as sum_j values[i][j] b_{i,j} from the shadow outputs.
// povms[i] must realise operators[i] (sum_j values[i][j] E_{i,j} == O_i within
// 1e-8). The distributions are learned to eps / (2 max_i ||O_i||), since
// |sum_j v_j (b_j - p_j)| <= 2 max|v| d_TV(b, p).
// Throws ValueLengthMismatch or OperatorMismatch.
OperatorEstimates estimate_operator_expectations(const DensityMatrix& state,
                                                 const std::vector<HermitianMatrix>& operators,
                                                 const std::vector<Povm>& povms,
                                                 const std::vector<std::vector<double>>& values,
                                                 double epsilon, double delta, Rng& rng,
                                                 ShadowConfig base = {});

struct SpinAxis {
  double theta = 0.0;  // polar angle of the spin direction
  double phi = 0.0;    // azimuth

  static SpinAxis x() { return {1.5707963267948966, 0.0}; }
  static SpinAxis y() { return {1.5707963267948966, 1.5707963267948966}; }
  static SpinAxis z() { return {0.0, 0.0}; }
};

struct SpinMeasurement {
  Povm povm;                   // K = n + 1, outcome k = Hamming weight k in the rotated basis
  std::vector<double> values;  // n - 2k
  HermitianMatrix observable;  // total spin S = sum_k (n - 2k) A_{n-2k}
};

// Total-spin measurement of n qubits along `axis`. Throws TooLarge for n > 10.
SpinMeasurement spin_povm(std::size_t qubits, SpinAxis axis = SpinAxis::z());

}  // namespace povmshadow

#include "povmshadow/threshold_search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "povmshadow/distributions.hpp"
#include "povmshadow/error.hpp"
#include "povmshadow/tolerances.hpp"

namespace povmshadow {

void ThresholdInstance::validate() const {
  if (povms.empty()) throw Error(ErrorCode::EmptyInstance, "no measurements");
  if (thresholds.size() != povms.size()) {
    throw Error(ErrorCode::LengthMismatch, "one threshold vector per measurement required");
  }
  if (!(epsilon > 0.0 && epsilon < 0.5) || !(delta > 0.0 && delta < 0.5)) {
    throw Error(ErrorCode::ParameterOutOfRange, "epsilon and delta must lie in (0, 1/2)");
  }
  const std::size_t d = povms.front().dim();
  const std::size_t k = povms.front().outcomes();
  for (std::size_t i = 0; i < povms.size(); ++i) {
    if (povms[i].dim() != d) throw Error(ErrorCode::DimensionMismatch, "measurement dimensions differ");
    if (povms[i].outcomes() != k || thresholds[i].size() != k) {
      throw Error(ErrorCode::LengthMismatch, "outcome counts differ");
    }
  }
}

void CopyLedger::charge(std::string label, std::uint64_t copies) {
  entries_.push_back(LedgerEntry{std::move(label), copies});
}

void CopyLedger::absorb(const CopyLedger& other) {
  entries_.insert(entries_.end(), other.entries_.begin(), other.entries_.end());
}

std::uint64_t CopyLedger::charged() const {
  return std::accumulate(entries_.begin(), entries_.end(), std::uint64_t{0},
                         [](std::uint64_t acc, const LedgerEntry& e) { return acc + e.copies; });
}

bool event_b_accepts(const DistVector& empirical, const DistVector& tau, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    throw Error(ErrorCode::ParameterOutOfRange, "epsilon must lie in (0, 1/2)");
  }
  return tv_distance(empirical, tau) >= 7.0 * epsilon / 8.0 - tol::kKink;
}

EventBOutcome simulate_event_b(const DistVector& truth, const DistVector& tau, double epsilon,
                               double delta, Rng& rng) {
  if (truth.size() != tau.size()) throw Error(ErrorCode::LengthMismatch, "threshold length");
  const std::uint64_t n = required_samples(truth.size(), epsilon / 8.0, delta);
  const auto counts = sample_counts(truth, n, rng);
  const DistVector empirical = DistVector::from_counts(counts);
  return EventBOutcome{event_b_accepts(empirical, tau, epsilon), n, tv_distance(empirical, tau)};
}

EventBOutcome simulate_event_b(const Povm& povm, const DensityMatrix& state, const DistVector& tau,
                               double epsilon, double delta, Rng& rng) {
  return simulate_event_b(outcome_distribution(povm, state), tau, epsilon, delta, rng);
}

std::uint64_t quantum_budget_copies(std::size_t outcomes, std::size_t measurements, double epsilon,
                                    double delta, double c1) {
  if (!(c1 > 0.0)) throw Error(ErrorCode::ParameterOutOfRange, "C1 must be positive");
  if (!(epsilon > 0.0 && epsilon < 0.5) || !(delta > 0.0 && delta < 0.5)) {
    throw Error(ErrorCode::ParameterOutOfRange, "epsilon and delta must lie in (0, 1/2)");
  }
  const double log_m = std::log(static_cast<double>(std::max<std::size_t>(measurements, 2)));
  const double n = c1 * static_cast<double>(outcomes) * log_m * log_m * std::log(1.0 / delta) /
                   (epsilon * epsilon);
  return static_cast<std::uint64_t>(std::ceil(n));
}

ThresholdResult threshold_search(const ThresholdInstance& instance, const DensityMatrix& state,
                                 SearchMode mode, Rng& rng, const SearchOptions& options) {
  instance.validate();
  if (state.dim() != instance.povms.front().dim()) {
    throw Error(ErrorCode::DimensionMismatch, "state dimension does not match the instance");
  }
  const std::size_t m = instance.size();
  const std::size_t k = instance.povms.front().outcomes();
  const double eps = instance.epsilon;

  ThresholdResult result;
  result.quantum.charge("threshold_search",
                        quantum_budget_copies(k, m, eps, instance.delta, options.c1));

  if (mode == SearchMode::Oracle) {
    double best = -1.0;
    std::size_t best_index = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const double tv = tv_distance(outcome_distribution(instance.povms[i], state),
                                    instance.thresholds[i]);
      if (tv > best) {
        best = tv;
        best_index = i;
      }
    }
    if (best > eps) result.verdict = ThresholdVerdict{true, best_index, best};
    return result;
  }

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  const std::uint64_t base = rng();
  const double per_check = instance.delta / (2.0 * static_cast<double>(m));

  for (std::size_t i : order) {
    Rng sub(derive_seed(base, i, "event-b"));
    const EventBOutcome b =
        simulate_event_b(instance.povms[i], state, instance.thresholds[i], eps, per_check, sub);
    result.honest.charge("event_b[" + std::to_string(i) + "]", b.copies);
    if (b.accepted) {
      result.verdict = ThresholdVerdict{true, i, b.empirical_tv};
      return result;
    }
  }
  return result;
}

}  // namespace povmshadow

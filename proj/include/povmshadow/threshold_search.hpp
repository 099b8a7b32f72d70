#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "povmshadow/dist_vector.hpp"
#include "povmshadow/qstate.hpp"
#include "povmshadow/random.hpp"

namespace povmshadow {

// M measurements sharing (d, K), one threshold vector per measurement.
struct ThresholdInstance {
  std::vector<Povm> povms;
  std::vector<DistVector> thresholds;
  double epsilon = 0.1;
  double delta = 0.05;

  std::size_t size() const { return povms.size(); }
  // Throws EmptyInstance, DimensionMismatch, LengthMismatch or
  // ParameterOutOfRange.
  void validate() const;
};

struct ThresholdVerdict {
  bool violator = false;
  std::size_t index = 0;      // 0-based; meaningful only when violator
  double witnessed_tv = 0.0;  // empirical (Sampled) or exact (Oracle) TV at index

  static ThresholdVerdict all_close() { return {}; }
};

enum class LedgerMode { QuantumBudget, ClassicalHonest };

struct LedgerEntry {
  std::string label;
  std::uint64_t copies = 0;
};

// Copies of the unknown state charged to a procedure, with a per-call
// breakdown. charged() is always the sum of the breakdown.
class CopyLedger {
 public:
  explicit CopyLedger(LedgerMode mode = LedgerMode::ClassicalHonest) : mode_(mode) {}

  void charge(std::string label, std::uint64_t copies);
  void absorb(const CopyLedger& other);

  LedgerMode mode() const { return mode_; }
  std::uint64_t charged() const;
  const std::vector<LedgerEntry>& entries() const { return entries_; }

 private:
  LedgerMode mode_;
  std::vector<LedgerEntry> entries_;
};

enum class SearchMode { Oracle, Sampled };

struct SearchOptions {
  double c1 = 8.0;  // constant in the QuantumBudget charge
};

struct ThresholdResult {
  ThresholdVerdict verdict;
  CopyLedger quantum{LedgerMode::QuantumBudget};
  CopyLedger honest{LedgerMode::ClassicalHonest};
};

// Acceptance indicator of the two-outcome event B: true iff
// d_TV(empirical, tau) >= 7 eps / 8 (the boundary accepts).
bool event_b_accepts(const DistVector& empirical, const DistVector& tau, double epsilon);

struct EventBOutcome {
  bool accepted = false;
  std::uint64_t copies = 0;
  double empirical_tv = 0.0;
};

// Draws N = required_samples(K, eps/8, delta) outcomes and applies
// event_b_accepts to the frequencies. If d_TV(p, tau) > eps it accepts with
// probability > 1 - delta; if d_TV(p, tau) <= 3 eps / 4 it accepts with
// probability <= delta.
EventBOutcome simulate_event_b(const DistVector& truth, const DistVector& tau, double epsilon,
                               double delta, Rng& rng);
EventBOutcome simulate_event_b(const Povm& povm, const DensityMatrix& state, const DistVector& tau,
                               double epsilon, double delta, Rng& rng);

// ceil(c1 K ln^2(max(M, 2)) ln(1/delta) / eps^2).
std::uint64_t quantum_budget_copies(std::size_t outcomes, std::size_t measurements, double epsilon,
                                    double delta, double c1);

// Oracle: exact TVs; Violator(argmax, lowest index on ties) iff max TV > eps.
// Sampled: event-B checks in a seeded random order with per-check failure
// budget delta / (2M); the first accepting index is reported. Each position's
// sub-stream is split from one draw of `rng`, so the verdict does not depend on
// evaluation order.
ThresholdResult threshold_search(const ThresholdInstance& instance, const DensityMatrix& state,
                                 SearchMode mode, Rng& rng, const SearchOptions& options = {});

}  // namespace povmshadow

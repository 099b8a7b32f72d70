#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "povmshadow/dist_vector.hpp"
#include "povmshadow/qstate.hpp"
#include "povmshadow/random.hpp"

namespace povmshadow {

// K mutually orthogonal projectors of rank D/K summing to the identity,
// stored as the unitary whose consecutive column blocks span them.
struct SubspacePartition {
  std::size_t dim = 0;
  std::size_t blocks = 0;
  CMatrix basis;  // D x D unitary; block j = columns [j D/K, (j+1) D/K)
  Povm povm;      // the projectors P_1..P_K as a measurement

  std::size_t rank() const { return dim / blocks; }
  CMatrix block(std::size_t j) const;
  const CMatrix& projector(std::size_t j) const { return povm[j].matrix(); }
};

// Haar-random partition of C^D into K orthogonal blocks of rank D/K.
// Throws BadDimensions unless K divides D and K is even.
SubspacePartition haar_partition(std::size_t dim, std::size_t blocks, Rng& rng);

struct PackingNet {
  std::size_t dim = 0;
  std::size_t blocks = 0;
  double epsilon = 0.0;
  std::vector<SubspacePartition> partitions;  // one per measurement index
  std::size_t retries = 0;        // partitions redrawn during the build
  double worst_deviation = 0.0;   // max |Tr(P_{i,j} rho_{i',j'}) - 1/K| over i != i'

  std::size_t size() const { return partitions.size(); }
};

// max |Tr(P_{i,j} rho_{i',j'}) - 1/K| over all i != i', j, j', with
// rho_{i',j'} = K P_{i',j'} / D. Returns 0 when there is a single partition.
double worst_overlap_deviation(const std::vector<SubspacePartition>& partitions);

// Draws `count` partitions and enforces |Tr(P_{i,j} rho_{i',j'}) - 1/K| <= 1/(2K)
// for all cross pairs, redrawing the partition involved in the most violating
// pairs (lowest index on ties) until the condition holds.
// Throws RetriesExhausted (message carries the worst deviation) after
// `max_retries` redraws, BadDimensions, or ParameterOutOfRange (50 eps >= 1).
PackingNet build_packing_net(std::size_t dim, std::size_t blocks, std::size_t count,
                             double epsilon, std::size_t max_retries, Rng& rng);

struct HardInstance {
  std::size_t index = 0;  // 0-based measurement index i
  std::vector<int> signs; // z in {-1, +1}^{K/2}
  double epsilon = 0.0;
  DensityMatrix state;    // rho_i(z)
};

// rho_i(z) = sum_j [(1 - 50 eps z_j)/K rho_{i,2j-1} + (1 + 50 eps z_j)/K rho_{i,2j}].
// Throws IndexOutOfRange or BadString (wrong length or entries not +-1).
HardInstance hard_state(const PackingNet& net, std::size_t index, const std::vector<int>& signs);

// The exact outcome distribution of measurement i on rho_i(z).
DistVector planted_distribution(std::size_t blocks, double epsilon, const std::vector<int>& signs);

struct SeparationReport {
  double max_planted_entry_error = 0.0;  // (a) vs the exact (1 -+ 50 eps z_j)/K entries
  double cross_entry_min = 1.0;          // (b) smallest cross-index entry seen
  double cross_entry_max = 0.0;          // (b) largest cross-index entry seen
  bool cross_entries_in_band = true;     // (b) all within [(1-25eps)/K, (1+25eps)/K]
  double min_cross_tv = 1.0;             // (c) over all tested (i, i', z, z')
  double cross_tv_floor = 0.0;           // 25 eps / 2
  double max_same_index_tv_error = 0.0;  // (d) |TV - flips * 100 eps / K|
  double full_flip_tv = 0.0;             // (d) TV between z and -z at index 0
  std::size_t strings_tested = 0;
  std::size_t tuples_tested = 0;
};

// Checks the distinguishability claims of the net. Sign strings are enumerated
// when 2^{K/2} <= max_strings, otherwise `max_strings` are sampled.
SeparationReport verify_separation(const PackingNet& net, Rng& rng, std::size_t max_strings = 16);

struct InfoReport {
  double entropy_bits = 0.0;
  double deficit_bits = 0.0;  // log2 D - S(rho_i(z)) >= 0
  double budget_bits = 0.0;   // copies * deficit
  double target_bits = 0.0;   // K/2 + log2 L
  bool feasible = false;      // budget >= target (necessary condition only)
};

InfoReport info_report(const HardInstance& instance, std::uint64_t copies, std::size_t count,
                       std::size_t blocks);

// 1 - H2((1 + 50 eps)/2), the closed form of the entropy deficit.
double expected_entropy_deficit(double epsilon);

// min(d^2, K + log2 M) / eps^2.
double required_copies_lower(double dim, double outcomes, double measurements, double epsilon);

// Index whose output distribution is farthest (TV) from uniform; on hard
// instances this recovers the planted i when outputs are accurate to < 25 eps / 4.
std::size_t decode_planted_index(const std::vector<DistVector>& outputs);

}  // namespace povmshadow

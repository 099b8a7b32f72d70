#pragma once

#include <cstddef>
#include <vector>

#include "povmshadow/online_learner.hpp"
#include "povmshadow/qstate.hpp"
#include "povmshadow/random.hpp"

namespace povmshadow {

// Mixed state from the Hilbert-Schmidt measure: G G^dagger / Tr, G Ginibre.
DensityMatrix random_density(std::size_t dim, Rng& rng);

// Haar-random pure state.
DensityMatrix random_pure_state(std::size_t dim, Rng& rng);

// Projective POVM whose j-th event projects onto the j-th consecutive block of
// the columns of `basis` (a unitary). Block sizes differ by at most one, the
// larger blocks first. Requires 2 <= k <= dim.
Povm projective_povm_from_basis(const CMatrix& basis, std::size_t k);

// projective_povm_from_basis applied to a Haar-random unitary.
Povm random_projective_povm(std::size_t dim, std::size_t k, Rng& rng);

// General (non-projective) POVM: E_j = S^{-1/2} G_j S^{-1/2}, with G_j Wishart
// and S = sum_j G_j.
Povm random_povm(std::size_t dim, std::size_t k, Rng& rng);

// (1 - lambda) p + lambda e_j with j = argmin p, at exactly d_TV = tv from p.
// Throws ParameterOutOfRange when tv > 1 - min_j p_j.
DistVector perturb_at_tv(const DistVector& p, double tv);

// Projective POVM on the eigenbasis of (hypothesis - state), descending, split
// into K consecutive blocks; the block order is permuted by `rng`. Block 0 in
// the unpermuted order carries the largest over-prediction of the hypothesis.
Povm helstrom_povm(const DensityMatrix& hypothesis, const DensityMatrix& state, std::size_t k,
                   Rng& rng);

// Seeded adversarial measurement sequence: each round draws, from its own
// sub-stream of `family_seed`, a Helstrom-type POVM against the current
// hypothesis (probability 1/2), a Haar-random projective POVM (3/10) or a
// random general POVM (1/5).
PovmSource adversarial_source(const DensityMatrix& state, std::size_t k, std::uint64_t family_seed);

}  // namespace povmshadow

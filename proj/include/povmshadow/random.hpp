#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "povmshadow/linalg.hpp"

namespace povmshadow {

using Rng = std::mt19937_64;

// Counter-based seed derivation: the same (master, index, label) triple always
// yields the same seed, independent of the order streams are requested in.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, std::string_view label);

inline Rng make_rng(std::uint64_t master, std::uint64_t index, std::string_view label) {
  return Rng(derive_seed(master, index, label));
}

// Complex Ginibre matrix: i.i.d. entries with independent N(0, 1/2) real and
// imaginary parts.
CMatrix ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng);

// Haar-random unitary via QR of a Ginibre matrix with the phases of R's
// diagonal divided out of Q.
CMatrix haar_unitary(std::size_t dim, Rng& rng);

}  // namespace povmshadow

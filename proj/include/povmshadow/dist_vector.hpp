#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace povmshadow {

// Probability vector over K outcomes: nonnegative entries summing to 1
// within tol::kDistSum.
class DistVector {
 public:
  DistVector() = default;

  // Throws Error(ParameterOutOfRange) on negative/NaN entries, an empty
  // vector, or a sum off by more than tol::kDistSum. The stored entries are
  // renormalized to sum to 1.
  explicit DistVector(std::vector<double> entries);

  // Empirical frequencies counts / sum(counts). Requires a positive total.
  static DistVector from_counts(std::span<const std::uint64_t> counts);
  static DistVector uniform(std::size_t k);
  static DistVector point_mass(std::size_t k, std::size_t at);

  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t j) const { return p_[j]; }
  std::span<const double> entries() const { return p_; }
  const std::vector<double>& vec() const { return p_; }

  auto begin() const { return p_.begin(); }
  auto end() const { return p_.end(); }

 private:
  std::vector<double> p_;
};

}  // namespace povmshadow

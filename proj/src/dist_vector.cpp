#include "povmshadow/dist_vector.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "povmshadow/error.hpp"
#include "povmshadow/tolerances.hpp"

namespace povmshadow {

DistVector::DistVector(std::vector<double> entries) : p_(std::move(entries)) {
  if (p_.empty()) throw Error(ErrorCode::ParameterOutOfRange, "empty distribution");
  double sum = 0.0;
  for (double x : p_) {
    if (!(x >= 0.0)) {
      throw Error(ErrorCode::ParameterOutOfRange, "negative or NaN probability " + std::to_string(x));
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > tol::kDistSum) {
    throw Error(ErrorCode::ParameterOutOfRange, "probabilities sum to " + std::to_string(sum));
  }
  for (double& x : p_) x /= sum;
}

DistVector DistVector::from_counts(std::span<const std::uint64_t> counts) {
  const std::uint64_t total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  if (total == 0) throw Error(ErrorCode::ParameterOutOfRange, "no samples to form frequencies");
  std::vector<double> p(counts.size());
  for (std::size_t j = 0; j < counts.size(); ++j) {
    p[j] = static_cast<double>(counts[j]) / static_cast<double>(total);
  }
  return DistVector(std::move(p));
}

DistVector DistVector::uniform(std::size_t k) {
  return DistVector(std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

DistVector DistVector::point_mass(std::size_t k, std::size_t at) {
  if (at >= k) throw Error(ErrorCode::IndexOutOfRange, "point mass index");
  std::vector<double> p(k, 0.0);
  p[at] = 1.0;
  return DistVector(std::move(p));
}

}  // namespace povmshadow

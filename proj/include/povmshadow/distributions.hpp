#pragma once

#include <cstdint>

#include "povmshadow/dist_vector.hpp"
#include "povmshadow/qstate.hpp"
#include "povmshadow/random.hpp"

namespace povmshadow {

enum class Norm { TV, L2, LINF };

// Throws LengthMismatch if p and q differ in length.
double distance(const DistVector& p, const DistVector& q, Norm norm);

inline double tv_distance(const DistVector& p, const DistVector& q) {
  return distance(p, q, Norm::TV);
}

// d_TV(p, q) <= (sqrt(K)/2) ||p - q||_2 (+1e-12 slack).
bool tv_l2_relation_holds(const DistVector& p, const DistVector& q);

// Vector Bernstein tail exp(-m eps^2 / (8 sigma^2) + 1/4) for the mean of m
// centred vectors with E||x||^2 <= sigma_sq and ||x||_inf <= mu.
// Requires 0 < eps < sigma_sq / mu and m >= 1.
double bernstein_tail(std::uint64_t m, double epsilon, double sigma_sq, double mu = 1.0);

struct SamplePlan {
  std::uint64_t m = 0;
  double epsilon = 0.0;
  double delta = 0.0;
  std::size_t outcomes = 0;
};

// Smallest m with exp(-m eps^2 / (2K) + 1/4) <= delta, i.e.
//   m = ceil((2K / eps^2) (ln(1/delta) + 1/4)).
// The exponent eps^2/(2K) comes from running the Bernstein tail at the L2
// radius 2 eps / sqrt(K) that the TV/L2 relation requires. A more aggressive
// exponent 4 eps^2 / K is sometimes quoted for the same bound; this routine
// keeps the conservative (larger m) one.
// Requires 0 < eps < 1/2, 0 < delta < 1/2, K >= 1.
std::uint64_t required_samples(std::size_t outcomes, double epsilon, double delta);

SamplePlan plan_samples(std::size_t outcomes, double epsilon, double delta);

struct Estimate {
  DistVector distribution;  // raw empirical frequencies, no smoothing
  std::uint64_t copies = 0;
};

// Measures required_samples(K, eps, delta) fresh copies and returns the
// empirical outcome frequencies. Pr[d_TV(estimate, truth) >= eps] <= delta.
Estimate estimate_distribution(const Povm& povm, const DensityMatrix& state, double epsilon,
                               double delta, Rng& rng);

// Same, from an already-known outcome distribution.
Estimate estimate_distribution(const DistVector& truth, double epsilon, double delta, Rng& rng);

}  // namespace povmshadow

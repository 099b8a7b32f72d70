#include "povmshadow/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "povmshadow/error.hpp"

namespace povmshadow {

namespace {

void require_open_half(double x, const char* name) {
  if (!(x > 0.0 && x < 0.5)) {
    throw Error(ErrorCode::ParameterOutOfRange,
                std::string(name) + " must lie in (0, 1/2), got " + std::to_string(x));
  }
}

}  // namespace

double distance(const DistVector& p, const DistVector& q, Norm norm) {
  if (p.size() != q.size()) {
    throw Error(ErrorCode::LengthMismatch,
                std::to_string(p.size()) + " vs " + std::to_string(q.size()) + " outcomes");
  }
  double acc = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double diff = std::abs(p[j] - q[j]);
    switch (norm) {
      case Norm::TV: acc += diff; break;
      case Norm::L2: acc += diff * diff; break;
      case Norm::LINF: acc = std::max(acc, diff); break;
    }
  }
  switch (norm) {
    case Norm::TV: return 0.5 * acc;
    case Norm::L2: return std::sqrt(acc);
    case Norm::LINF: return acc;
  }
  return acc;
}

bool tv_l2_relation_holds(const DistVector& p, const DistVector& q) {
  const double tv = distance(p, q, Norm::TV);
  const double l2 = distance(p, q, Norm::L2);
  return tv <= 0.5 * std::sqrt(static_cast<double>(p.size())) * l2 + 1e-12;
}

double bernstein_tail(std::uint64_t m, double epsilon, double sigma_sq, double mu) {
  if (m < 1) throw Error(ErrorCode::ParameterOutOfRange, "m must be at least 1");
  if (!(sigma_sq > 0.0) || !(mu > 0.0)) {
    throw Error(ErrorCode::ParameterOutOfRange, "sigma^2 and mu must be positive");
  }
  if (!(epsilon > 0.0 && epsilon < sigma_sq / mu)) {
    throw Error(ErrorCode::ParameterOutOfRange,
                "epsilon must lie in (0, sigma^2/mu), got " + std::to_string(epsilon));
  }
  const double md = static_cast<double>(m);
  return std::exp(-md * epsilon * epsilon / (8.0 * sigma_sq) + 0.25);
}

std::uint64_t required_samples(std::size_t outcomes, double epsilon, double delta) {
  require_open_half(epsilon, "epsilon");
  require_open_half(delta, "delta");
  if (outcomes < 1) throw Error(ErrorCode::ParameterOutOfRange, "K must be at least 1");
  const double k = static_cast<double>(outcomes);
  const double m = (2.0 * k / (epsilon * epsilon)) * (std::log(1.0 / delta) + 0.25);
  return static_cast<std::uint64_t>(std::ceil(m));
}

SamplePlan plan_samples(std::size_t outcomes, double epsilon, double delta) {
  return SamplePlan{required_samples(outcomes, epsilon, delta), epsilon, delta, outcomes};
}

Estimate estimate_distribution(const DistVector& truth, double epsilon, double delta, Rng& rng) {
  const std::uint64_t m = required_samples(truth.size(), epsilon, delta);
  const auto counts = sample_counts(truth, m, rng);
  return Estimate{DistVector::from_counts(counts), m};
}

Estimate estimate_distribution(const Povm& povm, const DensityMatrix& state, double epsilon,
                               double delta, Rng& rng) {
  return estimate_distribution(outcome_distribution(povm, state), epsilon, delta, rng);
}

}  // namespace povmshadow

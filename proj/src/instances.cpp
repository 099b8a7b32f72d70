#include "povmshadow/instances.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "povmshadow/error.hpp"

namespace povmshadow {

DensityMatrix random_density(std::size_t dim, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(dim);
  const CMatrix g = ginibre(n, n, rng);
  CMatrix m = g * g.adjoint();
  m /= m.trace().real();
  return make_density(HermitianMatrix::hermitian_part(m));
}

DensityMatrix random_pure_state(std::size_t dim, Rng& rng) {
  const CMatrix g = ginibre(static_cast<Eigen::Index>(dim), 1, rng);
  return pure_state(g.col(0));
}

Povm projective_povm_from_basis(const CMatrix& basis, std::size_t k) {
  const auto d = static_cast<std::size_t>(basis.rows());
  if (k < 2 || k > d) {
    throw Error(ErrorCode::ParameterOutOfRange,
                "projective POVM needs 2 <= K <= d, got K=" + std::to_string(k));
  }
  std::vector<QuantumEvent> events;
  events.reserve(k);
  std::size_t start = 0;
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t size = d / k + (j < d % k ? 1 : 0);
    const CMatrix cols = basis.middleCols(static_cast<Eigen::Index>(start), static_cast<Eigen::Index>(size));
    events.emplace_back(HermitianMatrix::hermitian_part(cols * cols.adjoint()));
    start += size;
  }
  return Povm(std::move(events));
}

Povm random_projective_povm(std::size_t dim, std::size_t k, Rng& rng) {
  return projective_povm_from_basis(haar_unitary(dim, rng), k);
}

Povm random_povm(std::size_t dim, std::size_t k, Rng& rng) {
  if (k < 2) throw Error(ErrorCode::ParameterOutOfRange, "POVM needs K >= 2");
  const auto n = static_cast<Eigen::Index>(dim);
  std::vector<CMatrix> grams;
  grams.reserve(k);
  CMatrix sum = CMatrix::Zero(n, n);
  for (std::size_t j = 0; j < k; ++j) {
    const CMatrix g = ginibre(n, n, rng);
    grams.push_back(g * g.adjoint());
    sum += grams.back();
  }
  const CMatrix inv_root =
      apply_spectral(HermitianMatrix::hermitian_part(sum), [](double x) { return 1.0 / std::sqrt(x); })
          .matrix();
  std::vector<QuantumEvent> events;
  events.reserve(k);
  for (const auto& g : grams) {
    events.emplace_back(HermitianMatrix::hermitian_part(inv_root * g * inv_root));
  }
  return Povm(std::move(events));
}

DistVector perturb_at_tv(const DistVector& p, double tv) {
  const auto low = static_cast<std::size_t>(std::min_element(p.begin(), p.end()) - p.begin());
  const double room = 1.0 - p[low];
  if (!(tv >= 0.0) || tv > room) {
    throw Error(ErrorCode::ParameterOutOfRange,
                "cannot move " + std::to_string(tv) + " of mass onto one outcome");
  }
  // d_TV(p, (1 - lambda) p + lambda e_j) = lambda (1 - p_j)
  const double lambda = tv / room;
  std::vector<double> q(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) q[j] = (1.0 - lambda) * p[j];
  q[low] += lambda;
  return DistVector(std::move(q));
}

Povm helstrom_povm(const DensityMatrix& hypothesis, const DensityMatrix& state, std::size_t k,
                   Rng& rng) {
  const EigenDecomposition eig =
      hermitian_eig(HermitianMatrix::hermitian_part(hypothesis.matrix() - state.matrix()));
  const std::size_t d = hypothesis.dim();
  if (k < 2 || k > d) throw Error(ErrorCode::ParameterOutOfRange, "need 2 <= K <= d");
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  // Reorder whole blocks; sizes follow projective_povm_from_basis.
  std::vector<std::size_t> start(k + 1, 0);
  for (std::size_t j = 0; j < k; ++j) start[j + 1] = start[j] + d / k + (j < d % k ? 1 : 0);
  std::vector<QuantumEvent> events(k);
  for (std::size_t j = 0; j < k; ++j) {
    const CMatrix cols = eig.eigenvectors.middleCols(static_cast<Eigen::Index>(start[j]),
                                                     static_cast<Eigen::Index>(start[j + 1] - start[j]));
    events[order[j]] = QuantumEvent(HermitianMatrix::hermitian_part(cols * cols.adjoint()));
  }
  return Povm(std::move(events));
}

PovmSource adversarial_source(const DensityMatrix& state, std::size_t k, std::uint64_t family_seed) {
  return [state, k, family_seed](std::size_t t, const DensityMatrix& hypothesis) {
    Rng rng = make_rng(family_seed, t, "adversary");
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    if (u < 0.5) return helstrom_povm(hypothesis, state, k, rng);
    if (u < 0.8) return random_projective_povm(state.dim(), k, rng);
    return random_povm(state.dim(), k, rng);
  };
}

}  // namespace povmshadow

#include "povmshadow/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "povmshadow/error.hpp"
#include "povmshadow/tolerances.hpp"

namespace povmshadow {

namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + ": " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

// sqrt of an operator with spectrum clipped into [0, 1] first.
CMatrix clipped_sqrt(const EigenDecomposition& eig) {
  return apply_spectral(eig, [](double x) { return std::sqrt(std::clamp(x, 0.0, 1.0)); }).matrix();
}

CMatrix clipped_sqrt_complement(const EigenDecomposition& eig) {
  return apply_spectral(eig, [](double x) { return std::sqrt(1.0 - std::clamp(x, 0.0, 1.0)); })
      .matrix();
}

}  // namespace

DensityMatrix make_density(const HermitianMatrix& m) {
  const EigenDecomposition eig = hermitian_eig(m);
  const double lo = eig.eigenvalues(eig.eigenvalues.size() - 1);
  if (lo < -tol::kPsdSlack) {
    throw Error(ErrorCode::NotPSD, "smallest eigenvalue " + std::to_string(lo));
  }
  const double tr = m.trace();
  if (std::abs(tr - 1.0) > tol::kTrace) {
    throw Error(ErrorCode::BadTrace, "trace " + std::to_string(tr));
  }
  const double hi = eig.eigenvalues(0);
  if (lo < 0.0 || hi > 1.0) {
    RVector clipped = eig.eigenvalues.cwiseMax(0.0).cwiseMin(1.0);
    clipped /= clipped.sum();
    EigenDecomposition fixed{clipped, eig.eigenvectors};
    return DensityMatrix(HermitianMatrix::hermitian_part(fixed.reconstruct()));
  }
  return DensityMatrix(m * (1.0 / tr));
}

DensityMatrix maximally_mixed(std::size_t dim) {
  if (dim == 0) throw Error(ErrorCode::DimensionMismatch, "dimension must be positive");
  return make_density(HermitianMatrix::identity(dim) * (1.0 / static_cast<double>(dim)));
}

DensityMatrix pure_state(const CVector& psi) {
  const double norm = psi.norm();
  if (!(norm > 0.0)) throw Error(ErrorCode::ParameterOutOfRange, "zero state vector");
  const CVector v = psi / norm;
  return make_density(HermitianMatrix::hermitian_part(v * v.adjoint()));
}

QuantumEvent::QuantumEvent(HermitianMatrix m) : m_(std::move(m)) {
  const RVector ev = hermitian_eig(m_).eigenvalues;
  const double hi = ev(0);
  const double lo = ev(ev.size() - 1);
  if (lo < -tol::kPsdSlack || hi > 1.0 + tol::kPsdSlack) {
    throw Error(ErrorCode::NotEvent,
                "spectrum [" + std::to_string(lo) + ", " + std::to_string(hi) + "] outside [0, 1]");
  }
}

bool QuantumEvent::is_projector() const {
  const CMatrix& e = m_.matrix();
  return max_abs(e * e - e) <= tol::kProjector;
}

Povm::Povm(std::vector<QuantumEvent> events) : events_(std::move(events)) {
  if (events_.size() < 2) throw Error(ErrorCode::NotPovm, "a POVM needs at least two outcomes");
  const std::size_t d = events_.front().dim();
  CMatrix sum = CMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (const auto& e : events_) {
    if (e.dim() != d) throw Error(ErrorCode::NotPovm, "events of differing dimension");
    sum += e.matrix();
  }
  const double err = max_abs(sum - CMatrix::Identity(sum.rows(), sum.cols()));
  if (err > tol::kPovmSum) {
    throw Error(ErrorCode::NotPovm, "events sum to identity only within " + std::to_string(err));
  }
}

bool Povm::is_projective() const {
  return std::all_of(events_.begin(), events_.end(),
                     [](const QuantumEvent& e) { return e.is_projector(); });
}

DistVector outcome_distribution(const Povm& povm, const DensityMatrix& state) {
  require_same_dim(povm.dim(), state.dim(), "outcome_distribution");
  std::vector<double> p(povm.outcomes());
  double sum = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    p[j] = std::clamp(trace_product(povm[j].matrix(), state.matrix()).real(), 0.0, 1.0);
    sum += p[j];
  }
  for (double& x : p) x /= sum;
  return DistVector(std::move(p));
}

std::vector<std::uint64_t> sample_counts(const DistVector& p, std::uint64_t n, Rng& rng) {
  std::vector<std::uint64_t> counts(p.size(), 0);
  std::uint64_t remaining = n;
  double mass = 1.0;
  for (std::size_t j = 0; j + 1 < p.size() && remaining > 0; ++j) {
    if (p[j] <= 0.0) continue;
    const double q = mass > 0.0 ? std::clamp(p[j] / mass, 0.0, 1.0) : 1.0;
    std::uint64_t c = remaining;
    if (q < 1.0) {
      std::binomial_distribution<std::uint64_t> binom(remaining, q);
      c = binom(rng);
    }
    counts[j] = c;
    remaining -= c;
    mass -= p[j];
  }
  counts.back() += remaining;
  return counts;
}

std::vector<std::uint64_t> sample_outcomes(const Povm& povm, const DensityMatrix& state,
                                           std::uint64_t n, Rng& rng) {
  return sample_counts(outcome_distribution(povm, state), n, rng);
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  require_same_dim(a.dim(), b.dim(), "trace_distance");
  const RVector ev = hermitian_eig(a.hermitian() - b.hermitian()).eigenvalues;
  return std::clamp(0.5 * ev.cwiseAbs().sum(), 0.0, 1.0);
}

double von_neumann_entropy(const DensityMatrix& state) {
  const RVector ev = hermitian_eig(state.hermitian()).eigenvalues;
  double s = 0.0;
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    const double l = ev(k);
    if (l > tol::kEntropyFloor) s -= l * std::log2(l);
  }
  return s;
}

QuantumEvent naimark_dilate_event(const QuantumEvent& e) {
  const auto d = static_cast<Eigen::Index>(e.dim());
  const EigenDecomposition eig = hermitian_eig(e.hermitian());
  const CMatrix root = clipped_sqrt(eig);
  const CMatrix root_c = clipped_sqrt_complement(eig);
  // Pi = v v^dagger with v = [sqrt(E); sqrt(I - E)], an isometry.
  CMatrix v(2 * d, d);
  v.topRows(d) = root;
  v.bottomRows(d) = root_c;
  return QuantumEvent(HermitianMatrix::hermitian_part(v * v.adjoint()));
}

NaimarkDilation naimark_dilate_povm(const Povm& povm) {
  const auto d = static_cast<Eigen::Index>(povm.dim());
  const auto k = static_cast<Eigen::Index>(povm.outcomes());
  const Eigen::Index n = d * k;

  CMatrix v(n, d);
  for (Eigen::Index j = 0; j < k; ++j) {
    v.middleRows(j * d, d) = clipped_sqrt(hermitian_eig(povm[static_cast<std::size_t>(j)].hermitian()));
  }

  // Extend V's columns to an orthonormal basis: Gram-Schmidt over the
  // standard basis in index order, keeping vectors with a non-negligible
  // residual.
  CMatrix u(n, n);
  u.leftCols(d) = v;
  Eigen::Index filled = d;
  for (Eigen::Index b = 0; b < n && filled < n; ++b) {
    CVector w = CVector::Zero(n);
    w(b) = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      w -= u.leftCols(filled) * (u.leftCols(filled).adjoint() * w);
    }
    const double r = w.norm();
    if (r > 1e-6) {
      u.col(filled++) = w / r;
    }
  }
  if (filled != n) {
    throw Error(ErrorCode::ConvergenceFailure, "could not complete the Naimark isometry");
  }

  std::vector<QuantumEvent> projectors;
  projectors.reserve(static_cast<std::size_t>(k));
  for (Eigen::Index j = 0; j < k; ++j) {
    // U^dagger (|j><j| (x) I) U
    const CMatrix rows = u.middleRows(j * d, d);
    projectors.emplace_back(HermitianMatrix::hermitian_part(rows.adjoint() * rows));
  }
  return NaimarkDilation{Povm(std::move(projectors)), std::move(v), std::move(u)};
}

DensityMatrix embed_with_ancilla(const DensityMatrix& rho, std::size_t blocks) {
  const auto d = static_cast<Eigen::Index>(rho.dim());
  const auto n = d * static_cast<Eigen::Index>(blocks);
  CMatrix m = CMatrix::Zero(n, n);
  m.topLeftCorner(d, d) = rho.matrix();
  return make_density(HermitianMatrix::hermitian_part(m));
}

}  // namespace povmshadow

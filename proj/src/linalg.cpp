#include "povmshadow/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "povmshadow/error.hpp"
#include "povmshadow/tolerances.hpp"

namespace povmshadow {

HermitianMatrix::HermitianMatrix(const CMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "Hermitian matrix must be square and non-empty");
  }
  const double asym = max_abs(m - m.adjoint());
  if (asym > tol::kHermitian) {
    throw Error(ErrorCode::NotHermitian,
                "max |A - A^dagger| = " + std::to_string(asym));
  }
  m_ = 0.5 * (m + m.adjoint());
}

HermitianMatrix HermitianMatrix::hermitian_part(const CMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "Hermitian matrix must be square and non-empty");
  }
  return HermitianMatrix(CMatrix(0.5 * (m + m.adjoint())), Unchecked{});
}

HermitianMatrix HermitianMatrix::zero(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return HermitianMatrix(CMatrix::Zero(n, n), Unchecked{});
}

HermitianMatrix HermitianMatrix::identity(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return HermitianMatrix(CMatrix::Identity(n, n), Unchecked{});
}

HermitianMatrix HermitianMatrix::diagonal(const RVector& diag) {
  CMatrix m = CMatrix::Zero(diag.size(), diag.size());
  m.diagonal() = diag.cast<Complex>();
  return HermitianMatrix(std::move(m), Unchecked{});
}

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& o) const {
  if (dim() != o.dim()) throw Error(ErrorCode::DimensionMismatch, "matrix sum");
  return HermitianMatrix(CMatrix(m_ + o.m_), Unchecked{});
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& o) const {
  if (dim() != o.dim()) throw Error(ErrorCode::DimensionMismatch, "matrix difference");
  return HermitianMatrix(CMatrix(m_ - o.m_), Unchecked{});
}

HermitianMatrix HermitianMatrix::operator*(double s) const {
  return HermitianMatrix(CMatrix(m_ * s), Unchecked{});
}

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& o) {
  if (dim() != o.dim()) throw Error(ErrorCode::DimensionMismatch, "matrix sum");
  m_ += o.m_;
  return *this;
}

CMatrix EigenDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

EigenDecomposition hermitian_eig(const HermitianMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(m.matrix());
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::ConvergenceFailure, "Hermitian eigensolver did not converge");
  }
  // Eigen sorts ascending; flip to descending.
  EigenDecomposition out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

HermitianMatrix apply_spectral(const EigenDecomposition& eig,
                               const std::function<double(double)>& f) {
  RVector fl(eig.eigenvalues.size());
  for (Eigen::Index k = 0; k < fl.size(); ++k) fl(k) = f(eig.eigenvalues(k));
  return HermitianMatrix::hermitian_part(eig.eigenvectors * fl.cast<Complex>().asDiagonal() *
                                         eig.eigenvectors.adjoint());
}

HermitianMatrix apply_spectral(const HermitianMatrix& m,
                               const std::function<double(double)>& f) {
  return apply_spectral(hermitian_eig(m), f);
}

double spectral_norm(const HermitianMatrix& m) {
  const RVector ev = hermitian_eig(m).eigenvalues;
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

double spectral_norm(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
}

double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

Complex trace_product(const CMatrix& a, const CMatrix& b) {
  // Tr(AB) = sum_{jk} A(j,k) B(k,j)
  return a.cwiseProduct(b.transpose()).sum();
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace povmshadow

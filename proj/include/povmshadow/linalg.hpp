#pragma once

#include <complex>
#include <cstddef>
#include <functional>

#include <Eigen/Dense>

namespace povmshadow {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

// A d x d complex matrix equal to its conjugate transpose (within
// tol::kHermitian entrywise). The stored entries are exactly Hermitian: the
// checked constructor averages the matrix with its adjoint after validation.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;

  // Throws Error(NotHermitian) if |m(j,k) - conj(m(k,j))| > tol::kHermitian.
  explicit HermitianMatrix(const CMatrix& m);

  // Takes (m + m^dagger)/2 without a tolerance check. Use for matrices that
  // are Hermitian by construction but carry rounding noise (products, sums).
  static HermitianMatrix hermitian_part(const CMatrix& m);

  static HermitianMatrix zero(std::size_t dim);
  static HermitianMatrix identity(std::size_t dim);
  static HermitianMatrix diagonal(const RVector& diag);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const CMatrix& matrix() const { return m_; }
  Complex operator()(std::size_t j, std::size_t k) const {
    return m_(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
  }

  double trace() const { return m_.trace().real(); }

  HermitianMatrix operator+(const HermitianMatrix& o) const;
  HermitianMatrix operator-(const HermitianMatrix& o) const;
  HermitianMatrix operator*(double s) const;
  HermitianMatrix& operator+=(const HermitianMatrix& o);

 private:
  struct Unchecked {};
  HermitianMatrix(CMatrix m, Unchecked) : m_(std::move(m)) {}

  CMatrix m_;
};

struct EigenDecomposition {
  RVector eigenvalues;   // descending
  CMatrix eigenvectors;  // orthonormal columns, column k pairs with eigenvalue k

  CMatrix reconstruct() const;
};

// Throws Error(ConvergenceFailure) if the solver does not converge.
EigenDecomposition hermitian_eig(const HermitianMatrix& m);

// V f(Lambda) V^dagger for a real scalar function f.
HermitianMatrix apply_spectral(const EigenDecomposition& eig,
                               const std::function<double(double)>& f);
HermitianMatrix apply_spectral(const HermitianMatrix& m,
                               const std::function<double(double)>& f);

double spectral_norm(const HermitianMatrix& m);
double spectral_norm(const CMatrix& m);

// Largest entrywise modulus.
double max_abs(const CMatrix& m);

// Tr(A B) for square matrices, computed without forming the product.
Complex trace_product(const CMatrix& a, const CMatrix& b);

CMatrix kron(const CMatrix& a, const CMatrix& b);

}  // namespace povmshadow

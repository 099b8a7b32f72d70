#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "povmshadow/dist_vector.hpp"
#include "povmshadow/linalg.hpp"
#include "povmshadow/random.hpp"

namespace povmshadow {

// PSD, unit-trace Hermitian matrix.
class DensityMatrix {
 public:
  DensityMatrix() = default;

  std::size_t dim() const { return m_.dim(); }
  const HermitianMatrix& hermitian() const { return m_; }
  const CMatrix& matrix() const { return m_.matrix(); }

 private:
  friend DensityMatrix make_density(const HermitianMatrix& m);
  explicit DensityMatrix(HermitianMatrix m) : m_(std::move(m)) {}

  HermitianMatrix m_;
};

// Validates m as a quantum state. Eigenvalues within the PSD slack of [0, 1]
// are clipped into [0, 1] and the result renormalized to unit trace.
// Throws NotPSD (eigenvalue < -1e-10) or BadTrace (|Tr - 1| > 1e-10).
DensityMatrix make_density(const HermitianMatrix& m);

DensityMatrix maximally_mixed(std::size_t dim);

// |psi><psi| / <psi|psi>.
DensityMatrix pure_state(const CVector& psi);

// Hermitian operator with spectrum in [0, 1].
class QuantumEvent {
 public:
  QuantumEvent() = default;

  // Throws NotEvent if an eigenvalue leaves [-1e-10, 1 + 1e-10].
  explicit QuantumEvent(HermitianMatrix m);

  std::size_t dim() const { return m_.dim(); }
  const HermitianMatrix& hermitian() const { return m_; }
  const CMatrix& matrix() const { return m_.matrix(); }

  // E^2 == E within tol::kProjector.
  bool is_projector() const;

 private:
  HermitianMatrix m_;
};

// Ordered list of K >= 2 quantum events summing to the identity.
class Povm {
 public:
  Povm() = default;

  // Throws NotPovm when K < 2, dimensions disagree, or the events do not sum
  // to the identity within tol::kPovmSum entrywise.
  explicit Povm(std::vector<QuantumEvent> events);

  std::size_t dim() const { return events_.front().dim(); }
  std::size_t outcomes() const { return events_.size(); }
  const QuantumEvent& operator[](std::size_t j) const { return events_[j]; }
  const std::vector<QuantumEvent>& events() const { return events_; }

  bool is_projective() const;

 private:
  std::vector<QuantumEvent> events_;
};

// (Tr(E_1 rho), ..., Tr(E_K rho)), real parts clipped to [0, 1] and
// renormalized.
DistVector outcome_distribution(const Povm& povm, const DensityMatrix& state);

// Multinomial outcome counts for n independent measurements of `state`.
std::vector<std::uint64_t> sample_outcomes(const Povm& povm, const DensityMatrix& state,
                                           std::uint64_t n, Rng& rng);

// Multinomial draw from an explicit distribution, by sequential conditional
// binomials (O(K) regardless of n).
std::vector<std::uint64_t> sample_counts(const DistVector& p, std::uint64_t n, Rng& rng);

double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

// Von Neumann entropy in bits.
double von_neumann_entropy(const DensityMatrix& state);

// Single-event dilation onto C^2 (x) C^d, ancilla as the block index:
//   Pi = [[E, sqrt(E) sqrt(I-E)], [sqrt(I-E) sqrt(E), I-E]].
// Tr(Pi (|0><0| (x) rho)) = Tr(E rho), where |0><0| (x) rho = [[rho, 0], [0, 0]].
QuantumEvent naimark_dilate_event(const QuantumEvent& e);

struct NaimarkDilation {
  Povm projective;   // K orthogonal projectors on dimension d*K
  CMatrix isometry;  // V = [sqrt(E_1); ...; sqrt(E_K)], (d*K) x d
  CMatrix unitary;   // completion of V; its first d columns equal V
};

// Dilates every event of `povm` jointly into one projective POVM on
// C^K (x) C^d (ancilla as block index). With the input state embedded as
// embed_with_ancilla(rho, K), outcome probabilities are unchanged.
NaimarkDilation naimark_dilate_povm(const Povm& povm);

// Block-diagonal embedding diag(rho, 0, ..., 0) of size (blocks*d).
DensityMatrix embed_with_ancilla(const DensityMatrix& rho, std::size_t blocks);

}  // namespace povmshadow

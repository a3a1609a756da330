#pragma once

#include "entbound/linalg.hpp"

namespace entbound {

/// A validated quantum state: Hermitian, positive semidefinite, unit trace.
///
/// The spectrum is computed once at construction. Eigenvalues in
/// [-1e-10, 0) are clamped to zero; anything more negative is rejected.
class DensityMatrix {
 public:
  /// Throws NotSquare, NonFinite, NotHermitian or NotDensityMatrix.
  explicit DensityMatrix(const ComplexMatrix& m);

  /// |psi><psi| for a non-zero vector, normalized.
  static DensityMatrix pure(const Eigen::VectorXcd& psi);
  /// |k><k| in the computational basis.
  static DensityMatrix basis_state(int dim, int k);
  /// I / d.
  static DensityMatrix maximally_mixed(int dim);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const ComplexMatrix& matrix() const noexcept { return m_; }
  /// Clamped spectrum; eigenvalues lie in [0, 1 + 1e-10].
  const Spectrum& spectrum() const noexcept { return spectrum_; }

 private:
  ComplexMatrix m_;
  Spectrum spectrum_;
};

/// A validated Hermitian operator with cached spectrum and square.
class Observable {
 public:
  /// Throws NotSquare, NonFinite or NotHermitian.
  explicit Observable(const ComplexMatrix& m);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const ComplexMatrix& matrix() const noexcept { return m_; }
  const ComplexMatrix& squared() const noexcept { return squared_; }
  const Spectrum& spectrum() const noexcept { return spectrum_; }

  /// Minimum eigenvalue >= -1e-10.
  bool psd_certified() const noexcept { return psd_; }

  double trace() const;
  /// Sum of absolute eigenvalues.
  double trace_abs() const { return trace_abs_spectral(spectrum_); }
  /// Tr(A^2), i.e. the squared Frobenius norm.
  double trace_of_square() const { return m_.squaredNorm(); }

 private:
  ComplexMatrix m_;
  ComplexMatrix squared_;
  Spectrum spectrum_;
  bool psd_ = false;
};

struct StateQuantities {
  double entropy_bits = 0.0;
  double purity = 1.0;
  double linear_entropy = 0.0;
};

/// -sum lambda log2 lambda with 0 log 0 = 0, in bits.
double von_neumann_entropy(const DensityMatrix& rho);
/// Tr(rho^2).
double purity(const DensityMatrix& rho);
/// Tr(rho - rho^2) = 1 - purity.
double linear_entropy(const DensityMatrix& rho);
StateQuantities state_quantities(const DensityMatrix& rho);

/// Re Tr(A rho). Throws DimensionMismatch; InternalConsistency if the
/// imaginary residue is not round-off.
double expectation(const Observable& a, const DensityMatrix& rho);

/// Tr(A^2 rho) - Tr(A rho)^2, round-off negativity clamped to zero.
double variance(const Observable& a, const DensityMatrix& rho);

/// Variance from the Born-rule outcome distribution over the eigenprojectors
/// of A, with eigenvalues closer than 1e-8 merged into one outcome. Shares no
/// arithmetic path with variance() beyond the eigendecomposition.
double variance_oracle_projective(const Observable& a, const DensityMatrix& rho);

/// Tr(A B) for same-size square matrices.
Complex trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace entbound

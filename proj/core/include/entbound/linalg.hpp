#pragma once

#include <complex>
#include <functional>

#include <Eigen/Dense>

#include "entbound/bound_check.hpp"

namespace entbound {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Square, finite, Hermitian matrix. Only obtainable through validate_hermitian,
/// which stores the symmetrized (M + M^dagger)/2.
class HermitianMatrix {
 public:
  const ComplexMatrix& matrix() const noexcept { return m_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }

 private:
  explicit HermitianMatrix(ComplexMatrix m) : m_(std::move(m)) {}
  friend HermitianMatrix validate_hermitian(const ComplexMatrix&, double);

  ComplexMatrix m_;
};

/// Eigenvalues sorted descending; column j of `eigenvectors` pairs with eigenvalue j.
struct Spectrum {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;

  Eigen::Index dim() const noexcept { return eigenvalues.size(); }
};

/// Throws NotSquare or NonFinite.
void require_square_finite(const ComplexMatrix& m);

/// Largest |M_ij - conj(M_ji)|.
double hermitian_asymmetry(const ComplexMatrix& m);

/// Accepts m iff its asymmetry is within `tolerance`, returning the symmetrized matrix.
/// Throws NotHermitian otherwise.
HermitianMatrix validate_hermitian(const ComplexMatrix& m,
                                   double tolerance = tol::hermiticity);

/// Eigendecomposition with a deterministic ordering: eigenvalues descending,
/// each eigenvector phase-fixed so its first non-negligible component is real
/// positive, and numerically tied eigenvalues ordered lexicographically by
/// their eigenvector entries.
Spectrum hermitian_eigendecompose(const HermitianMatrix& m);

/// V diag(f(lambda)) V^dagger. Throws DomainError if f yields a non-finite value.
ComplexMatrix spectral_apply(const Spectrum& s, const std::function<double(double)>& f);

/// Sum of |eigenvalue|, the trace norm of a Hermitian matrix.
double trace_abs_spectral(const Spectrum& s);
double trace_abs_spectral(const HermitianMatrix& m);

/// Checks |Tr(DA)| <= Tr(|D|) Tr(|A|) with |.| taken elementwise. D must be
/// diagonal (off-diagonal magnitudes <= 1e-12), A any square matrix of the same size.
BoundCheck trace_product_bound_check(const ComplexMatrix& diag, const ComplexMatrix& a,
                                     double rel_tol = tol::bound_margin);

/// Max-norm of a matrix: largest entry magnitude.
double max_abs(const ComplexMatrix& m);

}  // namespace entbound

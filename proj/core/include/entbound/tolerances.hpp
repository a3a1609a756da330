#pragma once

// Numerical tolerances shared by every module. Change them here only.
namespace entbound::tol {

/// Max |M_ij - conj(M_ji)| accepted as Hermitian.
inline constexpr double hermiticity = 1e-10;
/// Max-norm reconstruction error of an eigendecomposition.
inline constexpr double reconstruction = 1e-9;
/// Relative margin allowed before a bound is declared violated.
inline constexpr double bound_margin = 1e-9;
/// Eigenvalues of a state in [-clamp, 0) are snapped to zero.
inline constexpr double eigen_clamp = 1e-10;
/// |Tr(rho) - 1| allowed for a density matrix.
inline constexpr double unit_trace = 1e-10;
/// Smallest eigenvalue still counted as non-negative for an observable.
inline constexpr double psd = 1e-10;
/// Off-diagonal magnitude tolerated in a "diagonal" matrix.
inline constexpr double diagonal = 1e-12;
/// Round-off negativity of a variance that is clamped to zero.
inline constexpr double variance_clamp = 1e-9;
/// Imaginary residue tolerated in the trace of a product of Hermitian matrices.
inline constexpr double imaginary_residue = 1e-9;
/// Eigenvalue gap below which projectors are merged in the projective oracle.
inline constexpr double degenerate_gap = 1e-8;
/// Below this |RHS| the tightness ratio is undefined.
inline constexpr double ratio_floor = 1e-12;
/// Frobenius norm below which a search parameter is degenerate.
inline constexpr double degenerate_parameter = 1e-12;
/// Eigenvalues closer than this count as tied when ordering a spectrum.
inline constexpr double eigen_tie = 1e-12;

}  // namespace entbound::tol

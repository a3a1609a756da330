#include "entbound/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "entbound/errors.hpp"

namespace entbound {

void require_square_finite(const ComplexMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw NotSquare("matrix must be square and non-empty, got " + std::to_string(m.rows()) +
                    "x" + std::to_string(m.cols()));
  }
  if (!m.allFinite()) throw NonFinite("matrix has NaN or Inf entries");
}

double hermitian_asymmetry(const ComplexMatrix& m) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i; j < m.cols(); ++j) {
      worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
    }
  }
  return worst;
}

HermitianMatrix validate_hermitian(const ComplexMatrix& m, double tolerance) {
  require_square_finite(m);
  const double asym = hermitian_asymmetry(m);
  if (asym > tolerance) throw NotHermitian(asym, tolerance);
  ComplexMatrix sym = 0.5 * (m + m.adjoint());
  // Exact real diagonal.
  for (Eigen::Index i = 0; i < sym.rows(); ++i) sym(i, i) = Complex(sym(i, i).real(), 0.0);
  return HermitianMatrix(std::move(sym));
}

namespace {

void fix_phase(Eigen::Ref<Eigen::VectorXcd> v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > 1e-10) {
      v *= std::conj(v(i)) / mag;
      v(i) = Complex(mag, 0.0);
      return;
    }
  }
}

bool lex_less(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i).real() != b(i).real()) return a(i).real() < b(i).real();
    if (a(i).imag() != b(i).imag()) return a(i).imag() < b(i).imag();
  }
  return false;
}

}  // namespace

Spectrum hermitian_eigendecompose(const HermitianMatrix& m) {
  const Eigen::Index d = m.dim();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m.matrix(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceFailure("Hermitian eigensolver failed to converge");
  }
  const RealVector& ascending = solver.eigenvalues();
  const ComplexMatrix& vecs = solver.eigenvectors();

  std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::reverse(order.begin(), order.end());

  std::vector<Eigen::VectorXcd> columns;
  columns.reserve(order.size());
  for (Eigen::Index k : order) {
    Eigen::VectorXcd v = vecs.col(k);
    fix_phase(v);
    columns.push_back(std::move(v));
  }

  // Within runs of tied eigenvalues, order eigenvectors lexicographically.
  std::vector<std::size_t> perm(order.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::size_t start = 0;
  while (start < perm.size()) {
    std::size_t stop = start + 1;
    while (stop < perm.size()) {
      const double a = ascending(order[stop - 1]);
      const double b = ascending(order[stop]);
      if (std::abs(a - b) > tol::eigen_tie * std::max(1.0, std::abs(a))) break;
      ++stop;
    }
    if (stop - start > 1) {
      std::sort(perm.begin() + static_cast<std::ptrdiff_t>(start),
                perm.begin() + static_cast<std::ptrdiff_t>(stop),
                [&](std::size_t x, std::size_t y) { return lex_less(columns[x], columns[y]); });
    }
    start = stop;
  }

  Spectrum s;
  s.eigenvalues.resize(d);
  s.eigenvectors.resize(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const std::size_t src = perm[static_cast<std::size_t>(j)];
    // Eigenvalue slots keep strict descending order; tied runs only swap vectors.
    s.eigenvalues(j) = ascending(order[static_cast<std::size_t>(j)]);
    s.eigenvectors.col(j) = columns[src];
  }
  return s;
}

ComplexMatrix spectral_apply(const Spectrum& s, const std::function<double(double)>& f) {
  const Eigen::Index d = s.dim();
  RealVector fl(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    fl(i) = f(s.eigenvalues(i));
    if (!std::isfinite(fl(i))) {
      throw DomainError("spectral_apply: function undefined at eigenvalue " +
                        std::to_string(s.eigenvalues(i)));
    }
  }
  ComplexMatrix out = s.eigenvectors * fl.asDiagonal() * s.eigenvectors.adjoint();
  return 0.5 * (out + out.adjoint());
}

double trace_abs_spectral(const Spectrum& s) { return s.eigenvalues.cwiseAbs().sum(); }

double trace_abs_spectral(const HermitianMatrix& m) {
  return trace_abs_spectral(hermitian_eigendecompose(m));
}

BoundCheck trace_product_bound_check(const ComplexMatrix& diag, const ComplexMatrix& a,
                                     double rel_tol) {
  require_square_finite(diag);
  require_square_finite(a);
  if (diag.rows() != a.rows()) throw DimensionMismatch(diag.rows(), a.rows());
  const Eigen::Index d = diag.rows();
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      if (i != j && std::abs(diag(i, j)) > tol::diagonal) {
        throw NotDiagonal("trace_product_bound_check: D has off-diagonal entry of magnitude " +
                          std::to_string(std::abs(diag(i, j))));
      }
    }
  }
  Complex tr{0.0, 0.0};
  double abs_d = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    tr += diag(i, i) * a(i, i);
    abs_d += std::abs(diag(i, i));
  }
  const double abs_a = a.diagonal().cwiseAbs().sum();
  return make_check(BoundId::TraceProduct, std::abs(tr), abs_d * abs_a, static_cast<int>(d), 1,
                    rel_tol);
}

double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace entbound

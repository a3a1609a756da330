#include "entbound/quantities.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "entbound/errors.hpp"

namespace entbound {

DensityMatrix::DensityMatrix(const ComplexMatrix& m) {
  HermitianMatrix h = validate_hermitian(m);
  const double tr = h.matrix().trace().real();
  if (std::abs(tr - 1.0) > tol::unit_trace) {
    throw NotDensityMatrix("NotDensityMatrix: trace " + std::to_string(tr) + " is not 1");
  }
  spectrum_ = hermitian_eigendecompose(h);
  const Eigen::Index d = spectrum_.dim();
  const double lowest = spectrum_.eigenvalues(d - 1);
  if (lowest < -tol::eigen_clamp) {
    throw NotDensityMatrix("NotDensityMatrix: eigenvalue " + std::to_string(lowest) +
                           " is negative");
  }
  for (Eigen::Index i = 0; i < d; ++i) {
    if (spectrum_.eigenvalues(i) < 0.0) spectrum_.eigenvalues(i) = 0.0;
  }
  m_ = h.matrix();
}

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd& psi) {
  const double norm = psi.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw InvalidParameter("pure state vector must be finite and non-zero");
  }
  const Eigen::VectorXcd u = psi / norm;
  ComplexMatrix rho = u * u.adjoint();
  // Re-normalize the trace exactly.
  rho /= rho.trace().real();
  return DensityMatrix(rho);
}

DensityMatrix DensityMatrix::basis_state(int dim, int k) {
  if (dim < 1 || k < 0 || k >= dim) throw InvalidParameter("basis_state: index out of range");
  ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
  rho(k, k) = 1.0;
  return DensityMatrix(rho);
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  if (dim < 1) throw InvalidDimension("maximally_mixed: dimension must be positive");
  return DensityMatrix(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

Observable::Observable(const ComplexMatrix& m) {
  HermitianMatrix h = validate_hermitian(m);
  spectrum_ = hermitian_eigendecompose(h);
  psd_ = spectrum_.eigenvalues(spectrum_.dim() - 1) >= -tol::psd;
  m_ = h.matrix();
  squared_ = m_ * m_;
  squared_ = 0.5 * (squared_ + squared_.adjoint());
}

double Observable::trace() const { return m_.trace().real(); }

double von_neumann_entropy(const DensityMatrix& rho) {
  double s = 0.0;
  for (double lambda : rho.spectrum().eigenvalues) {
    if (lambda > 0.0) s -= lambda * std::log2(lambda);
  }
  // lambda slightly above 1 contributes a tiny negative term.
  return std::max(s, 0.0);
}

double purity(const DensityMatrix& rho) { return rho.matrix().squaredNorm(); }

double linear_entropy(const DensityMatrix& rho) { return 1.0 - purity(rho); }

StateQuantities state_quantities(const DensityMatrix& rho) {
  StateQuantities q;
  q.entropy_bits = von_neumann_entropy(rho);
  q.purity = purity(rho);
  q.linear_entropy = 1.0 - q.purity;
  return q;
}

Complex trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a.cwiseProduct(b.transpose()).sum();
}

namespace {

void require_same_dim(const Observable& a, const DensityMatrix& rho) {
  if (a.dim() != rho.dim()) throw DimensionMismatch(rho.dim(), a.dim());
}

double real_trace(const ComplexMatrix& a, const ComplexMatrix& rho) {
  const Complex t = trace_of_product(a, rho);
  const double scale = a.cwiseAbs().cwiseProduct(rho.transpose().cwiseAbs()).sum();
  if (std::abs(t.imag()) > tol::imaginary_residue * std::max(1.0, scale)) {
    throw InternalConsistency("trace of Hermitian product has imaginary part " +
                              std::to_string(t.imag()));
  }
  return t.real();
}

double clamp_variance(double v, double scale) {
  if (v >= 0.0) return v;
  if (v < -tol::variance_clamp * std::max(1.0, scale)) {
    throw InternalConsistency("variance is negative beyond round-off: " + std::to_string(v));
  }
  return 0.0;
}

}  // namespace

double expectation(const Observable& a, const DensityMatrix& rho) {
  require_same_dim(a, rho);
  return real_trace(a.matrix(), rho.matrix());
}

double variance(const Observable& a, const DensityMatrix& rho) {
  require_same_dim(a, rho);
  const double second = real_trace(a.squared(), rho.matrix());
  const double mean = real_trace(a.matrix(), rho.matrix());
  return clamp_variance(second - mean * mean, second);
}

double variance_oracle_projective(const Observable& a, const DensityMatrix& rho) {
  require_same_dim(a, rho);
  const Spectrum& s = a.spectrum();
  const Eigen::Index d = s.dim();

  // Born probabilities per eigenvector, then merged per degenerate cluster.
  std::vector<double> outcome;
  std::vector<double> prob;
  Eigen::Index start = 0;
  while (start < d) {
    Eigen::Index stop = start + 1;
    while (stop < d && s.eigenvalues(stop - 1) - s.eigenvalues(stop) <= tol::degenerate_gap) {
      ++stop;
    }
    double p = 0.0;
    double lambda_sum = 0.0;
    for (Eigen::Index j = start; j < stop; ++j) {
      const Eigen::VectorXcd v = s.eigenvectors.col(j);
      p += (v.adjoint() * rho.matrix() * v)(0, 0).real();
      lambda_sum += s.eigenvalues(j);
    }
    outcome.push_back(lambda_sum / static_cast<double>(stop - start));
    prob.push_back(p);
    start = stop;
  }

  double mean = 0.0;
  double second = 0.0;
  for (std::size_t k = 0; k < outcome.size(); ++k) {
    mean += outcome[k] * prob[k];
    second += outcome[k] * outcome[k] * prob[k];
  }
  return clamp_variance(second - mean * mean, second);
}

}  // namespace entbound

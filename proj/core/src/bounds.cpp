#include "entbound/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "entbound/errors.hpp"

namespace entbound {

namespace {

void require_dim(const Observable& a, const DensityMatrix& rho) {
  if (a.dim() != rho.dim()) throw DimensionMismatch(rho.dim(), a.dim());
}

BoundCheck entropy_linear(const StateQuantities& q, int d, double rel_tol) {
  return make_check(BoundId::EntropyGeLinear, q.linear_entropy, q.entropy_bits, d, 1, rel_tol);
}

std::pair<BoundCheck, BoundCheck> theorem1(const Observable& a, const DensityMatrix& rho,
                                           const StateQuantities& q, double rel_tol) {
  require_dim(a, rho);
  const double mean = expectation(a, rho);
  const double rhs = a.trace_abs() * (q.entropy_bits + q.purity);
  return {make_check(BoundId::Thm1Upper, mean, rhs, rho.dim(), 1, rel_tol),
          make_check(BoundId::Thm1Lower, mean, -rhs, rho.dim(), 1, rel_tol)};
}

BoundCheck theorem2(const Observable& a, const DensityMatrix& rho, double rel_tol) {
  require_dim(a, rho);
  if (!a.psd_certified()) {
    throw NotPSD("NotPSD: THM2_DIM requires an observable with non-negative eigenvalues");
  }
  if (rho.dim() < 2) throw InvalidDimension("THM2_DIM requires d >= 2");
  const double rhs = expectation(a, rho) * a.trace() * (rho.dim() - 1);
  return make_check(BoundId::Thm2Dim, variance(a, rho), rhs, rho.dim(), 1, rel_tol);
}

std::pair<BoundCheck, BoundCheck> theorem3(const Observable& a, const DensityMatrix& rho,
                                           const StateQuantities& q, double rel_tol) {
  require_dim(a, rho);
  const double var = variance(a, rho);
  const double mean = expectation(a, rho);
  const double rhs = a.trace_of_square() * (q.entropy_bits + q.purity);
  BoundCheck full = make_check(BoundId::Thm3Full, var + mean * mean, rhs, rho.dim(), 1, rel_tol);
  BoundCheck weak = make_check(BoundId::Thm3Weak, var, rhs, rho.dim(), 1, rel_tol);
  if (full.satisfied && !weak.satisfied) {
    throw InternalConsistency("THM3_FULL holds but THM3_WEAK does not");
  }
  return {full, weak};
}

BoundCheck corollary1(const Observable& a, const DensityMatrix& rho, const StateQuantities& q,
                      double rel_tol) {
  require_dim(a, rho);
  const double lhs = std::sqrt(variance(a, rho)) * q.entropy_bits;
  const double rhs = f_of_d(rho.dim()) * std::sqrt(a.trace_of_square());
  return make_check(BoundId::Cor1Product, lhs, rhs, rho.dim(), 1, rel_tol);
}

std::pair<BoundCheck, BoundCheck> corollary2(std::span<const Observable> obs,
                                             const DensityMatrix& rho, const StateQuantities& q,
                                             double rel_tol) {
  if (obs.size() < 2) {
    throw TooFewObservables("COR2 requires at least two observables, got " +
                            std::to_string(obs.size()));
  }
  const double factor = q.entropy_bits + q.purity;
  const int n = static_cast<int>(obs.size());
  double var_product = 1.0;
  double var_sum = 0.0;
  double trace_square_product = 1.0;
  ComplexMatrix square_sum = ComplexMatrix::Zero(rho.dim(), rho.dim());
  for (const Observable& a : obs) {
    require_dim(a, rho);
    const double v = variance(a, rho);
    var_product *= v;
    var_sum += v;
    trace_square_product *= a.trace_of_square();
    square_sum += a.squared();
  }
  const double product_rhs = trace_square_product * std::pow(factor, n);
  const double sum_rhs = square_sum.trace().real() * factor;
  return {make_check(BoundId::Cor2ProductN, var_product, product_rhs, rho.dim(), n, rel_tol),
          make_check(BoundId::Cor2SumN, var_sum, sum_rhs, rho.dim(), n, rel_tol)};
}

}  // namespace

ObservableSummary summarize(const Observable& a) {
  return {a.trace(), a.trace_abs(), a.trace_of_square(), a.psd_certified()};
}

bool BoundReport::all_satisfied() const {
  return std::all_of(checks.begin(), checks.end(), [](const BoundCheck& c) { return c.satisfied; });
}

std::size_t BoundReport::violations() const {
  return static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(), [](const BoundCheck& c) { return !c.satisfied; }));
}

double f_of_d(int d) {
  if (d < 2) throw InvalidDimension("f(d) requires d >= 2, got " + std::to_string(d));
  const double dd = static_cast<double>(d);
  return std::log2(dd) * std::sqrt(std::log2(2.0 * dd));
}

BoundCheck check_entropy_linear(const DensityMatrix& rho, double rel_tol) {
  return entropy_linear(state_quantities(rho), rho.dim(), rel_tol);
}

std::pair<BoundCheck, BoundCheck> check_theorem1(const Observable& a, const DensityMatrix& rho,
                                                 double rel_tol) {
  return theorem1(a, rho, state_quantities(rho), rel_tol);
}

BoundCheck check_theorem2(const Observable& a, const DensityMatrix& rho, double rel_tol) {
  return theorem2(a, rho, rel_tol);
}

std::pair<BoundCheck, BoundCheck> check_theorem3(const Observable& a, const DensityMatrix& rho,
                                                 double rel_tol) {
  return theorem3(a, rho, state_quantities(rho), rel_tol);
}

BoundCheck check_corollary1(const Observable& a, const DensityMatrix& rho, double rel_tol) {
  return corollary1(a, rho, state_quantities(rho), rel_tol);
}

std::pair<BoundCheck, BoundCheck> check_corollary2(std::span<const Observable> observables,
                                                   const DensityMatrix& rho, double rel_tol) {
  return corollary2(observables, rho, state_quantities(rho), rel_tol);
}

BoundReport check_all(std::span<const Observable> observables, const DensityMatrix& rho,
                      double rel_tol) {
  BoundReport report;
  report.state = state_quantities(rho);
  report.checks.push_back(entropy_linear(report.state, rho.dim(), rel_tol));

  for (std::size_t k = 0; k < observables.size(); ++k) {
    const Observable& a = observables[k];
    require_dim(a, rho);
    report.observables.push_back(summarize(a));
    const int index = static_cast<int>(k);
    auto tag = [&](BoundCheck c) {
      c.observable = index;
      report.checks.push_back(c);
    };
    auto [upper, lower] = theorem1(a, rho, report.state, rel_tol);
    tag(upper);
    tag(lower);
    if (a.psd_certified()) tag(theorem2(a, rho, rel_tol));
    auto [full, weak] = theorem3(a, rho, report.state, rel_tol);
    tag(full);
    tag(weak);
    tag(corollary1(a, rho, report.state, rel_tol));
  }
  if (observables.size() >= 2) {
    auto [product, sum] = corollary2(observables, rho, report.state, rel_tol);
    report.checks.push_back(product);
    report.checks.push_back(sum);
  }
  return report;
}

int observables_required(BoundId id) {
  switch (id) {
    case BoundId::EntropyGeLinear: return 0;
    case BoundId::Cor2ProductN:
    case BoundId::Cor2SumN: return 2;
    default: return 1;
  }
}

BoundCheck evaluate_bound(BoundId id, std::span<const Observable> observables,
                          const DensityMatrix& rho, double rel_tol) {
  if (static_cast<int>(observables.size()) < observables_required(id)) {
    throw TooFewObservables(std::string(to_string(id)) + " needs " +
                            std::to_string(observables_required(id)) + " observable(s)");
  }
  const StateQuantities q = state_quantities(rho);
  switch (id) {
    case BoundId::EntropyGeLinear: return entropy_linear(q, rho.dim(), rel_tol);
    case BoundId::Thm1Upper: return theorem1(observables[0], rho, q, rel_tol).first;
    case BoundId::Thm1Lower: return theorem1(observables[0], rho, q, rel_tol).second;
    case BoundId::Thm2Dim: return theorem2(observables[0], rho, rel_tol);
    case BoundId::Thm3Full: return theorem3(observables[0], rho, q, rel_tol).first;
    case BoundId::Thm3Weak: return theorem3(observables[0], rho, q, rel_tol).second;
    case BoundId::Cor1Product: return corollary1(observables[0], rho, q, rel_tol);
    case BoundId::Cor2ProductN: return corollary2(observables, rho, q, rel_tol).first;
    case BoundId::Cor2SumN: return corollary2(observables, rho, q, rel_tol).second;
    case BoundId::TraceProduct: break;
  }
  throw InvalidParameter("TRACE_PRODUCT is not evaluated on a state; use trace_product_bound_check");
}

}  // namespace entbound

#pragma once

#include <span>
#include <utility>
#include <vector>

#include "entbound/bound_check.hpp"
#include "entbound/quantities.hpp"

namespace entbound {

struct ObservableSummary {
  double trace = 0.0;
  double trace_abs = 0.0;
  double trace_of_square = 0.0;
  bool psd_certified = false;
};

ObservableSummary summarize(const Observable& a);

/// Every applicable check for one state and a list of observables.
struct BoundReport {
  std::vector<BoundCheck> checks;
  StateQuantities state;
  std::vector<ObservableSummary> observables;

  bool all_satisfied() const;
  std::size_t violations() const;
};

/// log2(d) sqrt(log2(2d)). Throws InvalidDimension for d < 2.
double f_of_d(int d);

/// S >= S_L, reported with lhs = S_L and rhs = S.
BoundCheck check_entropy_linear(const DensityMatrix& rho, double rel_tol = tol::bound_margin);

/// (upper, lower): -Tr|A|(S + purity) <= <A> <= Tr|A|(S + purity).
std::pair<BoundCheck, BoundCheck> check_theorem1(const Observable& a, const DensityMatrix& rho,
                                                 double rel_tol = tol::bound_margin);

/// var <= <A> Tr(A) (d - 1). Only defined for PSD observables; throws NotPSD otherwise.
BoundCheck check_theorem2(const Observable& a, const DensityMatrix& rho,
                          double rel_tol = tol::bound_margin);

/// (full, weak): var + <A>^2 <= Tr(A^2)(S + purity) and var <= Tr(A^2)(S + purity).
std::pair<BoundCheck, BoundCheck> check_theorem3(const Observable& a, const DensityMatrix& rho,
                                                 double rel_tol = tol::bound_margin);

/// sigma_A S <= f(d) sqrt(Tr(A^2)).
BoundCheck check_corollary1(const Observable& a, const DensityMatrix& rho,
                            double rel_tol = tol::bound_margin);

/// (product, sum) reverse uncertainty relations for n >= 2 observables.
std::pair<BoundCheck, BoundCheck> check_corollary2(std::span<const Observable> observables,
                                                   const DensityMatrix& rho,
                                                   double rel_tol = tol::bound_margin);

/// Runs every applicable check. THM2 is included only for PSD observables,
/// COR2 only when at least two observables are given.
BoundReport check_all(std::span<const Observable> observables, const DensityMatrix& rho,
                      double rel_tol = tol::bound_margin);

/// Evaluates one state-based bound. Per-observable bounds use observables[0];
/// COR2 uses them all. TRACE_PRODUCT is not state-based and throws InvalidParameter.
BoundCheck evaluate_bound(BoundId id, std::span<const Observable> observables,
                          const DensityMatrix& rho, double rel_tol = tol::bound_margin);

/// Number of observables a bound needs (0 for ENTROPY_GE_LINEAR, 2 for COR2).
int observables_required(BoundId id);

}  // namespace entbound

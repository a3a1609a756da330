#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "entbound/bounds.hpp"
#include "entbound/ensembles.hpp"

namespace entbound {

/// Tightness search over states (and optionally observables) for one bound.
struct SearchConfig {
  BoundId bound = BoundId::Thm1Upper;
  int dim = 2;
  bool optimize_observable = true;
  int restarts = 16;
  int max_iterations = 2000;
  double convergence_tol = 1e-10;
  std::uint64_t seed = 0;
  /// Restrict states (and optimized observables) to the computational-basis diagonal.
  bool diagonal_only = false;
  /// Observable count for COR2 bounds.
  int n_observables = 2;
  /// Ensemble for observables that are not optimized. Defaults to PSD for
  /// THM2_DIM and GUE otherwise.
  std::optional<EnsembleKind> observable_ensemble;
  /// Observables held fixed for every restart; overrides observable_ensemble.
  std::vector<Observable> fixed_observables;
  unsigned threads = 1;
  double rel_tol = tol::bound_margin;

  /// Throws InvalidParameter / InvalidDimension / NotPSD for unusable configurations.
  void validate() const;
  EnsembleKind resolved_observable_ensemble() const;
  /// Observables the bound is evaluated on (0 for ENTROPY_GE_LINEAR).
  int observable_count() const;
};

enum class SearchStatus {
  Ok,         // best ratio <= 1 + 1e-9
  Violation,  // ratio > 1 + 1e-9 that reproduces from the serialized witness
  Anomaly,    // ratio > 1 + 1e-9 that does not reproduce
};

std::string_view to_string(SearchStatus status);

struct SearchResult {
  BoundId bound = BoundId::Thm1Upper;
  int dim = 2;
  /// NaN when no restart ever reached a point with a defined ratio.
  double best_ratio = 0.0;
  std::optional<DensityMatrix> witness_state;
  std::vector<Observable> witness_observables;
  /// The witness re-evaluated through the bounds module.
  BoundCheck check;
  int iterations_used = 0;
  int restart_index_of_best = 0;
  bool converged = false;
  SearchStatus status = SearchStatus::Ok;
  /// Objective evaluations summed over all restarts.
  long evaluations = 0;
};

/// theta holds row-major (re, im) pairs of a d x d matrix G; returns G G^dagger / Tr(G G^dagger).
/// Throws DegenerateParameter when ||G|| < 1e-12, InvalidParameter if the length is not 2 d^2.
DensityMatrix parametrize_state(std::span<const double> theta);

/// phi holds d diagonal reals then, for i < j in row-major order, (re, im) of H_ij.
/// Returns H scaled to unit Frobenius norm. Throws DegenerateParameter on a zero vector.
Observable parametrize_observable(std::span<const double> phi);

/// Inverse coordinate map of parametrize_observable (no normalization).
std::vector<double> observable_coordinates(const ComplexMatrix& h);

/// Row-major (re, im) pairs of g, the inverse of parametrize_state's reading of theta.
std::vector<double> state_coordinates(const ComplexMatrix& g);

/// Runs restarts x Nelder-Mead on -ratio; deterministic per seed.
SearchResult maximize_ratio(const SearchConfig& config);

/// One maximize_ratio per dimension in [d_min, d_max], sorted by dimension.
std::vector<SearchResult> scan_dimension(BoundId bound, int d_min, int d_max,
                                         const SearchConfig& config_template);

/// Rounds every entry through a 17-significant-digit text form.
ComplexMatrix roundtrip_17g(const ComplexMatrix& m);

}  // namespace entbound

#include "entbound/search.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <string>

#include "entbound/errors.hpp"
#include "entbound/nelder_mead.hpp"
#include "entbound/parallel.hpp"

namespace entbound {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kStartRetries = 8;

int side_from_length(std::size_t length, std::size_t per_entry, const char* what) {
  const auto d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(length / per_entry))));
  if (d < 1 || static_cast<std::size_t>(d) * static_cast<std::size_t>(d) * per_entry != length) {
    throw InvalidParameter(std::string(what) + ": parameter length " + std::to_string(length) +
                           " is not " + (per_entry == 2 ? "2 d^2" : "d^2"));
  }
  return d;
}

void require_finite(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) throw InvalidParameter("search parameter is not finite");
  }
}

ComplexMatrix matrix_from_pairs(std::span<const double> theta, int d) {
  ComplexMatrix g(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const std::size_t k = 2 * static_cast<std::size_t>(i * d + j);
      g(i, j) = Complex(theta[k], theta[k + 1]);
    }
  }
  return g;
}

DensityMatrix diagonal_state(std::span<const double> theta) {
  require_finite(theta);
  const int d = static_cast<int>(theta.size());
  double total = 0.0;
  for (double t : theta) total += t * t;
  if (std::sqrt(total) < tol::degenerate_parameter) {
    throw DegenerateParameter("DegenerateParameter: state parameter has zero norm");
  }
  ComplexMatrix rho = ComplexMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) rho(i, i) = theta[static_cast<std::size_t>(i)] *
                                          theta[static_cast<std::size_t>(i)] / total;
  return DensityMatrix(rho);
}

Observable unit_frobenius(ComplexMatrix h) {
  const double norm = h.norm();
  if (norm < tol::degenerate_parameter) {
    throw DegenerateParameter("DegenerateParameter: observable parameter has zero norm");
  }
  return Observable(h / norm);
}

Observable diagonal_observable_param(std::span<const double> phi, bool psd) {
  require_finite(phi);
  const int d = static_cast<int>(phi.size());
  ComplexMatrix h = ComplexMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    const double v = phi[static_cast<std::size_t>(i)];
    h(i, i) = psd ? v * v : v;
  }
  return unit_frobenius(h);
}

Observable psd_observable_param(std::span<const double> phi) {
  require_finite(phi);
  const int d = side_from_length(phi.size(), 2, "psd observable");
  const ComplexMatrix b = matrix_from_pairs(phi, d);
  ComplexMatrix a = b.adjoint() * b;
  return unit_frobenius(0.5 * (a + a.adjoint()));
}

/// How a flat parameter vector splits into a state and observables.
struct Layout {
  const SearchConfig& config;
  bool psd_observables() const { return config.bound == BoundId::Thm2Dim; }
  std::size_t state_length() const {
    const auto d = static_cast<std::size_t>(config.dim);
    return config.diagonal_only ? d : 2 * d * d;
  }
  std::size_t observable_length() const {
    if (!config.optimize_observable) return 0;
    const auto d = static_cast<std::size_t>(config.dim);
    if (config.diagonal_only) return d;
    return psd_observables() ? 2 * d * d : d * d;
  }
  std::size_t total() const {
    return state_length() +
           observable_length() * static_cast<std::size_t>(config.observable_count());
  }

  DensityMatrix state(std::span<const double> x) const {
    auto theta = x.subspan(0, state_length());
    return config.diagonal_only ? diagonal_state(theta) : parametrize_state(theta);
  }

  std::vector<Observable> observables(std::span<const double> x,
                                      const std::vector<Observable>& fixed) const {
    if (!config.optimize_observable) return fixed;
    std::vector<Observable> out;
    const std::size_t len = observable_length();
    for (int k = 0; k < config.observable_count(); ++k) {
      auto phi = x.subspan(state_length() + static_cast<std::size_t>(k) * len, len);
      if (config.diagonal_only) {
        out.push_back(diagonal_observable_param(phi, psd_observables()));
      } else if (psd_observables()) {
        out.push_back(psd_observable_param(phi));
      } else {
        out.push_back(parametrize_observable(phi));
      }
    }
    return out;
  }
};

std::vector<double> start_point(const Layout& layout, int restart, CounterRng& rng) {
  const SearchConfig& c = layout.config;
  const int d = c.dim;
  std::vector<double> x(layout.total(), 0.0);
  const std::size_t state_len = layout.state_length();
  if (restart == 0 || restart == 1) {
    // Maximally mixed (G = I) and the pure basis state |0><0| (G = e_00).
    for (int i = 0; i < d; ++i) {
      if (restart == 1 && i > 0) break;
      const std::size_t k = c.diagonal_only ? static_cast<std::size_t>(i)
                                            : 2 * static_cast<std::size_t>(i * d + i);
      x[k] = 1.0;
    }
  } else {
    for (std::size_t k = 0; k < state_len; ++k) x[k] = rng.normal();
  }
  for (std::size_t k = state_len; k < x.size(); ++k) x[k] = rng.normal();
  return x;
}

struct RestartOutcome {
  std::vector<double> x;
  std::vector<Observable> fixed;
  double ratio = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

RestartOutcome run_restart(const SearchConfig& config, int restart) {
  const Layout layout{config};
  CounterRng rng = CounterRng::substream(config.seed, static_cast<std::uint64_t>(restart));

  RestartOutcome out;
  if (!config.optimize_observable) {
    if (!config.fixed_observables.empty()) {
      out.fixed = config.fixed_observables;
    } else {
      EnsembleSpec spec;
      spec.kind = config.resolved_observable_ensemble();
      spec.dim = config.dim;
      for (int k = 0; k < config.observable_count(); ++k) {
        out.fixed.push_back(draw_observable(spec, rng));
      }
    }
  }

  std::vector<double> x0;
  for (int attempt = 0;; ++attempt) {
    x0 = start_point(layout, restart, rng);
    try {
      (void)layout.state(x0);
      (void)layout.observables(x0, out.fixed);
      break;
    } catch (const DegenerateParameter&) {
      if (attempt + 1 >= kStartRetries) throw;
    }
  }

  auto objective = [&](std::span<const double> x) -> double {
    try {
      const DensityMatrix rho = layout.state(x);
      const std::vector<Observable> obs = layout.observables(x, out.fixed);
      const BoundCheck c = evaluate_bound(config.bound, obs, rho, config.rel_tol);
      return c.ratio ? -*c.ratio : kInf;
    } catch (const Error&) {
      return kInf;
    }
  };

  NelderMeadOptions options;
  options.max_iterations = config.max_iterations;
  options.tolerance = config.convergence_tol;
  const NelderMeadResult nm = nelder_mead_minimize(objective, x0, options);
  out.x = nm.x;
  out.iterations = nm.iterations;
  out.evaluations = nm.evaluations;
  out.converged = nm.converged;
  if (std::isfinite(nm.value)) out.ratio = -nm.value;
  return out;
}

}  // namespace

std::string_view to_string(SearchStatus status) {
  switch (status) {
    case SearchStatus::Ok: return "ok";
    case SearchStatus::Violation: return "violation";
    case SearchStatus::Anomaly: return "anomaly";
  }
  return "unknown";
}

void SearchConfig::validate() const {
  if (bound == BoundId::TraceProduct) {
    throw InvalidParameter("TRACE_PRODUCT is a matrix inequality and has no state search");
  }
  if (dim < 2) throw InvalidDimension("search dimension must be >= 2");
  if (restarts < 1) throw InvalidParameter("restarts must be >= 1");
  if (max_iterations < 1) throw InvalidParameter("max_iterations must be >= 1");
  if (!(convergence_tol > 0.0)) throw InvalidParameter("convergence_tol must be > 0");
  if ((bound == BoundId::Cor2ProductN || bound == BoundId::Cor2SumN) && n_observables < 2) {
    throw TooFewObservables("COR2 search needs n_observables >= 2");
  }
  if (observable_ensemble && is_state_ensemble(*observable_ensemble)) {
    throw InvalidParameter(std::string(to_string(*observable_ensemble)) +
                           " is not an observable ensemble");
  }
  if (bound == BoundId::Thm2Dim && resolved_observable_ensemble() != EnsembleKind::PsdObservable) {
    throw NotPSD("NotPSD: THM2_DIM search requires the PSD observable ensemble, got " +
                 std::string(to_string(resolved_observable_ensemble())));
  }
  if (!fixed_observables.empty()) {
    if (static_cast<int>(fixed_observables.size()) != observable_count()) {
      throw InvalidParameter("expected " + std::to_string(observable_count()) +
                             " fixed observable(s), got " +
                             std::to_string(fixed_observables.size()));
    }
    for (const Observable& a : fixed_observables) {
      if (a.dim() != dim) throw DimensionMismatch(dim, a.dim());
      if (bound == BoundId::Thm2Dim && !a.psd_certified()) {
        throw NotPSD("NotPSD: THM2_DIM search requires PSD fixed observables");
      }
    }
  }
}

EnsembleKind SearchConfig::resolved_observable_ensemble() const {
  if (observable_ensemble) return *observable_ensemble;
  return bound == BoundId::Thm2Dim ? EnsembleKind::PsdObservable : EnsembleKind::GueObservable;
}

int SearchConfig::observable_count() const {
  if (bound == BoundId::Cor2ProductN || bound == BoundId::Cor2SumN) return n_observables;
  return observables_required(bound);
}

DensityMatrix parametrize_state(std::span<const double> theta) {
  require_finite(theta);
  const int d = side_from_length(theta.size(), 2, "parametrize_state");
  const ComplexMatrix g = matrix_from_pairs(theta, d);
  if (g.norm() < tol::degenerate_parameter) {
    throw DegenerateParameter("DegenerateParameter: ||G|| < 1e-12");
  }
  ComplexMatrix rho = g * g.adjoint();
  rho = 0.5 * (rho + rho.adjoint());
  rho /= rho.trace().real();
  return DensityMatrix(rho);
}

Observable parametrize_observable(std::span<const double> phi) {
  require_finite(phi);
  const int d = side_from_length(phi.size(), 1, "parametrize_observable");
  ComplexMatrix h = ComplexMatrix::Zero(d, d);
  std::size_t k = 0;
  for (int i = 0; i < d; ++i) h(i, i) = phi[k++];
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      h(i, j) = Complex(phi[k], phi[k + 1]);
      h(j, i) = std::conj(h(i, j));
      k += 2;
    }
  }
  return unit_frobenius(h);
}

std::vector<double> observable_coordinates(const ComplexMatrix& h) {
  const auto d = h.rows();
  std::vector<double> phi;
  phi.reserve(static_cast<std::size_t>(d * d));
  for (Eigen::Index i = 0; i < d; ++i) phi.push_back(h(i, i).real());
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      phi.push_back(h(i, j).real());
      phi.push_back(h(i, j).imag());
    }
  }
  return phi;
}

std::vector<double> state_coordinates(const ComplexMatrix& g) {
  std::vector<double> theta;
  theta.reserve(static_cast<std::size_t>(2 * g.size()));
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      theta.push_back(g(i, j).real());
      theta.push_back(g(i, j).imag());
    }
  }
  return theta;
}

ComplexMatrix roundtrip_17g(const ComplexMatrix& m) {
  auto pass = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::strtod(buf, nullptr);
  };
  ComplexMatrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out(i, j) = Complex(pass(m(i, j).real()), pass(m(i, j).imag()));
    }
  }
  return out;
}

SearchResult maximize_ratio(const SearchConfig& config) {
  config.validate();
  const Layout layout{config};

  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(config.restarts));
  parallel_for(outcomes.size(), config.threads, [&](std::size_t r) {
    outcomes[r] = run_restart(config, static_cast<int>(r));
  });

  // Deterministic argmax; ties keep the lower restart index.
  std::size_t best = 0;
  long evaluations = 0;
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    evaluations += outcomes[r].evaluations;
    const double cur = outcomes[r].ratio;
    const double top = outcomes[best].ratio;
    if (!std::isnan(cur) && (std::isnan(top) || cur > top)) best = r;
  }
  const RestartOutcome& win = outcomes[best];

  SearchResult result;
  result.bound = config.bound;
  result.dim = config.dim;
  result.witness_state = layout.state(win.x);
  result.witness_observables = layout.observables(win.x, win.fixed);
  result.check =
      evaluate_bound(config.bound, result.witness_observables, *result.witness_state, config.rel_tol);
  result.best_ratio = result.check.ratio.value_or(std::numeric_limits<double>::quiet_NaN());
  result.iterations_used = win.iterations;
  result.restart_index_of_best = static_cast<int>(best);
  result.converged = win.converged;
  result.evaluations = evaluations;

  if (result.best_ratio > 1.0 + tol::bound_margin) {
    // Re-verify from the witness as it would be serialized.
    result.status = SearchStatus::Anomaly;
    try {
      const DensityMatrix rho(roundtrip_17g(result.witness_state->matrix()));
      std::vector<Observable> obs;
      for (const Observable& a : result.witness_observables) {
        obs.emplace_back(roundtrip_17g(a.matrix()));
      }
      const BoundCheck again = evaluate_bound(config.bound, obs, rho, config.rel_tol);
      if (again.ratio && *again.ratio > 1.0 + tol::bound_margin) {
        result.status = SearchStatus::Violation;
      }
    } catch (const Error&) {
    }
  }
  return result;
}

std::vector<SearchResult> scan_dimension(BoundId bound, int d_min, int d_max,
                                         const SearchConfig& config_template) {
  if (d_min < 2 || d_max < d_min) {
    throw InvalidDimension("scan requires 2 <= d_min <= d_max, got " + std::to_string(d_min) +
                           ":" + std::to_string(d_max));
  }
  std::vector<SearchResult> table;
  for (int d = d_min; d <= d_max; ++d) {
    SearchConfig c = config_template;
    c.bound = bound;
    c.dim = d;
    table.push_back(maximize_ratio(c));
  }
  return table;
}

}  // namespace entbound

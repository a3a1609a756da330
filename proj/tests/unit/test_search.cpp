#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "entbound/errors.hpp"
#include "entbound/nelder_mead.hpp"
#include "entbound/search.hpp"
#include "oracles.hpp"

namespace entbound {
namespace {

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

TEST(ParametrizeState, Examples) {
  EXPECT_LE(max_abs_diff(parametrize_state(state_coordinates(oracle::identity(2))).matrix(),
                         oracle::identity(2) / 2.0),
            1e-15);
  EXPECT_LE(max_abs_diff(parametrize_state(state_coordinates(oracle::diag({1, 0}))).matrix(),
                         oracle::diag({1, 0})),
            1e-15);
  EXPECT_LE(max_abs_diff(parametrize_state(state_coordinates(oracle::diag({std::sqrt(3.0), 1}))).matrix(),
                         oracle::diag({0.75, 0.25})),
            1e-15);
}

TEST(ParametrizeState, Errors) {
  EXPECT_THROW(parametrize_state(std::vector<double>(8, 0.0)), DegenerateParameter);
  EXPECT_THROW(parametrize_state(std::vector<double>(7, 1.0)), InvalidParameter);
  std::vector<double> nan_theta(8, 1.0);
  nan_theta[3] = std::nan("");
  EXPECT_THROW(parametrize_state(nan_theta), InvalidParameter);
}

TEST(ParametrizeObservable, Examples) {
  const std::vector<double> z_over_root2{1 / std::sqrt(2.0), -1 / std::sqrt(2.0), 0.0, 0.0};
  const Observable a = parametrize_observable(z_over_root2);
  EXPECT_LE(max_abs_diff(a.matrix(), oracle::pauli_z() / std::sqrt(2.0)), 1e-15);
  EXPECT_NEAR(a.matrix().norm(), 1.0, 1e-15);
  EXPECT_THROW(parametrize_observable(std::vector<double>(9, 0.0)), DegenerateParameter);
}

TEST(ParametrizeObservable, CoordinateRoundTrip) {
  oracle::TestRng rng(7);
  for (int d = 2; d <= 8; ++d) {
    oracle::Mat h = rng.hermitian(d);
    h /= h.norm();
    const std::vector<double> phi = observable_coordinates(h);
    ASSERT_EQ(phi.size(), static_cast<std::size_t>(d * d));
    EXPECT_LE(max_abs_diff(parametrize_observable(phi).matrix(), h), 1e-12);
    const std::vector<double> back = observable_coordinates(parametrize_observable(phi).matrix());
    for (std::size_t k = 0; k < phi.size(); ++k) EXPECT_NEAR(back[k], phi[k], 1e-12);
  }
}

TEST(NelderMead, Quadratic) {
  auto f = [](std::span<const double> x) {
    return (x[0] - 1) * (x[0] - 1) + 10 * (x[1] + 2) * (x[1] + 2);
  };
  const NelderMeadResult r = nelder_mead_minimize(f, {0.0, 0.0});
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x[0], 1.0, 1e-4);
  EXPECT_NEAR(r.x[1], -2.0, 1e-4);
}

TEST(NelderMead, SingleIterationReturnsStart) {
  auto f = [](std::span<const double> x) { return x[0] * x[0]; };
  NelderMeadOptions opt;
  opt.max_iterations = 1;
  const NelderMeadResult r = nelder_mead_minimize(f, {3.0}, opt);
  EXPECT_EQ(r.x, std::vector<double>{3.0});
  EXPECT_DOUBLE_EQ(r.value, 9.0);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 1);
}

TEST(NelderMead, NanIsTreatedAsInfinite) {
  auto f = [](std::span<const double> x) { return x[0] < 0 ? std::nan("") : (x[0] - 2) * (x[0] - 2); };
  const NelderMeadResult r = nelder_mead_minimize(f, {0.1});
  EXPECT_NEAR(r.x[0], 2.0, 1e-4);
}

SearchConfig thm1_z_config() {
  SearchConfig c;
  c.bound = BoundId::Thm1Upper;
  c.dim = 2;
  c.optimize_observable = false;
  c.fixed_observables = {Observable(oracle::pauli_z())};
  c.restarts = 8;
  c.seed = 1;
  return c;
}

TEST(MaximizeRatio, DegenerateBudgetReturnsStart) {
  SearchConfig c = thm1_z_config();
  c.restarts = 1;
  c.max_iterations = 1;
  const SearchResult r = maximize_ratio(c);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations_used, 1);
  EXPECT_EQ(r.restart_index_of_best, 0);
  // Restart 0 starts at the maximally mixed state.
  EXPECT_LE(max_abs_diff(r.witness_state->matrix(), oracle::identity(2) / 2.0), 1e-15);
  EXPECT_NEAR(r.best_ratio, 0.0, 1e-15);
}

TEST(MaximizeRatio, Thm1PauliZMatchesGridOracle) {
  const double grid = oracle::grid_max(oracle::thm1_upper_ratio_z);
  for (bool diagonal : {true, false}) {
    SearchConfig c = thm1_z_config();
    c.diagonal_only = diagonal;
    const SearchResult r = maximize_ratio(c);
    EXPECT_NEAR(r.best_ratio, grid, 1e-3) << "diagonal=" << diagonal;
    EXPECT_GE(r.best_ratio, grid - 1e-9);
    EXPECT_EQ(r.status, SearchStatus::Ok);
  }
}

TEST(MaximizeRatio, EntropyLinearMatchesGridOracle) {
  const double grid = oracle::grid_max(oracle::entropy_linear_ratio);
  SearchConfig c;
  c.bound = BoundId::EntropyGeLinear;
  c.dim = 2;
  c.restarts = 4;
  c.seed = 3;
  const SearchResult r = maximize_ratio(c);
  EXPECT_NEAR(r.best_ratio, grid, 1e-3);
  EXPECT_TRUE(r.witness_observables.empty());
}

TEST(MaximizeRatio, WitnessReverifies) {
  for (BoundId id : {BoundId::Thm1Upper, BoundId::Thm3Full, BoundId::Cor1Product, BoundId::Cor2SumN}) {
    SearchConfig c;
    c.bound = id;
    c.dim = 3;
    c.restarts = 3;
    c.max_iterations = 600;
    c.seed = 11;
    const SearchResult r = maximize_ratio(c);
    const BoundReport report = check_all(r.witness_observables, *r.witness_state);
    bool found = false;
    for (const BoundCheck& chk : report.checks) {
      if (chk.id != id || (chk.observable && *chk.observable != 0)) continue;
      ASSERT_TRUE(chk.ratio.has_value());
      EXPECT_NEAR(*chk.ratio, r.best_ratio, 1e-9) << to_string(id);
      found = true;
    }
    EXPECT_TRUE(found) << to_string(id);
    EXPECT_LE(r.best_ratio, 1.0 + 1e-9);
    for (const Observable& a : r.witness_observables) EXPECT_NEAR(a.matrix().norm(), 1.0, 1e-12);
  }
}

TEST(MaximizeRatio, DeterministicAcrossThreadCounts) {
  SearchConfig c;
  c.bound = BoundId::Thm3Weak;
  c.dim = 2;
  c.restarts = 5;
  c.max_iterations = 400;
  c.seed = 21;
  const SearchResult one = maximize_ratio(c);
  c.threads = 3;
  const SearchResult three = maximize_ratio(c);
  EXPECT_EQ(one.best_ratio, three.best_ratio);
  EXPECT_EQ(one.restart_index_of_best, three.restart_index_of_best);
  EXPECT_EQ(one.evaluations, three.evaluations);
}

TEST(MaximizeRatio, BeatsRandomSampling) {
  const int d = 3;
  double sampled = 0.0;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    CounterRng rng = CounterRng::substream(99, i);
    const DensityMatrix rho = hilbert_schmidt_density(d, rng);
    const std::vector<Observable> obs{gue_observable(d, rng)};
    const BoundCheck chk = evaluate_bound(BoundId::Thm1Upper, obs, rho);
    if (chk.ratio) sampled = std::max(sampled, *chk.ratio);
  }
  SearchConfig c;
  c.bound = BoundId::Thm1Upper;
  c.dim = d;
  c.restarts = 4;
  c.seed = 5;
  EXPECT_GE(maximize_ratio(c).best_ratio, sampled - 1e-6);
}

TEST(MaximizeRatio, ConfigValidation) {
  SearchConfig c;
  c.bound = BoundId::TraceProduct;
  EXPECT_THROW(maximize_ratio(c), InvalidParameter);
  c.bound = BoundId::Thm2Dim;
  c.observable_ensemble = EnsembleKind::GueObservable;
  EXPECT_THROW(c.validate(), NotPSD);
  c.observable_ensemble.reset();
  EXPECT_NO_THROW(c.validate());
  c.restarts = 0;
  EXPECT_THROW(c.validate(), InvalidParameter);
  c.restarts = 1;
  c.dim = 1;
  EXPECT_THROW(c.validate(), InvalidDimension);
  c.dim = 2;
  c.fixed_observables = {Observable(oracle::pauli_z())};
  EXPECT_THROW(c.validate(), NotPSD);
  c.bound = BoundId::Cor2ProductN;
  c.n_observables = 1;
  EXPECT_THROW(c.validate(), TooFewObservables);
}

TEST(ScanDimension, Cor1StaysBelowOne) {
  SearchConfig c;
  c.restarts = 2;
  c.max_iterations = 800;
  c.seed = 4;
  const std::vector<SearchResult> table = scan_dimension(BoundId::Cor1Product, 2, 8, c);
  ASSERT_EQ(table.size(), 7u);
  for (std::size_t k = 0; k < table.size(); ++k) {
    EXPECT_EQ(table[k].dim, static_cast<int>(k) + 2);
    EXPECT_LT(table[k].best_ratio, 1.0);
  }
}

TEST(ScanDimension, Thm2TrendDecreases) {
  SearchConfig c;
  c.restarts = 4;
  c.max_iterations = 1500;
  c.seed = 8;
  const std::vector<SearchResult> table = scan_dimension(BoundId::Thm2Dim, 2, 5, c);
  for (std::size_t k = 1; k < table.size(); ++k) {
    EXPECT_LT(table[k].best_ratio, table[k - 1].best_ratio) << "d=" << table[k].dim;
  }
}

TEST(ScanDimension, SingleRowAndErrors) {
  SearchConfig c;
  c.restarts = 1;
  c.max_iterations = 50;
  EXPECT_EQ(scan_dimension(BoundId::Thm1Lower, 2, 2, c).size(), 1u);
  EXPECT_THROW(scan_dimension(BoundId::Thm1Lower, 1, 3, c), InvalidDimension);
  EXPECT_THROW(scan_dimension(BoundId::Thm1Lower, 4, 3, c), InvalidDimension);
}

TEST(Roundtrip17g, IsExactForDoubles) {
  oracle::TestRng rng(1);
  const oracle::Mat m = rng.box_matrix(5);
  EXPECT_EQ(max_abs_diff(roundtrip_17g(m), m), 0.0);
}

}  // namespace
}  // namespace entbound

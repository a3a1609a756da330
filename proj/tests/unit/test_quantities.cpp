#include <cmath>

#include <gtest/gtest.h>

#include "entbound/errors.hpp"
#include "entbound/quantities.hpp"
#include "oracles.hpp"

namespace entbound {
namespace {

DensityMatrix random_state(oracle::TestRng& rng, int d, int rank) {
  return DensityMatrix(rng.density(d, rank));
}

/// Hermitian with a prescribed, possibly degenerate, spectrum.
Observable with_spectrum(oracle::TestRng& rng, const std::vector<double>& eigenvalues) {
  const int d = static_cast<int>(eigenvalues.size());
  const ComplexMatrix u = rng.unitary(d);
  Eigen::VectorXd lam(d);
  for (int i = 0; i < d; ++i) lam(i) = eigenvalues[static_cast<std::size_t>(i)];
  const ComplexMatrix a = u * lam.asDiagonal() * u.adjoint();
  return Observable(0.5 * (a + a.adjoint()));
}

const DensityMatrix kMixed = DensityMatrix::maximally_mixed(2);
const DensityMatrix kKet0 = DensityMatrix::basis_state(2, 0);
const DensityMatrix kDiag7525(oracle::diag({0.75, 0.25}));

TEST(Entropy, Examples) {
  EXPECT_NEAR(von_neumann_entropy(kMixed), 1.0, 1e-15);
  EXPECT_EQ(von_neumann_entropy(kKet0), 0.0);
  // Frozen from the scalar binary-entropy formula at p = 0.25.
  EXPECT_NEAR(von_neumann_entropy(kDiag7525), 0.811278124459, 1e-12);
  EXPECT_NEAR(von_neumann_entropy(kDiag7525), oracle::binary_entropy(0.25), 1e-14);
}

TEST(Entropy, RandomPureStatesAreZero) {
  oracle::TestRng rng(4);
  for (int d : {2, 3, 8, 16}) {
    EXPECT_NEAR(von_neumann_entropy(random_state(rng, d, 1)), 0.0, 1e-9) << "d=" << d;
  }
}

TEST(Entropy, MatchesShannonForDiagonalStates) {
  oracle::TestRng rng(8);
  for (int rep = 0; rep < 100; ++rep) {
    const int d = rng.integer(2, 10);
    std::vector<double> p(static_cast<std::size_t>(d));
    double total = 0;
    for (double& x : p) total += (x = rng.uniform(0, 1));
    ComplexMatrix m = ComplexMatrix::Zero(d, d);
    for (int i = 0; i < d; ++i) m(i, i) = (p[static_cast<std::size_t>(i)] /= total);
    EXPECT_NEAR(von_neumann_entropy(DensityMatrix(m)), oracle::shannon_bits(p), 1e-12);
  }
}

TEST(Purity, Examples) {
  EXPECT_DOUBLE_EQ(purity(kMixed), 0.5);
  EXPECT_DOUBLE_EQ(purity(kKet0), 1.0);
  EXPECT_DOUBLE_EQ(purity(kDiag7525), 0.625);
}

TEST(LinearEntropy, Examples) {
  EXPECT_DOUBLE_EQ(linear_entropy(kKet0), 0.0);
  EXPECT_DOUBLE_EQ(linear_entropy(kMixed), 0.5);
  EXPECT_DOUBLE_EQ(linear_entropy(kDiag7525), 0.375);
}

TEST(Expectation, Examples) {
  const Observable z(oracle::pauli_z());
  const Observable x(oracle::pauli_x());
  EXPECT_DOUBLE_EQ(expectation(z, kMixed), 0.0);
  EXPECT_DOUBLE_EQ(expectation(z, kKet0), 1.0);
  EXPECT_DOUBLE_EQ(expectation(x, kDiag7525), 0.0);
}

TEST(Variance, Examples) {
  const Observable z(oracle::pauli_z());
  EXPECT_DOUBLE_EQ(variance(z, kMixed), 1.0);
  EXPECT_DOUBLE_EQ(variance(z, kKet0), 0.0);
  const DensityMatrix rho(oracle::diag({0.3, 0.7}));
  EXPECT_NEAR(variance(Observable(oracle::diag({1, 0})), rho), 0.21, 1e-15);
}

TEST(VarianceOracle, Examples) {
  EXPECT_DOUBLE_EQ(variance_oracle_projective(Observable(oracle::pauli_z()), kMixed), 1.0);
  oracle::TestRng rng(2);
  EXPECT_NEAR(variance_oracle_projective(Observable(oracle::identity(4)), random_state(rng, 4, 4)),
              0.0, 1e-15);
  EXPECT_NEAR(variance_oracle_projective(Observable(oracle::pauli_x()), kKet0), 1.0, 1e-15);
}

TEST(Quantities, DimensionMismatch) {
  const Observable z(oracle::pauli_z());
  const DensityMatrix rho3 = DensityMatrix::maximally_mixed(3);
  EXPECT_THROW(expectation(z, rho3), DimensionMismatch);
  EXPECT_THROW(variance(z, rho3), DimensionMismatch);
  EXPECT_THROW(variance_oracle_projective(z, rho3), DimensionMismatch);
}

TEST(DensityMatrixType, Validation) {
  EXPECT_THROW(DensityMatrix(oracle::diag({0.6, 0.6})), NotDensityMatrix);
  EXPECT_THROW(DensityMatrix(oracle::diag({1.5, -0.5})), NotDensityMatrix);
  EXPECT_THROW(DensityMatrix(oracle::pauli_y() + oracle::identity(2)), NotDensityMatrix);
  ComplexMatrix asym = 0.5 * oracle::identity(2);
  asym(0, 1) = 0.1;
  EXPECT_THROW(DensityMatrix{asym}, NotHermitian);
}

TEST(DensityMatrixType, ClampsRoundOffNegatives) {
  const DensityMatrix rho(oracle::diag({1.0 + 5e-11, -5e-11}));
  EXPECT_EQ(rho.spectrum().eigenvalues(1), 0.0);
  EXPECT_NEAR(von_neumann_entropy(rho), 0.0, 1e-9);
}

TEST(ObservableType, PsdCertification) {
  EXPECT_TRUE(Observable(oracle::diag({1, 0})).psd_certified());
  EXPECT_TRUE(Observable(oracle::diag({1, -5e-11})).psd_certified());
  EXPECT_FALSE(Observable(oracle::pauli_z()).psd_certified());
  const Observable a(oracle::diag({2, -1, 0.5}));
  EXPECT_DOUBLE_EQ(a.trace(), 1.5);
  EXPECT_DOUBLE_EQ(a.trace_abs(), 3.5);
  EXPECT_DOUBLE_EQ(a.trace_of_square(), 5.25);
}

TEST(QuantityProperties, UnitaryInvariance) {
  oracle::TestRng rng(17);
  for (int rep = 0; rep < 1000; ++rep) {
    const int d = rng.integer(2, 10);
    const DensityMatrix rho = random_state(rng, d, rng.integer(1, d));
    const ComplexMatrix u = rng.unitary(d);
    ComplexMatrix rotated = u * rho.matrix() * u.adjoint();
    rotated = 0.5 * (rotated + rotated.adjoint());
    const DensityMatrix rho_u(rotated / rotated.trace().real());
    EXPECT_NEAR(von_neumann_entropy(rho_u), von_neumann_entropy(rho), 1e-8);
    EXPECT_NEAR(purity(rho_u), purity(rho), 1e-8);
  }
}

TEST(QuantityProperties, EntropyDominatesLinearEntropy) {
  oracle::TestRng rng(23);
  for (int rep = 0; rep < 5000; ++rep) {
    const int d = rng.integer(2, 16);
    const StateQuantities q = state_quantities(random_state(rng, d, rng.integer(1, d)));
    EXPECT_GE(q.entropy_bits, q.linear_entropy - 1e-9);
    EXPECT_LE(q.entropy_bits, std::log2(d) + 1e-9);
    EXPECT_NEAR(q.linear_entropy, 1.0 - q.purity, 1e-12);
  }
}

TEST(QuantityProperties, VarianceMatchesProjectiveOracle) {
  oracle::TestRng rng(31);
  double worst = 0.0;
  for (int rep = 0; rep < 10000; ++rep) {
    const int d = 2 + rep % 15;
    std::vector<double> lam(static_cast<std::size_t>(d));
    for (double& l : lam) l = rng.uniform(-2, 2);
    if (rep % 3 == 0) lam[1] = lam[0];            // exact degeneracy
    if (rep % 3 == 1) lam[1] = lam[0] + 3e-9;     // below the merge gap
    const Observable a = with_spectrum(rng, lam);
    const DensityMatrix rho = random_state(rng, d, rng.integer(1, d));
    const double v = variance(a, rho);
    worst = std::max(worst, std::abs(v - variance_oracle_projective(a, rho)));
    EXPECT_NEAR(v, oracle::naive_variance(a.matrix(), rho.matrix()), 1e-9);
  }
  EXPECT_LE(worst, 1e-8);
}

TEST(QuantityProperties, ExpectationWithinSpectralEnvelope) {
  oracle::TestRng rng(41);
  for (int rep = 0; rep < 2000; ++rep) {
    const int d = rng.integer(2, 12);
    const Observable a(rng.hermitian(d));
    const double m = expectation(a, random_state(rng, d, rng.integer(1, d)));
    EXPECT_LE(m, a.spectrum().eigenvalues(0) + 1e-9);
    EXPECT_GE(m, a.spectrum().eigenvalues(d - 1) - 1e-9);
  }
}

TEST(QuantityProperties, Extremes) {
  oracle::TestRng rng(43);
  for (int d = 2; d <= 32; ++d) {
    const StateQuantities pure = state_quantities(random_state(rng, d, 1));
    EXPECT_NEAR(pure.purity, 1.0, 1e-9);
    EXPECT_NEAR(pure.entropy_bits, 0.0, 1e-9);
    const StateQuantities mixed = state_quantities(DensityMatrix::maximally_mixed(d));
    EXPECT_NEAR(mixed.purity, 1.0 / d, 1e-9);
    EXPECT_NEAR(mixed.entropy_bits, std::log2(d), 1e-9);
  }
}

}  // namespace
}  // namespace entbound

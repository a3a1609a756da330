#include <cmath>
#include <cstring>
#include <set>

#include <gtest/gtest.h>

#include "entbound/ensembles.hpp"
#include "entbound/errors.hpp"
#include "oracles.hpp"

namespace entbound {
namespace {

bool bit_identical(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (std::memcmp(&a.data()[i], &b.data()[i], sizeof(Complex)) != 0) return false;
  }
  return true;
}

// Frozen from a separate Python implementation of the generator.
TEST(CounterRngTest, KnownOutputs) {
  EXPECT_EQ(splitmix64_mix(0x9E3779B97F4A7C15ULL), 0xE220A8397B1DCDAFULL);
  CounterRng a(42, 0);
  EXPECT_EQ(a.next_u64(), 0x196E01EBA8E0A0D4ULL);
  EXPECT_EQ(a.next_u64(), 0xF9C2C0931CD997A5ULL);
  EXPECT_EQ(a.next_u64(), 0x1F1625417745045FULL);
  CounterRng b = CounterRng::substream(42, 1);
  EXPECT_EQ(b.next_u64(), 0x779502FF5139D4E3ULL);
  CounterRng c(7, 3);
  EXPECT_EQ(c.next_u64(), 0x4406C1F28198D704ULL);
  EXPECT_EQ(c.position(), 1u);
}

TEST(CounterRngTest, Moments) {
  CounterRng rng(99);
  double sum = 0, sq = 0, csq = 0, umin = 1, umax = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sq += x * x;
    csq += std::norm(rng.complex_normal());
    const double u = rng.uniform();
    umin = std::min(umin, u);
    umax = std::max(umax, u);
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sq / n, 1.0, 0.01);
  EXPECT_NEAR(csq / n, 1.0, 0.01);
  EXPECT_GE(umin, 0.0);
  EXPECT_LT(umax, 1.0);
}

TEST(HaarPure, DeterministicAndPure) {
  EXPECT_TRUE(bit_identical(haar_pure_state(2, 42).matrix(), haar_pure_state(2, 42).matrix()));
  EXPECT_FALSE(bit_identical(haar_pure_state(2, 42).matrix(), haar_pure_state(2, 43).matrix()));
  for (std::uint64_t s = 0; s < 200; ++s) {
    EXPECT_NEAR(purity(haar_pure_state(2 + static_cast<int>(s % 7), s)), 1.0, 1e-10);
  }
}

TEST(HaarPure, MeanIsMaximallyMixed) {
  for (int d : {2, 3, 5}) {
    ComplexMatrix mean = ComplexMatrix::Zero(d, d);
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
      CounterRng rng = CounterRng::substream(5, static_cast<std::uint64_t>(i));
      mean += haar_pure_state(d, rng).matrix();
    }
    mean /= n;
    const ComplexMatrix dev = mean - oracle::identity(d) / d;
    EXPECT_LE(dev.cwiseAbs().maxCoeff(), 0.02) << "d=" << d;
  }
}

TEST(HilbertSchmidt, ValidAndDeterministic) {
  EXPECT_TRUE(bit_identical(hilbert_schmidt_density(3, 8).matrix(),
                            hilbert_schmidt_density(3, 8).matrix()));
  for (std::uint64_t s = 0; s < 100; ++s) {
    const DensityMatrix rho = hilbert_schmidt_density(4, s);
    EXPECT_GT(rho.spectrum().eigenvalues(3), 1e-10);
  }
}

double mean_purity_hs2(std::uint64_t seed, int n) {
  double total = 0;
  for (int i = 0; i < n; ++i) {
    CounterRng rng = CounterRng::substream(seed, static_cast<std::uint64_t>(i));
    total += purity(hilbert_schmidt_density(2, rng));
  }
  return total / n;
}

TEST(HilbertSchmidt, MeanPurityQubit) {
  // Exact value for the square Ginibre construction at d = 2 is 4/5.
  const double m = mean_purity_hs2(1, 10000);
  EXPECT_NEAR(m, 0.8, 0.02);
  EXPECT_NEAR(m, mean_purity_hs2(987654321, 40000), 0.02);
}

TEST(RankK, Examples) {
  EXPECT_NEAR(purity(rank_k_density(5, 1, 3)), 1.0, 1e-9);
  const DensityMatrix full = rank_k_density(4, 4, 3);
  EXPECT_GT(full.spectrum().eigenvalues(3), 1e-10);
  for (std::uint64_t s = 0; s < 50; ++s) {
    const DensityMatrix rho = rank_k_density(4, 2, s);
    const auto& ev = rho.spectrum().eigenvalues;
    int above = 0;
    for (int i = 0; i < 4; ++i) above += ev(i) > 1e-10;
    EXPECT_EQ(above, 2);
  }
  EXPECT_THROW(rank_k_density(3, 0, 1), InvalidRank);
  EXPECT_THROW(rank_k_density(3, 4, 1), InvalidRank);
}

TEST(ObservableEnsembles, Structure) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const int d = 2 + static_cast<int>(s % 9);
    const Observable p = psd_observable(d, s);
    EXPECT_GE(p.spectrum().eigenvalues(d - 1), -1e-10);
    EXPECT_TRUE(p.psd_certified());

    const Observable g = gue_observable(d, s);
    EXPECT_LE((g.matrix() - g.matrix().adjoint()).cwiseAbs().maxCoeff(), 1e-12);

    const Observable diag = diagonal_observable(d, s);
    for (int i = 0; i < d; ++i) {
      EXPECT_EQ(diag.matrix()(i, i).imag(), 0.0);
      EXPECT_GE(diag.matrix()(i, i).real(), -1.0);
      EXPECT_LE(diag.matrix()(i, i).real(), 1.0);
      for (int j = 0; j < d; ++j) {
        if (i != j) EXPECT_EQ(diag.matrix()(i, j), Complex(0.0, 0.0));
      }
    }
  }
}

TEST(HaarUnitaryTest, IsUnitary) {
  CounterRng rng(12);
  for (int d : {2, 5, 16}) {
    const ComplexMatrix u = haar_unitary(d, rng);
    EXPECT_LE((u.adjoint() * u - oracle::identity(d)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Interpolated, Examples) {
  const DensityMatrix ket0 = DensityMatrix::basis_state(2, 0);
  const DensityMatrix half = interpolated_state(ket0, 0.5);
  EXPECT_LE((half.matrix() - oracle::diag({0.75, 0.25})).cwiseAbs().maxCoeff(), 1e-15);
  const DensityMatrix psi = haar_pure_state(5, 3);
  EXPECT_NEAR(purity(interpolated_state(psi, 1.0)), 1.0, 1e-12);
  EXPECT_NEAR(purity(interpolated_state(psi, 0.0)), 0.2, 1e-12);
}

TEST(Interpolated, Errors) {
  const DensityMatrix ket0 = DensityMatrix::basis_state(2, 0);
  EXPECT_THROW(interpolated_state(ket0, -0.1), InvalidParameter);
  EXPECT_THROW(interpolated_state(ket0, 1.5), InvalidParameter);
  EXPECT_THROW(interpolated_state(ket0, std::nan("")), InvalidParameter);
  EXPECT_THROW(interpolated_state(DensityMatrix::maximally_mixed(2), 0.5), InvalidParameter);
}

TEST(Sampling, StreamIndependence) {
  EnsembleSpec short_run{EnsembleKind::HilbertSchmidtMixed, 3, 1, 77, 10};
  EnsembleSpec long_run = short_run;
  long_run.count = 100000;
  for (std::uint64_t i = 0; i < 10; ++i) {
    EXPECT_TRUE(bit_identical(sample_state(short_run, i).matrix(), sample_state(long_run, i).matrix()));
  }
  EnsembleSpec obs{EnsembleKind::GueObservable, 3, 1, 77, 5};
  std::set<double> firsts;
  for (std::uint64_t i = 0; i < 5; ++i) firsts.insert(sample_observable(obs, i).matrix()(0, 0).real());
  EXPECT_EQ(firsts.size(), 5u);
}

TEST(Sampling, DrawMatchesDirectGenerator) {
  EnsembleSpec spec{EnsembleKind::RankKMixed, 4, 2, 0, 1};
  CounterRng a(9), b(9);
  EXPECT_TRUE(bit_identical(draw_state(spec, a).matrix(), rank_k_density(4, 2, b).matrix()));
  spec.kind = EnsembleKind::PsdObservable;
  EXPECT_TRUE(bit_identical(draw_observable(spec, a).matrix(), psd_observable(4, b).matrix()));
  spec.kind = EnsembleKind::GueObservable;
  EXPECT_THROW(draw_state(spec, a), InvalidParameter);
}

TEST(EnsembleSpecTest, Validation) {
  EnsembleSpec ok{EnsembleKind::RankKMixed, 4, 2, 0, 1};
  EXPECT_NO_THROW(ok.validate());
  EnsembleSpec bad_rank = ok;
  bad_rank.rank = 5;
  EXPECT_THROW(bad_rank.validate(), InvalidRank);
  EnsembleSpec bad_dim = ok;
  bad_dim.dim = 1;
  EXPECT_THROW(bad_dim.validate(), InvalidDimension);
  EnsembleSpec bad_count = ok;
  bad_count.count = 0;
  EXPECT_THROW(bad_count.validate(), InvalidParameter);
}

TEST(EnsembleKindNames, Parse) {
  EXPECT_EQ(parse_ensemble_kind("hs"), EnsembleKind::HilbertSchmidtMixed);
  EXPECT_EQ(parse_ensemble_kind("GUE_OBSERVABLE"), EnsembleKind::GueObservable);
  EXPECT_EQ(parse_ensemble_kind(to_string(EnsembleKind::HaarPure)), EnsembleKind::HaarPure);
  EXPECT_FALSE(parse_ensemble_kind("bures").has_value());
  EXPECT_TRUE(is_state_ensemble(EnsembleKind::RankKMixed));
  EXPECT_FALSE(is_state_ensemble(EnsembleKind::DiagonalObservable));
}

}  // namespace
}  // namespace entbound

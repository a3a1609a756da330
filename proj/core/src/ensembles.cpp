#include "entbound/ensembles.hpp"

#include <cctype>
#include <cmath>
#include <string>

#include "entbound/errors.hpp"

namespace entbound {

std::string_view to_string(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::HaarPure: return "HAAR_PURE";
    case EnsembleKind::HilbertSchmidtMixed: return "HILBERT_SCHMIDT_MIXED";
    case EnsembleKind::RankKMixed: return "RANK_K_MIXED";
    case EnsembleKind::GueObservable: return "GUE_OBSERVABLE";
    case EnsembleKind::PsdObservable: return "PSD_OBSERVABLE";
    case EnsembleKind::DiagonalObservable: return "DIAGONAL_OBSERVABLE";
  }
  return "UNKNOWN";
}

std::optional<EnsembleKind> parse_ensemble_kind(std::string_view text) {
  std::string key;
  for (char c : text) {
    key.push_back(c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  struct Alias {
    std::string_view name;
    EnsembleKind kind;
  };
  static constexpr Alias aliases[] = {
      {"HAAR_PURE", EnsembleKind::HaarPure},
      {"HAAR", EnsembleKind::HaarPure},
      {"HILBERT_SCHMIDT_MIXED", EnsembleKind::HilbertSchmidtMixed},
      {"HS", EnsembleKind::HilbertSchmidtMixed},
      {"RANK_K_MIXED", EnsembleKind::RankKMixed},
      {"RANK_K", EnsembleKind::RankKMixed},
      {"GUE_OBSERVABLE", EnsembleKind::GueObservable},
      {"GUE", EnsembleKind::GueObservable},
      {"PSD_OBSERVABLE", EnsembleKind::PsdObservable},
      {"PSD", EnsembleKind::PsdObservable},
      {"DIAGONAL_OBSERVABLE", EnsembleKind::DiagonalObservable},
      {"DIAGONAL", EnsembleKind::DiagonalObservable},
  };
  for (const auto& a : aliases) {
    if (a.name == key) return a.kind;
  }
  return std::nullopt;
}

bool is_state_ensemble(EnsembleKind kind) {
  return kind == EnsembleKind::HaarPure || kind == EnsembleKind::HilbertSchmidtMixed ||
         kind == EnsembleKind::RankKMixed;
}

void EnsembleSpec::validate() const {
  if (dim < 2) throw InvalidDimension("ensemble dimension must be >= 2, got " + std::to_string(dim));
  if (kind == EnsembleKind::RankKMixed && (rank < 1 || rank > dim)) {
    throw InvalidRank("rank must satisfy 1 <= k <= d, got k=" + std::to_string(rank));
  }
  if (count < 1) throw InvalidParameter("ensemble count must be >= 1");
}

namespace {

void require_dim(int d) {
  if (d < 2) throw InvalidDimension("ensemble dimension must be >= 2, got " + std::to_string(d));
}

DensityMatrix normalized_gram(const ComplexMatrix& g) {
  ComplexMatrix rho = g * g.adjoint();
  rho = 0.5 * (rho + rho.adjoint());
  rho /= rho.trace().real();
  return DensityMatrix(rho);
}

}  // namespace

ComplexMatrix ginibre(int rows, int cols, CounterRng& rng) {
  ComplexMatrix g(rows, cols);
  // Row-major fill so the draw order is independent of storage order.
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) g(i, j) = rng.complex_normal();
  }
  return g;
}

ComplexMatrix haar_unitary(int d, CounterRng& rng) {
  require_dim(d);
  const ComplexMatrix g = ginibre(d, d, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

DensityMatrix haar_pure_state(int d, CounterRng& rng) {
  require_dim(d);
  Eigen::VectorXcd psi(d);
  for (int i = 0; i < d; ++i) psi(i) = rng.complex_normal();
  return DensityMatrix::pure(psi);
}

DensityMatrix haar_pure_state(int d, std::uint64_t seed) {
  CounterRng rng(seed);
  return haar_pure_state(d, rng);
}

DensityMatrix hilbert_schmidt_density(int d, CounterRng& rng) {
  require_dim(d);
  return normalized_gram(ginibre(d, d, rng));
}

DensityMatrix hilbert_schmidt_density(int d, std::uint64_t seed) {
  CounterRng rng(seed);
  return hilbert_schmidt_density(d, rng);
}

DensityMatrix rank_k_density(int d, int k, CounterRng& rng) {
  require_dim(d);
  if (k < 1 || k > d) {
    throw InvalidRank("rank must satisfy 1 <= k <= d, got k=" + std::to_string(k) +
                      ", d=" + std::to_string(d));
  }
  return normalized_gram(ginibre(d, k, rng));
}

DensityMatrix rank_k_density(int d, int k, std::uint64_t seed) {
  CounterRng rng(seed);
  return rank_k_density(d, k, rng);
}

Observable gue_observable(int d, CounterRng& rng) {
  require_dim(d);
  const ComplexMatrix h = ginibre(d, d, rng);
  return Observable(0.5 * (h + h.adjoint()));
}

Observable gue_observable(int d, std::uint64_t seed) {
  CounterRng rng(seed);
  return gue_observable(d, rng);
}

Observable psd_observable(int d, CounterRng& rng) {
  require_dim(d);
  const ComplexMatrix b = ginibre(d, d, rng);
  ComplexMatrix a = b.adjoint() * b;
  return Observable(0.5 * (a + a.adjoint()));
}

Observable psd_observable(int d, std::uint64_t seed) {
  CounterRng rng(seed);
  return psd_observable(d, rng);
}

Observable diagonal_observable(int d, CounterRng& rng) {
  require_dim(d);
  ComplexMatrix a = ComplexMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) a(i, i) = rng.uniform(-1.0, 1.0);
  return Observable(a);
}

Observable diagonal_observable(int d, std::uint64_t seed) {
  CounterRng rng(seed);
  return diagonal_observable(d, rng);
}

DensityMatrix interpolated_state(const DensityMatrix& psi, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidParameter("interpolation parameter must lie in [0, 1], got " + std::to_string(p));
  }
  if (std::abs(purity(psi) - 1.0) > 1e-9) {
    throw InvalidParameter("interpolated_state requires a pure state");
  }
  const int d = psi.dim();
  const ComplexMatrix mixed = ComplexMatrix::Identity(d, d) / static_cast<double>(d);
  return DensityMatrix(p * psi.matrix() + (1.0 - p) * mixed);
}

DensityMatrix draw_state(const EnsembleSpec& spec, CounterRng& rng) {
  switch (spec.kind) {
    case EnsembleKind::HaarPure: return haar_pure_state(spec.dim, rng);
    case EnsembleKind::HilbertSchmidtMixed: return hilbert_schmidt_density(spec.dim, rng);
    case EnsembleKind::RankKMixed: return rank_k_density(spec.dim, spec.rank, rng);
    default: break;
  }
  throw InvalidParameter(std::string(to_string(spec.kind)) + " is not a state ensemble");
}

Observable draw_observable(const EnsembleSpec& spec, CounterRng& rng) {
  switch (spec.kind) {
    case EnsembleKind::GueObservable: return gue_observable(spec.dim, rng);
    case EnsembleKind::PsdObservable: return psd_observable(spec.dim, rng);
    case EnsembleKind::DiagonalObservable: return diagonal_observable(spec.dim, rng);
    default: break;
  }
  throw InvalidParameter(std::string(to_string(spec.kind)) + " is not an observable ensemble");
}

DensityMatrix sample_state(const EnsembleSpec& spec, std::uint64_t index) {
  CounterRng rng = CounterRng::substream(spec.seed, index);
  return draw_state(spec, rng);
}

Observable sample_observable(const EnsembleSpec& spec, std::uint64_t index) {
  CounterRng rng = CounterRng::substream(spec.seed, index);
  return draw_observable(spec, rng);
}

}  // namespace entbound

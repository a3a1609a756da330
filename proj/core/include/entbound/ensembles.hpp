#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "entbound/quantities.hpp"
#include "entbound/random.hpp"

namespace entbound {

enum class EnsembleKind {
  HaarPure,
  HilbertSchmidtMixed,
  RankKMixed,
  GueObservable,
  PsdObservable,
  DiagonalObservable,
};

std::string_view to_string(EnsembleKind kind);
/// Canonical names ("HILBERT_SCHMIDT_MIXED") or short forms: haar, hs, rank-k, gue, psd, diagonal.
std::optional<EnsembleKind> parse_ensemble_kind(std::string_view text);
bool is_state_ensemble(EnsembleKind kind);

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::HilbertSchmidtMixed;
  int dim = 2;
  /// Only used by RANK_K_MIXED.
  int rank = 1;
  std::uint64_t seed = 0;
  std::uint64_t count = 1;

  /// Throws InvalidDimension, InvalidRank or InvalidParameter.
  void validate() const;
};

/// d x k matrix of independent circular complex normals.
ComplexMatrix ginibre(int rows, int cols, CounterRng& rng);

/// Haar-random d x d unitary: QR of a Ginibre matrix with R's diagonal phases removed.
ComplexMatrix haar_unitary(int d, CounterRng& rng);

DensityMatrix haar_pure_state(int d, CounterRng& rng);
DensityMatrix haar_pure_state(int d, std::uint64_t seed);

/// G G^dagger / Tr(G G^dagger), G square Ginibre.
DensityMatrix hilbert_schmidt_density(int d, CounterRng& rng);
DensityMatrix hilbert_schmidt_density(int d, std::uint64_t seed);

/// G G^dagger / Tr(G G^dagger), G of shape d x k. Throws InvalidRank unless 1 <= k <= d.
DensityMatrix rank_k_density(int d, int k, CounterRng& rng);
DensityMatrix rank_k_density(int d, int k, std::uint64_t seed);

/// (H + H^dagger) / 2, H Ginibre.
Observable gue_observable(int d, CounterRng& rng);
Observable gue_observable(int d, std::uint64_t seed);

/// B^dagger B, B Ginibre.
Observable psd_observable(int d, CounterRng& rng);
Observable psd_observable(int d, std::uint64_t seed);

/// Real diagonal with entries uniform in [-1, 1].
Observable diagonal_observable(int d, CounterRng& rng);
Observable diagonal_observable(int d, std::uint64_t seed);

/// p psi + (1 - p) I/d for a pure psi and p in [0, 1]. Throws InvalidParameter.
DensityMatrix interpolated_state(const DensityMatrix& psi, double p);

/// Draws one state or observable of `spec.kind` from `rng`.
DensityMatrix draw_state(const EnsembleSpec& spec, CounterRng& rng);
Observable draw_observable(const EnsembleSpec& spec, CounterRng& rng);

/// Sample `index` of the run described by spec, drawn from its own substream,
/// so it does not depend on spec.count or on any other sample.
DensityMatrix sample_state(const EnsembleSpec& spec, std::uint64_t index);
Observable sample_observable(const EnsembleSpec& spec, std::uint64_t index);

}  // namespace entbound

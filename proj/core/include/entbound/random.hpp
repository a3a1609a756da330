#pragma once

#include <cstdint>
#include <limits>

#include "entbound/linalg.hpp"

namespace entbound {

/// SplitMix64 finalizer.
std::uint64_t splitmix64_mix(std::uint64_t z) noexcept;

/// Counter-based SplitMix64 stream ("splitmix64-ctr").
///
/// Output k (k = 0, 1, ...) of a stream with key K is
/// splitmix64_mix(K + (k + 1) * 0x9E3779B97F4A7C15), so any output can be
/// reproduced from (key, k) alone. Stream keys derive from (seed, stream index)
/// as splitmix64_mix(splitmix64_mix(seed) ^ (index * 0xD1B54A32D192ED03 + 1)).
/// Gaussians use the trigonometric Box-Muller map on two consecutive uniforms, with
/// no rejection step, so every sample consumes a fixed number of outputs.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

  /// Independent stream for sample `index` of a run seeded with `seed`.
  static CounterRng substream(std::uint64_t seed, std::uint64_t index) noexcept {
    return CounterRng(seed, index);
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }
  result_type operator()() noexcept { return next_u64(); }

  std::uint64_t next_u64() noexcept;
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Standard normal, N(0, 1).
  double normal() noexcept;
  /// Circular complex normal with E|z|^2 = 1.
  Complex complex_normal() noexcept;

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t position() const noexcept { return counter_; }

 private:
  /// Uniform on (0, 1].
  double uniform_open_low() noexcept;

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace entbound

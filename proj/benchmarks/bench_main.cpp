#include <benchmark/benchmark.h>

#include <vector>

#include "entbound/bounds.hpp"
#include "entbound/ensembles.hpp"
#include "entbound/search.hpp"

namespace {

using namespace entbound;

void BM_Eigendecompose(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const Observable a = gue_observable(d, std::uint64_t{1});
  for (auto _ : state) {
    benchmark::DoNotOptimize(hermitian_eigendecompose(validate_hermitian(a.matrix())));
  }
}
BENCHMARK(BM_Eigendecompose)->RangeMultiplier(2)->Range(2, 64);

void BM_CheckAll(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const DensityMatrix rho = hilbert_schmidt_density(d, std::uint64_t{2});
  const std::vector<Observable> obs{psd_observable(d, std::uint64_t{3}),
                                    gue_observable(d, std::uint64_t{4})};
  for (auto _ : state) benchmark::DoNotOptimize(check_all(obs, rho));
}
BENCHMARK(BM_CheckAll)->RangeMultiplier(2)->Range(2, 16);

void BM_SampleTrial(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  std::uint64_t i = 0;
  for (auto _ : state) {
    CounterRng rng = CounterRng::substream(5, i++);
    const DensityMatrix rho = hilbert_schmidt_density(d, rng);
    const std::vector<Observable> obs{gue_observable(d, rng)};
    benchmark::DoNotOptimize(check_all(obs, rho));
  }
}
BENCHMARK(BM_SampleTrial)->Arg(2)->Arg(8);

void BM_Search(benchmark::State& state) {
  SearchConfig c;
  c.bound = BoundId::Thm1Upper;
  c.dim = static_cast<int>(state.range(0));
  c.restarts = 2;
  c.max_iterations = 500;
  for (auto _ : state) benchmark::DoNotOptimize(maximize_ratio(c));
}
BENCHMARK(BM_Search)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include <vector>

#include "nulllab/estimator.hpp"
#include "nulllab/gft.hpp"
#include "nulllab/harness.hpp"
#include "nulllab/mixture.hpp"
#include "nulllab/rng.hpp"

namespace est = nulllab::est;
namespace gft = nulllab::gft;
namespace mix = nulllab::mix;

namespace {

mix::MixtureSpec example_spec() {
  mix::MixtureSpec spec;
  spec.u0 = -1.0;
  spec.sigma0_sq = 1.0;
  spec.eps = 0.05;
  spec.mixing = mix::ProductLaw{mix::Uniform{1.0, 2.0}, mix::Uniform{0.5, 1.5}};
  return spec;
}

std::vector<double> sample(std::size_t n) {
  return mix::sample_iid(example_spec(), n, 42).values;
}

}  // namespace

static void BM_Gchar(benchmark::State& state) {
  const auto values = sample(static_cast<std::size_t>(state.range(0)));
  const double t = est::t_n(0.2, values.size());
  for (auto _ : state) {
    benchmark::DoNotOptimize(gft::gchar(values, t));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Gchar)->RangeMultiplier(10)->Range(1000, 1000000);

static void BM_SampleIid(benchmark::State& state) {
  const auto spec = example_spec();
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mix::sample_iid(spec, n, ++seed));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleIid)->RangeMultiplier(10)->Range(1000, 1000000);

static void BM_SampleBlock(benchmark::State& state) {
  const auto spec = example_spec();
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mix::sample_block_dependent(spec, n, 50, ++seed));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleBlock)->Arg(50000);

static void BM_PluginEstimate(benchmark::State& state) {
  mix::SampleSet data;
  data.values = sample(static_cast<std::size_t>(state.range(0)));
  const est::Config cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(est::estimate_eps_plugin(data, cfg));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PluginEstimate)->RangeMultiplier(10)->Range(10000, 1000000);

static void BM_PopulationOracleQuadrature(benchmark::State& state) {
  const auto spec = example_spec();
  const double t = est::t_n(0.2, 50000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mix::r_of_t(t, spec, mix::Eval::Quadrature));
  }
}
BENCHMARK(BM_PopulationOracleQuadrature);

BENCHMARK_MAIN();

#include "hartree/energy.hpp"
#include "hartree/kernels.hpp"
#include "hartree/sampling.hpp"

#include <benchmark/benchmark.h>
#include <omp.h>

#include <random>
#include <vector>

namespace {

using namespace hartree;

std::vector<double> random_values(std::size_t size) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> g;
  std::vector<double> v(size);
  for (auto& x : v) x = g(rng);
  return v;
}

template <auto Transform>
void BM_SineTransform(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const auto n = static_cast<std::size_t>(state.range(1));
  const auto in = random_values(d == 1 ? n : n * n);
  std::vector<double> out(in.size());
  for (auto _ : state) {
    Transform(in, out, d, n);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(in.size()));
}

void transform_args(benchmark::internal::Benchmark* b) {
  b->Args({1, 255})->Args({1, 511})->Args({2, 63})->Args({2, 127});
}

BENCHMARK(BM_SineTransform<kernels::serial::sine_transform>)->Name("sine_transform/serial")->Apply(transform_args);
BENCHMARK(BM_SineTransform<kernels::parallel::sine_transform>)->Name("sine_transform/parallel")->Apply(transform_args);

// Energies of the 41 nodes of a path, one after another or spread over threads.
void BM_PathEnergy(benchmark::State& state) {
  const bool parallel = state.range(0) != 0;
  const DomainSpec domain(1, static_cast<std::size_t>(state.range(1)));
  const EnergyContext ctx{domain, {1.0, 0.5, 1.0}, builtin("loglike", 1), Sign::plus};
  std::mt19937_64 rng(7);
  std::vector<SpectralField> nodes;
  for (int i = 0; i < 41; ++i) nodes.push_back(random_field(domain, rng));
  std::vector<double> out(nodes.size());
  const auto count = static_cast<std::ptrdiff_t>(nodes.size());
  for (auto _ : state) {
#pragma omp parallel for schedule(static) if (parallel)
    for (std::ptrdiff_t i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = energy(nodes[i], ctx);
    benchmark::DoNotOptimize(out.data());
  }
  state.counters["threads"] = parallel ? omp_get_max_threads() : 1;
}

BENCHMARK(BM_PathEnergy)->ArgNames({"parallel", "n"})->Args({0, 255})->Args({1, 255})->Args({0, 511})->Args({1, 511});

}  // namespace

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include <random>

#include "xychain/xychain.hpp"

namespace {

using namespace xychain;

ChainSpec random_chain(int N, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> alpha(N), beta(N + 1), gamma(N);
  for (double& x : alpha) x = u(rng);
  for (double& x : beta) x = u(rng);
  for (double& x : gamma) x = u(rng);
  return ChainSpec::from_couplings(alpha, beta, gamma);
}

void BM_Phi43(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto spec = Phi43Spec::make(n, {QMonomial{1.0, -n}, 0.3, 0.4}, {0.6, 0.7, QMonomial{1.0, -n - 2}},
                                    0.5, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(phi43_terminating(spec));
}
BENCHMARK(BM_Phi43)->Arg(4)->Arg(16)->Arg(64);

void BM_JacobiEigh(benchmark::State& state) {
  const auto sys = assemble(random_chain(static_cast<int>(state.range(0)), 1));
  for (auto _ : state) benchmark::DoNotOptimize(jacobi_eigh(sys.H));
}
BENCHMARK(BM_JacobiEigh)->Arg(8)->Arg(32)->Arg(64);

void BM_Eigendecompose(benchmark::State& state) {
  const auto sys = assemble(random_chain(static_cast<int>(state.range(0)), 2));
  for (auto _ : state) benchmark::DoNotOptimize(eigendecompose(sys));
}
BENCHMARK(BM_Eigendecompose)->Arg(8)->Arg(32)->Arg(64);

void BM_ManyBody(benchmark::State& state) {
  const auto lambda = eigendecompose(assemble(random_chain(static_cast<int>(state.range(0)), 3)))
                          .lambda_numeric;
  for (auto _ : state) benchmark::DoNotOptimize(many_body_spectrum(lambda));
}
BENCHMARK(BM_ManyBody)->Arg(7)->Arg(15);

void BM_SpinOracle(benchmark::State& state) {
  const auto chain = random_chain(static_cast<int>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(oracle_spectrum(build_spin_hamiltonian(chain)));
}
BENCHMARK(BM_SpinOracle)->Arg(3)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "qrec/bath.hpp"
#include "qrec/bounds.hpp"
#include "qrec/density_matrix.hpp"
#include "qrec/hhl.hpp"
#include "qrec/protocol.hpp"
#include "qrec/rng.hpp"

namespace {

using namespace qrec;

void bm_apply_unitary_16(benchmark::State& state) {
  Rng rng(7);
  const Mat u = random_haar_unitary(16, rng);
  const Mat rho = random_density(16, rng);
  const std::vector<int> dims{2, 2, 2, 2};
  for (auto _ : state) {
    benchmark::DoNotOptimize(apply_unitary(rho, u, {0, 1, 2, 3}, dims));
  }
}
BENCHMARK(bm_apply_unitary_16);

void bm_entropy_16(benchmark::State& state) {
  Rng rng(11);
  const Mat rho = random_density(16, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(von_neumann_entropy(rho));
  }
}
BENCHMARK(bm_entropy_16);

void bm_temperature_of_entropy(benchmark::State& state) {
  const BathSpec bath = BathSpec::qubit(1.0, 1.0 / 5.5804);
  for (auto _ : state) {
    benchmark::DoNotOptimize(temperature_of_entropy(bath, 0.3));
  }
}
BENCHMARK(bm_temperature_of_entropy);

void bm_erasure_bounds(benchmark::State& state) {
  const BathSpec bath = BathSpec::qubit(1.0, 1.0 / 5.5804);
  for (auto _ : state) {
    benchmark::DoNotOptimize(erasure_bounds(bath, 0.5, std::nullopt));
  }
}
BENCHMARK(bm_erasure_bounds);

void bm_build_circuit(benchmark::State& state) {
  const HhlInstance inst{0.3};
  const HhlParams params;
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_algorithm_unitary(inst, params));
  }
}
BENCHMARK(bm_build_circuit);

void bm_run_recycling(benchmark::State& state) {
  ProtocolConfig cfg;
  cfg.theta_b = 0.3;
  cfg.noise.enabled = state.range(0) != 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_recycling(cfg));
  }
}
BENCHMARK(bm_run_recycling)->Arg(0)->Arg(1);

} // namespace

BENCHMARK_MAIN();

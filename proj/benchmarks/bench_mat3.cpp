#include <benchmark/benchmark.h>

#include <vector>

#include "bimdecomp/mat3.hpp"
#include "bimdecomp/selftest.hpp"

using namespace bimdecomp;

namespace {

std::vector<SymMat3> spd_batch(int n, double cond) {
  RandomGen g(42);
  std::vector<SymMat3> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.push_back(random_spd(g, cond, 0.1, 10.0));
  return out;
}

void BM_SqrtEig(benchmark::State& state) {
  const auto batch = spd_batch(512, static_cast<double>(state.range(0)));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sqrt_spd_eig(batch[i++ % batch.size()]));
  }
}
BENCHMARK(BM_SqrtEig)->Arg(10)->Arg(1000000);

void BM_SqrtClosed(benchmark::State& state) {
  const auto batch = spd_batch(512, static_cast<double>(state.range(0)));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sqrt_spd_closed(batch[i++ % batch.size()]));
  }
}
BENCHMARK(BM_SqrtClosed)->Arg(10)->Arg(1000000);

void BM_Polar(benchmark::State& state) {
  RandomGen g(7);
  std::vector<Mat3> batch;
  for (int i = 0; i < 512; ++i)
    batch.push_back(random_invertible(g, static_cast<double>(state.range(0)),
                                      0.1, 10.0));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(polar3(batch[i++ % batch.size()]));
  }
}
BENCHMARK(BM_Polar)->Arg(10)->Arg(1000000);

} // namespace

BENCHMARK_MAIN();

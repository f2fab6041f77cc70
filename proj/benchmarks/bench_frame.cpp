#include <benchmark/benchmark.h>

#include <vector>

#include "bimdecomp/lorentz_frame.hpp"
#include "bimdecomp/mean_metric.hpp"
#include "bimdecomp/selftest.hpp"

using namespace bimdecomp;

namespace {

struct FrameInput {
  Mat3 ge, fe;
  Vec3 p;
};

std::vector<FrameInput> frame_batch(int n) {
  RandomGen g(11);
  std::vector<FrameInput> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Vec3 p{{g.normal(), g.normal(), g.normal()}};
    out.push_back({random_vielbein(g, 1e3), random_vielbein(g, 1e3), p});
  }
  return out;
}

void BM_BuildFrame(benchmark::State& state) {
  const auto batch = frame_batch(512);
  const auto alg = static_cast<SqrtAlgorithm>(state.range(0));
  std::size_t i = 0;
  for (auto _ : state) {
    const FrameInput& in = batch[i++ % batch.size()];
    benchmark::DoNotOptimize(build_frame(in.p, in.ge, in.fe, alg));
  }
}
BENCHMARK(BM_BuildFrame)
    ->Arg(static_cast<int>(SqrtAlgorithm::ClosedForm))
    ->Arg(static_cast<int>(SqrtAlgorithm::Eigen))
    ->Arg(static_cast<int>(SqrtAlgorithm::Polar));

void BM_PointDecomposition(benchmark::State& state) {
  const auto batch = frame_batch(512);
  std::size_t i = 0;
  for (auto _ : state) {
    const FrameInput& in = batch[i++ % batch.size()];
    const LorentzFrame fr = build_frame(in.p, in.ge, in.fe, SqrtAlgorithm::Eigen);
    benchmark::DoNotOptimize(
        build_mean(in.ge, in.fe, fr, Vec3{}, 1.0, 1.0, 0.0, 0.0));
  }
}
BENCHMARK(BM_PointDecomposition);

} // namespace

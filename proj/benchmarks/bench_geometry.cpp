#include <benchmark/benchmark.h>

#include "bimdecomp/geometry.hpp"
#include "bimdecomp/grid.hpp"

using namespace bimdecomp;

namespace {

struct GeometrySetup {
  GridSpec spec;
  GridField gbar, gbar_inv;
  std::array<GridField, 3> dgbar;
  BackgroundGeometry bg;
};

GeometrySetup make_setup(int n) {
  Chart chart{"cartesian", {"x", "y", "z"}, {-1.0, -1.0, -1.0},
              {1.0, 1.0, 1.0}, {false, false, false}};
  GridSpec spec = GridSpec::create(chart, {n, n, n}, 2);
  const Expr psi = parse("0.1*(x^2 + y^2 + z^2)", chart);
  GridField gbar = GridField::sym_rank2(spec, "dd");
  GridField gbar_inv = GridField::sym_rank2(spec, "uu");
  for (int i = 0; i < spec.stored[0]; ++i)
    for (int j = 0; j < spec.stored[1]; ++j)
      for (int k = 0; k < spec.stored[2]; ++k) {
        const double w = std::exp(4.0 * eval(psi, spec.point(i, j, k)));
        set_sym(gbar, spec, i, j, k, scale(w, SymMat3::identity()));
        set_sym(gbar_inv, spec, i, j, k, scale(1.0 / w, SymMat3::identity()));
      }
  std::array<GridField, 3> dgbar = {fd_derivative(spec, gbar, 0, 1),
                                    fd_derivative(spec, gbar, 1, 1),
                                    fd_derivative(spec, gbar, 2, 1)};
  BackgroundGeometry bg = build_background(spec, flat_metric_exprs(chart));
  return {std::move(spec), std::move(gbar), std::move(gbar_inv),
          std::move(dgbar), std::move(bg)};
}

void BM_Christoffel(benchmark::State& state) {
  const GeometrySetup s = make_setup(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(christoffel(s.spec, s.gbar, s.gbar_inv, s.dgbar));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(s.spec.total_stored()));
}
BENCHMARK(BM_Christoffel)->Arg(17)->Arg(33)->Unit(benchmark::kMillisecond);

void BM_ConformalRicci(benchmark::State& state) {
  const GeometrySetup s = make_setup(static_cast<int>(state.range(0)));
  const GridField gamma = christoffel(s.spec, s.gbar, s.gbar_inv, s.dgbar);
  const ConnectionField conn =
      conformal_connection(s.spec, s.gbar_inv, gamma, s.bg);
  for (auto _ : state) {
    benchmark::DoNotOptimize(conformal_ricci(s.spec, s.gbar, s.gbar_inv, conn,
                                             conn.lambda_computed, s.bg));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(s.spec.total_stored()));
}
BENCHMARK(BM_ConformalRicci)->Arg(17)->Arg(33)->Unit(benchmark::kMillisecond);

} // namespace

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "blochdiff/bloch.hpp"
#include "blochdiff/criteria.hpp"
#include "blochdiff/series.hpp"
#include "blochdiff/test_functions.hpp"

namespace {

using namespace blochdiff;

std::vector<DiskPoint> points(std::size_t n) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<DiskPoint> pts;
  for (std::size_t i = 0; i < n; ++i) {
    pts.emplace_back(std::polar(0.999 * std::sqrt(u(rng)), 6.283185307179586 * u(rng)));
  }
  return pts;
}

void BM_PseudoHyperbolic(benchmark::State& state) {
  const auto pts = points(1024);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pseudo_hyperbolic(pts[i & 1023], pts[(i + 1) & 1023]));
    ++i;
  }
}
BENCHMARK(BM_PseudoHyperbolic);

void BM_TauPow(benchmark::State& state) {
  const auto pts = points(1024);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tau_pow(pts[i & 1023], pts[(i + 1) & 1023], 1.5));
    ++i;
  }
}
BENCHMARK(BM_TauPow);

void BM_BinomSeries(benchmark::State& state) {
  const DiskPoint a(0.6, 0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(binom_series(a, 1.3, static_cast<int>(state.range(0)), 0.9));
  }
}
BENCHMARK(BM_BinomSeries)->Arg(64)->Arg(1024);

void BM_FaEval(benchmark::State& state) {
  const DiskPoint a(0.9, 0.1), z(0.5, -0.6);
  for (auto _ : state) benchmark::DoNotOptimize(fa_eval(a, 1.0, z));
}
BENCHMARK(BM_FaEval);

void BM_BlochSeminormMonomial(benchmark::State& state) {
  const SamplingGrid grid(GridParams{static_cast<int>(state.range(0)), 16.0, 8});
  const SymbolExpr f = SymbolExpr::monomial(17);
  for (auto _ : state) benchmark::DoNotOptimize(bloch_seminorm(f, 1.0, grid).value);
  state.counters["points"] = static_cast<double>(grid.size());
}
BENCHMARK(BM_BlochSeminormMonomial)->Arg(10)->Arg(14)->Unit(benchmark::kMillisecond);

SymbolQuadruple blaschke_quad() {
  const SymbolExpr z = SymbolExpr::identity();
  SymbolQuadruple q{SymbolExpr::blaschke({DiskPoint(0.3, 0.2), DiskPoint(-0.4, 0.1)}),
                    SymbolExpr::mobius(DiskPoint(0.2, -0.3)), SymbolExpr::constant(1.0),
                    SymbolExpr::sum({SymbolExpr::constant(1.0), z}, {0.5, 0.25}), 1.0, 1.0};
  q.declared_self_map = true;
  return q;
}

void BM_QuantityIv(benchmark::State& state) {
  const SymbolField field(blaschke_quad(), SamplingGrid(GridParams{12, 16.0, 6}));
  const auto schedule = CriteriaConfig::default_n_schedule(4096);
  for (auto _ : state) benchmark::DoNotOptimize(quantity_iv(field, schedule).value);
}
BENCHMARK(BM_QuantityIv)->Unit(benchmark::kMillisecond);

void BM_EvaluateQuadrupleSmall(benchmark::State& state) {
  CriteriaConfig cfg;
  cfg.grid = {10, 16.0, 4};
  cfg.inner_grid = {10, 4.0, 3};
  cfg.n_schedule = CriteriaConfig::default_n_schedule(1024);
  const SymbolQuadruple q = blaschke_quad();
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_quadruple(q, cfg).q_iii.value);
}
BENCHMARK(BM_EvaluateQuadrupleSmall)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

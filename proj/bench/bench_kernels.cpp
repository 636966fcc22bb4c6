// Serial-vs-parallel timings for the three data-parallel kernels: the
// per-day moment panel, the column-wise horizon decomposition, and the
// per-time-point posterior sampler.  The parallel variants must give
// bitwise-identical results (covered by the unit tests); these benchmarks
// show what the parallelism buys on the current machine.

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <benchmark/benchmark.h>

#include "hmr/bars.hpp"
#include "hmr/decompose.hpp"
#include "hmr/moments.hpp"
#include "hmr/qbll.hpp"
#include "hmr/rng.hpp"
#include "hmr/simulate.hpp"
#include "hmr/types.hpp"

namespace {

const hmr::BarGroups& bench_bars() {
  static const hmr::BarGroups groups = [] {
    hmr::MarketSimConfig mc;
    mc.n_assets = 40;
    mc.n_days = 120;
    mc.seed = 7;
    return hmr::group_bars(hmr::simulate_market(mc).bars);
  }();
  return groups;
}

void bm_moment_panel_serial(benchmark::State& state) {
  const hmr::IngestConfig cfg;
  for (auto _ : state) {
    hmr::MomentPanel p = hmr::compute_moment_panel_serial(bench_bars(), cfg);
    benchmark::DoNotOptimize(p.vol.data.data());
  }
}

void bm_moment_panel_parallel(benchmark::State& state) {
  const hmr::IngestConfig cfg;
  for (auto _ : state) {
    hmr::MomentPanel p = hmr::compute_moment_panel(bench_bars(), cfg);
    benchmark::DoNotOptimize(p.vol.data.data());
  }
}

const hmr::Matrix& bench_panel() {
  static const hmr::Matrix m = [] {
    hmr::Matrix out(4096, 64, 0.0);
    std::mt19937_64 eng = hmr::substream(11, 0);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (double& v : out.data) v = normal(eng);
    return out;
  }();
  return m;
}

void bm_decompose_panel_serial(benchmark::State& state) {
  for (auto _ : state) {
    hmr::PanelDecomposition d = hmr::decompose_panel_serial(bench_panel(), 7);
    benchmark::DoNotOptimize(d.long_run.data.data());
  }
}

void bm_decompose_panel_parallel(benchmark::State& state) {
  for (auto _ : state) {
    hmr::PanelDecomposition d = hmr::decompose_panel(bench_panel(), 7);
    benchmark::DoNotOptimize(d.long_run.data.data());
  }
}

struct TvpProblem {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
};

const TvpProblem& bench_tvp() {
  static const TvpProblem problem = [] {
    TvpProblem p;
    const int T = 400;
    p.X.resize(T, 2);
    p.y.resize(T);
    std::mt19937_64 eng = hmr::substream(13, 0);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int t = 0; t < T; ++t) {
      p.X(t, 0) = 1.0;
      p.X(t, 1) = normal(eng);
      p.y(t) = 0.3 + 0.8 * p.X(t, 1) + 0.5 * normal(eng);
    }
    return p;
  }();
  return problem;
}

void bm_sample_tvp_serial(benchmark::State& state) {
  hmr::TvpOptions opt;
  opt.iterations = 200;
  opt.seed = 5;
  for (auto _ : state) {
    hmr::TvpSummary s =
        hmr::sample_tvp_serial(bench_tvp().X, bench_tvp().y, opt);
    benchmark::DoNotOptimize(s.mean.data());
  }
}

void bm_sample_tvp_parallel(benchmark::State& state) {
  hmr::TvpOptions opt;
  opt.iterations = 200;
  opt.seed = 5;
  for (auto _ : state) {
    hmr::TvpSummary s = hmr::sample_tvp(bench_tvp().X, bench_tvp().y, opt);
    benchmark::DoNotOptimize(s.mean.data());
  }
}

}  // namespace

BENCHMARK(bm_moment_panel_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_moment_panel_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_decompose_panel_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_decompose_panel_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_sample_tvp_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_sample_tvp_parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

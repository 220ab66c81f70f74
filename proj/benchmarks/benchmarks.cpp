#include <benchmark/benchmark.h>

#include "dpln/density.hpp"
#include "dpln/gibbs.hpp"
#include "dpln/special.hpp"
#include "dpln/tam.hpp"

namespace {

const dpln::DplnParams kTheta{3.0, 2.0, 0.0, 0.25};

void BM_MillsRatio(benchmark::State& state) {
    const double z = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(dpln::mills_ratio(z));
}
BENCHMARK(BM_MillsRatio)->Arg(-5)->Arg(1)->Arg(10)->Arg(40);

void BM_LogPdf(benchmark::State& state) {
    double y = -3.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(dpln::nl_log_pdf(y, kTheta));
        y = y < 3.0 ? y + 1e-3 : -3.0;
    }
}
BENCHMARK(BM_LogPdf);

void BM_Quantile(benchmark::State& state) {
    const double p = static_cast<double>(state.range(0)) / 1000.0;
    for (auto _ : state) benchmark::DoNotOptimize(dpln::dpln_quantile(p, kTheta));
}
BENCHMARK(BM_Quantile)->Arg(10)->Arg(500)->Arg(999);

void BM_BuildTam(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(dpln::build_tam(kTheta, n, 0.5, 0.9));
}
BENCHMARK(BM_BuildTam)->Arg(100)->Arg(1000);

void BM_Calibrate(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(dpln::calibrate(kTheta, n, dpln::TamGrid::standard()));
}
BENCHMARK(BM_Calibrate)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_GibbsIteration(benchmark::State& state) {
    dpln::RngStream rng(1);
    const auto data = dpln::sample_dpln(static_cast<std::size_t>(state.range(0)), kTheta, rng);
    dpln::GibbsConfig cfg;
    cfg.iterations = 200;
    cfg.burn_in = 100;
    cfg.thin = 1;
    for (auto _ : state) benchmark::DoNotOptimize(dpln::run_gibbs(data, dpln::PriorSpec{}, cfg));
    state.SetItemsProcessed(state.iterations() * cfg.iterations);
}
BENCHMARK(BM_GibbsIteration)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include <cmath>

#include "qlab/arrow.hpp"
#include "qlab/bounds.hpp"
#include "qlab/cqed.hpp"
#include "qlab/pulse.hpp"
#include "qlab/weak.hpp"

using namespace qlab;

static void BM_KrausUpdate(benchmark::State& state) {
    auto st = QubitState::from_bloch(0.6, 0.0, 0.8);
    MeasurementStrength s{0.375};
    MeasurementAxis axis{0.0};
    for (auto _ : state) {
        auto out = kraus_update(st, 0.7, s, axis);
        benchmark::DoNotOptimize(out);
    }
}
BENCHMARK(BM_KrausUpdate);

static void BM_BayesianUpdate(benchmark::State& state) {
    for (auto _ : state) {
        auto out = bayesian_update(0.3, 0.7, 0.375);
        benchmark::DoNotOptimize(out);
    }
}
BENCHMARK(BM_BayesianUpdate);

static void BM_EurBound(benchmark::State& state) {
    ReadoutModel model{};
    for (auto _ : state) {
        auto b = eur_bound(0.785, 1.571, 0.2, model);
        benchmark::DoNotOptimize(b);
    }
}
BENCHMARK(BM_EurBound);

static void BM_EigenstateEnsemble(benchmark::State& state) {
    const long n = state.range(0);
    const double r2 = 1.0 / std::sqrt(2.0);
    for (auto _ : state) {
        auto qs = eigenstate_q_ensemble(r2, r2, n, 0.375, 7, 1);
        benchmark::DoNotOptimize(qs.data());
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_EigenstateEnsemble)->Arg(10000)->Arg(100000);

static void BM_JcSpectrum(benchmark::State& state) {
    JCParams p{2 * M_PI * 5.8e9, 2 * M_PI * 5.8e9, 2 * M_PI * 70e6,
               static_cast<int>(state.range(0))};
    for (auto _ : state) {
        auto levels = jc_spectrum(p);
        benchmark::DoNotOptimize(levels.data());
    }
}
BENCHMARK(BM_JcSpectrum)->Arg(5)->Arg(20)->Arg(50);

static void BM_CompileRabi(benchmark::State& state) {
    RabiConfig cfg;
    cfg.ssm_freq = 1.0 / 16;
    cfg.durations = {SweepType::duration, 0.0, 100.0};
    cfg.qubit_pulse = {0, 0, 0.5, cfg.ssm_freq, 0.0};
    cfg.cavity_pulse = {2000, 6000, 0.4, 0.0, 0.0};
    cfg.trigger_pulse = {64, 0, 1.0, 0.0, 0.0};
    for (auto _ : state) {
        auto cl = compile_rabi(cfg);
        benchmark::DoNotOptimize(cl.ch[0][0].data.data());
    }
}
BENCHMARK(BM_CompileRabi);

BENCHMARK_MAIN();

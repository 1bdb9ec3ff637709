#include <benchmark/benchmark.h>

#include "nlb/energy_monitor.hpp"
#include "nlb/estimate_verifier.hpp"
#include "nlb/evolution.hpp"
#include "nlb/experiments.hpp"

using namespace nlb;

namespace {

SpectralField data(int K) {
    ProfileSpec p;
    p.s = 1.0;
    return make_initial(TorusGrid(K), p);
}

void BM_RoundTrip(benchmark::State& st) {
    const auto f = data(int(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(to_spectral(f.grid(), to_physical(f)));
}
BENCHMARK(BM_RoundTrip)->RangeMultiplier(4)->Range(64, 4096);

void BM_Nonlinearity(benchmark::State& st) {
    const auto f = data(int(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(nonlinearity(f));
}
BENCHMARK(BM_Nonlinearity)->RangeMultiplier(4)->Range(64, 4096);

void BM_Step(benchmark::State& st) {
    const auto f = data(int(st.range(0)));
    const Stepper s(DispersiveSymbol::fkdv(1.0), f.grid(), 1e-3, st.range(1) ? Scheme::lawson_rk4 : Scheme::etdrk4);
    for (auto _ : st) benchmark::DoNotOptimize(s.step(f));
}
BENCHMARK(BM_Step)->ArgsProduct({{256, 1024}, {0, 1}});

void BM_CubicForm(benchmark::State& st) {
    const auto f = data(int(st.range(0)));
    const auto sym = DispersiveSymbol::fkdv(1.0);
    for (auto _ : st) benchmark::DoNotOptimize(cubic_form(f, sym, 1.0, 16.0));
}
BENCHMARK(BM_CubicForm)->RangeMultiplier(2)->Range(64, 1024)->Unit(benchmark::kMillisecond);

void BM_SampleTuples(benchmark::State& st) {
    const auto sym = DispersiveSymbol::fkdv(0.5);
    SamplerArgs a;
    a.region = "C3";
    a.n = std::size_t(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(sample_tuples(sym, a));
}
BENCHMARK(BM_SampleTuples)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_OneSided(benchmark::State& st) {
    const EnergySymbolParams p{DispersiveSymbol::fkdv(1.0), 1.0, -0.25, 1.0};
    SamplerArgs a;
    for (auto _ : st) benchmark::DoNotOptimize(verify_one_sided(p, "a4tilde-C1", a));
}
BENCHMARK(BM_OneSided)->Unit(benchmark::kMillisecond);

void BM_ExpSum(benchmark::State& st) {
    const auto sym = DispersiveSymbol::fkdv(0.5);
    for (auto _ : st) benchmark::DoNotOptimize(exp_sum_point(sym, int(st.range(0)), 48, 4096));
}
BENCHMARK(BM_ExpSum)->Arg(64)->Arg(1024)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

#include <vector>

#include <benchmark/benchmark.h>

#include "leocrlb/analysis.hpp"
#include "leocrlb/fim_channel.hpp"
#include "leocrlb/fim_location.hpp"

using namespace leocrlb;

namespace {

Scenario make(int n_leo, int n_ant) {
    ScenarioTemplate t;
    t.n_leo = n_leo;
    t.n_slots = n_leo == 3 ? 4 : 3;
    t.n_ant = n_ant;
    return generate_scenario(t, 1);
}

void BM_ChannelFim(benchmark::State& state) {
    const Scenario s = make(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(assemble_channel_fim(s, ParamCase::WithBsObservations));
}

void BM_EfimSquareRoot(benchmark::State& state) {
    const Scenario s = make(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(efim_square_root_route(s, ParamCase::WithBsObservations));
}

void BM_EfimLemma(benchmark::State& state) {
    const Scenario s = make(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(efim_lemma_route(s, ParamCase::WithBsObservations));
}

void BM_EfimSchur(benchmark::State& state) {
    const Scenario s = make(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    const auto pc = ParamCase::WithBsObservations;
    for (auto _ : state) {
        const ChannelFim c = assemble_channel_fim(s, pc);
        const TransformationMatrix t = build_transformation_matrix(s, pc);
        benchmark::DoNotOptimize(efim_schur_route(transform_fim(c.matrix, t.matrix), t.location));
    }
}

void BM_Crlb(benchmark::State& state) {
    const Efim e = compute_efim(make(1, 4), ParamCase::WithBsObservations);
    for (auto _ : state) benchmark::DoNotOptimize(crlb(e));
}

void BM_IdentifiabilitySweep(benchmark::State& state) {
    SweepGrid g;
    g.n_leo = {1, 2, 3};
    g.n_bs = {2, 3};
    g.n_slots = {3, 4};
    g.n_ant = {1, 2, 4, 8};
    SweepOptions o;
    o.threads = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(identifiability_sweep(g, ScenarioTemplate{}, o));
}

void shapes(benchmark::internal::Benchmark* b) {
    for (int n_leo : {1, 3}) {
        for (int n_ant : {4, 16, 64}) b->Args({n_leo, n_ant});
    }
}

}  // namespace

BENCHMARK(BM_ChannelFim)->Apply(shapes);
BENCHMARK(BM_EfimSquareRoot)->Apply(shapes);
BENCHMARK(BM_EfimLemma)->Apply(shapes);
BENCHMARK(BM_EfimSchur)->Apply(shapes);
BENCHMARK(BM_Crlb);
BENCHMARK(BM_IdentifiabilitySweep)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_MAIN();

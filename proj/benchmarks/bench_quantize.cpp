#include <benchmark/benchmark.h>

#include "mgq/model_zoo.hpp"
#include "mgq/quantize.hpp"

using namespace mgq;

static void BM_BuildFiniteGame(benchmark::State& state) {
    const ContinuousGame g = make_zoo_game("tg-2p-smooth");
    const Real delta = 1.0 / (2.0 * state.range(0));
    const StateNet snet = build_state_net(g.state_space, delta);
    const ActionNet anet = build_action_net(g.action_spaces, delta);
    for (auto _ : state) {
        FiniteGame fg = build_finite_game(g, snet, anet);
        benchmark::DoNotOptimize(fg.transitions.data());
    }
    state.SetLabel(std::to_string(snet.size()) + " states");
}
BENCHMARK(BM_BuildFiniteGame)->Arg(5)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_BuildFiniteGameThreaded(benchmark::State& state) {
    const ContinuousGame g = make_zoo_game("tg-2p-smooth");
    const StateNet snet = build_state_net(g.state_space, 0.025);
    const ActionNet anet = build_action_net(g.action_spaces, 0.025);
    BuildOptions opts;
    opts.threads = static_cast<int>(state.range(0));
    for (auto _ : state) {
        FiniteGame fg = build_finite_game(g, snet, anet, opts);
        benchmark::DoNotOptimize(fg.transitions.data());
    }
}
BENCHMARK(BM_BuildFiniteGameThreaded)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_NearestState(benchmark::State& state) {
    const StateNet net = build_state_net(Box::interval(0.0, 1.0), 0.005);
    Point x{0.0};
    std::uint64_t i = 0;
    for (auto _ : state) {
        x[0] = static_cast<Real>(i++ % 1000) / 1000.0;
        benchmark::DoNotOptimize(nearest_state(net, x));
    }
}
BENCHMARK(BM_NearestState);

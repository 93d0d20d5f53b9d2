#include <benchmark/benchmark.h>

#include "mgq/model_zoo.hpp"
#include "mgq/solve.hpp"
#include "mgq/verify.hpp"

using namespace mgq;

namespace {

FiniteGame tg_model(Real delta) {
    const ContinuousGame g = make_zoo_game("tg-2p-smooth");
    const StateNet snet = build_state_net(g.state_space, delta);
    const ActionNet anet = build_action_net(g.action_spaces, delta);
    return build_finite_game(g, snet, anet);
}

} // namespace

static void BM_NashValueIteration(benchmark::State& state) {
    const FiniteGame fg = tg_model(0.05);
    for (auto _ : state) {
        SolveReport r = nash_value_iteration(fg, 0.9, 1e-8, 20000, 0.5, 1);
        benchmark::DoNotOptimize(r.residual);
    }
}
BENCHMARK(BM_NashValueIteration)->Unit(benchmark::kMillisecond);

static void BM_ShapleyIteration(benchmark::State& state) {
    const ContinuousGame g = make_zoo_game("zs-2p-smooth");
    const StateNet snet = build_state_net(g.state_space, 0.05);
    const ActionNet anet = build_action_net(g.action_spaces, 0.05);
    const FiniteGame fg = build_finite_game(g, snet, anet);
    for (auto _ : state) {
        SolveReport r = shapley_iteration(fg, 0.9, 1e-8);
        benchmark::DoNotOptimize(r.residual);
    }
}
BENCHMARK(BM_ShapleyIteration)->Unit(benchmark::kMillisecond);

static void BM_CertifyEpsilon(benchmark::State& state) {
    const ContinuousGame g = make_zoo_game("tg-2p-smooth");
    const StateNet snet = build_state_net(g.state_space, 0.1);
    const ActionNet anet = build_action_net(g.action_spaces, 0.1);
    const FiniteGame fg = build_finite_game(g, snet, anet);
    const SolveReport r = nash_value_iteration(fg, 0.9, 1e-8, 20000, 0.5, 1);
    const ExtendedPolicyProfile ext = extend_policy(r.stationary, snet);
    for (auto _ : state) {
        EpsCertificate cert = certify_epsilon(g, snet, anet, ext, 4, 1e-9);
        benchmark::DoNotOptimize(cert.eps[0]);
    }
}
BENCHMARK(BM_CertifyEpsilon)->Unit(benchmark::kMillisecond);

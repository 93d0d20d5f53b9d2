#include <benchmark/benchmark.h>

#include "mgq/rng.hpp"
#include "mgq/stage_nash.hpp"

using namespace mgq;

namespace {

Matrix random_matrix(std::uint64_t seed, int n) {
    Rng rng(seed);
    Matrix m(n, n);
    for (Real& v : m.data) v = 2.0 * rng.uniform() - 1.0;
    return m;
}

} // namespace

static void BM_MatrixGameValue(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Matrix M = random_matrix(42, n);
    for (auto _ : state) benchmark::DoNotOptimize(matrix_game_value(M).value);
}
BENCHMARK(BM_MatrixGameValue)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

static void BM_BimatrixNash(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Matrix A = random_matrix(7, n);
    const Matrix B = random_matrix(8, n);
    for (auto _ : state) benchmark::DoNotOptimize(bimatrix_nash(A, B, 1e-9).values[0]);
}
BENCHMARK(BM_BimatrixNash)->Arg(2)->Arg(3)->Arg(4)->Arg(5);

// Serial reference kernels vs the blocked OpenMP versions, plus one grid sweep.
//
//   ./scca_bench --benchmark_filter=Gemv

#include "scca/kernels.hpp"
#include "scca/model_selection.hpp"
#include "scca/synthgen.hpp"

#include <random>

#include <benchmark/benchmark.h>

using namespace scca;

namespace {

Matrix random_matrix(Index rows, Index cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = g(rng);
    return m;
}

// range(0): columns, range(1): threads (0 = serial reference)
void BM_Gemv(benchmark::State& state) {
    const Index p = state.range(0);
    const Matrix a = random_matrix(1000, p, 1);
    const Vector x = random_matrix(p, 1, 2).col(0);
    Vector y(1000);
    const int t = static_cast<int>(state.range(1));
    if (t > 0) kernels::set_threads(t);
    for (auto _ : state) {
        if (t == 0)
            kernels::serial::gemv(a, x, y);
        else
            kernels::gemv(a, x, y);
        benchmark::DoNotOptimize(y.data());
    }
}

void BM_GemvT(benchmark::State& state) {
    const Index p = state.range(0);
    const Matrix a = random_matrix(1000, p, 1);
    const Vector x = random_matrix(1000, 1, 2).col(0);
    Vector y(p);
    const int t = static_cast<int>(state.range(1));
    if (t > 0) kernels::set_threads(t);
    for (auto _ : state) {
        if (t == 0)
            kernels::serial::gemv_t(a, x, y);
        else
            kernels::gemv_t(a, x, y);
        benchmark::DoNotOptimize(y.data());
    }
}

void BM_Crossprod(benchmark::State& state) {
    const Index p = state.range(0);
    const Matrix a = random_matrix(1000, p, 1);
    const Matrix b = random_matrix(1000, 100, 2);
    const int t = static_cast<int>(state.range(1));
    if (t > 0) kernels::set_threads(t);
    for (auto _ : state) {
        Matrix c = t == 0 ? kernels::serial::crossprod(a, b) : kernels::crossprod(a, b);
        benchmark::DoNotOptimize(c.data());
    }
}

// Simplified-model grid on a small grouped dataset; range(0) = jobs.
void BM_SimplifiedGrid(benchmark::State& state) {
    Setup2Params p;
    p.n = 400;
    p.groups = 10;
    p.mean_group_size = 50;
    p.seed = 3;
    const SyntheticData sim = gen_setup2(p);
    const StandardizedDataset d = standardize(sim.data, ScalingMode::CenterUnitNorm);
    TuneOptions o;
    o.jobs = static_cast<int>(state.range(0));
    const GridSpec grid = GridSpec::from_range(c_range_simplified(d));
    for (auto _ : state) {
        Matrix s = evaluate_grid(Model::Simplified, d, d.x, d.y, grid, o);
        benchmark::DoNotOptimize(s.data());
    }
}

void thread_args(benchmark::internal::Benchmark* b) {
    for (long p : {500L, 2000L, 8000L})
        for (long t : {0L, 1L, 2L, 4L, 8L}) b->Args({p, t});
}

}  // namespace

BENCHMARK(BM_Gemv)->Apply(thread_args)->UseRealTime();
BENCHMARK(BM_GemvT)->Apply(thread_args)->UseRealTime();
BENCHMARK(BM_Crossprod)->Args({2000, 0})->Args({2000, 1})->Args({2000, 4})->Args({2000, 8})->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimplifiedGrid)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->UseRealTime()->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "fracsys/exec.hpp"
#include "fracsys/phi.hpp"
#include "fracsys/solver.hpp"

using namespace fracsys;

namespace {

std::vector<double> random_vector(std::size_t n) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<double> v(n);
    for (auto& e : v) e = U(rng);
    return v;
}

Execution mode(const benchmark::State& state) {
    return state.range(1) == 0 ? Execution::Serial : Execution::Parallel;
}

void BM_LaggedSum(benchmark::State& state) {
    const auto count = static_cast<std::size_t>(state.range(0));
    const std::size_t dim = 4;
    const auto w = random_vector(count);
    const auto rows = random_vector(count * dim);
    std::vector<double> out(dim);
    for (auto _ : state) {
        if (mode(state) == Execution::Serial) {
            serial::lagged_sum(w, {rows, dim}, count, out);
        } else {
            parallel::lagged_sum(w, {rows, dim}, count, out);
        }
        benchmark::DoNotOptimize(out.data());
    }
}

void BM_CausalConvolution(benchmark::State& state) {
    const auto count = static_cast<std::size_t>(state.range(0));
    const auto w = random_vector(count);
    const auto rows = random_vector(count * 2);
    for (auto _ : state) {
        auto r = mode(state) == Execution::Serial ? serial::causal_convolution(w, {rows, 2}, 1)
                                                  : parallel::causal_convolution(w, {rows, 2}, 1);
        benchmark::DoNotOptimize(r.data());
    }
}

void BM_KernelTable(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        KernelTable t(FracOrderPair(0.4, 0.7), 0.1, 8, n, mode(state));
        benchmark::DoNotOptimize(t.phi(8, 8, static_cast<long long>(n)));
    }
}

SystemSpec semilinear_spec(std::size_t N) {
    SystemSpec spec;
    spec.dim = 4;
    spec.orders = FracOrderPair(0.6, 0.8);
    spec.h = 0.01;
    spec.horizon = N;
    Matrix A = -Matrix::Identity(4, 4);
    A(0, 1) = 0.3;
    A(2, 3) = 0.2;
    spec.rhs = SemilinearRhs{A, std::vector<Vector>(N + 1, Vector::Constant(4, 0.1))};
    spec.x_a = Vector::Constant(4, 1.0);
    spec.x_0 = Vector::Constant(4, 0.5);
    return spec;
}

void BM_SolveRecursive(benchmark::State& state) {
    const auto spec = semilinear_spec(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(solve_recursive(spec, {ForcingLag::OneStep, mode(state)}));
}

void BM_SemilinearSeries(benchmark::State& state) {
    const auto spec = semilinear_spec(static_cast<std::size_t>(state.range(0)));
    SeriesOptions opts;
    opts.exec = mode(state);
    for (auto _ : state) benchmark::DoNotOptimize(solve_semilinear_series(spec, opts));
}

}  // namespace

BENCHMARK(BM_LaggedSum)->ArgsProduct({{1000, 10000, 100000}, {0, 1}});
BENCHMARK(BM_CausalConvolution)->ArgsProduct({{1000, 4000}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KernelTable)->ArgsProduct({{10000, 100000}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolveRecursive)->ArgsProduct({{2000, 10000}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SemilinearSeries)->ArgsProduct({{100, 200}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

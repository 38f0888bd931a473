// Serial reference vs OpenMP kernels.

#include "goalspot/exploratory_diag.hpp"
#include "goalspot/kernels.hpp"
#include "goalspot/synthetic_gen.hpp"

#include <benchmark/benchmark.h>

#include <numeric>

using namespace goalspot;

namespace {

std::vector<PitchLocation> points(std::int64_t n)
{
    return generate_point_pattern(PatternKind::csr, static_cast<int>(n), Window{}, 7);
}

std::vector<double> radii()
{
    std::vector<double> r(30);
    std::iota(r.begin(), r.end(), 1.0);
    return r;
}

template <auto Fn>
void correlation(benchmark::State& state)
{
    const auto pts = points(state.range(0));
    Eigen::MatrixXd out;
    for (auto _ : state) {
        Fn(pts, 0.1, out);
        benchmark::DoNotOptimize(out.data());
    }
}

template <auto Fn>
void pairs(benchmark::State& state)
{
    const auto pts = points(state.range(0));
    const auto r = radii();
    for (auto _ : state)
        benchmark::DoNotOptimize(Fn(pts, r));
}

template <auto Fn>
void neighbours(benchmark::State& state)
{
    const auto pts = points(state.range(0));
    const int k = default_k_neighbors(pts.size());
    for (auto _ : state)
        benchmark::DoNotOptimize(Fn(pts, k));
}

template <auto Fn>
void permutations(benchmark::State& state)
{
    const auto pts = points(state.range(0));
    const auto edges = knn_graph(pts, default_k_neighbors(pts.size()));
    std::vector<std::uint8_t> labels(pts.size());
    for (std::size_t i = 0; i < labels.size(); ++i)
        labels[i] = i % 5 == 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(Fn(edges, labels, 999, 3));
}

}  // namespace

BENCHMARK(correlation<kernels::serial::exponential_correlation>)->Arg(500)->Arg(2000);
BENCHMARK(correlation<kernels::parallel::exponential_correlation>)->Arg(500)->Arg(2000);
BENCHMARK(pairs<kernels::serial::pair_counts>)->Arg(1000)->Arg(4000);
BENCHMARK(pairs<kernels::parallel::pair_counts>)->Arg(1000)->Arg(4000);
BENCHMARK(neighbours<kernels::serial::knn>)->Arg(1000)->Arg(4000);
BENCHMARK(neighbours<kernels::parallel::knn>)->Arg(1000)->Arg(4000);
BENCHMARK(permutations<kernels::serial::permuted_joins>)->Arg(1000);
BENCHMARK(permutations<kernels::parallel::permuted_joins>)->Arg(1000);

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include <cstddef>
#include <vector>

#include "dbd/experiments.hpp"
#include "dbd/graph.hpp"
#include "dbd/metric.hpp"
#include "dbd/nn_index.hpp"
#include "dbd/search.hpp"
#include "dbd/synthetic.hpp"

namespace {

dbd::GoalSet sample_goals(std::size_t n, std::size_t count) {
    std::vector<dbd::Goal> goals;
    for (std::size_t idx : dbd::sample_goal_indices(n, count, 7)) goals.push_back({idx, 0});
    return dbd::GoalSet(std::move(goals));
}

void BM_IndexBuild(benchmark::State& state) {
    const auto points = dbd::gen_uniform_square(static_cast<std::size_t>(state.range(0)), 10, 1);
    for (auto _ : state) {
        dbd::NnIndex index(points, 2.0);
        benchmark::DoNotOptimize(index.open_count());
    }
}
BENCHMARK(BM_IndexBuild)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_NearestOpen(benchmark::State& state) {
    const auto points = dbd::gen_uniform_square(static_cast<std::size_t>(state.range(0)), 10, 1);
    const dbd::NnIndex index(points, 2.0);
    dbd::PointIndex q = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(index.nearest(q));
        q = (q + 1) % points.size();
    }
}
BENCHMARK(BM_NearestOpen)->Arg(1000)->Arg(10000)->Arg(50000);

void BM_Knn(benchmark::State& state) {
    const auto points = dbd::gen_uniform_square(10000, 10, 1);
    const dbd::NnIndex index(points, 2.0);
    const auto k = static_cast<std::size_t>(state.range(0));
    dbd::PointIndex q = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(index.knn(q, k));
        q = (q + 1) % points.size();
    }
}
BENCHMARK(BM_Knn)->Arg(15)->Arg(100);

void BM_DijkstraStar(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto points = dbd::gen_uniform_square(n, 10, 1);
    const auto goals = sample_goals(n, 100);
    const dbd::MetricParams params{2.0, 8.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(dbd::dijkstra_star(points, goals, params));
    }
}
BENCHMARK(BM_DijkstraStar)->Arg(2000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_KnnGraphDijkstra(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto k = static_cast<std::size_t>(state.range(1));
    const auto points = dbd::gen_uniform_square(n, 10, 1);
    const auto goals = sample_goals(n, 100);
    const dbd::MetricParams params{2.0, 8.0};
    for (auto _ : state) {
        const auto graph = dbd::build_knn_graph(points, k, params, true);
        benchmark::DoNotOptimize(dbd::dijkstra_knn(graph, goals));
    }
}
BENCHMARK(BM_KnnGraphDijkstra)->Args({2000, 15})->Args({2000, 100})->Args({10000, 100})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

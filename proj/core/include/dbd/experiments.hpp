#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dbd/metric.hpp"
#include "dbd/point_set.hpp"
#include "dbd/report.hpp"

namespace dbd {

/// Sampling study on the uniform unit square.
///
/// For each n and trial a fresh sample of n uniform points is drawn. The
/// density estimator is evaluated at `density_point` (metric "density"), and
/// the full-graph cost between the corners (0,0) and (1,1), appended to the
/// sample, is recorded multiplied by sqrt(n) (metric "scaled_dbd").
struct ConvergenceConfig {
    std::vector<std::size_t> ns{50, 200, 1000, 5000};
    std::size_t trials = 50;
    MetricParams params{2.0, 2.0};
    std::uint64_t seed = 0;
    bool density = true;
    bool dbd = true;
    std::vector<double> density_point{0.5, 0.5};
};

/// Summary rows carry engine "density" / "dbd" with metrics "density" /
/// "scaled_dbd" for every n. Throws InvalidInput unless `ns` is ascending.
ExperimentReport run_convergence_experiment(const ConvergenceConfig& config);

/// Dijkstra* on the complete graph against k-NN-graph Dijkstra.
///
/// Each trial draws a fresh goal set; goal labels are irrelevant here. The
/// Dijkstra* time includes building its nearest-neighbor index. For k-NN
/// engines the graph build is reported in graph_seconds and the search in
/// wall_seconds. Summary metrics: "total_seconds", "search_seconds",
/// "unreachable".
struct TimingConfig {
    std::vector<std::size_t> ks{15, 30, 100};
    std::size_t goal_count = 100;
    std::size_t trials = 3;
    MetricParams params{2.0, 8.0};
    std::uint64_t seed = 0;
    bool run_star = true;
};

ExperimentReport run_timing_experiment(const PointSet& points, const TimingConfig& config);

/// Goal indices drawn without replacement, returned ascending.
std::vector<std::size_t> sample_goal_indices(std::size_t n, std::size_t count, std::uint64_t seed);

}  // namespace dbd

#include "dbd/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <tuple>

#include "dbd/error.hpp"
#include "dbd/graph.hpp"
#include "dbd/search.hpp"
#include "dbd/synthetic.hpp"

namespace dbd {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    std::seed_seq seq{seed, a, b};
    std::array<std::uint64_t, 1> out{};
    seq.generate(out.begin(), out.end());
    return out[0];
}

void fill_search_fields(ExperimentRecord& rec, const ShortestPathResult& r) {
    rec.unreachable = r.unreachable_count;
    rec.pops = r.stats.pops;
    rec.nn_queries = r.stats.nn_queries;
    rec.max_queue = r.stats.max_queue_size;
    rec.mean_queue = r.stats.mean_queue_size();
}

// Groups record metrics by (engine, k, n) into summary rows.
void add_summaries(ExperimentReport& report, const std::vector<std::string>& metrics) {
    std::map<std::tuple<std::string, std::size_t, std::size_t>, std::map<std::string, std::vector<double>>> groups;
    std::vector<std::tuple<std::string, std::size_t, std::size_t>> order;
    for (const ExperimentRecord& r : report.records) {
        const auto key = std::make_tuple(r.engine, r.k, r.n);
        if (!groups.contains(key)) order.push_back(key);
        auto& g = groups[key];
        for (const auto& m : metrics) {
            if (auto it = r.metrics.find(m); it != r.metrics.end()) g[m].push_back(it->second);
        }
    }
    for (const auto& key : order) {
        for (const auto& m : metrics) {
            const auto& values = groups[key][m];
            if (values.empty()) continue;
            report.summary.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), m, summarize(values)});
        }
    }
}

}  // namespace

std::vector<std::size_t> sample_goal_indices(std::size_t n, std::size_t count, std::uint64_t seed) {
    if (count == 0 || count > n) {
        throw InvalidInput("cannot draw " + std::to_string(count) + " goals from " + std::to_string(n) + " points");
    }
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    std::vector<std::size_t> picked;
    picked.reserve(count);
    std::mt19937_64 rng(seed);
    std::sample(all.begin(), all.end(), std::back_inserter(picked), count, rng);
    return picked;
}

ExperimentReport run_convergence_experiment(const ConvergenceConfig& config) {
    config.params.validate();
    if (config.ns.empty() || !std::is_sorted(config.ns.begin(), config.ns.end()) ||
        std::adjacent_find(config.ns.begin(), config.ns.end()) != config.ns.end()) {
        throw InvalidInput("sample sizes must be nonempty and strictly ascending");
    }
    if (config.ns.front() == 0 || config.trials == 0) {
        throw InvalidInput("sample sizes and trial count must be positive");
    }
    if (config.density_point.size() != 2) {
        throw InvalidInput("density point must be two-dimensional");
    }

    ExperimentReport report;
    report.experiment = "converge";
    const std::array<double, 2> origin{0.0, 0.0};
    const std::array<double, 2> far_corner{1.0, 1.0};

    for (const std::size_t n : config.ns) {
        for (std::size_t t = 0; t < config.trials; ++t) {
            const std::uint64_t seed = derive_seed(config.seed, n, t);
            const PointSet sample = gen_uniform_square(n, 2, seed);

            ExperimentRecord base;
            base.p = config.params.p;
            base.q = config.params.q;
            base.n = n;
            base.d = 2;
            base.seed = config.seed;
            base.trial_seed = seed;
            base.trial = t;

            if (config.density) {
                ExperimentRecord rec = base;
                rec.engine = "density";
                const auto start = Clock::now();
                const DensityEstimate est = nn_density_estimate(config.density_point, sample, config.params.p);
                rec.wall_seconds = seconds_since(start);
                rec.metrics["density"] = est.value;
                rec.metrics["nn_distance"] = est.nn_distance;
                report.records.push_back(std::move(rec));
            }
            if (config.dbd) {
                ExperimentRecord rec = base;
                rec.engine = "dbd";
                const PointSet with_corners = sample.with_appended(origin).with_appended(far_corner);
                const GoalSet goal({Goal{n, 0}});
                const auto start = Clock::now();
                const ShortestPathResult r = dijkstra_star(with_corners, goal, config.params);
                rec.wall_seconds = seconds_since(start);
                fill_search_fields(rec, r);
                rec.metrics["dbd"] = r.cost[n + 1];
                rec.metrics["scaled_dbd"] = std::sqrt(static_cast<double>(n)) * r.cost[n + 1];
                report.records.push_back(std::move(rec));
            }
        }
    }
    add_summaries(report, {"density", "scaled_dbd"});
    return report;
}

ExperimentReport run_timing_experiment(const PointSet& points, const TimingConfig& config) {
    config.params.validate();
    if (config.trials == 0) {
        throw InvalidInput("timing experiment needs at least one trial");
    }
    const std::size_t n = points.size();
    for (std::size_t k : config.ks) {
        if (k < 1 || k + 1 > n) {
            throw InvalidInput("k = " + std::to_string(k) + " outside [1, n-1]");
        }
    }

    ExperimentReport report;
    report.experiment = "bench";
    for (std::size_t t = 0; t < config.trials; ++t) {
        const std::uint64_t seed = derive_seed(config.seed, 0, t);
        std::vector<Goal> goal_list;
        for (std::size_t idx : sample_goal_indices(n, config.goal_count, seed)) goal_list.push_back({idx, 0});
        const GoalSet goals(std::move(goal_list));

        ExperimentRecord base;
        base.p = config.params.p;
        base.q = config.params.q;
        base.n = n;
        base.d = points.dim();
        base.seed = config.seed;
        base.trial_seed = seed;
        base.trial = t;

        if (config.run_star) {
            ExperimentRecord rec = base;
            rec.engine = "dbd";
            const auto start = Clock::now();
            const ShortestPathResult r = dijkstra_star(points, goals, config.params);
            rec.wall_seconds = seconds_since(start);
            fill_search_fields(rec, r);
            rec.metrics["total_seconds"] = rec.wall_seconds;
            rec.metrics["search_seconds"] = rec.wall_seconds;
            rec.metrics["unreachable"] = static_cast<double>(r.unreachable_count);
            rec.metrics["pops"] = static_cast<double>(r.stats.pops);
            report.records.push_back(std::move(rec));
        }
        for (std::size_t k : config.ks) {
            ExperimentRecord rec = base;
            rec.engine = "dbd-knn";
            rec.k = k;
            const auto graph_start = Clock::now();
            const WeightedGraph graph = build_knn_graph(points, k, config.params, true);
            rec.graph_seconds = seconds_since(graph_start);
            const auto search_start = Clock::now();
            const ShortestPathResult r = dijkstra_knn(graph, goals);
            rec.wall_seconds = seconds_since(search_start);
            fill_search_fields(rec, r);
            rec.metrics["total_seconds"] = rec.graph_seconds + rec.wall_seconds;
            rec.metrics["search_seconds"] = rec.wall_seconds;
            rec.metrics["unreachable"] = static_cast<double>(r.unreachable_count);
            rec.metrics["pops"] = static_cast<double>(r.stats.pops);
            rec.metrics["edges"] = static_cast<double>(graph.edge_count());
            report.records.push_back(std::move(rec));
        }
    }
    add_summaries(report, {"total_seconds", "search_seconds", "unreachable", "pops"});
    return report;
}

}  // namespace dbd

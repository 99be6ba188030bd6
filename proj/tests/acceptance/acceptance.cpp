// Acceptance suite: one PASS/FAIL line per criterion. Pass criterion numbers
// as arguments to run a subset.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dbd/classify.hpp"
#include "dbd/experiments.hpp"
#include "dbd/metric.hpp"
#include "dbd/nn_index.hpp"
#include "dbd/search.hpp"
#include "dbd/synthetic.hpp"
#include "oracles.hpp"
#include "properties.hpp"
#include "scenarios.hpp"

using namespace dbd;

namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
    bool pass = false;
    std::string detail;
};

template <typename... Parts>
std::string cat(const Parts&... parts) {
    std::ostringstream out;
    out.precision(6);
    (out << ... << parts);
    return out.str();
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

Verdict exactness() {
    const auto start = Clock::now();
    std::mt19937_64 rng(20240601);
    std::size_t mismatches = 0;
    std::size_t unreached = 0;
    double worst = 0.0;
    for (int instance = 0; instance < 50; ++instance) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(50, 500)(rng);
        const std::size_t d = std::uniform_int_distribution<std::size_t>(2, 10)(rng);
        const double p = std::array{1.0, 2.0, 5.0}[rng() % 3];
        const double q = std::array{1.0, 2.0, 4.0, 8.0}[rng() % 4];
        const std::size_t goal_count = std::uniform_int_distribution<std::size_t>(1, 10)(rng);
        const PointSet points = oracle::random_points(rng, n, d);
        const GoalSet goals = oracle::random_goals(rng, n, goal_count);
        const auto r = dijkstra_star(points, goals, {p, q});
        const auto want = oracle::dense_dijkstra(points, oracle::goal_indices(goals), p, q);
        unreached += r.unreachable_count;
        for (PointIndex i = 0; i < n; ++i) {
            if (!r.reached(i)) ++unreached;
            if (want[i] > 0) worst = std::max(worst, std::abs(r.cost[i] - want[i]) / want[i]);
            if (!oracle::close_rel(r.cost[i], want[i], 1e-9)) ++mismatches;
        }
    }
    const double elapsed = seconds_since(start);
    return {mismatches == 0 && unreached == 0 && elapsed < 30.0,
            cat("50 instances, ", mismatches, " cost mismatches, ", unreached, " unreached, worst rel err ", worst, ", ",
                elapsed, " s")};
}

Verdict q1_collapse() {
    std::mt19937_64 rng(77);
    double worst = 0.0;
    for (int instance = 0; instance < 20; ++instance) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(20, 400)(rng);
        const std::size_t d = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
        const double p = std::array{1.0, 1.5, 2.0, 5.0}[rng() % 4];
        const PointSet points = oracle::random_points(rng, n, d);
        const GoalSet goals = oracle::random_goals(rng, n, std::uniform_int_distribution<std::size_t>(1, 10)(rng));
        const auto r = dijkstra_star(points, goals, {p, 1.0});
        for (PointIndex i = 0; i < n; ++i) {
            double direct = INFINITY;
            for (const Goal& g : goals) direct = std::min(direct, oracle::naive_distance(points[i], points[g.index], p));
            if (direct > 0) worst = std::max(worst, std::abs(r.cost[i] - direct) / direct);
            else if (r.cost[i] != 0) worst = INFINITY;
        }
    }
    return {worst <= 1e-12, cat("20 instances, worst rel err ", worst)};
}

Verdict density() {
    const auto start = Clock::now();
    ConvergenceConfig config;
    config.ns = {100, 1000, 10000};
    config.trials = 500;
    config.dbd = false;
    config.seed = 11;
    const auto report = run_convergence_experiment(config);
    std::string detail;
    for (std::size_t n : config.ns) {
        const Summary& s = report.find("density", 0, n, "density")->stats;
        detail += cat("n=", n, " median ", s.median, " IQR [", s.p25, ", ", s.p75, "]; ");
    }
    const Summary& big = report.find("density", 0, 10000, "density")->stats;
    const bool median_ok = std::abs(big.median - 1.0) <= 0.1;
    const bool spread_ok = big.p75 - big.p25 > 0.3 * big.median;
    const double elapsed = seconds_since(start);
    return {median_ok && spread_ok && elapsed < 120.0, detail + cat(elapsed, " s")};
}

Verdict convergence() {
    const auto start = Clock::now();
    ConvergenceConfig config;
    config.ns = {50, 200, 1000, 5000};
    config.trials = 50;
    config.params = {2.0, 2.0};
    config.density = false;
    config.seed = 12;
    const auto report = run_convergence_experiment(config);
    std::string detail;
    for (std::size_t n : config.ns) {
        const Summary& s = report.find("dbd", 0, n, "scaled_dbd")->stats;
        detail += cat("n=", n, " mean ", s.mean, " std ", s.std, "; ");
    }
    const Summary& s50 = report.find("dbd", 0, 50, "scaled_dbd")->stats;
    const Summary& s1000 = report.find("dbd", 0, 1000, "scaled_dbd")->stats;
    const Summary& s5000 = report.find("dbd", 0, 5000, "scaled_dbd")->stats;
    const bool std_ok = s5000.std < 0.5 * s50.std;
    const bool mean_ok = std::abs(s5000.mean - s1000.mean) < 0.1 * s1000.mean;
    const double elapsed = seconds_since(start);
    return {std_ok && mean_ok && elapsed < 300.0, detail + cat(elapsed, " s")};
}

Verdict ball_volume() {
    double worst_mc = 0.0;
    std::uint64_t seed = 5;
    for (double p : {1.0, 2.0, 3.0}) {
        for (std::size_t d : {1u, 2u, 3u}) {
            const double mc = oracle::monte_carlo_ball_volume(p, d, 1000000, seed++);
            worst_mc = std::max(worst_mc, std::abs(lp_ball_volume(p, d) - mc) / mc);
        }
    }
    double worst_exact = std::abs(lp_ball_volume(2.0, 2) - std::numbers::pi);
    worst_exact = std::max(worst_exact, std::abs(lp_ball_volume(1.0, 2) - 2.0));
    for (double p : {1.0, 1.5, 2.0, 3.0, 7.0, 50.0}) worst_exact = std::max(worst_exact, std::abs(lp_ball_volume(p, 1) - 2.0));
    return {worst_mc < 0.02 && worst_exact < 1e-9,
            cat("worst Monte Carlo rel err ", worst_mc, ", worst exact err ", worst_exact)};
}

Verdict timing() {
    const auto start = Clock::now();
    const PointSet points = gen_uniform_square(50000, 10, 2024);
    TimingConfig config;
    config.ks = {15, 30, 100};
    config.goal_count = 100;
    config.trials = 3;
    config.params = {2.0, 8.0};
    config.seed = 13;
    const auto report = run_timing_experiment(points, config);

    bool monotone = true;
    std::map<std::size_t, std::vector<std::pair<std::size_t, std::size_t>>> unreached_by_trial;
    for (const auto& rec : report.records) {
        if (rec.engine == "dbd-knn") unreached_by_trial[rec.trial].emplace_back(rec.k, rec.unreachable);
    }
    std::string unreached_detail;
    for (auto& [trial, list] : unreached_by_trial) {
        std::sort(list.begin(), list.end());
        for (std::size_t t = 1; t < list.size(); ++t) monotone = monotone && list[t].second <= list[t - 1].second;
        if (trial == 0) {
            for (const auto& [k, u] : list) unreached_detail += cat("k=", k, ":", u, " ");
        }
    }

    const double star = report.find("dbd", 0, 50000, "total_seconds")->stats.median;
    const double knn = report.find("dbd-knn", 100, 50000, "total_seconds")->stats.median;
    const double speedup = knn / star;
    const double elapsed = seconds_since(start);
    return {monotone && speedup >= 2.0 && elapsed < 600.0,
            cat("unreachable (trial 0) ", unreached_detail, monotone ? "non-increasing" : "NOT monotone",
                "; median total dbd ", star, " s vs knn(100) ", knn, " s, speedup ", speedup, "x; ", elapsed, " s")};
}

Verdict clusters() {
    double dbd_error = 0.0;
    double euclid_error = 0.0;
    bool geometry_ok = true;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const TwoClusterData data = gen_two_clusters(400, 0.3, 0.02, seed);
        const GoalSet goals = data.dataset.goals();
        const auto& pts = data.dataset.points;
        bool closer_to_wrong = false;
        for (PointIndex i = 0; i < pts.size(); ++i) {
            const auto& own = goals[0].label == data.truth[i] ? goals[0] : goals[1];
            const auto& other = goals[0].label == data.truth[i] ? goals[1] : goals[0];
            if (lp_distance(pts[i], pts[other.index], 2.0) < lp_distance(pts[i], pts[own.index], 2.0)) {
                closer_to_wrong = true;
            }
        }
        geometry_ok = geometry_ok && closer_to_wrong;
        dbd_error += error_rate(predict_1nn(data.dataset, {2.0, 8.0}, Engine::dbd()), data.truth) / 10.0;
        euclid_error += error_rate(predict_1nn(data.dataset, {2.0, 8.0}, Engine::euclid()), data.truth) / 10.0;
    }
    return {geometry_ok && dbd_error < euclid_error,
            cat("mean error over 10 seeds: dbd ", dbd_error, ", euclid ", euclid_error,
                geometry_ok ? "" : "; some seed lacks wrong-side points")};
}

Verdict isomap_contrast() {
    const auto arcs = oracle::two_arcs();
    const std::set<PointIndex> dense(arcs.dense.begin(), arcs.dense.end());
    const std::set<PointIndex> sparse(arcs.sparse.begin(), arcs.sparse.end());
    const GoalSet from_a({{arcs.a, 0}});
    const std::size_t k = 6;

    const auto interior_in = [&](const std::vector<PointIndex>& path, const std::set<PointIndex>& arc) {
        if (path.size() < 3 || path.front() != arcs.a || path.back() != arcs.b) return false;
        return std::all_of(path.begin() + 1, path.end() - 1, [&](PointIndex i) { return arc.count(i) > 0; });
    };

    const auto dbd_full = reconstruct_path(dijkstra_star(arcs.points, from_a, {2.0, 8.0}), arcs.b);
    const auto dbd_knn =
        reconstruct_path(dijkstra_knn(build_knn_graph(arcs.points, k, {2.0, 8.0}), from_a), arcs.b);
    const auto iso = reconstruct_path(isomap_distances(arcs.points, from_a, k, 2.0), arcs.b);

    const bool ok = interior_in(dbd_full, dense) && interior_in(dbd_knn, dense) && interior_in(iso, sparse);
    return {ok, cat("k=", k, "; dbd path ", dbd_full.size(), " points (", interior_in(dbd_full, dense) ? "dense" : "other",
                    "), dbd-knn path ", dbd_knn.size(), " points (", interior_in(dbd_knn, dense) ? "dense" : "other",
                    "), isomap path ", iso.size(), " points (", interior_in(iso, sparse) ? "sparse" : "other", ")")};
}

Verdict oracle_suite() {
    const auto start = Clock::now();
    std::mt19937_64 rng(99);
    std::size_t ops = 0;
    const auto stream_failure = oracle::nn_operation_stream(rng, 20000, &ops);

    std::size_t knn_mismatch = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        std::mt19937_64 r(seed);
        const PointSet points = oracle::random_points(r, 500, 3);
        const NnIndex index(points, 2.0);
        for (PointIndex q = 0; q < 500; q += 10) {
            const auto got = index.knn(q, 10);
            const auto want = oracle::brute_knn(points, points[q], q, 10, 2.0);
            for (std::size_t t = 0; t < 10; ++t) knn_mismatch += got[t].index != want[t].index;
        }
    }

    std::size_t failed_properties = 0;
    std::string failures;
    for (const auto& property : oracle::all_properties()) {
        const auto outcome = oracle::run_property(property);
        if (!outcome.passed()) {
            ++failed_properties;
            failures += cat(" ", property.module, "/", property.name, " case ", outcome.first_failing_case, ": ",
                            outcome.first_failure, ";");
        }
    }
    const bool ok = !stream_failure && knn_mismatch == 0 && failed_properties == 0;
    return {ok, cat(ops, " index ops", stream_failure ? " FAILED: " + *stream_failure : std::string(" matched"),
                    ", knn mismatches ", knn_mismatch, ", ", oracle::all_properties().size() - failed_properties, "/",
                    oracle::all_properties().size(), " properties x ", oracle::kPropertyCases, " cases passed",
                    failures, "; ", seconds_since(start), " s")};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
        {"Dijkstra* matches dense Dijkstra on the complete graph", exactness},
        {"q=1 collapses to the direct distance to the nearest goal", q1_collapse},
        {"density estimator median converges while its spread does not", density},
        {"sqrt(n)-scaled corner distance converges", convergence},
        {"l_p ball volume", ball_volume},
        {"k-NN unreachable counts and Dijkstra* speedup at 50k points", timing},
        {"cluster assumption: DBD 1-NN beats Euclidean 1-NN", clusters},
        {"DBD follows the dense arc, ISOMAP the short sparse arc", isomap_contrast},
        {"nearest-neighbor oracle and property suite", oracle_suite},
    };
    std::set<int> selected;
    for (int a = 1; a < argc; ++a) selected.insert(std::atoi(argv[a]));

    int failures = 0;
    for (std::size_t c = 0; c < criteria.size(); ++c) {
        const int number = static_cast<int>(c + 1);
        if (!selected.empty() && !selected.count(number)) continue;
        Verdict v;
        try {
            v = criteria[c].second();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        failures += !v.pass;
        std::printf("%s criterion %d: %s (%s)\n", v.pass ? "PASS" : "FAIL", number, criteria[c].first, v.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}

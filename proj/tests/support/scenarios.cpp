#include "scenarios.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "dbd/synthetic.hpp"

namespace dbd::oracle {

TwoArcs two_arcs(std::size_t dense_count, std::size_t sparse_count) {
    TwoArcs out;
    std::vector<std::vector<double>> rows{{-1.0, 0.0}, {1.0, 0.0}};
    for (std::size_t i = 1; i <= dense_count; ++i) {
        const double theta = std::numbers::pi * double(i) / double(dense_count + 1);
        out.dense.push_back(rows.size());
        rows.push_back({-std::cos(theta), std::sin(theta)});
    }
    for (std::size_t i = 1; i <= sparse_count; ++i) {
        const double t = double(i) / double(sparse_count + 1);
        out.sparse.push_back(rows.size());
        rows.push_back({-1.0 + 2.0 * t, -0.4 * std::sin(std::numbers::pi * t)});
    }
    out.points = PointSet::from_rows(rows);
    return out;
}

BarData bars_with_spread_labels(std::size_t n, std::uint64_t seed) {
    TwoClusterData base = gen_two_clusters(n, 0.1, 0.005, seed);
    BarData out{base.dataset, base.truth};
    out.dataset.labels.assign(n, std::nullopt);
    const auto label_nearest = [&](int cluster, double x) {
        PointIndex best = 0;
        double best_gap = std::numeric_limits<double>::infinity();
        for (PointIndex i = 0; i < n; ++i) {
            const double gap = std::abs(out.dataset.points[i][0] - x);
            if (out.truth[i] == cluster && gap < best_gap) {
                best_gap = gap;
                best = i;
            }
        }
        out.dataset.labels[best] = cluster;
    };
    for (double x : {0.02, 0.15, 0.3, 0.45}) label_nearest(0, x);
    for (double x : {0.55, 0.7, 0.85, 0.98}) label_nearest(1, x);
    return out;
}

}  // namespace dbd::oracle

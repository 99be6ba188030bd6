#pragma once

#include <cstddef>
#include <span>
#include <tuple>
#include <vector>

#include "dbd/metric.hpp"
#include "dbd/point_set.hpp"

namespace dbd {

/// Explicit weighted graph in compressed sparse row form.
struct WeightedGraph {
    std::vector<std::size_t> offsets{0};
    std::vector<PointIndex> targets;
    std::vector<double> weights;

    std::size_t vertex_count() const noexcept { return offsets.size() - 1; }
    std::size_t edge_count() const noexcept { return targets.size(); }

    std::span<const PointIndex> neighbors(PointIndex v) const noexcept {
        return {targets.data() + offsets[v], offsets[v + 1] - offsets[v]};
    }
    std::span<const double> neighbor_weights(PointIndex v) const noexcept {
        return {weights.data() + offsets[v], offsets[v + 1] - offsets[v]};
    }

    bool has_edge(PointIndex from, PointIndex to) const noexcept;

    /// Builds a graph from (from, to, weight) triples. With `undirected`, every
    /// edge is inserted in both directions. Duplicate arcs keep the smallest weight.
    static WeightedGraph from_edges(std::size_t vertex_count,
                                    const std::vector<std::tuple<PointIndex, PointIndex, double>>& edges,
                                    bool undirected);
};

/// k-nearest-neighbor graph with edge weights ||x_i - x_j||_p^q.
///
/// With `symmetrize`, (i, j) is an edge iff j is among i's k nearest or i is
/// among j's (union rule). Otherwise arcs run from each point to its k nearest.
/// Throws InvalidInput unless 1 <= k <= n - 1.
WeightedGraph build_knn_graph(const PointSet& points, std::size_t k, const MetricParams& params,
                              bool symmetrize = true);

}  // namespace dbd

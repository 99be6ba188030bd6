#include "dbd/graph.hpp"

#include <algorithm>
#include <string>

#include "dbd/error.hpp"
#include "dbd/nn_index.hpp"

namespace dbd {

bool WeightedGraph::has_edge(PointIndex from, PointIndex to) const noexcept {
    if (from >= vertex_count()) return false;
    const auto nbrs = neighbors(from);
    return std::binary_search(nbrs.begin(), nbrs.end(), to);
}

WeightedGraph WeightedGraph::from_edges(std::size_t vertex_count,
                                        const std::vector<std::tuple<PointIndex, PointIndex, double>>& edges,
                                        bool undirected) {
    std::vector<std::tuple<PointIndex, PointIndex, double>> arcs;
    arcs.reserve(undirected ? 2 * edges.size() : edges.size());
    for (const auto& [from, to, w] : edges) {
        if (from >= vertex_count || to >= vertex_count) {
            throw InvalidInput("edge (" + std::to_string(from) + ", " + std::to_string(to) +
                               ") out of range for " + std::to_string(vertex_count) + " vertices");
        }
        if (!(w >= 0.0)) {
            throw InvalidInput("edge weights must be non-negative");
        }
        if (from == to) continue;
        arcs.emplace_back(from, to, w);
        if (undirected) arcs.emplace_back(to, from, w);
    }
    std::sort(arcs.begin(), arcs.end());

    WeightedGraph g;
    g.offsets.assign(vertex_count + 1, 0);
    g.targets.reserve(arcs.size());
    g.weights.reserve(arcs.size());
    for (std::size_t i = 0; i < arcs.size(); ++i) {
        const auto& [from, to, w] = arcs[i];
        if (i > 0 && std::get<0>(arcs[i - 1]) == from && std::get<1>(arcs[i - 1]) == to) continue;
        g.targets.push_back(to);
        g.weights.push_back(w);
        ++g.offsets[from + 1];
    }
    for (std::size_t v = 0; v < vertex_count; ++v) g.offsets[v + 1] += g.offsets[v];
    return g;
}

WeightedGraph build_knn_graph(const PointSet& points, std::size_t k, const MetricParams& params, bool symmetrize) {
    params.validate();
    const std::size_t n = points.size();
    if (n < 2 || k < 1 || k > n - 1) {
        throw InvalidInput("k = " + std::to_string(k) + " outside [1, n-1] for n = " + std::to_string(n));
    }
    const NnIndex index(points, params.p);
    std::vector<std::tuple<PointIndex, PointIndex, double>> edges;
    edges.reserve(n * k);
    for (PointIndex i = 0; i < n; ++i) {
        for (const Neighbor& nb : index.knn(i, k)) {
            edges.emplace_back(i, nb.index, weight_from_distance(nb.distance, params.q));
        }
    }
    return WeightedGraph::from_edges(n, edges, symmetrize);
}

}  // namespace dbd

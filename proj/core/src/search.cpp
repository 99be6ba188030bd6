#include "dbd/search.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <string>
#include <thread>
#include <unordered_set>

#include "dbd/error.hpp"
#include "parallel.hpp"

namespace dbd {

GoalSet::GoalSet(std::vector<Goal> goals) : goals_(std::move(goals)) {
    if (goals_.empty()) {
        throw InvalidInput("goal set is empty");
    }
    std::unordered_set<PointIndex> seen;
    for (const Goal& g : goals_) {
        if (!seen.insert(g.index).second) {
            throw InvalidInput("point " + std::to_string(g.index) + " appears twice in the goal set");
        }
    }
}

void GoalSet::check_range(std::size_t n) const {
    for (const Goal& g : goals_) {
        if (g.index >= n) {
            throw InvalidInput("goal point " + std::to_string(g.index) + " out of range for " + std::to_string(n) +
                               " points");
        }
    }
}

namespace {

bool entry_after(const QueueEntry& a, const QueueEntry& b) noexcept {
    if (a.cost != b.cost) return a.cost > b.cost;
    if (a.candidate != b.candidate) return a.candidate > b.candidate;
    if (a.goal_point != b.goal_point) return a.goal_point > b.goal_point;
    return a.prefix > b.prefix;
}

ShortestPathResult empty_result(std::size_t n) {
    ShortestPathResult r;
    r.cost.assign(n, kUnreached);
    r.predecessor.assign(n, kNone);
    r.source.assign(n, kNone);
    r.finalize_order.reserve(n);
    return r;
}

}  // namespace

void SearchQueue::push(const QueueEntry& e) {
    heap_.push_back(e);
    std::push_heap(heap_.begin(), heap_.end(), entry_after);
    peak_ = std::max(peak_, heap_.size());
}

QueueEntry SearchQueue::pop() {
    std::pop_heap(heap_.begin(), heap_.end(), entry_after);
    QueueEntry e = heap_.back();
    heap_.pop_back();
    return e;
}

DijkstraStar::DijkstraStar(const PointSet& points, const GoalSet& goals, const MetricParams& params)
    : points_(points), goals_(goals), params_(params), index_(points, params.p) {
    params_.validate();
    goals_.check_range(points_.size());
    slot_of_.assign(points_.size(), kNone);
    pending_.resize(points_.size());
    cursor_.assign(points_.size(), 0);
    arena_.reserve(points_.size());
    finalize_order_.reserve(points_.size());

    // Close every goal before expanding any, so no goal becomes an interior node.
    for (std::size_t g = 0; g < goals_.size(); ++g) {
        const PointIndex x = goals_[g].index;
        index_.remove(x);
        slot_of_[x] = arena_.size();
        arena_.push_back({x, kNone, 0.0, g});
        finalize_order_.push_back(x);
    }
    for (std::size_t slot = 0; slot < goals_.size(); ++slot) push_next(slot);
}

void DijkstraStar::push_next(std::size_t prefix) {
    const ArenaEntry& path = arena_.at(prefix);
    auto& cache = pending_[path.terminal];
    auto& at = cursor_[path.terminal];
    while (at < cache.size() && !index_.is_open(cache[at].index)) ++at;
    if (at == cache.size()) {
        cache.clear();
        at = 0;
        if (index_.open_count() == 0) return;
        cache = index_.nearest_open(path.terminal, kNeighborBatch, &nn_stats_);
        if (cache.empty()) return;
    }
    const Neighbor& nb = cache[at];
    queue_.push({path.cost + weight_from_distance(nb.distance, params_.q), nb.index, goals_[path.source].index,
                 prefix});
    ++stats_.pushes;
}

bool DijkstraStar::step() {
    if (queue_.empty()) return false;
    stats_.queue_size_sum += queue_.size();
    const QueueEntry e = queue_.pop();
    ++stats_.pops;

    if (!index_.is_open(e.candidate)) {
        // Another path closed the candidate first; keep the prefix's extension pending.
        ++stats_.stale_pops;
        push_next(e.prefix);
        return true;
    }

    index_.remove(e.candidate);
    const std::size_t slot = arena_.size();
    arena_.push_back({e.candidate, e.prefix, e.cost, arena_[e.prefix].source});
    slot_of_[e.candidate] = slot;
    finalize_order_.push_back(e.candidate);
    push_next(slot);
    push_next(e.prefix);
    return true;
}

ShortestPathResult DijkstraStar::run() {
    while (step()) {
    }
    ShortestPathResult r = empty_result(points_.size());
    for (const ArenaEntry& a : arena_) {
        r.cost[a.terminal] = a.cost;
        r.source[a.terminal] = a.source;
        r.predecessor[a.terminal] = a.parent == kNone ? kNone : arena_[a.parent].terminal;
    }
    r.unreachable_count = static_cast<std::size_t>(std::count(r.source.begin(), r.source.end(), kNone));
    r.finalize_order = finalize_order_;
    r.stats = stats_;
    r.stats.max_queue_size = queue_.peak_size();
    r.stats.nn_queries = nn_stats_.queries;
    r.stats.points_examined = nn_stats_.points_examined;
    r.stats.nodes_visited = nn_stats_.nodes_visited;
    return r;
}

ShortestPathResult dijkstra_star(const PointSet& points, const GoalSet& goals, const MetricParams& params) {
    DijkstraStar search(points, goals, params);
    return search.run();
}

ShortestPathResult dijkstra_knn(const WeightedGraph& graph, const GoalSet& goals) {
    const std::size_t n = graph.vertex_count();
    goals.check_range(n);
    ShortestPathResult r = empty_result(n);

    struct Item {
        double cost;
        PointIndex vertex;
        PointIndex goal_point;
        std::size_t goal;
        PointIndex from;
    };
    const auto after = [](const Item& a, const Item& b) {
        if (a.cost != b.cost) return a.cost > b.cost;
        if (a.vertex != b.vertex) return a.vertex > b.vertex;
        return a.goal_point > b.goal_point;
    };
    std::priority_queue<Item, std::vector<Item>, decltype(after)> heap(after);
    std::vector<std::uint8_t> closed(n, 0);
    std::vector<double> tentative(n, kUnreached);

    for (std::size_t g = 0; g < goals.size(); ++g) {
        tentative[goals[g].index] = 0.0;
        heap.push({0.0, goals[g].index, goals[g].index, g, kNone});
        ++r.stats.pushes;
    }
    while (!heap.empty()) {
        r.stats.queue_size_sum += heap.size();
        r.stats.max_queue_size = std::max(r.stats.max_queue_size, heap.size());
        const Item it = heap.top();
        heap.pop();
        ++r.stats.pops;
        if (closed[it.vertex]) {
            ++r.stats.stale_pops;
            continue;
        }
        closed[it.vertex] = 1;
        r.cost[it.vertex] = it.cost;
        r.source[it.vertex] = it.goal;
        r.predecessor[it.vertex] = it.from;
        r.finalize_order.push_back(it.vertex);

        const auto nbrs = graph.neighbors(it.vertex);
        const auto wts = graph.neighbor_weights(it.vertex);
        for (std::size_t e = 0; e < nbrs.size(); ++e) {
            const PointIndex v = nbrs[e];
            if (closed[v]) continue;
            const double c = it.cost + wts[e];
            // Equal-cost offers are kept so the goal tie rule can decide.
            if (c <= tentative[v]) {
                tentative[v] = c;
                heap.push({c, v, it.goal_point, it.goal, it.vertex});
                ++r.stats.pushes;
            }
        }
    }
    r.unreachable_count = n - r.finalize_order.size();
    return r;
}

ShortestPathResult isomap_distances(const PointSet& points, const GoalSet& goals, std::size_t k, double p) {
    goals.check_range(points.size());
    return dijkstra_knn(build_knn_graph(points, k, MetricParams{p, 1.0}, true), goals);
}

std::vector<PointIndex> reconstruct_path(const ShortestPathResult& result, PointIndex idx) {
    if (idx >= result.size()) {
        throw InvalidInput("point index " + std::to_string(idx) + " out of range");
    }
    if (!result.reached(idx)) {
        throw NotReached("point " + std::to_string(idx) + " was not reached by the search");
    }
    std::vector<PointIndex> path;
    for (PointIndex v = idx; v != kNone; v = result.predecessor[v]) {
        path.push_back(v);
        if (path.size() > result.size()) {
            throw ContractViolation("predecessor chain contains a cycle");
        }
    }
    std::reverse(path.begin(), path.end());
    return path;
}

Engine Engine::parse(std::string_view name, std::size_t k) {
    if (name == "dbd") return k == 0 ? dbd() : dbd_knn(k);
    if (name == "dbd-knn") return dbd_knn(k);
    if (name == "isomap") return isomap(k);
    if (name == "euclid") return euclid();
    throw InvalidInput("unknown engine '" + std::string(name) + "' (expected dbd, dbd-knn, isomap, euclid)");
}

std::string Engine::name() const {
    switch (kind) {
        case Kind::dbd: return "dbd";
        case Kind::dbd_knn: return "dbd-knn";
        case Kind::isomap: return "isomap";
        case Kind::euclid: return "euclid";
    }
    return "unknown";
}

namespace {

ShortestPathResult nearest_goal_direct(const PointSet& points, const GoalSet& goals, double p) {
    ShortestPathResult r = empty_result(points.size());
    for (PointIndex i = 0; i < points.size(); ++i) {
        double best_key = kUnreached;
        std::size_t best = kNone;
        for (std::size_t g = 0; g < goals.size(); ++g) {
            const double key = lp_rank_key(points[i], points[goals[g].index], p);
            if (key < best_key || (key == best_key && goals[g].index < goals[best].index)) {
                best_key = key;
                best = g;
            }
        }
        r.cost[i] = key_to_distance(best_key, p);
        r.source[i] = best;
        r.predecessor[i] = goals[best].index == i ? kNone : goals[best].index;
    }
    std::vector<PointIndex> order(points.size());
    for (PointIndex i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](PointIndex a, PointIndex b) { return r.cost[a] < r.cost[b]; });
    r.finalize_order = std::move(order);
    return r;
}

void check_k(const Engine& engine, std::size_t n) {
    if (engine.k < 1 || engine.k + 1 > n) {
        throw InvalidInput("engine " + engine.name() + " needs 1 <= k <= n-1, got k = " + std::to_string(engine.k));
    }
}

}  // namespace

ShortestPathResult run_search(const PointSet& points, const GoalSet& goals, const MetricParams& params,
                              const Engine& engine) {
    params.validate();
    goals.check_range(points.size());
    switch (engine.kind) {
        case Engine::Kind::dbd:
            return dijkstra_star(points, goals, params);
        case Engine::Kind::dbd_knn:
            check_k(engine, points.size());
            return dijkstra_knn(build_knn_graph(points, engine.k, params, true), goals);
        case Engine::Kind::isomap:
            check_k(engine, points.size());
            return isomap_distances(points, goals, engine.k, params.p);
        case Engine::Kind::euclid:
            return nearest_goal_direct(points, goals, params.p);
    }
    throw InvalidInput("unknown engine");
}

DistanceMatrix all_pairs_to_goals(const PointSet& points, const GoalSet& goals, const MetricParams& params,
                                  const Engine& engine, unsigned threads) {
    params.validate();
    goals.check_range(points.size());
    DistanceMatrix m;
    m.rows = points.size();
    m.cols = goals.size();
    m.values.assign(m.rows * m.cols, kUnreached);

    WeightedGraph graph;
    if (engine.kind == Engine::Kind::dbd_knn || engine.kind == Engine::Kind::isomap) {
        check_k(engine, points.size());
        const MetricParams graph_params{params.p, engine.kind == Engine::Kind::isomap ? 1.0 : params.q};
        graph = build_knn_graph(points, engine.k, graph_params, true);
    }

    detail::parallel_for(goals.size(), threads, [&](std::size_t g) {
        const GoalSet single({goals[g]});
        ShortestPathResult r;
        switch (engine.kind) {
            case Engine::Kind::dbd: r = dijkstra_star(points, single, params); break;
            case Engine::Kind::dbd_knn:
            case Engine::Kind::isomap: r = dijkstra_knn(graph, single); break;
            case Engine::Kind::euclid: r = nearest_goal_direct(points, single, params.p); break;
        }
        for (std::size_t i = 0; i < m.rows; ++i) m.at(i, g) = r.cost[i];
    });
    return m;
}

}  // namespace dbd

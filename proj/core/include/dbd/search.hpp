#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dbd/graph.hpp"
#include "dbd/metric.hpp"
#include "dbd/nn_index.hpp"
#include "dbd/point_set.hpp"

namespace dbd {

inline constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
inline constexpr double kUnreached = std::numeric_limits<double>::infinity();

/// A labeled search origin.
struct Goal {
    PointIndex index = 0;
    int label = 0;

    friend bool operator==(const Goal&, const Goal&) = default;
};

/// Nonempty list of goals with distinct point indices.
class GoalSet {
public:
    /// Throws InvalidInput if empty or if two goals share a point index.
    explicit GoalSet(std::vector<Goal> goals);

    std::size_t size() const noexcept { return goals_.size(); }
    const Goal& operator[](std::size_t g) const noexcept { return goals_[g]; }
    auto begin() const noexcept { return goals_.begin(); }
    auto end() const noexcept { return goals_.end(); }

    /// Throws InvalidInput if any goal index is >= n.
    void check_range(std::size_t n) const;

private:
    std::vector<Goal> goals_;
};

struct SearchStats {
    double mean_queue_size() const noexcept {
        return pops ? static_cast<double>(queue_size_sum) / static_cast<double>(pops) : 0.0;
    }

    std::size_t pops = 0;
    std::size_t stale_pops = 0;
    std::size_t pushes = 0;
    std::size_t max_queue_size = 0;
    std::size_t queue_size_sum = 0;  ///< queue length summed over pops
    std::size_t nn_queries = 0;
    std::size_t points_examined = 0;
    std::size_t nodes_visited = 0;
};

/// Multi-goal shortest-path output. Indexed by point.
struct ShortestPathResult {
    std::vector<double> cost;              ///< kUnreached when no goal reaches the point
    std::vector<PointIndex> predecessor;   ///< kNone for goals and unreached points
    std::vector<std::size_t> source;       ///< goal index (into the GoalSet), kNone if unreached
    std::size_t unreachable_count = 0;
    std::vector<PointIndex> finalize_order;  ///< points in the order their costs became final
    SearchStats stats;

    std::size_t size() const noexcept { return cost.size(); }
    bool reached(PointIndex i) const noexcept { return source[i] != kNone; }
};

/// A closed path, stored as its terminal plus a link to the closed path it extends.
struct ArenaEntry {
    PointIndex terminal = 0;
    std::size_t parent = kNone;
    double cost = 0.0;
    std::size_t source = 0;  ///< goal index
};

/// Candidate extension of a closed path by one point.
struct QueueEntry {
    double cost = 0.0;
    PointIndex candidate = 0;
    PointIndex goal_point = 0;  ///< tie-breaker: lower goal point wins at equal cost
    std::size_t prefix = 0;     ///< arena index of the path being extended
};

/// Binary min-heap of QueueEntry ordered by (cost, candidate, goal_point, prefix).
class SearchQueue {
public:
    void push(const QueueEntry& e);
    QueueEntry pop();
    const QueueEntry& top() const { return heap_.front(); }
    bool empty() const noexcept { return heap_.empty(); }
    std::size_t size() const noexcept { return heap_.size(); }
    std::size_t peak_size() const noexcept { return peak_; }

private:
    std::vector<QueueEntry> heap_;
    std::size_t peak_ = 0;
};

/// Exact shortest paths through the implicit complete graph with weights
/// ||x_i - x_j||_p^q, expanding each closed path one nearest open neighbor
/// at a time.
///
/// Every closed path keeps exactly one pending extension in the queue: the
/// path extended by the nearest point still open when it was pushed. Popping
/// an extension (finalized or stale) re-pushes its prefix, so extensions are
/// generated lazily in non-decreasing order of length.
///
/// Nearest-open-neighbor answers are fetched from the index a few at a time
/// per terminal and consumed in order, skipping points closed since. The
/// open set only shrinks, so the first still-open cached neighbor is the
/// exact answer; an exhausted cache triggers a fresh index query.
class DijkstraStar {
public:
    static constexpr std::size_t kNeighborBatch = 8;

    /// Closes every goal with a zero-length path, then pushes each goal's
    /// first extension. Throws InvalidInput for bad goals or params.
    DijkstraStar(const PointSet& points, const GoalSet& goals, const MetricParams& params);

    /// Queues `prefix` extended by the nearest open neighbor of its terminal.
    /// No-op once every point is closed.
    void push_next(std::size_t prefix);

    /// Pops one queue entry. Returns false when the queue was already empty.
    bool step();

    /// Runs to exhaustion and returns the per-point result.
    ShortestPathResult run();

    const SearchQueue& queue() const noexcept { return queue_; }
    const std::vector<ArenaEntry>& arena() const noexcept { return arena_; }
    const NnIndex& index() const noexcept { return index_; }
    NnIndex& index() noexcept { return index_; }

    /// Arena slot holding point i's closed path, or kNone while it is open.
    std::size_t arena_slot(PointIndex i) const noexcept { return slot_of_[i]; }

private:
    const PointSet& points_;
    const GoalSet& goals_;
    MetricParams params_;
    NnIndex index_;
    SearchQueue queue_;
    std::vector<ArenaEntry> arena_;
    std::vector<std::size_t> slot_of_;
    std::vector<std::vector<Neighbor>> pending_;  // cached open neighbors per terminal
    std::vector<std::uint32_t> cursor_;
    std::vector<PointIndex> finalize_order_;
    SearchStats stats_;
    NnStats nn_stats_;
};

ShortestPathResult dijkstra_star(const PointSet& points, const GoalSet& goals, const MetricParams& params);

/// Multi-goal Dijkstra on an explicit graph. Points in components without a
/// goal stay unreached and are counted in `unreachable_count`.
ShortestPathResult dijkstra_knn(const WeightedGraph& graph, const GoalSet& goals);

/// Geodesic distances on the union k-NN graph with plain l_p edge lengths.
ShortestPathResult isomap_distances(const PointSet& points, const GoalSet& goals, std::size_t k, double p);

/// Points from the source goal to `idx`, following predecessors. Throws
/// NotReached if `idx` was not reached.
std::vector<PointIndex> reconstruct_path(const ShortestPathResult& result, PointIndex idx);

/// Which distance a search or classifier uses.
struct Engine {
    enum class Kind { dbd, dbd_knn, isomap, euclid };

    Kind kind = Kind::dbd;
    std::size_t k = 0;  ///< graph degree for dbd_knn and isomap

    static Engine dbd() { return {Kind::dbd, 0}; }
    static Engine dbd_knn(std::size_t k) { return {Kind::dbd_knn, k}; }
    static Engine isomap(std::size_t k) { return {Kind::isomap, k}; }
    static Engine euclid() { return {Kind::euclid, 0}; }

    /// Accepts "dbd", "dbd-knn", "isomap", "euclid". Throws InvalidInput otherwise.
    static Engine parse(std::string_view name, std::size_t k = 0);
    std::string name() const;

    friend bool operator==(const Engine&, const Engine&) = default;
};

/// Runs the search selected by `engine`. The euclid engine assigns every
/// point its directly nearest goal under l_p (q ignored).
ShortestPathResult run_search(const PointSet& points, const GoalSet& goals, const MetricParams& params,
                              const Engine& engine);

/// Dense points x goals cost matrix, row-major.
struct DistanceMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    double at(std::size_t row, std::size_t col) const noexcept { return values[row * cols + col]; }
    double& at(std::size_t row, std::size_t col) noexcept { return values[row * cols + col]; }
};

/// Column g holds the single-goal search costs from goal g. Goals are
/// searched independently on up to `threads` workers (0 = hardware concurrency).
DistanceMatrix all_pairs_to_goals(const PointSet& points, const GoalSet& goals, const MetricParams& params,
                                  const Engine& engine, unsigned threads = 0);

}  // namespace dbd

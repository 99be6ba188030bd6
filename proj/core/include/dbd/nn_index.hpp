#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dbd/point_set.hpp"

namespace dbd {

struct Neighbor {
    PointIndex index = 0;
    double distance = 0.0;

    friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Work counters for nearest-neighbor queries.
struct NnStats {
    std::size_t queries = 0;
    std::size_t points_examined = 0;
    std::size_t nodes_visited = 0;
};

/// Nearest-neighbor index over a point set with monotone point removal.
///
/// Backed by a kd-tree whose nodes track how many of their points are still
/// open, so fully closed subtrees are skipped. Small or high-dimensional sets
/// (n < 256 or d > 32) use a linear scan instead. Every query returns exactly
/// what a brute-force scan over the open points would, with ties broken by
/// the lowest point index.
///
/// Removal mutates the index; one search owns an index at a time. `knn`
/// ignores removals and is safe to call concurrently.
class NnIndex {
public:
    static constexpr std::size_t kBruteForceBelow = 256;
    static constexpr std::size_t kBruteForceAboveDim = 32;
    static constexpr std::size_t kLeafSize = 32;

    /// Throws InvalidInput if `points` is empty or p < 1.
    NnIndex(const PointSet& points, double p);

    std::size_t size() const noexcept { return n_; }
    std::size_t dim() const noexcept { return dim_; }
    double p() const noexcept { return p_; }
    std::size_t open_count() const noexcept { return open_total_; }
    bool is_open(PointIndex i) const;
    bool uses_tree() const noexcept { return !nodes_.empty(); }

    /// Closest open point to point `query`, excluding `query` itself. The
    /// query point may be closed. Empty when no other point is open.
    std::optional<Neighbor> nearest(PointIndex query, NnStats* stats = nullptr) const;

    /// Closest open point to an arbitrary location.
    std::optional<Neighbor> nearest_to(std::span<const double> location, NnStats* stats = nullptr) const;

    /// Up to k closest open points to point `query`, excluding `query`,
    /// ascending by distance with ties by index. Shorter than k only when
    /// fewer points are open.
    std::vector<Neighbor> nearest_open(PointIndex query, std::size_t k, NnStats* stats = nullptr) const;

    /// Closes point `i` for good. Throws ContractViolation if it is already closed.
    void remove(PointIndex i);

    /// The k nearest other points over the full set (removals ignored),
    /// ascending by distance, ties by index. Throws InvalidInput unless 1 <= k <= n-1.
    std::vector<Neighbor> knn(PointIndex query, std::size_t k) const;

private:
    struct Node {
        std::uint32_t begin = 0;
        std::uint32_t end = 0;
        std::int32_t left = -1;
        std::int32_t right = -1;
        std::int32_t parent = -1;
        std::uint32_t open = 0;
        std::uint32_t split_dim = 0;
        double left_hi = 0.0;   // largest split-dim coordinate in the left child
        double right_lo = 0.0;  // smallest split-dim coordinate in the right child
    };

    struct Probe;
    using HeapItem = std::pair<double, std::uint32_t>;  // (rank key, tree position)

    std::int32_t build_node(std::uint32_t begin, std::uint32_t end, std::int32_t parent);
    bool refresh_open_box(std::int32_t node);

    double point_key(std::uint32_t pos, const double* q, double bound) const noexcept;
    double open_box_key(std::int32_t node, const double* q, double bound) const noexcept;
    bool before(double key_a, std::uint32_t pos_a, double key_b, std::uint32_t pos_b) const noexcept;
    void offer(Probe& probe, double key, std::uint32_t pos) const;

    std::vector<Neighbor> query(const double* q, std::uint32_t exclude_pos, std::size_t k, bool open_only,
                                NnStats* stats) const;
    void search_open(std::int32_t node, double node_lb, Probe& probe) const;
    void search_all(std::int32_t node, double node_lb, Probe& probe) const;

    std::size_t n_ = 0;
    std::size_t dim_ = 0;
    double p_ = 2.0;
    std::size_t open_total_ = 0;

    std::vector<double> coords_;          // row-major, in tree order; open points lead each leaf
    std::vector<PointIndex> order_;       // tree position -> point index
    std::vector<std::uint32_t> pos_of_;   // point index -> tree position
    std::vector<std::uint8_t> open_;      // by tree position
    std::vector<Node> nodes_;
    std::vector<double> root_lo_;         // bounding box of the whole set
    std::vector<double> root_hi_;
    std::vector<double> open_lo_;         // per-node bounding box of its open points,
    std::vector<double> open_hi_;         // nodes_.size() x dim_; empty boxes are (+inf, -inf)
    std::vector<std::int32_t> leaf_of_;   // tree position -> leaf node
};

}  // namespace dbd

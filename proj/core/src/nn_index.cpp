#include "dbd/nn_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "dbd/error.hpp"
#include "dbd/metric.hpp"

namespace dbd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

inline double power_term(double diff, double p) noexcept {
    if (p == 2.0) return diff * diff;
    if (p == 1.0) return std::abs(diff);
    return std::pow(std::abs(diff), p);
}

}  // namespace

// Per-query traversal state: a bounded max-heap of the k best candidates so
// far and, for full-set searches, the per-dimension distance terms between
// the query and the region of the node being visited.
struct NnIndex::Probe {
    const double* q;
    std::uint32_t exclude;
    std::size_t k;
    std::vector<HeapItem> heap;
    std::vector<double> offsets;
    NnStats stats;

    double bound() const noexcept { return heap.size() < k ? kInf : heap.front().first; }
};

NnIndex::NnIndex(const PointSet& points, double p) : n_(points.size()), dim_(points.dim()), p_(p) {
    if (points.empty()) {
        throw InvalidInput("cannot build a nearest-neighbor index over an empty point set");
    }
    if (!(p >= 1.0) || !std::isfinite(p)) {
        throw InvalidInput("l_p order must be finite and >= 1, got " + std::to_string(p));
    }
    if (n_ >= std::numeric_limits<std::uint32_t>::max()) {
        throw InvalidInput("point set too large for the index");
    }
    open_total_ = n_;
    order_.resize(n_);
    std::iota(order_.begin(), order_.end(), PointIndex{0});
    open_.assign(n_, 1);

    const auto src = points.coords();
    coords_.assign(src.begin(), src.end());
    pos_of_.resize(n_);
    if (n_ < kBruteForceBelow || dim_ > kBruteForceAboveDim) {
        std::iota(pos_of_.begin(), pos_of_.end(), std::uint32_t{0});
        return;
    }

    nodes_.reserve(2 * (n_ / kLeafSize + 1));
    build_node(0, static_cast<std::uint32_t>(n_), -1);

    // Store coordinates in tree order so leaves scan contiguous memory.
    leaf_of_.assign(n_, -1);
    for (std::uint32_t pos = 0; pos < n_; ++pos) {
        pos_of_[order_[pos]] = pos;
        std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(order_[pos] * dim_), dim_,
                    coords_.begin() + static_cast<std::ptrdiff_t>(pos * dim_));
    }
    open_lo_.assign(nodes_.size() * dim_, kInf);
    open_hi_.assign(nodes_.size() * dim_, -kInf);
    // Children follow their parent in nodes_, so a reverse sweep sees them first.
    for (std::size_t node = nodes_.size(); node-- > 0;) {
        const Node& nd = nodes_[node];
        if (nd.left < 0) {
            for (std::uint32_t pos = nd.begin; pos < nd.end; ++pos) leaf_of_[pos] = static_cast<std::int32_t>(node);
        }
        refresh_open_box(static_cast<std::int32_t>(node));
    }
    root_lo_.assign(open_lo_.begin(), open_lo_.begin() + static_cast<std::ptrdiff_t>(dim_));
    root_hi_.assign(open_hi_.begin(), open_hi_.begin() + static_cast<std::ptrdiff_t>(dim_));
}

std::int32_t NnIndex::build_node(std::uint32_t begin, std::uint32_t end, std::int32_t parent) {
    // coords_ is still in original point order here.
    const auto id = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(Node{begin, end, -1, -1, parent, end - begin});
    if (end - begin <= kLeafSize) return id;

    const double* base = coords_.data();
    const std::size_t d = dim_;
    std::size_t split = 0;
    double spread = -1.0;
    for (std::size_t j = 0; j < d; ++j) {
        double lo = kInf;
        double hi = -kInf;
        for (std::uint32_t pos = begin; pos < end; ++pos) {
            const double c = base[order_[pos] * d + j];
            lo = std::min(lo, c);
            hi = std::max(hi, c);
        }
        if (hi - lo > spread) {
            spread = hi - lo;
            split = j;
        }
    }
    if (spread <= 0.0) return id;  // all points coincide

    const std::uint32_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [base, d, split](PointIndex a, PointIndex b) {
                         const double ca = base[a * d + split];
                         const double cb = base[b * d + split];
                         return ca < cb || (ca == cb && a < b);
                     });
    double left_hi = -kInf;
    for (std::uint32_t pos = begin; pos < mid; ++pos) left_hi = std::max(left_hi, base[order_[pos] * d + split]);
    double right_lo = kInf;
    for (std::uint32_t pos = mid; pos < end; ++pos) right_lo = std::min(right_lo, base[order_[pos] * d + split]);

    const std::int32_t left = build_node(begin, mid, id);
    const std::int32_t right = build_node(mid, end, id);
    Node& nd = nodes_[static_cast<std::size_t>(id)];
    nd.left = left;
    nd.right = right;
    nd.split_dim = static_cast<std::uint32_t>(split);
    nd.left_hi = left_hi;
    nd.right_lo = right_lo;
    return id;
}

// Recomputes the open-point box of `node` from its open points (leaf) or its
// children's boxes. Returns whether the box changed.
bool NnIndex::refresh_open_box(std::int32_t node) {
    const Node& nd = nodes_[static_cast<std::size_t>(node)];
    double* lo = open_lo_.data() + static_cast<std::size_t>(node) * dim_;
    double* hi = open_hi_.data() + static_cast<std::size_t>(node) * dim_;
    bool changed = false;
    for (std::size_t j = 0; j < dim_; ++j) {
        double new_lo = kInf;
        double new_hi = -kInf;
        if (nd.left < 0) {
            for (std::uint32_t pos = nd.begin; pos < nd.begin + nd.open; ++pos) {
                const double c = coords_[static_cast<std::size_t>(pos) * dim_ + j];
                new_lo = std::min(new_lo, c);
                new_hi = std::max(new_hi, c);
            }
        } else {
            const std::size_t l = static_cast<std::size_t>(nd.left) * dim_ + j;
            const std::size_t r = static_cast<std::size_t>(nd.right) * dim_ + j;
            new_lo = std::min(open_lo_[l], open_lo_[r]);
            new_hi = std::max(open_hi_[l], open_hi_[r]);
        }
        changed = changed || new_lo != lo[j] || new_hi != hi[j];
        lo[j] = new_lo;
        hi[j] = new_hi;
    }
    return changed;
}

bool NnIndex::is_open(PointIndex i) const {
    if (i >= n_) {
        throw InvalidInput("point index " + std::to_string(i) + " out of range");
    }
    return open_[pos_of_[i]] != 0;
}

bool NnIndex::before(double key_a, std::uint32_t pos_a, double key_b, std::uint32_t pos_b) const noexcept {
    if (key_a != key_b) return key_a < key_b;
    return order_[pos_a] < order_[pos_b];
}

double NnIndex::point_key(std::uint32_t pos, const double* q, double bound) const noexcept {
    const double* x = coords_.data() + static_cast<std::size_t>(pos) * dim_;
    double sum = 0.0;
    std::size_t j = 0;
    if (p_ == 2.0) {
        for (; j + 4 <= dim_; j += 4) {
            const double a = x[j] - q[j];
            const double b = x[j + 1] - q[j + 1];
            const double c = x[j + 2] - q[j + 2];
            const double e = x[j + 3] - q[j + 3];
            sum += a * a;
            sum += b * b;
            sum += c * c;
            sum += e * e;
            if (sum > bound) return sum;
        }
        for (; j < dim_; ++j) {
            const double t = x[j] - q[j];
            sum += t * t;
        }
    } else if (p_ == 1.0) {
        for (; j < dim_; ++j) {
            sum += std::abs(x[j] - q[j]);
            if ((j & 3) == 3 && sum > bound) return sum;
        }
    } else {
        for (; j < dim_; ++j) {
            sum += std::pow(std::abs(x[j] - q[j]), p_);
            if (sum > bound) return sum;
        }
    }
    return sum;
}

// Lower bound on the key of any open point under `node`. Each gap is at most
// the matching coordinate difference of such a point and terms are added in
// the same order as point_key, so the bound holds exactly in floating point.
double NnIndex::open_box_key(std::int32_t node, const double* q, double bound) const noexcept {
    const double* lo = open_lo_.data() + static_cast<std::size_t>(node) * dim_;
    const double* hi = open_hi_.data() + static_cast<std::size_t>(node) * dim_;
    double sum = 0.0;
    if (p_ == 2.0) {
        std::size_t j = 0;
        for (; j + 4 <= dim_; j += 4) {
            for (std::size_t t = j; t < j + 4; ++t) {
                const double gap = std::max(lo[t] - q[t], 0.0) + std::max(q[t] - hi[t], 0.0);
                sum += gap * gap;
            }
            if (sum > bound) return sum;
        }
        for (; j < dim_; ++j) {
            const double gap = std::max(lo[j] - q[j], 0.0) + std::max(q[j] - hi[j], 0.0);
            sum += gap * gap;
        }
        return sum;
    }
    for (std::size_t j = 0; j < dim_; ++j) {
        double gap = 0.0;
        if (q[j] < lo[j]) gap = lo[j] - q[j];
        else if (q[j] > hi[j]) gap = q[j] - hi[j];
        sum += power_term(gap, p_);
        if (sum > bound) return sum;
    }
    return sum;
}

void NnIndex::offer(Probe& probe, double key, std::uint32_t pos) const {
    const auto worse = [this](const HeapItem& a, const HeapItem& b) { return before(a.first, a.second, b.first, b.second); };
    if (probe.heap.size() < probe.k) {
        probe.heap.emplace_back(key, pos);
        std::push_heap(probe.heap.begin(), probe.heap.end(), worse);
    } else if (before(key, pos, probe.heap.front().first, probe.heap.front().second)) {
        std::pop_heap(probe.heap.begin(), probe.heap.end(), worse);
        probe.heap.back() = {key, pos};
        std::push_heap(probe.heap.begin(), probe.heap.end(), worse);
    }
}

std::optional<Neighbor> NnIndex::nearest(PointIndex query, NnStats* stats) const {
    if (query >= n_) {
        throw InvalidInput("query index " + std::to_string(query) + " out of range");
    }
    const std::uint32_t pos = pos_of_[query];
    auto found = this->query(coords_.data() + static_cast<std::size_t>(pos) * dim_, pos, 1, true, stats);
    if (found.empty()) return std::nullopt;
    return found.front();
}

std::optional<Neighbor> NnIndex::nearest_to(std::span<const double> location, NnStats* stats) const {
    if (location.size() != dim_) {
        throw InvalidInput("query dimension " + std::to_string(location.size()) + " does not match index dimension " +
                           std::to_string(dim_));
    }
    auto found = query(location.data(), static_cast<std::uint32_t>(n_), 1, true, stats);
    if (found.empty()) return std::nullopt;
    return found.front();
}

std::vector<Neighbor> NnIndex::nearest_open(PointIndex query, std::size_t k, NnStats* stats) const {
    if (query >= n_) {
        throw InvalidInput("query index " + std::to_string(query) + " out of range");
    }
    if (k < 1) {
        throw InvalidInput("nearest_open needs k >= 1");
    }
    const std::uint32_t pos = pos_of_[query];
    return this->query(coords_.data() + static_cast<std::size_t>(pos) * dim_, pos, k, true, stats);
}

std::vector<Neighbor> NnIndex::knn(PointIndex query, std::size_t k) const {
    if (query >= n_) {
        throw InvalidInput("query index " + std::to_string(query) + " out of range");
    }
    if (k < 1 || k > n_ - 1) {
        throw InvalidInput("k = " + std::to_string(k) + " outside [1, " + std::to_string(n_ - 1) + "]");
    }
    const std::uint32_t pos = pos_of_[query];
    return this->query(coords_.data() + static_cast<std::size_t>(pos) * dim_, pos, k, false, nullptr);
}

std::vector<Neighbor> NnIndex::query(const double* q, std::uint32_t exclude_pos, std::size_t k, bool open_only,
                                     NnStats* stats) const {
    Probe probe{q, exclude_pos, k, {}, {}, {}};
    probe.heap.reserve(k + 1);

    if (nodes_.empty()) {
        for (std::uint32_t pos = 0; pos < n_; ++pos) {
            if (pos == exclude_pos || (open_only && !open_[pos])) continue;
            ++probe.stats.points_examined;
            offer(probe, point_key(pos, q, probe.bound()), pos);
        }
    } else if (open_only) {
        if (nodes_.front().open > 0) search_open(0, open_box_key(0, q, kInf), probe);
    } else {
        probe.offsets.assign(dim_, 0.0);
        double lb = 0.0;
        for (std::size_t j = 0; j < dim_; ++j) {
            double gap = 0.0;
            if (q[j] < root_lo_[j]) gap = root_lo_[j] - q[j];
            else if (q[j] > root_hi_[j]) gap = q[j] - root_hi_[j];
            probe.offsets[j] = power_term(gap, p_);
            lb += probe.offsets[j];
        }
        search_all(0, lb, probe);
    }
    if (stats) {
        stats->queries += 1;
        stats->points_examined += probe.stats.points_examined;
        stats->nodes_visited += probe.stats.nodes_visited;
    }

    std::sort(probe.heap.begin(), probe.heap.end(),
              [this](const HeapItem& a, const HeapItem& b) { return before(a.first, a.second, b.first, b.second); });
    std::vector<Neighbor> out;
    out.reserve(probe.heap.size());
    for (const auto& [key, pos] : probe.heap) out.push_back({order_[pos], key_to_distance(key, p_)});
    return out;
}

void NnIndex::search_open(std::int32_t node, double node_lb, Probe& probe) const {
    const Node& nd = nodes_[static_cast<std::size_t>(node)];
    if (nd.open == 0 || node_lb > probe.bound()) return;
    ++probe.stats.nodes_visited;
    if (nd.left < 0) {
        const std::uint32_t open_end = nd.begin + nd.open;
        for (std::uint32_t pos = nd.begin; pos < open_end; ++pos) {
            if (pos == probe.exclude) continue;
            ++probe.stats.points_examined;
            const double bound = probe.bound();
            const double key = point_key(pos, probe.q, bound);
            if (key <= bound) offer(probe, key, pos);
        }
        return;
    }
    const bool left_open = nodes_[static_cast<std::size_t>(nd.left)].open > 0;
    const bool right_open = nodes_[static_cast<std::size_t>(nd.right)].open > 0;
    const double lb_left = left_open ? open_box_key(nd.left, probe.q, probe.bound()) : kInf;
    const double lb_right = right_open ? open_box_key(nd.right, probe.q, probe.bound()) : kInf;
    if (lb_left <= lb_right) {
        if (left_open) search_open(nd.left, lb_left, probe);
        if (right_open) search_open(nd.right, lb_right, probe);
    } else {
        if (right_open) search_open(nd.right, lb_right, probe);
        if (left_open) search_open(nd.left, lb_left, probe);
    }
}

// Full-set search with split-plane bounds. The far child's bound is re-summed
// from the offsets rather than updated incrementally, so it never exceeds the
// key of a point inside.
void NnIndex::search_all(std::int32_t node, double node_lb, Probe& probe) const {
    if (node_lb > probe.bound()) return;
    const Node& nd = nodes_[static_cast<std::size_t>(node)];
    ++probe.stats.nodes_visited;
    if (nd.left < 0) {
        for (std::uint32_t pos = nd.begin; pos < nd.end; ++pos) {
            if (pos == probe.exclude) continue;
            ++probe.stats.points_examined;
            const double bound = probe.bound();
            const double key = point_key(pos, probe.q, bound);
            if (key <= bound) offer(probe, key, pos);
        }
        return;
    }
    const std::uint32_t dim = nd.split_dim;
    const double v = probe.q[dim];
    const bool go_left = (v - nd.left_hi) + (v - nd.right_lo) < 0.0;
    const double cut = go_left ? power_term(std::max(nd.right_lo - v, 0.0), p_)
                               : power_term(std::max(v - nd.left_hi, 0.0), p_);
    search_all(go_left ? nd.left : nd.right, node_lb, probe);

    const double saved = probe.offsets[dim];
    probe.offsets[dim] = std::max(saved, cut);
    double far_lb = 0.0;
    const double limit = probe.bound();
    for (std::size_t j = 0; j < dim_ && far_lb <= limit; ++j) far_lb += probe.offsets[j];
    search_all(go_left ? nd.right : nd.left, far_lb, probe);
    probe.offsets[dim] = saved;
}

void NnIndex::remove(PointIndex i) {
    if (i >= n_) {
        throw InvalidInput("point index " + std::to_string(i) + " out of range");
    }
    std::uint32_t pos = pos_of_[i];
    if (!open_[pos]) {
        throw ContractViolation("point " + std::to_string(i) + " removed twice");
    }
    --open_total_;
    if (nodes_.empty()) {
        open_[pos] = 0;
        return;
    }
    // Keep each leaf's open points in a prefix of its range: swap the removed
    // point with the leaf's last open slot.
    const std::int32_t leaf = leaf_of_[pos];
    const Node& nd = nodes_[static_cast<std::size_t>(leaf)];
    const std::uint32_t last = nd.begin + nd.open - 1;
    if (pos != last) {
        const PointIndex other = order_[last];
        std::swap_ranges(coords_.begin() + static_cast<std::ptrdiff_t>(pos * dim_),
                         coords_.begin() + static_cast<std::ptrdiff_t>((pos + 1) * dim_),
                         coords_.begin() + static_cast<std::ptrdiff_t>(last * dim_));
        std::swap(order_[pos], order_[last]);
        pos_of_[other] = pos;
        pos_of_[i] = last;
        pos = last;
    }
    open_[pos] = 0;
    for (std::int32_t node = leaf; node >= 0; node = nodes_[static_cast<std::size_t>(node)].parent) {
        --nodes_[static_cast<std::size_t>(node)].open;
    }
    for (std::int32_t node = leaf; node >= 0 && refresh_open_box(node);
         node = nodes_[static_cast<std::size_t>(node)].parent) {
    }
}

}  // namespace dbd

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace dbd::oracle {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double naive_key(std::span<const double> a, std::span<const double> b, double p) {
    double sum = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) sum += std::pow(std::abs(a[j] - b[j]), p);
    return sum;
}

double naive_distance(std::span<const double> a, std::span<const double> b, double p) {
    return std::pow(naive_key(a, b, p), 1.0 / p);
}

double naive_weight(std::span<const double> a, std::span<const double> b, double p, double q) {
    return std::pow(naive_distance(a, b, p), q);
}

std::vector<double> matrix_dijkstra(const std::vector<std::vector<double>>& weights,
                                    const std::vector<PointIndex>& goals) {
    const std::size_t n = weights.size();
    std::vector<double> dist(n, kInf);
    std::vector<bool> done(n, false);
    for (PointIndex g : goals) dist[g] = 0.0;
    for (std::size_t iter = 0; iter < n; ++iter) {
        std::size_t best = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (!done[i] && dist[i] < kInf && (best == n || dist[i] < dist[best])) best = i;
        }
        if (best == n) break;
        done[best] = true;
        for (std::size_t j = 0; j < n; ++j) {
            if (!done[j] && weights[best][j] < kInf) dist[j] = std::min(dist[j], dist[best] + weights[best][j]);
        }
    }
    return dist;
}

std::vector<double> dense_dijkstra(const PointSet& points, const std::vector<PointIndex>& goals, double p, double q) {
    const std::size_t n = points.size();
    std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) w[i][j] = w[j][i] = naive_weight(points[i], points[j], p, q);
    }
    return matrix_dijkstra(w, goals);
}

std::vector<double> enumerate_paths(const PointSet& points, const std::vector<PointIndex>& goals, double p, double q) {
    const std::size_t n = points.size();
    std::vector<double> best(n, kInf);
    std::vector<bool> used(n, false);
    std::function<void(PointIndex, double)> walk = [&](PointIndex at, double cost) {
        best[at] = std::min(best[at], cost);
        for (PointIndex next = 0; next < n; ++next) {
            if (used[next]) continue;
            used[next] = true;
            walk(next, cost + naive_weight(points[at], points[next], p, q));
            used[next] = false;
        }
    };
    for (PointIndex g : goals) {
        used.assign(n, false);
        used[g] = true;
        walk(g, 0.0);
    }
    return best;
}

std::vector<Neighbor> brute_knn(const PointSet& points, std::span<const double> query, std::optional<PointIndex> self,
                                std::size_t k, double p, const std::vector<bool>& open) {
    std::vector<std::pair<double, PointIndex>> all;
    for (PointIndex i = 0; i < points.size(); ++i) {
        if (self && i == *self) continue;
        if (!open.empty() && !open[i]) continue;
        all.emplace_back(naive_key(points[i], query, p), i);
    }
    std::sort(all.begin(), all.end());
    all.resize(std::min(all.size(), k));
    std::vector<Neighbor> out;
    for (const auto& [key, i] : all) out.push_back({i, std::pow(key, 1.0 / p)});
    return out;
}

double monte_carlo_ball_volume(double p, std::size_t d, std::size_t samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::size_t inside = 0;
    for (std::size_t s = 0; s < samples; ++s) {
        double sum = 0.0;
        for (std::size_t j = 0; j < d; ++j) sum += std::pow(std::abs(unit(rng)), p);
        if (sum <= 1.0) ++inside;
    }
    return std::pow(2.0, static_cast<double>(d)) * static_cast<double>(inside) / static_cast<double>(samples);
}

PointSet random_points(std::mt19937_64& rng, std::size_t n, std::size_t d) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> c(n * d);
    for (double& v : c) v = unit(rng);
    return PointSet(std::move(c), d);
}

PointSet grid_points(std::mt19937_64& rng, std::size_t n, std::size_t d, int levels) {
    std::uniform_int_distribution<int> level(0, levels - 1);
    std::vector<double> c(n * d);
    for (double& v : c) v = level(rng);
    return PointSet(std::move(c), d);
}

GoalSet random_goals(std::mt19937_64& rng, std::size_t n, std::size_t count, int label_count) {
    std::vector<PointIndex> idx(n);
    std::iota(idx.begin(), idx.end(), PointIndex{0});
    std::shuffle(idx.begin(), idx.end(), rng);
    std::uniform_int_distribution<int> label(0, label_count - 1);
    std::vector<Goal> goals;
    for (std::size_t g = 0; g < std::min(count, n); ++g) goals.push_back({idx[g], label(rng)});
    return GoalSet(std::move(goals));
}

std::vector<PointIndex> goal_indices(const GoalSet& goals) {
    std::vector<PointIndex> out;
    for (const Goal& g : goals) out.push_back(g.index);
    return out;
}

bool close_rel(double a, double b, double tol) {
    if (a == b) return true;
    if (!std::isfinite(a) || !std::isfinite(b)) return false;
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace dbd::oracle

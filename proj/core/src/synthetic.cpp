#include "dbd/synthetic.hpp"

#include <random>

#include "dbd/error.hpp"

namespace dbd {

PointSet gen_uniform_square(std::size_t n, std::size_t d, std::uint64_t seed) {
    if (n == 0 || d == 0) {
        throw InvalidInput("gen_uniform_square needs n >= 1 and d >= 1");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> coords(n * d);
    for (double& c : coords) c = unit(rng);
    return PointSet(std::move(coords), d);
}

TwoClusterData gen_two_clusters(std::size_t n, double separation, double noise, std::uint64_t seed) {
    if (n < 2) {
        throw InvalidInput("gen_two_clusters needs at least 2 points");
    }
    if (!(separation > 0.0) || !(noise >= 0.0)) {
        throw InvalidInput("gen_two_clusters needs separation > 0 and noise >= 0");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> along(0.0, 1.0);
    std::normal_distribution<double> jitter(0.0, 1.0);

    TwoClusterData out;
    std::vector<double> coords(2 * n);
    out.truth.resize(n);
    PointIndex leftmost = kNone;
    PointIndex rightmost = kNone;
    for (PointIndex i = 0; i < n; ++i) {
        const int cluster = static_cast<int>(i % 2);
        coords[2 * i] = along(rng);
        coords[2 * i + 1] = cluster * separation + noise * jitter(rng);
        out.truth[i] = cluster;
        if (cluster == 0 && (leftmost == kNone || coords[2 * i] < coords[2 * leftmost])) leftmost = i;
        if (cluster == 1 && (rightmost == kNone || coords[2 * i] > coords[2 * rightmost])) rightmost = i;
    }
    out.dataset.points = PointSet(std::move(coords), 2);
    out.dataset.labels.assign(n, std::nullopt);
    out.dataset.labels[leftmost] = 0;
    out.dataset.labels[rightmost] = 1;
    out.dataset.label_count = 2;
    return out;
}

}  // namespace dbd

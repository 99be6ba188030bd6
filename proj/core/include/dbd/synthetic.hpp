#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dbd/classify.hpp"
#include "dbd/point_set.hpp"

namespace dbd {

/// n i.i.d. points uniform on [0, 1]^d.
PointSet gen_uniform_square(std::size_t n, std::size_t d, std::uint64_t seed);

struct TwoClusterData {
    LabeledDataset dataset;  ///< exactly one labeled point per cluster
    std::vector<int> truth;
};

/// Two parallel bars in the plane, each of unit length along x, at heights 0
/// and `separation`, with Gaussian vertical `noise`. Points alternate between
/// the bars, so classes are balanced. Cluster 0 is labeled at its left-most
/// point and cluster 1 at its right-most, which leaves the far end of each bar
/// closer in straight-line distance to the other cluster's labeled point.
TwoClusterData gen_two_clusters(std::size_t n, double separation, double noise, std::uint64_t seed);

}  // namespace dbd

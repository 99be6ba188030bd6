#pragma once

#include <cstddef>
#include <span>

#include "dbd/point_set.hpp"

namespace dbd {

/// l_p norm order and density exponent. Edge weights are ||a - b||_p^q.
struct MetricParams {
    double p = 2.0;
    double q = 8.0;

    /// Throws InvalidInput unless p >= 1 and q >= 1 and both are finite.
    void validate() const;

    friend bool operator==(const MetricParams&, const MetricParams&) = default;
};

/// Order-preserving surrogate of the l_p distance: sum_i |a_i - b_i|^p.
///
/// Nearest-neighbor search ranks on this key so that ties and comparisons are
/// identical everywhere; `key_to_distance` recovers the distance. No checks.
double lp_rank_key(std::span<const double> a, std::span<const double> b, double p) noexcept;
double key_to_distance(double key, double p) noexcept;
double distance_to_key(double distance, double p) noexcept;

/// (sum_i |a_i - b_i|^p)^(1/p). Throws InvalidInput on dimension mismatch,
/// non-finite coordinates, or p < 1.
double lp_distance(std::span<const double> a, std::span<const double> b, double p);

/// lp_distance(a, b, p)^q.
double edge_weight(std::span<const double> a, std::span<const double> b, const MetricParams& params);

/// Weight of an edge whose l_p length is already known.
double weight_from_distance(double distance, double q) noexcept;

/// Volume of the unit l_p ball in R^d: 2^d Gamma(1 + 1/p)^d / Gamma(1 + d/p).
double lp_ball_volume(double p, std::size_t d);

/// Lanczos approximation of Gamma(x) for x > 0.
double gamma_function(double x);

struct DensityEstimate {
    double value = 0.0;        ///< ln 2 / (n c_{p,d} Z^d); +inf when degenerate
    double nn_distance = 0.0;  ///< Z, distance from the query to its nearest sample point
    double ball_volume = 0.0;  ///< c_{p,d}
    bool degenerate = false;   ///< Z == 0: the query coincides with a sample point
};

/// Median-unbiased nearest-neighbor density estimate at `x0`.
///
/// `x0` is never treated as a member of `sample`; callers exclude it. A query
/// that duplicates a sample point yields value = +inf with `degenerate` set.
DensityEstimate nn_density_estimate(std::span<const double> x0, const PointSet& sample, double p);

}  // namespace dbd

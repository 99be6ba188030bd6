#include "dbd/metric.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "dbd/error.hpp"

namespace dbd {

namespace {

void check_order(double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) {
        throw InvalidInput("l_p order must be finite and >= 1, got " + std::to_string(p));
    }
}

void check_vectors(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw InvalidInput("dimension mismatch: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!std::isfinite(a[i]) || !std::isfinite(b[i])) {
            throw InvalidInput("non-finite coordinate at position " + std::to_string(i));
        }
    }
}

}  // namespace

void MetricParams::validate() const {
    check_order(p);
    if (!(q >= 1.0) || !std::isfinite(q)) {
        throw InvalidInput("density exponent q must be finite and >= 1, got " + std::to_string(q));
    }
}

double lp_rank_key(std::span<const double> a, std::span<const double> b, double p) noexcept {
    double sum = 0.0;
    const std::size_t d = a.size();
    if (p == 2.0) {
        for (std::size_t i = 0; i < d; ++i) {
            const double t = a[i] - b[i];
            sum += t * t;
        }
    } else if (p == 1.0) {
        for (std::size_t i = 0; i < d; ++i) sum += std::abs(a[i] - b[i]);
    } else {
        for (std::size_t i = 0; i < d; ++i) sum += std::pow(std::abs(a[i] - b[i]), p);
    }
    return sum;
}

double key_to_distance(double key, double p) noexcept {
    if (p == 2.0) return std::sqrt(key);
    if (p == 1.0) return key;
    return std::pow(key, 1.0 / p);
}

double distance_to_key(double distance, double p) noexcept {
    if (p == 2.0) return distance * distance;
    if (p == 1.0) return distance;
    return std::pow(distance, p);
}

double lp_distance(std::span<const double> a, std::span<const double> b, double p) {
    check_order(p);
    check_vectors(a, b);
    return key_to_distance(lp_rank_key(a, b, p), p);
}

double weight_from_distance(double distance, double q) noexcept {
    if (q == 1.0) return distance;
    if (q == 2.0) return distance * distance;
    return std::pow(distance, q);
}

double edge_weight(std::span<const double> a, std::span<const double> b, const MetricParams& params) {
    params.validate();
    return weight_from_distance(lp_distance(a, b, params.p), params.q);
}

double gamma_function(double x) {
    // Lanczos, g = 7, nine terms.
    static constexpr std::array<double, 9> kCoef = {
        0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
        771.32342877765313,      -176.61502916214059,   12.507343278686905,
        -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
    };
    if (!(x > 0.0)) {
        throw InvalidInput("gamma_function requires x > 0");
    }
    if (x < 0.5) {
        return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma_function(1.0 - x));
    }
    x -= 1.0;
    double a = kCoef[0];
    const double t = x + 7.5;
    for (std::size_t i = 1; i < kCoef.size(); ++i) a += kCoef[i] / (x + static_cast<double>(i));
    return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

double lp_ball_volume(double p, std::size_t d) {
    check_order(p);
    if (d == 0) {
        throw InvalidInput("ball dimension must be at least 1");
    }
    const double dd = static_cast<double>(d);
    return std::pow(2.0 * gamma_function((p + 1.0) / p), dd) / gamma_function((p + dd) / p);
}

DensityEstimate nn_density_estimate(std::span<const double> x0, const PointSet& sample, double p) {
    check_order(p);
    if (sample.empty()) {
        throw InvalidInput("density estimate needs a nonempty sample");
    }
    if (x0.size() != sample.dim()) {
        throw InvalidInput("query dimension " + std::to_string(x0.size()) + " does not match sample dimension " +
                           std::to_string(sample.dim()));
    }
    check_vectors(x0, x0);

    double best_key = std::numeric_limits<double>::infinity();
    for (PointIndex i = 0; i < sample.size(); ++i) {
        const double key = lp_rank_key(x0, sample[i], p);
        if (key < best_key) best_key = key;
    }

    DensityEstimate est;
    est.nn_distance = key_to_distance(best_key, p);
    est.ball_volume = lp_ball_volume(p, sample.dim());
    if (est.nn_distance == 0.0) {
        est.value = std::numeric_limits<double>::infinity();
        est.degenerate = true;
        return est;
    }
    const double n = static_cast<double>(sample.size());
    est.value = std::numbers::ln2 /
                (n * est.ball_volume * std::pow(est.nn_distance, static_cast<double>(sample.dim())));
    return est;
}

}  // namespace dbd

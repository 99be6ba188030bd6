#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "dbd/metric.hpp"
#include "dbd/point_set.hpp"
#include "dbd/search.hpp"

namespace dbd {

/// Points with an optional class id per point. Class ids lie in [0, label_count).
struct LabeledDataset {
    PointSet points;
    std::vector<std::optional<int>> labels;
    int label_count = 0;

    /// Throws InvalidInput on size mismatch or out-of-range class ids.
    void validate() const;

    std::size_t labeled_count() const;
    GoalSet goals() const;

    /// Copy with the labels of `hidden` points removed.
    LabeledDataset without_labels(const std::vector<PointIndex>& hidden) const;
};

struct PredictedPoint {
    PointIndex index = 0;
    int label = 0;
    double distance = kUnreached;     ///< cost to the decisive labeled point
    PointIndex decisive = kNone;      ///< labeled point whose label was taken
    bool fallback = false;            ///< unreached; majority label assigned
};

/// One entry per unlabeled point, in ascending point order.
struct Prediction {
    std::size_t point_count = 0;
    std::vector<PredictedPoint> points;
    std::size_t fallback_count = 0;
};

/// 1-nearest-neighbor under the engine's distance: every unlabeled point takes
/// the label of its minimum-cost labeled point. Points a k-NN engine cannot
/// reach get the most frequent label (lowest id on ties) and are flagged.
/// Throws InvalidInput if no point is labeled.
Prediction predict_1nn(const LabeledDataset& dataset, const MetricParams& params, const Engine& engine);

/// Fraction of predicted points whose label differs from `truth`. Zero when
/// nothing was predicted. Throws InvalidInput if `truth` has the wrong length.
double error_rate(const Prediction& prediction, const std::vector<int>& truth);

struct CvConfig {
    std::vector<double> p_grid{2.0};
    std::vector<double> q_grid{8.0};
    std::size_t folds = 10;
    std::size_t trials = 1;
    std::uint64_t seed = 0;
    Engine engine = Engine::dbd();
    unsigned threads = 0;  ///< 0 = hardware concurrency
};

struct CvCell {
    MetricParams params;
    double error = 0.0;  ///< mean validation error over folds and trials
};

struct CvResult {
    MetricParams best;
    std::vector<CvCell> table;  ///< p-major grid order
};

/// k-fold cross-validation of (p, q) over the labeled points. Held-out labeled
/// points stay in the graph as unlabeled nodes. The argmin cell wins, ties
/// going to smaller q, then smaller p. Throws InvalidInput if the grid is
/// empty, folds < 2, or folds exceeds the labeled count.
CvResult cross_validate_pq(const LabeledDataset& dataset, const CvConfig& config);

}  // namespace dbd

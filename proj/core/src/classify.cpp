#include "dbd/classify.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "dbd/error.hpp"
#include "parallel.hpp"

namespace dbd {

void LabeledDataset::validate() const {
    if (labels.size() != points.size()) {
        throw InvalidInput("dataset has " + std::to_string(points.size()) + " points but " +
                           std::to_string(labels.size()) + " label slots");
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] && (*labels[i] < 0 || *labels[i] >= label_count)) {
            throw InvalidInput("label " + std::to_string(*labels[i]) + " of point " + std::to_string(i) +
                               " outside [0, " + std::to_string(label_count) + ")");
        }
    }
}

std::size_t LabeledDataset::labeled_count() const {
    return static_cast<std::size_t>(std::count_if(labels.begin(), labels.end(), [](const auto& l) { return l.has_value(); }));
}

GoalSet LabeledDataset::goals() const {
    std::vector<Goal> goals;
    for (PointIndex i = 0; i < labels.size(); ++i) {
        if (labels[i]) goals.push_back({i, *labels[i]});
    }
    if (goals.empty()) {
        throw InvalidInput("dataset has no labeled points");
    }
    return GoalSet(std::move(goals));
}

LabeledDataset LabeledDataset::without_labels(const std::vector<PointIndex>& hidden) const {
    LabeledDataset copy = *this;
    for (PointIndex i : hidden) {
        if (i >= copy.labels.size()) {
            throw InvalidInput("point index " + std::to_string(i) + " out of range");
        }
        copy.labels[i].reset();
    }
    return copy;
}

Prediction predict_1nn(const LabeledDataset& dataset, const MetricParams& params, const Engine& engine) {
    dataset.validate();
    const GoalSet goals = dataset.goals();
    const ShortestPathResult result = run_search(dataset.points, goals, params, engine);

    std::vector<std::size_t> votes(static_cast<std::size_t>(std::max(dataset.label_count, 1)), 0);
    for (const Goal& g : goals) ++votes[static_cast<std::size_t>(g.label)];
    const int majority = static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());

    Prediction pred;
    pred.point_count = dataset.points.size();
    for (PointIndex i = 0; i < dataset.points.size(); ++i) {
        if (dataset.labels[i]) continue;
        PredictedPoint pp;
        pp.index = i;
        if (result.reached(i)) {
            const Goal& g = goals[result.source[i]];
            pp.label = g.label;
            pp.decisive = g.index;
            pp.distance = result.cost[i];
        } else {
            pp.label = majority;
            pp.fallback = true;
            ++pred.fallback_count;
        }
        pred.points.push_back(pp);
    }
    return pred;
}

double error_rate(const Prediction& prediction, const std::vector<int>& truth) {
    if (truth.size() != prediction.point_count) {
        throw InvalidInput("truth has " + std::to_string(truth.size()) + " labels for " +
                           std::to_string(prediction.point_count) + " points");
    }
    if (prediction.points.empty()) return 0.0;
    std::size_t wrong = 0;
    for (const PredictedPoint& pp : prediction.points) {
        if (pp.label != truth[pp.index]) ++wrong;
    }
    return static_cast<double>(wrong) / static_cast<double>(prediction.points.size());
}

CvResult cross_validate_pq(const LabeledDataset& dataset, const CvConfig& config) {
    dataset.validate();
    if (config.p_grid.empty() || config.q_grid.empty()) {
        throw InvalidInput("cross-validation grid is empty");
    }
    if (config.folds < 2) {
        throw InvalidInput("cross-validation needs at least 2 folds");
    }
    if (config.trials < 1) {
        throw InvalidInput("cross-validation needs at least 1 trial");
    }
    std::vector<PointIndex> labeled;
    for (PointIndex i = 0; i < dataset.labels.size(); ++i) {
        if (dataset.labels[i]) labeled.push_back(i);
    }
    if (config.folds > labeled.size()) {
        throw InvalidInput(std::to_string(config.folds) + " folds requested but only " +
                           std::to_string(labeled.size()) + " points are labeled");
    }

    // fold_sets[trial * folds + f] = held-out points.
    std::vector<std::vector<PointIndex>> fold_sets(config.trials * config.folds);
    for (std::size_t t = 0; t < config.trials; ++t) {
        std::vector<PointIndex> order = labeled;
        std::seed_seq seq{config.seed, static_cast<std::uint64_t>(t)};
        std::mt19937_64 rng(seq);
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t j = 0; j < order.size(); ++j) {
            fold_sets[t * config.folds + j % config.folds].push_back(order[j]);
        }
    }
    for (auto& f : fold_sets) std::sort(f.begin(), f.end());

    CvResult out;
    for (double p : config.p_grid) {
        for (double q : config.q_grid) {
            const MetricParams params{p, q};
            params.validate();
            out.table.push_back({params, 0.0});
        }
    }

    detail::parallel_for(out.table.size(), config.threads, [&](std::size_t cell) {
        double total = 0.0;
        for (const auto& held_out : fold_sets) {
            const Prediction pred = predict_1nn(dataset.without_labels(held_out), out.table[cell].params, config.engine);
            std::vector<int> predicted(dataset.points.size(), -1);
            for (const PredictedPoint& pp : pred.points) predicted[pp.index] = pp.label;
            std::size_t wrong = 0;
            for (PointIndex i : held_out) {
                if (predicted[i] != *dataset.labels[i]) ++wrong;
            }
            total += static_cast<double>(wrong) / static_cast<double>(held_out.size());
        }
        out.table[cell].error = total / static_cast<double>(fold_sets.size());
    });

    const auto better = [](const CvCell& a, const CvCell& b) {
        if (a.error != b.error) return a.error < b.error;
        if (a.params.q != b.params.q) return a.params.q < b.params.q;
        return a.params.p < b.params.p;
    };
    out.best = std::min_element(out.table.begin(), out.table.end(), better)->params;
    return out;
}

}  // namespace dbd

#include "dbd/point_set.hpp"

#include <cmath>
#include <string>

#include "dbd/error.hpp"

namespace dbd {

PointSet::PointSet(std::vector<double> coords, std::size_t dim) : coords_(std::move(coords)), dim_(dim) {
    if (dim_ == 0) {
        throw InvalidInput("point dimension must be at least 1");
    }
    if (coords_.size() % dim_ != 0) {
        throw InvalidInput("coordinate count " + std::to_string(coords_.size()) +
                           " is not a multiple of dimension " + std::to_string(dim_));
    }
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        if (!std::isfinite(coords_[i])) {
            throw InvalidInput("non-finite coordinate in point " + std::to_string(i / dim_));
        }
    }
    n_ = coords_.size() / dim_;
}

PointSet PointSet::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) {
        throw InvalidInput("cannot build a point set from zero rows");
    }
    const std::size_t dim = rows.front().size();
    std::vector<double> coords;
    coords.reserve(rows.size() * dim);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != dim) {
            throw InvalidInput("row " + std::to_string(i) + " has dimension " + std::to_string(rows[i].size()) +
                               ", expected " + std::to_string(dim));
        }
        coords.insert(coords.end(), rows[i].begin(), rows[i].end());
    }
    return PointSet(std::move(coords), dim);
}

std::span<const double> PointSet::row(PointIndex i) const {
    if (i >= n_) {
        throw InvalidInput("point index " + std::to_string(i) + " out of range for " + std::to_string(n_) +
                           " points");
    }
    return (*this)[i];
}

PointSet PointSet::with_appended(std::span<const double> row) const {
    if (row.size() != dim_ || row.empty()) {
        throw InvalidInput("appended row has dimension " + std::to_string(row.size()) + ", expected " +
                           std::to_string(dim_));
    }
    std::vector<double> coords = coords_;
    coords.insert(coords.end(), row.begin(), row.end());
    return PointSet(std::move(coords), dim_);
}

PointSet PointSet::scaled(double factor) const {
    std::vector<double> coords = coords_;
    for (double& c : coords) c *= factor;
    return PointSet(std::move(coords), dim_);
}

}  // namespace dbd

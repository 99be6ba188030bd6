#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dbd {

using PointIndex = std::size_t;

/// Immutable n x d set of points stored row-major.
///
/// Every row has the same dimension d >= 1 and all coordinates are finite;
/// the constructors throw InvalidInput otherwise.
class PointSet {
public:
    PointSet() = default;

    /// Takes ownership of `coords`, which must hold a multiple of `dim` values.
    PointSet(std::vector<double> coords, std::size_t dim);

    static PointSet from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t size() const noexcept { return n_; }
    std::size_t dim() const noexcept { return dim_; }
    bool empty() const noexcept { return n_ == 0; }

    std::span<const double> operator[](PointIndex i) const noexcept {
        return {coords_.data() + i * dim_, dim_};
    }
    std::span<const double> row(PointIndex i) const;

    std::span<const double> coords() const noexcept { return coords_; }

    /// Copy with the given rows appended. Used to grow samples in experiments.
    PointSet with_appended(std::span<const double> row) const;

    /// Copy with every coordinate multiplied by `factor`.
    PointSet scaled(double factor) const;

    friend bool operator==(const PointSet&, const PointSet&) = default;

private:
    std::vector<double> coords_;
    std::size_t n_ = 0;
    std::size_t dim_ = 0;
};

}  // namespace dbd

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dbd/classify.hpp"
#include "dbd/search.hpp"

namespace dbd {

enum class DatasetFormat { csv, idx, libsvm };

/// Guesses the format from the file extension; csv when unknown.
DatasetFormat format_from_path(const std::filesystem::path& path);
DatasetFormat parse_dataset_format(std::string_view name);

/// Where and how to read a dataset.
///
/// csv: one row per point. A header row is detected when its first field is
///   not numeric. `label_column` names (or 0-based indexes) the label column;
///   without it a header column called "label" is used if present.
///   `truth_column` optionally holds the full ground truth.
/// idx: unsigned-byte image tensor, pixels scaled to [0, 1]. Labels come from
///   the companion idx1 file in `label_file`.
/// libsvm: "label index:value ..." with 1-based indices; `dim` = 0 infers the
///   dimension from the largest index.
/// In all formats `label_file` may instead supply one label per line.
struct DatasetFile {
    DatasetFormat format = DatasetFormat::csv;
    std::filesystem::path path;
    std::optional<std::string> label_column;
    std::optional<std::string> truth_column;
    std::optional<std::filesystem::path> label_file;
    std::string missing_label = "?";
    std::size_t dim = 0;
};

struct LoadedDataset {
    LabeledDataset dataset;
    std::vector<int> truth;         ///< ground truth per point when known, else empty
    std::vector<int> class_values;  ///< raw label written in the file, by class id
};

/// Reads a dataset. Throws ParseError with the offending line for malformed
/// rows or inconsistent dimensions and IoError when the file cannot be read.
LoadedDataset load_dataset(const DatasetFile& file);

/// Writes points as csv with columns x1..xd, then `label` (sentinel "?" when
/// unlabeled) and, when `truth` is nonempty, `truth`.
void write_points_csv(std::ostream& out, const PointSet& points,
                      const std::vector<std::optional<int>>& labels, const std::vector<int>& truth);

/// Shortest decimal string that parses back to exactly `value`; "inf" for infinity.
std::string format_double(double value);

/// Parses what format_double produces. Throws InvalidInput on garbage.
double parse_double(std::string_view text);

/// One line of a distance export. Missing fields are empty optionals.
struct DistanceRow {
    PointIndex point = 0;
    std::optional<std::size_t> goal;
    double cost = kUnreached;
    std::optional<int> source_label;

    friend bool operator==(const DistanceRow&, const DistanceRow&) = default;
};

inline constexpr std::string_view kDistanceHeader = "point_index,goal_index,cost,source_label";

/// Nearest-goal export: one row per point with its source goal. Unreached
/// points emit "inf" and leave goal and label empty.
void export_distances(std::ostream& out, const ShortestPathResult& result, const GoalSet& goals);
/// Full export: one row per (point, goal) pair, "inf" where disconnected.
void export_distances(std::ostream& out, const DistanceMatrix& matrix, const GoalSet& goals);

void export_distances(const std::filesystem::path& path, const ShortestPathResult& result, const GoalSet& goals);
void export_distances(const std::filesystem::path& path, const DistanceMatrix& matrix, const GoalSet& goals);

std::vector<DistanceRow> read_distances(std::istream& in);
std::vector<DistanceRow> read_distances(const std::filesystem::path& path);

}  // namespace dbd

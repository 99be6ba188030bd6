#include "dbd/dataset_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "dbd/error.hpp"

namespace dbd {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t at = line.find(sep, start);
        out.push_back(trim(line.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start)));
        if (at == std::string_view::npos) break;
        start = at + 1;
    }
    return out;
}

std::optional<double> try_double(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<int> try_int(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return std::nullopt;
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::ifstream open_input(const std::filesystem::path& path, std::ios::openmode mode = std::ios::in) {
    std::ifstream in(path, mode);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "' for reading");
    }
    return in;
}

std::optional<int> parse_label(std::string_view field, const std::string& sentinel, const std::string& where,
                               std::size_t line) {
    field = trim(field);
    if (field == sentinel) return std::nullopt;
    const auto v = try_int(field);
    if (!v) {
        throw ParseError(where, line, "label '" + std::string(field) + "' is neither an integer nor '" + sentinel + "'");
    }
    return v;
}

// Raw labels as read from disk, before mapping to class ids.
struct RawDataset {
    std::vector<double> coords;
    std::size_t dim = 0;
    std::vector<std::optional<int>> labels;
    std::vector<int> truth;
};

std::size_t resolve_column(const std::string& name, const std::vector<std::string>& header, const std::string& where) {
    if (!header.empty()) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it != header.end()) return static_cast<std::size_t>(it - header.begin());
    }
    std::size_t idx = 0;
    const auto [ptr, ec] = std::from_chars(name.data(), name.data() + name.size(), idx);
    if (ec != std::errc{} || ptr != name.data() + name.size()) {
        throw InvalidInput(where + ": no column named '" + name + "'");
    }
    return idx;
}

RawDataset read_csv(const DatasetFile& file) {
    const std::string where = file.path.string();
    std::ifstream in = open_input(file.path);
    RawDataset raw;
    std::vector<std::string> header;
    std::optional<std::size_t> label_col;
    std::optional<std::size_t> truth_col;
    std::size_t columns = 0;
    bool first = true;
    std::string line;
    std::size_t line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        const auto fields = split(text, ',');

        if (first) {
            first = false;
            columns = fields.size();
            const bool is_header = !try_double(fields.front()) && fields.front() != file.missing_label;
            if (is_header) {
                for (auto f : fields) header.emplace_back(f);
            }
            if (file.label_column) {
                label_col = resolve_column(*file.label_column, header, where);
            } else if (auto it = std::find(header.begin(), header.end(), "label"); it != header.end()) {
                label_col = static_cast<std::size_t>(it - header.begin());
            }
            if (file.truth_column) {
                truth_col = resolve_column(*file.truth_column, header, where);
            } else if (auto it = std::find(header.begin(), header.end(), "truth"); it != header.end()) {
                truth_col = static_cast<std::size_t>(it - header.begin());
            }
            if ((label_col && *label_col >= columns) || (truth_col && *truth_col >= columns)) {
                throw InvalidInput(where + ": label or truth column beyond the " + std::to_string(columns) +
                                   " columns present");
            }
            raw.dim = columns - (label_col ? 1 : 0) - (truth_col && truth_col != label_col ? 1 : 0);
            if (raw.dim == 0) {
                throw ParseError(where, line_no, "no coordinate columns");
            }
            if (is_header) continue;
        }

        if (fields.size() != columns) {
            throw ParseError(where, line_no,
                             "expected " + std::to_string(columns) + " fields, found " + std::to_string(fields.size()));
        }
        for (std::size_t c = 0; c < fields.size(); ++c) {
            if (label_col && c == *label_col) {
                raw.labels.push_back(parse_label(fields[c], file.missing_label, where, line_no));
                if (truth_col && *truth_col == c) {
                    if (!raw.labels.back()) throw ParseError(where, line_no, "missing truth label");
                    raw.truth.push_back(*raw.labels.back());
                }
            } else if (truth_col && c == *truth_col) {
                const auto t = try_int(fields[c]);
                if (!t) throw ParseError(where, line_no, "truth '" + std::string(fields[c]) + "' is not an integer");
                raw.truth.push_back(*t);
            } else {
                const auto v = try_double(fields[c]);
                if (!v || !std::isfinite(*v)) {
                    throw ParseError(where, line_no, "bad coordinate '" + std::string(fields[c]) + "'");
                }
                raw.coords.push_back(*v);
            }
        }
        if (!label_col) raw.labels.emplace_back();
    }
    if (raw.labels.empty()) {
        throw ParseError(where, 0, "no data rows");
    }
    return raw;
}

std::uint32_t read_be32(std::istream& in, const std::string& where) {
    std::array<unsigned char, 4> b{};
    if (!in.read(reinterpret_cast<char*>(b.data()), 4)) {
        throw ParseError(where, 0, "truncated idx header");
    }
    return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) | std::uint32_t{b[3]};
}

// Returns dims and the raw unsigned-byte payload.
std::pair<std::vector<std::uint32_t>, std::vector<unsigned char>> read_idx_bytes(const std::filesystem::path& path) {
    const std::string where = path.string();
    std::ifstream in = open_input(path, std::ios::binary);
    const std::uint32_t magic = read_be32(in, where);
    if ((magic >> 16) != 0) {
        throw ParseError(where, 0, "bad idx magic");
    }
    if (((magic >> 8) & 0xff) != 0x08) {
        throw ParseError(where, 0, "only unsigned-byte idx files are supported");
    }
    const std::uint32_t ndims = magic & 0xff;
    if (ndims == 0) {
        throw ParseError(where, 0, "idx file declares zero dimensions");
    }
    std::vector<std::uint32_t> dims(ndims);
    std::uint64_t total = 1;
    for (auto& d : dims) {
        d = read_be32(in, where);
        total *= d;
    }
    std::vector<unsigned char> bytes(total);
    if (total > 0 && !in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(total))) {
        throw ParseError(where, 0, "idx payload shorter than its header declares");
    }
    return {std::move(dims), std::move(bytes)};
}

RawDataset read_idx(const DatasetFile& file) {
    auto [dims, bytes] = read_idx_bytes(file.path);
    RawDataset raw;
    const std::size_t n = dims.front();
    raw.dim = 1;
    for (std::size_t i = 1; i < dims.size(); ++i) raw.dim *= dims[i];
    raw.coords.resize(bytes.size());
    std::transform(bytes.begin(), bytes.end(), raw.coords.begin(), [](unsigned char b) { return b / 255.0; });
    raw.labels.assign(n, std::nullopt);
    return raw;
}

void read_idx_labels(const std::filesystem::path& path, RawDataset& raw) {
    auto [dims, bytes] = read_idx_bytes(path);
    if (dims.size() != 1) {
        throw ParseError(path.string(), 0, "label file must be one-dimensional");
    }
    if (bytes.size() != raw.labels.size()) {
        throw ParseError(path.string(), 0,
                         std::to_string(bytes.size()) + " labels for " + std::to_string(raw.labels.size()) + " points");
    }
    for (std::size_t i = 0; i < bytes.size(); ++i) raw.labels[i] = static_cast<int>(bytes[i]);
}

RawDataset read_libsvm(const DatasetFile& file) {
    const std::string where = file.path.string();
    std::ifstream in = open_input(file.path);
    RawDataset raw;
    std::vector<std::vector<std::pair<std::size_t, double>>> rows;
    std::size_t max_index = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view text = line;
        if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
        text = trim(text);
        if (text.empty()) continue;
        std::istringstream tokens{std::string(text)};
        std::string token;
        tokens >> token;
        raw.labels.push_back(parse_label(token, file.missing_label, where, line_no));
        auto& row = rows.emplace_back();
        while (tokens >> token) {
            const auto colon = token.find(':');
            if (colon == std::string::npos) {
                throw ParseError(where, line_no, "feature '" + token + "' lacks index:value form");
            }
            std::size_t idx = 0;
            const auto [ptr, ec] = std::from_chars(token.data(), token.data() + colon, idx);
            const auto value = try_double(std::string_view(token).substr(colon + 1));
            if (ec != std::errc{} || ptr != token.data() + colon || idx == 0 || !value || !std::isfinite(*value)) {
                throw ParseError(where, line_no, "bad feature '" + token + "'");
            }
            if (file.dim > 0 && idx > file.dim) {
                throw ParseError(where, line_no,
                                 "feature index " + std::to_string(idx) + " exceeds dimension " + std::to_string(file.dim));
            }
            max_index = std::max(max_index, idx);
            row.emplace_back(idx - 1, *value);
        }
    }
    if (rows.empty()) {
        throw ParseError(where, 0, "no data rows");
    }
    raw.dim = file.dim > 0 ? file.dim : std::max<std::size_t>(max_index, 1);
    raw.coords.assign(rows.size() * raw.dim, 0.0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (const auto& [j, v] : rows[i]) raw.coords[i * raw.dim + j] = v;
    }
    return raw;
}

void read_label_file(const DatasetFile& file, RawDataset& raw) {
    const auto& path = *file.label_file;
    if (file.format == DatasetFormat::idx) {
        read_idx_labels(path, raw);
        return;
    }
    std::ifstream in = open_input(path);
    std::vector<std::optional<int>> labels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        labels.push_back(parse_label(line, file.missing_label, path.string(), line_no));
    }
    if (labels.size() != raw.labels.size()) {
        throw ParseError(path.string(), 0,
                         std::to_string(labels.size()) + " labels for " + std::to_string(raw.labels.size()) + " points");
    }
    raw.labels = std::move(labels);
}

}  // namespace

DatasetFormat format_from_path(const std::filesystem::path& path) {
    const std::string name = path.filename().string();
    const auto ends_with = [&](std::string_view suffix) {
        return name.size() >= suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0;
    };
    if (ends_with(".idx") || ends_with("-ubyte") || ends_with(".idx3") || ends_with(".idx1")) return DatasetFormat::idx;
    if (ends_with(".libsvm") || ends_with(".svm") || ends_with(".svmlight")) return DatasetFormat::libsvm;
    return DatasetFormat::csv;
}

DatasetFormat parse_dataset_format(std::string_view name) {
    if (name == "csv") return DatasetFormat::csv;
    if (name == "idx") return DatasetFormat::idx;
    if (name == "libsvm") return DatasetFormat::libsvm;
    throw InvalidInput("unknown dataset format '" + std::string(name) + "' (expected csv, idx, libsvm)");
}

LoadedDataset load_dataset(const DatasetFile& file) {
    RawDataset raw;
    switch (file.format) {
        case DatasetFormat::csv: raw = read_csv(file); break;
        case DatasetFormat::idx: raw = read_idx(file); break;
        case DatasetFormat::libsvm: raw = read_libsvm(file); break;
    }
    if (file.label_file) read_label_file(file, raw);

    const bool all_labeled = std::all_of(raw.labels.begin(), raw.labels.end(), [](const auto& l) { return l.has_value(); });
    if (raw.truth.empty() && all_labeled) {
        for (const auto& l : raw.labels) raw.truth.push_back(*l);
    }

    std::set<int> values;
    for (const auto& l : raw.labels) {
        if (l) values.insert(*l);
    }
    values.insert(raw.truth.begin(), raw.truth.end());

    LoadedDataset out;
    std::map<int, int> to_class;
    if (!values.empty() && *values.begin() < 0) {
        for (int v : values) {
            to_class[v] = static_cast<int>(out.class_values.size());
            out.class_values.push_back(v);
        }
    } else if (!values.empty()) {
        for (int v = 0; v <= *values.rbegin(); ++v) {
            to_class[v] = v;
            out.class_values.push_back(v);
        }
    }

    out.dataset.points = PointSet(std::move(raw.coords), raw.dim);
    out.dataset.label_count = static_cast<int>(out.class_values.size());
    out.dataset.labels.reserve(raw.labels.size());
    for (const auto& l : raw.labels) {
        out.dataset.labels.push_back(l ? std::optional<int>(to_class.at(*l)) : std::nullopt);
    }
    for (int t : raw.truth) out.truth.push_back(to_class.at(t));
    out.dataset.validate();
    return out;
}

void write_points_csv(std::ostream& out, const PointSet& points, const std::vector<std::optional<int>>& labels,
                      const std::vector<int>& truth) {
    for (std::size_t j = 0; j < points.dim(); ++j) out << (j ? "," : "") << 'x' << (j + 1);
    out << ",label";
    if (!truth.empty()) out << ",truth";
    out << '\n';
    for (PointIndex i = 0; i < points.size(); ++i) {
        const auto row = points[i];
        for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << format_double(row[j]);
        out << ',' << (i < labels.size() && labels[i] ? std::to_string(*labels[i]) : std::string("?"));
        if (!truth.empty()) out << ',' << truth.at(i);
        out << '\n';
    }
}

std::string format_double(double value) {
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (std::isnan(value)) return "nan";
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

double parse_double(std::string_view text) {
    text = trim(text);
    if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    const auto v = try_double(text);
    if (!v) {
        throw InvalidInput("not a number: '" + std::string(text) + "'");
    }
    return *v;
}

void export_distances(std::ostream& out, const ShortestPathResult& result, const GoalSet& goals) {
    out << kDistanceHeader << '\n';
    for (PointIndex i = 0; i < result.size(); ++i) {
        out << i << ',';
        if (result.reached(i)) {
            out << result.source[i] << ',' << format_double(result.cost[i]) << ',' << goals[result.source[i]].label;
        } else {
            out << ",inf,";
        }
        out << '\n';
    }
}

void export_distances(std::ostream& out, const DistanceMatrix& matrix, const GoalSet& goals) {
    if (matrix.cols != goals.size()) {
        throw InvalidInput("matrix has " + std::to_string(matrix.cols) + " columns for " +
                           std::to_string(goals.size()) + " goals");
    }
    out << kDistanceHeader << '\n';
    for (std::size_t i = 0; i < matrix.rows; ++i) {
        for (std::size_t g = 0; g < matrix.cols; ++g) {
            out << i << ',' << g << ',' << format_double(matrix.at(i, g)) << ',' << goals[g].label << '\n';
        }
    }
}

namespace {

template <typename Data>
void export_to_path(const std::filesystem::path& path, const Data& data, const GoalSet& goals) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    export_distances(out, data, goals);
    out.flush();
    if (!out) {
        throw IoError("write to '" + path.string() + "' failed");
    }
}

}  // namespace

void export_distances(const std::filesystem::path& path, const ShortestPathResult& result, const GoalSet& goals) {
    export_to_path(path, result, goals);
}

void export_distances(const std::filesystem::path& path, const DistanceMatrix& matrix, const GoalSet& goals) {
    export_to_path(path, matrix, goals);
}

std::vector<DistanceRow> read_distances(std::istream& in) {
    std::vector<DistanceRow> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1) {
            if (trim(line) != kDistanceHeader) throw ParseError("distances", 1, "unexpected header");
            continue;
        }
        if (trim(line).empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 4) throw ParseError("distances", line_no, "expected 4 fields");
        DistanceRow row;
        std::size_t v = 0;
        if (std::from_chars(f[0].data(), f[0].data() + f[0].size(), v).ec != std::errc{}) {
            throw ParseError("distances", line_no, "bad point index");
        }
        row.point = v;
        if (!f[1].empty()) {
            if (std::from_chars(f[1].data(), f[1].data() + f[1].size(), v).ec != std::errc{}) {
                throw ParseError("distances", line_no, "bad goal index");
            }
            row.goal = v;
        }
        try {
            row.cost = parse_double(f[2]);
        } catch (const InvalidInput&) {
            throw ParseError("distances", line_no, "bad cost '" + std::string(f[2]) + "'");
        }
        if (!f[3].empty()) {
            row.source_label = try_int(f[3]);
            if (!row.source_label) throw ParseError("distances", line_no, "bad label");
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<DistanceRow> read_distances(const std::filesystem::path& path) {
    std::ifstream in = open_input(path);
    return read_distances(in);
}

}  // namespace dbd

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dbd {

/// Order statistics of a sample. Percentiles interpolate linearly between
/// order statistics; `std` is the sample standard deviation (0 for one value).
struct Summary {
    std::size_t count = 0;
    double mean = 0.0;
    double std = 0.0;
    double min = 0.0;
    double p25 = 0.0;
    double median = 0.0;
    double p75 = 0.0;
    double max = 0.0;
};

Summary summarize(std::span<const double> values);
double percentile(std::span<const double> values, double fraction);

/// One measurement: a single trial of a single configuration.
struct ExperimentRecord {
    std::string engine;
    double p = 2.0;
    double q = 8.0;
    std::size_t k = 0;
    std::size_t n = 0;
    std::size_t d = 0;
    std::uint64_t seed = 0;         ///< configuration seed
    std::uint64_t trial_seed = 0;   ///< seed derived for this trial's sample or goal draw
    std::size_t trial = 0;

    std::optional<double> error;
    std::size_t unreachable = 0;
    double wall_seconds = 0.0;   ///< search only
    double graph_seconds = 0.0;  ///< graph or index construction, timed separately
    std::size_t pops = 0;
    std::size_t nn_queries = 0;
    std::size_t max_queue = 0;
    double mean_queue = 0.0;

    std::map<std::string, double> metrics;  ///< experiment-specific values
};

/// Aggregate of one metric over the trials of one configuration.
struct SummaryRow {
    std::string engine;
    std::size_t k = 0;
    std::size_t n = 0;
    std::string metric;
    Summary stats;
};

struct ExperimentReport {
    std::string experiment;
    std::vector<ExperimentRecord> records;
    std::vector<SummaryRow> summary;

    /// The summary row for (engine, k, n, metric), if present.
    const SummaryRow* find(const std::string& engine, std::size_t k, std::size_t n,
                           const std::string& metric) const;
};

std::string report_to_json(const ExperimentReport& report);
/// Per-record csv; metric keys become extra columns in sorted order.
void write_report_csv(std::ostream& out, const ExperimentReport& report);
/// Summary-row csv.
void write_summary_csv(std::ostream& out, const ExperimentReport& report);

}  // namespace dbd

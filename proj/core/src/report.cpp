#include "dbd/report.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <set>

#include <json.hpp>

#include "dbd/dataset_io.hpp"
#include "dbd/error.hpp"

namespace dbd {

double percentile(std::span<const double> values, double fraction) {
    if (values.empty()) {
        throw InvalidInput("percentile of an empty sample");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double h = (static_cast<double>(sorted.size()) - 1.0) * std::clamp(fraction, 0.0, 1.0);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

Summary summarize(std::span<const double> values) {
    Summary s;
    s.count = values.size();
    if (values.empty()) return s;
    const double n = static_cast<double>(values.size());
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.std = std::sqrt(ss / (n - 1.0));
    }
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    s.min = *mn;
    s.max = *mx;
    s.p25 = percentile(values, 0.25);
    s.median = percentile(values, 0.5);
    s.p75 = percentile(values, 0.75);
    return s;
}

const SummaryRow* ExperimentReport::find(const std::string& engine, std::size_t k, std::size_t n,
                                         const std::string& metric) const {
    for (const SummaryRow& row : summary) {
        if (row.engine == engine && row.k == k && row.n == n && row.metric == metric) return &row;
    }
    return nullptr;
}

std::string report_to_json(const ExperimentReport& report) {
    using nlohmann::json;
    json records = json::array();
    for (const ExperimentRecord& r : report.records) {
        json j = {
            {"engine", r.engine},
            {"p", r.p},
            {"q", r.q},
            {"k", r.k},
            {"n", r.n},
            {"d", r.d},
            {"seed", r.seed},
            {"trial_seed", r.trial_seed},
            {"trial", r.trial},
            {"error", r.error ? json(*r.error) : json(nullptr)},
            {"unreachable", r.unreachable},
            {"wall_seconds", r.wall_seconds},
            {"graph_seconds", r.graph_seconds},
            {"pops", r.pops},
            {"nn_queries", r.nn_queries},
            {"max_queue", r.max_queue},
            {"mean_queue", r.mean_queue},
            {"metrics", r.metrics},
        };
        records.push_back(std::move(j));
    }
    json summary = json::array();
    for (const SummaryRow& row : report.summary) {
        summary.push_back({
            {"engine", row.engine},
            {"k", row.k},
            {"n", row.n},
            {"metric", row.metric},
            {"count", row.stats.count},
            {"mean", row.stats.mean},
            {"std", row.stats.std},
            {"min", row.stats.min},
            {"p25", row.stats.p25},
            {"median", row.stats.median},
            {"p75", row.stats.p75},
            {"max", row.stats.max},
        });
    }
    return json{{"experiment", report.experiment}, {"records", records}, {"summary", summary}}.dump(2);
}

void write_report_csv(std::ostream& out, const ExperimentReport& report) {
    std::set<std::string> keys;
    for (const ExperimentRecord& r : report.records) {
        for (const auto& [k, v] : r.metrics) keys.insert(k);
    }
    out << "experiment,engine,p,q,k,n,d,seed,trial_seed,trial,error,unreachable,wall_seconds,graph_seconds,pops,nn_queries,"
           "max_queue,mean_queue";
    for (const auto& k : keys) out << ',' << k;
    out << '\n';
    for (const ExperimentRecord& r : report.records) {
        out << report.experiment << ',' << r.engine << ',' << format_double(r.p) << ',' << format_double(r.q) << ','
            << r.k << ',' << r.n << ',' << r.d << ',' << r.seed << ',' << r.trial_seed << ',' << r.trial << ','
            << (r.error ? format_double(*r.error) : std::string{}) << ',' << r.unreachable << ','
            << format_double(r.wall_seconds) << ',' << format_double(r.graph_seconds) << ',' << r.pops << ','
            << r.nn_queries << ',' << r.max_queue << ',' << format_double(r.mean_queue);
        for (const auto& k : keys) {
            out << ',';
            if (auto it = r.metrics.find(k); it != r.metrics.end()) out << format_double(it->second);
        }
        out << '\n';
    }
}

void write_summary_csv(std::ostream& out, const ExperimentReport& report) {
    out << "experiment,engine,k,n,metric,count,mean,std,min,p25,median,p75,max\n";
    for (const SummaryRow& row : report.summary) {
        const Summary& s = row.stats;
        out << report.experiment << ',' << row.engine << ',' << row.k << ',' << row.n << ',' << row.metric << ','
            << s.count << ',' << format_double(s.mean) << ',' << format_double(s.std) << ',' << format_double(s.min)
            << ',' << format_double(s.p25) << ',' << format_double(s.median) << ',' << format_double(s.p75) << ','
            << format_double(s.max) << '\n';
    }
}

}  // namespace dbd

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dbd/classify.hpp"
#include "dbd/dataset_io.hpp"
#include "dbd/error.hpp"
#include "dbd/experiments.hpp"
#include "dbd/report.hpp"
#include "dbd/search.hpp"
#include "dbd/synthetic.hpp"

namespace {

using nlohmann::json;

struct CommonOptions {
    double p = 2.0;
    double q = 8.0;
    std::size_t k = 0;
    std::string engine;
    std::uint64_t seed = 0;
    std::string out;
    std::string format = "csv";
};

struct InputOptions {
    std::string path;
    std::string format;
    std::string labels;
    std::string truth;
    std::string missing = "?";
    std::size_t dim = 0;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool with_engine) {
    cmd->add_option("--p", o.p, "l_p norm order")->capture_default_str();
    cmd->add_option("--q", o.q, "density exponent")->capture_default_str();
    if (with_engine) {
        cmd->add_option("--k", o.k, "k-NN graph degree; 0 searches the complete graph")->capture_default_str();
        cmd->add_option("--engine", o.engine, "dbd | dbd-knn | isomap | euclid")
            ->check(CLI::IsMember({"dbd", "dbd-knn", "isomap", "euclid"}));
    }
    cmd->add_option("--seed", o.seed, "random seed")->capture_default_str();
    cmd->add_option("--out", o.out, "output file (default stdout)");
    cmd->add_option("--format", o.format, "csv | json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
}

void add_input(CLI::App* cmd, InputOptions& o, bool required) {
    auto* opt = cmd->add_option("--input", o.path, "dataset file");
    if (required) opt->required();
    cmd->add_option("--input-format", o.format, "csv | idx | libsvm (default: from extension)")
        ->check(CLI::IsMember({"csv", "idx", "libsvm"}));
    cmd->add_option("--labels", o.labels, "label column (name or 0-based index) or a label file");
    cmd->add_option("--truth", o.truth, "ground-truth column (csv)");
    cmd->add_option("--missing", o.missing, "label sentinel for unlabeled points")->capture_default_str();
    cmd->add_option("--dim", o.dim, "dimension for libsvm input (0 infers)");
}

dbd::Engine resolve_engine(const CommonOptions& o) {
    std::string name = o.engine;
    if (name.empty()) name = o.k > 0 ? "dbd-knn" : "dbd";
    const dbd::Engine engine = dbd::Engine::parse(name, o.k);
    if ((engine.kind == dbd::Engine::Kind::dbd_knn || engine.kind == dbd::Engine::Kind::isomap) && o.k == 0) {
        throw dbd::InvalidInput("engine " + name + " needs --k >= 1");
    }
    if ((engine.kind == dbd::Engine::Kind::dbd || engine.kind == dbd::Engine::Kind::euclid) && o.k > 0) {
        throw dbd::InvalidInput("engine " + name + " does not take --k");
    }
    return engine;
}

dbd::LoadedDataset load(const InputOptions& o) {
    dbd::DatasetFile file;
    file.path = o.path;
    file.format = o.format.empty() ? dbd::format_from_path(file.path) : dbd::parse_dataset_format(o.format);
    file.missing_label = o.missing;
    file.dim = o.dim;
    if (!o.labels.empty()) {
        if (std::filesystem::is_regular_file(o.labels)) {
            file.label_file = o.labels;
        } else {
            file.label_column = o.labels;
        }
    }
    if (!o.truth.empty()) file.truth_column = o.truth;
    return dbd::load_dataset(file);
}

// Runs `write` against the --out file or stdout.
template <typename Fn>
void emit(const CommonOptions& o, Fn&& write) {
    if (o.out.empty()) {
        write(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream out(o.out);
    if (!out) {
        throw dbd::IoError("cannot open '" + o.out + "' for writing");
    }
    write(out);
    out.flush();
    if (!out) {
        throw dbd::IoError("write to '" + o.out + "' failed");
    }
}

json params_json(const dbd::MetricParams& params) { return {{"p", params.p}, {"q", params.q}}; }

json cost_json(double cost) { return std::isinf(cost) ? json("inf") : json(cost); }

template <typename T>
std::vector<T> parse_list(const std::string& text, const char* what) {
    std::vector<T> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        try {
            if constexpr (std::is_same_v<T, double>) {
                out.push_back(dbd::parse_double(item));
            } else {
                std::size_t used = 0;
                const unsigned long long v = std::stoull(item, &used);
                if (used != item.size()) throw std::invalid_argument(item);
                out.push_back(static_cast<T>(v));
            }
        } catch (const std::exception&) {
            throw dbd::InvalidInput(std::string("bad ") + what + " list entry '" + item + "'");
        }
    }
    if (out.empty()) {
        throw dbd::InvalidInput(std::string("empty ") + what + " list");
    }
    return out;
}

void write_report(const CommonOptions& o, const dbd::ExperimentReport& report, bool summary_only) {
    emit(o, [&](std::ostream& out) {
        if (o.format == "json") {
            out << dbd::report_to_json(report) << '\n';
        } else if (summary_only) {
            dbd::write_summary_csv(out, report);
        } else {
            dbd::write_report_csv(out, report);
        }
    });
}

// ---------------------------------------------------------------- synth

struct SynthOptions {
    std::string kind = "uniform";
    std::size_t n = 1000;
    std::size_t d = 2;
    double separation = 0.3;
    double noise = 0.02;
};

void run_synth(const CommonOptions& o, const SynthOptions& s) {
    dbd::PointSet points;
    std::vector<std::optional<int>> labels;
    std::vector<int> truth;
    if (s.kind == "uniform") {
        points = dbd::gen_uniform_square(s.n, s.d, o.seed);
    } else {
        dbd::TwoClusterData data = dbd::gen_two_clusters(s.n, s.separation, s.noise, o.seed);
        points = std::move(data.dataset.points);
        labels = std::move(data.dataset.labels);
        truth = std::move(data.truth);
    }
    emit(o, [&](std::ostream& out) {
        if (o.format == "csv") {
            dbd::write_points_csv(out, points, labels, truth);
            return;
        }
        json rows = json::array();
        for (dbd::PointIndex i = 0; i < points.size(); ++i) {
            json row = {{"x", std::vector<double>(points[i].begin(), points[i].end())}};
            row["label"] = i < labels.size() && labels[i] ? json(*labels[i]) : json(nullptr);
            if (!truth.empty()) row["truth"] = truth[i];
            rows.push_back(std::move(row));
        }
        out << json{{"kind", s.kind}, {"n", s.n}, {"seed", o.seed}, {"points", rows}}.dump(2) << '\n';
    });
}

// ---------------------------------------------------------------- classify

struct CvOptions {
    bool enabled = false;
    std::string p_grid = "2";
    std::string q_grid = "1,2,4,8";
    std::size_t folds = 10;
    std::size_t trials = 1;
    unsigned threads = 0;
};

void run_classify(const CommonOptions& o, const InputOptions& in, const CvOptions& cv) {
    const dbd::LoadedDataset loaded = load(in);
    const dbd::Engine engine = resolve_engine(o);
    dbd::MetricParams params{o.p, o.q};
    params.validate();

    std::optional<dbd::CvResult> cv_result;
    if (cv.enabled) {
        dbd::CvConfig config;
        config.p_grid = parse_list<double>(cv.p_grid, "p grid");
        config.q_grid = parse_list<double>(cv.q_grid, "q grid");
        config.folds = cv.folds;
        config.trials = cv.trials;
        config.seed = o.seed;
        config.engine = engine;
        config.threads = cv.threads;
        cv_result = dbd::cross_validate_pq(loaded.dataset, config);
        params = cv_result->best;
        std::cerr << "cross-validation selected p=" << params.p << " q=" << params.q << '\n';
    }

    const dbd::Prediction pred = dbd::predict_1nn(loaded.dataset, params, engine);
    std::optional<double> error;
    if (!loaded.truth.empty()) {
        error = dbd::error_rate(pred, loaded.truth);
        std::cerr << "error rate " << *error << " over " << pred.points.size() << " unlabeled points ("
                  << pred.fallback_count << " fallback)\n";
    }
    const auto raw_label = [&](int cls) { return loaded.class_values.empty() ? cls : loaded.class_values.at(cls); };

    emit(o, [&](std::ostream& out) {
        if (o.format == "csv") {
            out << "point_index,label,distance,decisive,fallback" << (loaded.truth.empty() ? "" : ",truth") << '\n';
            for (const dbd::PredictedPoint& pp : pred.points) {
                out << pp.index << ',' << raw_label(pp.label) << ',' << dbd::format_double(pp.distance) << ','
                    << (pp.decisive == dbd::kNone ? std::string() : std::to_string(pp.decisive)) << ','
                    << (pp.fallback ? 1 : 0);
                if (!loaded.truth.empty()) out << ',' << raw_label(loaded.truth[pp.index]);
                out << '\n';
            }
            return;
        }
        json points = json::array();
        for (const dbd::PredictedPoint& pp : pred.points) {
            json row = {{"point_index", pp.index},
                        {"label", raw_label(pp.label)},
                        {"distance", cost_json(pp.distance)},
                        {"decisive", pp.decisive == dbd::kNone ? json(nullptr) : json(pp.decisive)},
                        {"fallback", pp.fallback}};
            if (!loaded.truth.empty()) row["truth"] = raw_label(loaded.truth[pp.index]);
            points.push_back(std::move(row));
        }
        json doc = {{"engine", engine.name()},
                    {"k", engine.k},
                    {"params", params_json(params)},
                    {"seed", o.seed},
                    {"n", loaded.dataset.points.size()},
                    {"d", loaded.dataset.points.dim()},
                    {"labeled", loaded.dataset.labeled_count()},
                    {"error", error ? json(*error) : json(nullptr)},
                    {"fallback_count", pred.fallback_count},
                    {"predictions", points}};
        if (cv_result) {
            json table = json::array();
            for (const dbd::CvCell& cell : cv_result->table) {
                table.push_back({{"p", cell.params.p}, {"q", cell.params.q}, {"error", cell.error}});
            }
            doc["cross_validation"] = {{"folds", cv.folds}, {"trials", cv.trials}, {"table", table}};
        }
        out << doc.dump(2) << '\n';
    });
}

// ---------------------------------------------------------------- distances

void run_distances(const CommonOptions& o, const InputOptions& in, bool all_goals, unsigned threads) {
    const dbd::LoadedDataset loaded = load(in);
    const dbd::Engine engine = resolve_engine(o);
    const dbd::MetricParams params{o.p, o.q};
    params.validate();
    const dbd::GoalSet goals = loaded.dataset.goals();

    if (all_goals) {
        const dbd::DistanceMatrix m = dbd::all_pairs_to_goals(loaded.dataset.points, goals, params, engine, threads);
        emit(o, [&](std::ostream& out) {
            if (o.format == "csv") {
                dbd::export_distances(out, m, goals);
                return;
            }
            json rows = json::array();
            for (std::size_t i = 0; i < m.rows; ++i) {
                json row = json::array();
                for (std::size_t g = 0; g < m.cols; ++g) row.push_back(cost_json(m.at(i, g)));
                rows.push_back(std::move(row));
            }
            json goal_list = json::array();
            for (const dbd::Goal& g : goals) goal_list.push_back({{"point_index", g.index}, {"label", g.label}});
            out << json{{"engine", engine.name()}, {"k", engine.k}, {"params", params_json(params)},
                        {"goals", goal_list}, {"costs", rows}}
                       .dump(2)
                << '\n';
        });
        return;
    }

    const dbd::ShortestPathResult r = dbd::run_search(loaded.dataset.points, goals, params, engine);
    std::cerr << r.unreachable_count << " of " << r.size() << " points unreachable\n";
    emit(o, [&](std::ostream& out) {
        if (o.format == "csv") {
            dbd::export_distances(out, r, goals);
            return;
        }
        json rows = json::array();
        for (dbd::PointIndex i = 0; i < r.size(); ++i) {
            const bool reached = r.reached(i);
            rows.push_back({{"point_index", i},
                            {"goal_index", reached ? json(r.source[i]) : json(nullptr)},
                            {"cost", cost_json(r.cost[i])},
                            {"source_label", reached ? json(goals[r.source[i]].label) : json(nullptr)}});
        }
        out << json{{"engine", engine.name()},
                    {"k", engine.k},
                    {"params", params_json(params)},
                    {"unreachable", r.unreachable_count},
                    {"distances", rows}}
                   .dump(2)
            << '\n';
    });
}

// ---------------------------------------------------------------- bench / converge

struct BenchOptions {
    std::string ks = "15,30,100";
    std::size_t goals = 100;
    std::size_t trials = 3;
    std::size_t n = 50000;
    std::size_t d = 10;
    bool no_star = false;
    bool summary = false;
};

void run_bench(const CommonOptions& o, const InputOptions& in, const BenchOptions& b) {
    const dbd::PointSet points = in.path.empty() ? dbd::gen_uniform_square(b.n, b.d, o.seed) : load(in).dataset.points;
    dbd::TimingConfig config;
    config.ks = parse_list<std::size_t>(b.ks, "k");
    config.goal_count = b.goals;
    config.trials = b.trials;
    config.params = {o.p, o.q};
    config.seed = o.seed;
    config.run_star = !b.no_star;
    write_report(o, dbd::run_timing_experiment(points, config), b.summary);
}

struct ConvergeOptions {
    std::string ns = "50,200,1000,5000";
    std::size_t trials = 50;
    bool summary = false;
};

void run_converge(const CommonOptions& o, const ConvergeOptions& c) {
    dbd::ConvergenceConfig config;
    config.ns = parse_list<std::size_t>(c.ns, "n");
    config.trials = c.trials;
    config.params = {o.p, o.q};
    config.seed = o.seed;
    write_report(o, dbd::run_convergence_experiment(config), c.summary);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Density-based distances over point sets and 1-NN classification with them"};
    app.require_subcommand(1);

    CommonOptions synth_common, classify_common, distances_common, bench_common, converge_common;
    InputOptions classify_in, distances_in, bench_in;

    SynthOptions synth;
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic point set");
    add_common(synth_cmd, synth_common, false);
    synth_cmd->add_option("--kind", synth.kind, "uniform | clusters")
        ->check(CLI::IsMember({"uniform", "clusters"}))
        ->capture_default_str();
    synth_cmd->add_option("--n", synth.n, "number of points")->capture_default_str();
    synth_cmd->add_option("--d", synth.d, "dimension (uniform)")->capture_default_str();
    synth_cmd->add_option("--separation", synth.separation, "gap between clusters")->capture_default_str();
    synth_cmd->add_option("--noise", synth.noise, "cluster noise")->capture_default_str();

    CvOptions cv;
    auto* classify_cmd = app.add_subcommand("classify", "1-NN classification of unlabeled points");
    add_common(classify_cmd, classify_common, true);
    add_input(classify_cmd, classify_in, true);
    classify_cmd->add_flag("--cv", cv.enabled, "choose (p, q) by cross-validation");
    classify_cmd->add_option("--p-grid", cv.p_grid, "comma-separated p values")->capture_default_str();
    classify_cmd->add_option("--q-grid", cv.q_grid, "comma-separated q values")->capture_default_str();
    classify_cmd->add_option("--folds", cv.folds, "cross-validation folds")->capture_default_str();
    classify_cmd->add_option("--trials", cv.trials, "cross-validation repetitions")->capture_default_str();
    classify_cmd->add_option("--threads", cv.threads, "worker threads (0 = all cores)");

    bool all_goals = false;
    unsigned distance_threads = 0;
    auto* distances_cmd = app.add_subcommand("distances", "export distances to the labeled points");
    add_common(distances_cmd, distances_common, true);
    add_input(distances_cmd, distances_in, true);
    distances_cmd->add_flag("--all-goals", all_goals, "one column per labeled point instead of the nearest only");
    distances_cmd->add_option("--threads", distance_threads, "worker threads (0 = all cores)");

    BenchOptions bench;
    auto* bench_cmd = app.add_subcommand("bench", "time Dijkstra* against k-NN graph Dijkstra");
    add_common(bench_cmd, bench_common, false);
    add_input(bench_cmd, bench_in, false);
    bench_cmd->add_option("--ks", bench.ks, "comma-separated graph degrees")->capture_default_str();
    bench_cmd->add_option("--goals", bench.goals, "labeled points per trial")->capture_default_str();
    bench_cmd->add_option("--trials", bench.trials, "trials")->capture_default_str();
    bench_cmd->add_option("--n", bench.n, "synthetic point count when no --input")->capture_default_str();
    bench_cmd->add_option("--d", bench.d, "synthetic dimension when no --input")->capture_default_str();
    bench_cmd->add_flag("--no-star", bench.no_star, "skip Dijkstra*");
    bench_cmd->add_flag("--summary", bench.summary, "csv of summary rows instead of records");

    ConvergeOptions converge;
    converge_common.q = 2.0;
    auto* converge_cmd = app.add_subcommand("converge", "density and corner-distance convergence study");
    add_common(converge_cmd, converge_common, false);
    converge_cmd->add_option("--ns", converge.ns, "comma-separated ascending sample sizes")->capture_default_str();
    converge_cmd->add_option("--trials", converge.trials, "trials per sample size")->capture_default_str();
    converge_cmd->add_flag("--summary", converge.summary, "csv of summary rows instead of records");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*synth_cmd) run_synth(synth_common, synth);
        if (*classify_cmd) run_classify(classify_common, classify_in, cv);
        if (*distances_cmd) run_distances(distances_common, distances_in, all_goals, distance_threads);
        if (*bench_cmd) run_bench(bench_common, bench_in, bench);
        if (*converge_cmd) run_converge(converge_common, converge);
    } catch (const std::exception& e) {
        std::cerr << "dbd: error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

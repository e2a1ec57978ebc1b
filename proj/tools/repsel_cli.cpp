// repsel: select representative subsets of embeddings, benchmark the greedy
// k-center family on TSPlib instances, and score class coverage.
//
// Exit codes: 0 success, 1 validation error, 2 runtime failure.

#include "repsel/io.hpp"
#include "repsel/repsel.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace repsel;
using io::ordered_json;

struct TsneFlags {
    double perplexity = 40.0;
    std::size_t iterations = 1000;

    void add_to(CLI::App& cmd) {
        cmd.add_option("--perplexity", perplexity, "t-SNE perplexity")->capture_default_str();
        cmd.add_option("--iterations", iterations, "t-SNE iterations")->capture_default_str();
    }

    tsne::Params params() const {
        tsne::Params p;
        p.perplexity = perplexity;
        p.iterations = iterations;
        return p;
    }
};

Transform parse_transform(const std::string& name) {
    if (name == "none") return Transform::none;
    if (name == "tsne" || name == "t-sne") return Transform::tsne;
    throw validation_error("unknown transform '" + name + "'");
}

// ---------------------------------------------------------------------------

struct SelectArgs {
    std::string embeddings;
    std::string labels;
    std::string method = "greedy";
    std::string metric = "euclidean";
    std::string transform = "none";
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::string output = "-";
    double thresh = 0.9999;
    TsneFlags tsne;
};

int cmd_select(const SelectArgs& args) {
    const Method method = parse_method(args.method);
    const Metric metric = parse_metric(args.metric);
    const Transform transform = parse_transform(args.transform);
    detail::require(method != Method::exhaustive, "method 'exhaustive' is not a selection strategy");
    detail::require(args.n >= 1, "--n must be at least 1");

    const PointSet points = io::load_embeddings(args.embeddings);
    detail::require(args.n <= points.size(), "--n (" + std::to_string(args.n) +
                                                 ") exceeds the number of points (" +
                                                 std::to_string(points.size()) + ")");
    std::vector<std::string> labels;
    if (method == Method::random_class_balanced) {
        detail::require(!args.labels.empty(), "random-class-balanced needs --labels");
        labels = io::align_labels(points, io::load_labels(args.labels));
    }
    detail::require(method != Method::greedy_maximin || args.n >= 2, "greedy-maximin needs --n >= 2");
    MinimaxConfig minimax;
    minimax.thresh = args.thresh;
    detail::validate(minimax);
    const tsne::Params tsne_params = args.tsne.params();
    if (transform == Transform::tsne) tsne::detail::validate(tsne_params, points.size());
    // Distances validates zero norms under cosine before any work starts.
    const Distances input_dist(points, metric);

    io::SelectionRecord record;
    record.method = method;
    record.metric = std::string(to_string(metric));
    record.transform = std::string(to_string(transform));
    record.seed = args.seed;

    const PointSet* space = &points;
    Metric space_metric = metric;
    tsne::Result embedded;
    if (transform == Transform::tsne) {
        auto params = tsne_params;
        params.threads = default_workers();
        embedded = tsne::embed(points, metric, params, args.seed);
        space = &embedded.embedding;
        space_metric = Metric::euclidean;
        record.tsne = params;
        record.tsne_final_kl = embedded.final_kl();
    }
    const Distances dist(*space, space_metric);

    Selection selection;
    switch (method) {
        case Method::greedy: selection = greedy_k_center(dist, args.n, args.seed).first; break;
        case Method::greedy_minimax: selection = greedy_minimax(dist, args.n, args.seed, minimax); break;
        case Method::greedy_maximin: selection = greedy_maximin(dist, args.n, args.seed); break;
        case Method::kmedoids: selection = k_medoids(dist, args.n, args.seed); break;
        case Method::random: selection = random_select(points.size(), args.n, args.seed); break;
        case Method::random_class_balanced:
            selection = random_class_balanced(labels, args.n, args.seed);
            break;
        case Method::exhaustive: break;
    }
    record.indices = selection.indices;
    for (auto i : selection.indices) record.ids.push_back(points.ids()[i]);
    record.objectives = evaluate(dist, selection.indices);

    io::write_atomic(args.output, io::dump(io::to_json(record)));
    return 0;
}

// ---------------------------------------------------------------------------

struct BenchmarkArgs {
    std::string tsplib;
    std::string method = "greedy";
    std::vector<std::size_t> ks;
    std::size_t runs = 10;
    std::uint64_t seed = 0;
    std::string output = "-";
    double thresh = 0.9999;
    bool integer_distances = false;
};

int cmd_benchmark(const BenchmarkArgs& args) {
    const Method method = parse_method(args.method);
    detail::require(!args.ks.empty(), "--ks needs at least one value");
    detail::require(args.runs >= 1, "--runs must be at least 1");
    const auto inst = tsplib::load(args.tsplib);

    BenchmarkOptions options;
    options.runs = args.runs;
    options.base_seed = args.seed;
    options.minimax.thresh = args.thresh;
    options.integer_distances = args.integer_distances;
    options.workers = default_workers();
    detail::validate(options.minimax);
    const auto reports = run_benchmark(inst, method, args.ks, options);

    ordered_json doc;
    doc["kind"] = "benchmark";
    doc["instance"] = inst.name;
    doc["dimension"] = inst.dimension;
    doc["method"] = std::string(to_string(method));
    doc["distances"] = args.integer_distances ? "integer" : "real";
    doc["base_seed"] = args.seed;
    doc["thresh"] = io::round12(args.thresh);
    ordered_json list = ordered_json::array();
    for (const auto& r : reports) list.push_back(io::to_json(r));
    doc["reports"] = list;
    io::write_atomic(args.output, io::dump(doc));
    return 0;
}

// ---------------------------------------------------------------------------

struct CoverageArgs {
    std::vector<std::string> backbone;
    std::vector<std::string> projection;
    std::vector<std::string> labels;
    std::vector<std::string> names;
    std::vector<std::string> strategies{"all"};
    std::vector<std::size_t> budgets;
    std::size_t budget_cap = 100;
    std::size_t runs = 20;
    std::uint64_t seed = 0;
    std::string output = "-";
    bool keep_selections = false;
    double thresh = 0.9999;
    TsneFlags tsne;
};

std::vector<StrategySpec> select_strategies(const std::vector<std::string>& filters) {
    const auto all = all_strategies();
    std::vector<bool> keep(all.size(), false);
    for (const auto& filter : filters) {
        bool matched = false;
        for (std::size_t i = 0; i < all.size(); ++i) {
            const auto name = all[i].name();
            // "all", an exact name, or a leading path such as "kmedoids" or "kmedoids/cosine"
            if (filter == "all" || name == filter || name.rfind(filter + "/", 0) == 0) {
                keep[i] = true;
                matched = true;
            }
        }
        detail::require(matched, "strategy filter '" + filter + "' matches nothing");
    }
    std::vector<StrategySpec> out;
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (keep[i]) out.push_back(all[i]);
    }
    return out;
}

std::string format_table(const std::vector<std::string>& datasets,
                         const std::vector<std::pair<StrategySpec, std::vector<double>>>& rows) {
    std::ostringstream out;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-4s %-22s %-10s %-5s %-16s", "rank", "method", "metric",
                  "tsne", "layer");
    out << buf;
    for (const auto& d : datasets) {
        std::snprintf(buf, sizeof buf, " %10.10s", d.c_str());
        out << buf;
    }
    out << "    average\n";
    std::size_t rank = 0;
    for (const auto& [spec, scores] : rows) {
        const double avg = std::accumulate(scores.begin(), scores.end(), 0.0) /
                           static_cast<double>(scores.size());
        std::snprintf(buf, sizeof buf, "%-4zu %-22s %-10s %-5s %-16s", ++rank,
                      std::string(to_string(spec.method)).c_str(),
                      spec.metric ? std::string(to_string(*spec.metric)).c_str() : "",
                      spec.transform == Transform::tsne ? "yes" : "",
                      spec.layer ? std::string(to_string(*spec.layer)).c_str() : "");
        out << buf;
        for (double s : scores) {
            std::snprintf(buf, sizeof buf, " %10.2f", s);
            out << buf;
        }
        std::snprintf(buf, sizeof buf, " %10.2f\n", avg);
        out << buf;
    }
    return out.str();
}

int cmd_coverage(const CoverageArgs& args) {
    const std::size_t datasets = args.backbone.size();
    detail::require(datasets >= 1, "--backbone is required");
    detail::require(args.projection.size() == datasets && args.labels.size() == datasets,
                    "--backbone, --projection and --labels must be given the same number of times");
    detail::require(args.names.empty() || args.names.size() == datasets,
                    "--name must be given once per dataset or not at all");
    detail::require(args.runs >= 1, "--runs must be at least 1");
    const auto strategies = select_strategies(args.strategies);

    CoverageOptions options;
    options.runs = args.runs;
    options.base_seed = args.seed;
    options.tsne = args.tsne.params();
    options.minimax.thresh = args.thresh;
    options.workers = default_workers();
    options.keep_selections = args.keep_selections;
    detail::validate(options.minimax);

    // Load and validate everything before any selection runs.
    std::vector<CoverageDataset> data(datasets);
    std::vector<std::vector<std::size_t>> budgets(datasets);
    const bool needs_tsne = std::any_of(strategies.begin(), strategies.end(),
                                        [](const auto& s) { return s.transform == Transform::tsne; });
    for (std::size_t d = 0; d < datasets; ++d) {
        auto& ds = data[d];
        ds.name = args.names.empty() ? "dataset" + std::to_string(d) : args.names[d];
        PointSet backbone = io::load_embeddings(args.backbone[d]);
        PointSet projection = io::align_rows(backbone, io::load_embeddings(args.projection[d]));
        ds.labels = io::align_labels(backbone, io::load_labels(args.labels[d]));
        for (const auto& s : strategies) {
            if (s.metric == Metric::cosine) {
                Distances(s.layer == Layer::backbone ? backbone : projection, Metric::cosine);
            }
        }
        if (needs_tsne) tsne::detail::validate(options.tsne, backbone.size());
        ds.layers.emplace(Layer::backbone, std::move(backbone));
        ds.layers.emplace(Layer::projection_head, std::move(projection));
        budgets[d] = args.budgets.empty()
                         ? budget_grid(count_classes(ds.labels), args.budget_cap)
                         : args.budgets;
        detail::require(!budgets[d].empty(),
                        "dataset '" + ds.name + "': empty budget grid (more classes than the cap)");
        for (auto b : budgets[d]) {
            detail::require(b >= 1 && b <= ds.labels.size(),
                            "dataset '" + ds.name + "': budget " + std::to_string(b) + " outside [1, N]");
        }
    }

    ordered_json reports = ordered_json::array();
    std::vector<std::pair<StrategySpec, std::vector<double>>> rows;
    for (const auto& strategy : strategies) {
        std::vector<double> scores;
        for (std::size_t d = 0; d < datasets; ++d) {
            const auto report = run_coverage(data[d], strategy, budgets[d], options);
            scores.push_back(report.dataset_score);
            reports.push_back(io::to_json(report));
        }
        rows.emplace_back(strategy, std::move(scores));
    }
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        return std::accumulate(a.second.begin(), a.second.end(), 0.0) >
               std::accumulate(b.second.begin(), b.second.end(), 0.0);
    });

    ordered_json summary = ordered_json::array();
    std::size_t rank = 0;
    for (const auto& [spec, scores] : rows) {
        ordered_json row = io::to_json(spec);
        row["rank"] = ++rank;
        ordered_json per_dataset;
        for (std::size_t d = 0; d < datasets; ++d) per_dataset[data[d].name] = io::round12(scores[d]);
        row["scores"] = per_dataset;
        row["average"] = io::round12(std::accumulate(scores.begin(), scores.end(), 0.0) /
                                     static_cast<double>(scores.size()));
        summary.push_back(row);
    }

    ordered_json doc;
    doc["kind"] = "coverage";
    doc["runs"] = args.runs;
    doc["base_seed"] = args.seed;
    doc["reports"] = reports;
    doc["summary"] = summary;
    io::write_atomic(args.output, io::dump(doc));
    if (args.output != "-") {
        std::vector<std::string> names;
        for (const auto& ds : data) names.push_back(ds.name);
        std::cout << format_table(names, rows);
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct TsneArgs {
    std::string embeddings;
    std::string metric = "euclidean";
    std::uint64_t seed = 0;
    std::string output = "-";
    TsneFlags tsne;
};

int cmd_tsne(const TsneArgs& args) {
    const Metric metric = parse_metric(args.metric);
    const PointSet points = io::load_embeddings(args.embeddings);
    auto params = args.tsne.params();
    tsne::detail::validate(params, points.size());
    const Distances check(points, metric);
    params.threads = default_workers();

    const auto result = tsne::embed(points, metric, params, args.seed);
    std::string footer = "initial_kl=" + io::format_full(io::round12(result.initial_kl())) +
                         " final_kl=" + io::format_full(io::round12(result.final_kl())) +
                         " perplexity=" + io::format_full(params.perplexity) +
                         " iterations=" + std::to_string(params.iterations) +
                         " seed=" + std::to_string(args.seed) +
                         " metric=" + std::string(to_string(metric));
    if (!result.calibration.unconverged_rows.empty()) {
        footer += " unconverged_rows=" + std::to_string(result.calibration.unconverged_rows.size());
    }
    io::write_atomic(args.output, io::format_embeddings(result.embedding, footer));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Representative subset selection for cold-start labelling"};
    app.require_subcommand(1);

    SelectArgs select;
    auto* sel = app.add_subcommand("select", "Select n representative points from an embedding file");
    sel->add_option("--embeddings", select.embeddings, "Embedding CSV (id,f0,...)")->required();
    sel->add_option("--labels", select.labels, "Label CSV (id,label); needed for random-class-balanced");
    sel->add_option("--method", select.method,
                    "greedy | greedy-minimax | greedy-maximin | kmedoids | random | random-class-balanced")
        ->capture_default_str();
    sel->add_option("--metric", select.metric, "euclidean | cosine")->capture_default_str();
    sel->add_option("--transform", select.transform, "none | tsne")->capture_default_str();
    sel->add_option("--n", select.n, "Number of points to select")->required();
    sel->add_option("--seed", select.seed, "Random seed")->capture_default_str();
    sel->add_option("--output,-o", select.output, "Output path ('-' for stdout)")->capture_default_str();
    sel->add_option("--thresh", select.thresh, "Redundancy threshold for greedy-minimax")->capture_default_str();
    select.tsne.add_to(*sel);

    BenchmarkArgs bench;
    auto* ben = app.add_subcommand("benchmark", "Multi-seed k-center benchmark on a TSPlib instance");
    ben->add_option("--tsplib", bench.tsplib, "TSPlib EUC_2D file")->required();
    ben->add_option("--method", bench.method, "greedy | greedy-minimax | greedy-maximin")
        ->capture_default_str();
    ben->add_option("--ks", bench.ks, "Budgets, e.g. --ks 20,40,60")->required()->delimiter(',');
    ben->add_option("--runs", bench.runs, "Seeds per budget")->capture_default_str();
    ben->add_option("--seed", bench.seed, "Base seed; run r uses seed + r")->capture_default_str();
    ben->add_option("--output,-o", bench.output, "Output path ('-' for stdout)")->capture_default_str();
    ben->add_option("--thresh", bench.thresh, "Redundancy threshold for greedy-minimax")->capture_default_str();
    ben->add_flag("--integer-distances", bench.integer_distances,
                  "Round distances to the nearest integer (TSPlib convention)");

    CoverageArgs cov;
    auto* covc = app.add_subcommand("coverage", "Score class coverage of selection strategies");
    covc->add_option("--backbone", cov.backbone, "Backbone embedding CSV (repeat per dataset)")->required();
    covc->add_option("--projection", cov.projection, "Projection-head embedding CSV (repeat per dataset)")
        ->required();
    covc->add_option("--labels", cov.labels, "Label CSV (repeat per dataset)")->required();
    covc->add_option("--name", cov.names, "Dataset name (repeat per dataset)");
    covc->add_option("--strategies", cov.strategies,
                     "Strategy filter: all, a method, or method/metric/transform/layer")
        ->delimiter(',')
        ->capture_default_str();
    covc->add_option("--budgets", cov.budgets, "Explicit budgets; default multiples of the class count")
        ->delimiter(',');
    covc->add_option("--budget-cap", cov.budget_cap, "Largest budget of the default grid")->capture_default_str();
    covc->add_option("--runs", cov.runs, "Seeds per budget")->capture_default_str();
    covc->add_option("--seed", cov.seed, "Base seed; run r uses seed + r")->capture_default_str();
    covc->add_option("--output,-o", cov.output, "Output path ('-' for stdout)")->capture_default_str();
    covc->add_flag("--keep-selections", cov.keep_selections, "Store every selected index list");
    covc->add_option("--thresh", cov.thresh, "Redundancy threshold for greedy-minimax")->capture_default_str();
    cov.tsne.add_to(*covc);

    TsneArgs tsne_args;
    auto* ts = app.add_subcommand("tsne", "Exact t-SNE embedding to two dimensions");
    ts->add_option("--embeddings", tsne_args.embeddings, "Embedding CSV (id,f0,...)")->required();
    ts->add_option("--metric", tsne_args.metric, "euclidean | cosine")->capture_default_str();
    ts->add_option("--seed", tsne_args.seed, "Random seed")->capture_default_str();
    ts->add_option("--output,-o", tsne_args.output, "Output path ('-' for stdout)")->capture_default_str();
    tsne_args.tsne.add_to(*ts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*sel) return cmd_select(select);
        if (*ben) return cmd_benchmark(bench);
        if (*covc) return cmd_coverage(cov);
        if (*ts) return cmd_tsne(tsne_args);
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

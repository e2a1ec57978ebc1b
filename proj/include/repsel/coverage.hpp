#pragma once

#include "repsel/error.hpp"
#include "repsel/greedy.hpp"
#include "repsel/kmedoids.hpp"
#include "repsel/maximin.hpp"
#include "repsel/minimax.hpp"
#include "repsel/parallel.hpp"
#include "repsel/point_set.hpp"
#include "repsel/random.hpp"
#include "repsel/selection.hpp"
#include "repsel/tsne.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace repsel {

enum class Transform { none, tsne };
enum class Layer { backbone, projection_head };

inline std::string_view to_string(Transform t) { return t == Transform::tsne ? "tsne" : "none"; }
inline std::string_view to_string(Layer l) {
    return l == Layer::backbone ? "backbone" : "projection-head";
}

/// One label-selection strategy. Random baselines carry no metric, transform or layer.
struct StrategySpec {
    Method method = Method::random;
    std::optional<Metric> metric;
    Transform transform = Transform::none;
    std::optional<Layer> layer;

    bool is_random() const {
        return method == Method::random || method == Method::random_class_balanced;
    }

    /// "method/metric/transform/layer", or the bare method name for baselines.
    std::string name() const {
        std::string out(to_string(method));
        if (is_random()) return out;
        out += "/";
        out += to_string(*metric);
        out += "/";
        out += to_string(transform);
        out += "/";
        out += to_string(*layer);
        return out;
    }

    friend bool operator==(const StrategySpec&, const StrategySpec&) = default;
};

/// The 32 (method, metric, transform, layer) combinations plus the two random baselines.
inline std::vector<StrategySpec> all_strategies() {
    std::vector<StrategySpec> out;
    for (auto method : {Method::greedy, Method::greedy_minimax, Method::greedy_maximin, Method::kmedoids}) {
        for (auto metric : {Metric::euclidean, Metric::cosine}) {
            for (auto transform : {Transform::none, Transform::tsne}) {
                for (auto layer : {Layer::backbone, Layer::projection_head}) {
                    out.push_back({method, metric, transform, layer});
                }
            }
        }
    }
    out.push_back({Method::random, std::nullopt, Transform::none, std::nullopt});
    out.push_back({Method::random_class_balanced, std::nullopt, Transform::none, std::nullopt});
    return out;
}

inline StrategySpec parse_strategy(std::string_view name) {
    for (const auto& s : all_strategies()) {
        if (s.name() == name) return s;
    }
    throw validation_error("unknown strategy '" + std::string(name) + "'");
}

/// Budgets m * num_classes for m >= 1, up to and including `cap`.
inline std::vector<std::size_t> budget_grid(std::size_t num_classes, std::size_t cap = 100) {
    detail::require(num_classes >= 1, "budget_grid: need at least one class");
    std::vector<std::size_t> out;
    for (std::size_t b = num_classes; b <= cap; b += num_classes) out.push_back(b);
    return out;
}

/// One dataset: per-layer point sets sharing ids and row order, plus aligned labels.
struct CoverageDataset {
    std::string name;
    std::map<Layer, PointSet> layers;
    std::vector<std::string> labels;
};

struct CoverageOptions {
    std::size_t runs = 20;
    std::uint64_t base_seed = 0;
    tsne::Params tsne;
    MinimaxConfig minimax;
    std::size_t kmedoids_max_iter = 1000;
    std::size_t workers = 1;
    bool keep_selections = false;
};

struct CoverageReport {
    std::string dataset;
    StrategySpec strategy;
    std::vector<std::size_t> budgets;
    std::size_t runs_per_budget = 0;
    std::vector<std::size_t> covered;
    std::vector<double> proportion;
    double dataset_score = 0.0;
    /// selections[b][r]: indices chosen for budget b, run r (when kept).
    std::vector<std::vector<std::vector<std::size_t>>> selections;
};

inline std::size_t count_classes(const std::vector<std::string>& labels) {
    return std::set<std::string>(labels.begin(), labels.end()).size();
}

inline void validate(const CoverageDataset& data) {
    detail::require(!data.layers.empty(), "dataset '" + data.name + "' has no embeddings");
    const auto& first = data.layers.begin()->second;
    detail::require(data.labels.size() == first.size(),
                    "dataset '" + data.name + "': label count does not match point count");
    for (const auto& [layer, points] : data.layers) {
        detail::require(points.size() == first.size(),
                        "dataset '" + data.name + "': layers differ in point count");
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (points.ids()[i] != first.ids()[i]) {
                throw validation_error("dataset '" + data.name + "': id misalignment between layers at row " +
                                       std::to_string(i) + " ('" + first.ids()[i] + "' vs '" +
                                       points.ids()[i] + "')");
            }
        }
    }
}

/// Runs one strategy once. Returns the selected indices.
inline std::vector<std::size_t> run_strategy_once(const CoverageDataset& data,
                                                  const StrategySpec& strategy, std::size_t budget,
                                                  std::uint64_t seed, const CoverageOptions& options) {
    const std::size_t count = data.labels.size();
    if (strategy.method == Method::random) return random_select(count, budget, seed).indices;
    if (strategy.method == Method::random_class_balanced) {
        return random_class_balanced(data.labels, budget, seed).indices;
    }
    const auto layer = data.layers.find(*strategy.layer);
    detail::require(layer != data.layers.end(),
                    "dataset '" + data.name + "' lacks the " + std::string(to_string(*strategy.layer)) +
                        " layer");

    const PointSet* space = &layer->second;
    Metric metric = *strategy.metric;
    PointSet embedded;
    if (strategy.transform == Transform::tsne) {
        embedded = tsne::embed(*space, metric, options.tsne, seed).embedding;
        space = &embedded;
        metric = Metric::euclidean;
    }
    const Distances dist(*space, metric);
    switch (strategy.method) {
        case Method::greedy: return greedy_k_center(dist, budget, seed).first.indices;
        case Method::greedy_minimax: return greedy_minimax(dist, budget, seed, options.minimax).indices;
        case Method::greedy_maximin:
            if (budget < 2) return greedy_k_center(dist, budget, seed).first.indices;
            return greedy_maximin(dist, budget, seed).indices;
        case Method::kmedoids: return k_medoids(dist, budget, seed, options.kmedoids_max_iter).indices;
        default: break;
    }
    throw validation_error("unsupported strategy method");
}

/// True when the selection contains at least one point of every class present.
inline bool covers_all_classes(const std::vector<std::string>& labels,
                               std::span<const std::size_t> selected) {
    const std::size_t classes = count_classes(labels);
    std::set<std::string_view> hit;
    for (auto i : selected) hit.insert(labels[i]);
    return hit.size() == classes;
}

/// Class-discovery protocol: for each budget and run (seed = base_seed + r),
/// select points and record whether every class was hit.
inline CoverageReport run_coverage(const CoverageDataset& data, const StrategySpec& strategy,
                                   std::span<const std::size_t> budgets, const CoverageOptions& options) {
    validate(data);
    detail::require(!budgets.empty(), "run_coverage: empty budget list");
    detail::require(options.runs >= 1, "run_coverage: runs must be at least 1");
    const std::size_t count = data.labels.size();
    const std::size_t classes = count_classes(data.labels);
    for (auto b : budgets) {
        detail::require(b >= 1 && b <= count, "budget " + std::to_string(b) + " outside [1, " +
                                                  std::to_string(count) + "]");
    }

    const std::size_t cells = budgets.size() * options.runs;
    std::vector<std::vector<std::size_t>> chosen(cells);
    parallel_for(cells, options.workers, [&](std::size_t cell) {
        const std::size_t budget = budgets[cell / options.runs];
        const std::uint64_t seed = options.base_seed + cell % options.runs;
        // pigeonhole: class-balanced sampling is undefined below the class count
        if (strategy.method == Method::random_class_balanced && budget < classes) {
            chosen[cell] = random_select(count, budget, seed).indices;
            return;
        }
        chosen[cell] = run_strategy_once(data, strategy, budget, seed, options);
    });

    CoverageReport report;
    report.dataset = data.name;
    report.strategy = strategy;
    report.budgets.assign(budgets.begin(), budgets.end());
    report.runs_per_budget = options.runs;
    double score = 0.0;
    for (std::size_t b = 0; b < budgets.size(); ++b) {
        std::size_t covered = 0;
        std::vector<std::vector<std::size_t>> kept;
        for (std::size_t r = 0; r < options.runs; ++r) {
            const auto& sel = chosen[b * options.runs + r];
            if (covers_all_classes(data.labels, sel)) ++covered;
            if (options.keep_selections) kept.push_back(sel);
        }
        report.covered.push_back(covered);
        const double proportion = static_cast<double>(covered) / static_cast<double>(options.runs);
        report.proportion.push_back(proportion);
        score += proportion;
        if (options.keep_selections) report.selections.push_back(std::move(kept));
    }
    report.dataset_score = score / static_cast<double>(budgets.size());
    return report;
}

/// Mean of dataset scores across datasets.
inline double score_strategy(std::span<const CoverageReport> reports) {
    detail::require(!reports.empty(), "score_strategy: no reports");
    double total = 0.0;
    for (const auto& r : reports) total += r.dataset_score;
    return total / static_cast<double>(reports.size());
}

}  // namespace repsel

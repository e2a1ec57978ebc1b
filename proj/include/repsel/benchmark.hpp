#pragma once

#include "repsel/error.hpp"
#include "repsel/greedy.hpp"
#include "repsel/maximin.hpp"
#include "repsel/minimax.hpp"
#include "repsel/parallel.hpp"
#include "repsel/point_set.hpp"
#include "repsel/selection.hpp"
#include "repsel/tsplib.hpp"

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace repsel {

struct Summary {
    double mean = 0.0;
    /// Sample standard deviation (n - 1); absent for a single value.
    std::optional<double> std;
};

/// Arithmetic mean and sample standard deviation.
inline Summary summarize(std::span<const double> values) {
    detail::require(!values.empty(), "summarize: empty input");
    Summary out;
    double sum = 0.0;
    for (double v : values) sum += v;
    out.mean = sum / static_cast<double>(values.size());
    if (values.size() >= 2) {
        double ss = 0.0;
        for (double v : values) ss += (v - out.mean) * (v - out.mean);
        out.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return out;
}

struct BenchReport {
    std::string instance;
    std::size_t k = 0;
    Method method = Method::greedy;
    std::string objective;  // "minimax" or "maximin"
    std::size_t runs = 0;
    std::vector<std::uint64_t> seeds;
    std::vector<double> values;
    double mean = 0.0;
    std::optional<double> std;
    std::vector<double> wall_time_seconds;
};

struct BenchmarkOptions {
    std::size_t runs = 10;
    std::uint64_t base_seed = 0;
    MinimaxConfig minimax;
    std::size_t maximin_outer_iters = 100;
    /// Use TSPlib's nearest-integer distances instead of real-valued ones.
    bool integer_distances = false;
    std::size_t workers = 1;
};

/// One benchmark cell: run `method` once with `seed` and return its objective
/// (mini-max for greedy and greedy-minimax, maxi-min for greedy-maximin).
inline double run_benchmark_cell(const Distances& dist, Method method, std::size_t k,
                                 std::uint64_t seed, const BenchmarkOptions& options) {
    switch (method) {
        case Method::greedy: {
            auto [selection, trace] = greedy_k_center(dist, k, seed);
            return selection.objectives->minimax;
        }
        case Method::greedy_minimax:
            return greedy_minimax(dist, k, seed, options.minimax).objectives->minimax;
        case Method::greedy_maximin:
            return *greedy_maximin(dist, k, seed, options.maximin_outer_iters).objectives->maximin;
        default:
            throw validation_error("benchmark supports greedy, greedy-minimax and greedy-maximin, not " +
                                   std::string(to_string(method)));
    }
}

/// Multi-seed benchmark over a list of budgets: seed of run r is base_seed + r.
inline std::vector<BenchReport> run_benchmark(const std::string& name, const PointSet& points,
                                              Method method, std::span<const std::size_t> ks,
                                              const BenchmarkOptions& options) {
    detail::require(options.runs >= 1, "benchmark runs must be at least 1");
    detail::require(!ks.empty(), "benchmark needs at least one k");
    for (auto k : ks) {
        detail::require(k >= 1 && k <= points.size(),
                        "k = " + std::to_string(k) + " outside [1, " + std::to_string(points.size()) + "]");
        detail::require(method != Method::greedy_maximin || k >= 2, "greedy-maximin needs k >= 2");
    }
    // validates the method before any work starts
    if (method != Method::greedy && method != Method::greedy_minimax &&
        method != Method::greedy_maximin) {
        throw validation_error("benchmark supports greedy, greedy-minimax and greedy-maximin, not " +
                               std::string(to_string(method)));
    }
    const Distances dist(points, options.integer_distances ? Metric::euclidean_rounded
                                                           : Metric::euclidean);

    const std::size_t cells = ks.size() * options.runs;
    std::vector<double> values(cells);
    std::vector<double> timings(cells);
    parallel_for(cells, options.workers, [&](std::size_t cell) {
        const std::size_t k = ks[cell / options.runs];
        const std::uint64_t seed = options.base_seed + cell % options.runs;
        const auto start = std::chrono::steady_clock::now();
        values[cell] = run_benchmark_cell(dist, method, k, seed, options);
        timings[cell] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    });

    std::vector<BenchReport> reports;
    for (std::size_t ki = 0; ki < ks.size(); ++ki) {
        BenchReport report;
        report.instance = name;
        report.k = ks[ki];
        report.method = method;
        report.objective = method == Method::greedy_maximin ? "maximin" : "minimax";
        report.runs = options.runs;
        for (std::size_t r = 0; r < options.runs; ++r) {
            report.seeds.push_back(options.base_seed + r);
            report.values.push_back(values[ki * options.runs + r]);
            report.wall_time_seconds.push_back(timings[ki * options.runs + r]);
        }
        const auto summary = summarize(report.values);
        report.mean = summary.mean;
        report.std = summary.std;
        reports.push_back(std::move(report));
    }
    return reports;
}

inline std::vector<BenchReport> run_benchmark(const tsplib::Instance& inst, Method method,
                                              std::span<const std::size_t> ks,
                                              const BenchmarkOptions& options) {
    return run_benchmark(inst.name, tsplib::to_point_set(inst), method, ks, options);
}

}  // namespace repsel

#pragma once

#include "repsel/error.hpp"
#include "repsel/point_set.hpp"
#include "repsel/selection.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace repsel {

namespace detail {

inline void check_indices(std::size_t n_points, std::span<const std::size_t> indices,
                          const char* what) {
    require(!indices.empty(), std::string(what) + ": empty index list");
    std::vector<bool> seen(n_points, false);
    for (auto idx : indices) {
        require(idx < n_points, std::string(what) + ": index " + std::to_string(idx) +
                                    " out of range");
        require(!seen[idx], std::string(what) + ": duplicate index " + std::to_string(idx));
        seen[idx] = true;
    }
}

}  // namespace detail

struct VoronoiAssignment {
    /// Position in the center list of each point's nearest center.
    std::vector<std::size_t> assignment;
    std::vector<double> dists;
};

/// Nearest-center assignment; ties go to the center listed first.
inline VoronoiAssignment assign_voronoi(const Distances& dist,
                                        std::span<const std::size_t> centers) {
    detail::check_indices(dist.size(), centers, "assign_voronoi");
    VoronoiAssignment out;
    out.assignment.assign(dist.size(), 0);
    out.dists.assign(dist.size(), std::numeric_limits<double>::infinity());
    for (std::size_t p = 0; p < dist.size(); ++p) {
        for (std::size_t c = 0; c < centers.size(); ++c) {
            const double d = dist(p, centers[c]);
            if (d < out.dists[p]) {
                out.dists[p] = d;
                out.assignment[p] = c;
            }
        }
    }
    return out;
}

inline VoronoiAssignment assign_voronoi(const PointSet& points, std::span<const std::size_t> centers,
                                        Metric metric) {
    return assign_voronoi(Distances(points, metric), centers);
}

/// Members of each Voronoi cell in ascending point order.
inline std::vector<std::vector<std::size_t>> voronoi_cells(const VoronoiAssignment& voronoi,
                                                           std::size_t n_centers) {
    std::vector<std::vector<std::size_t>> cells(n_centers);
    for (std::size_t p = 0; p < voronoi.assignment.size(); ++p) {
        cells[voronoi.assignment[p]].push_back(p);
    }
    return cells;
}

/// max over points of the distance to the nearest selected point.
inline double objective_minimax(const Distances& dist, std::span<const std::size_t> selected) {
    const auto voronoi = assign_voronoi(dist, selected);
    return *std::max_element(voronoi.dists.begin(), voronoi.dists.end());
}

/// Minimum pairwise distance among the selected points.
inline double objective_maximin(const Distances& dist, std::span<const std::size_t> selected) {
    detail::require(selected.size() >= 2, "objective_maximin: need at least two selected points");
    detail::check_indices(dist.size(), selected, "objective_maximin");
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < selected.size(); ++i) {
        for (std::size_t j = i + 1; j < selected.size(); ++j) {
            best = std::min(best, dist(selected[i], selected[j]));
        }
    }
    return best;
}

/// Sum over points of the distance to the nearest selected point.
inline double objective_kmedoids(const Distances& dist, std::span<const std::size_t> selected) {
    const auto voronoi = assign_voronoi(dist, selected);
    double total = 0.0;
    for (double d : voronoi.dists) total += d;
    return total;
}

inline double objective_minimax(const PointSet& points, std::span<const std::size_t> selected,
                                Metric metric) {
    return objective_minimax(Distances(points, metric), selected);
}

inline double objective_maximin(const PointSet& points, std::span<const std::size_t> selected,
                                Metric metric) {
    return objective_maximin(Distances(points, metric), selected);
}

inline double objective_kmedoids(const PointSet& points, std::span<const std::size_t> selected,
                                 Metric metric) {
    return objective_kmedoids(Distances(points, metric), selected);
}

inline Objectives evaluate(const Distances& dist, std::span<const std::size_t> selected) {
    Objectives out;
    const auto voronoi = assign_voronoi(dist, selected);
    for (double d : voronoi.dists) {
        out.minimax = std::max(out.minimax, d);
        out.kmedoids += d;
    }
    if (selected.size() >= 2) out.maximin = objective_maximin(dist, selected);
    return out;
}

enum class Objective { minimax, maximin, kmedoids };

inline constexpr std::uint64_t default_enumeration_budget = 2'000'000;

/// C(n, k), saturating at UINT64_MAX.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        result = result * (n - k + i) / i;
        if (result > std::numeric_limits<std::uint64_t>::max()) {
            return std::numeric_limits<std::uint64_t>::max();
        }
    }
    return static_cast<std::uint64_t>(result);
}

/// Exhaustive optimum of one objective over all size-n subsets. Ties resolve to
/// the lexicographically smallest index list (enumeration order).
inline Selection brute_force_optimal(const PointSet& points, std::size_t n, Objective objective,
                                     Metric metric,
                                     std::uint64_t budget = default_enumeration_budget) {
    const std::size_t count = points.size();
    detail::require(n >= 1 && n <= count, "brute_force_optimal: n must be in [1, N]");
    detail::require(objective != Objective::maximin || n >= 2,
                    "brute_force_optimal: maximin needs n >= 2");
    if (binomial(count, n) > budget) {
        throw runtime_failure("brute_force_optimal: C(" + std::to_string(count) + ", " +
                              std::to_string(n) + ") exceeds the enumeration budget of " +
                              std::to_string(budget));
    }
    const Distances dist(points, metric);
    const bool maximize = objective == Objective::maximin;

    std::vector<std::size_t> subset(n);
    for (std::size_t i = 0; i < n; ++i) subset[i] = i;
    std::vector<std::size_t> best_subset;
    double best = maximize ? -std::numeric_limits<double>::infinity()
                           : std::numeric_limits<double>::infinity();

    while (true) {
        double value = 0.0;
        switch (objective) {
            case Objective::minimax: value = objective_minimax(dist, subset); break;
            case Objective::maximin: value = objective_maximin(dist, subset); break;
            case Objective::kmedoids: value = objective_kmedoids(dist, subset); break;
        }
        if (maximize ? value > best : value < best) {
            best = value;
            best_subset = subset;
        }
        // next combination in lexicographic order
        std::size_t pos = n;
        while (pos > 0 && subset[pos - 1] == count - n + pos - 1) --pos;
        if (pos == 0) break;
        ++subset[pos - 1];
        for (std::size_t j = pos; j < n; ++j) subset[j] = subset[j - 1] + 1;
    }

    Selection out;
    out.indices = std::move(best_subset);
    out.method = Method::exhaustive;
    out.objectives = evaluate(dist, out.indices);
    return out;
}

}  // namespace repsel

#pragma once

#include "repsel/error.hpp"
#include "repsel/greedy.hpp"
#include "repsel/objectives.hpp"
#include "repsel/point_set.hpp"
#include "repsel/selection.hpp"

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

namespace repsel {

struct MaximinTrace {
    std::vector<double> objective_per_outer;
    std::size_t outer_iterations = 0;
    bool hit_cap = false;
};

/// Maxi-min refinement: every center moves, within its own Voronoi cell, to the
/// member farthest from all other centers. Moves are computed against the
/// current list and applied together; the new list is kept only if the
/// minimum pairwise distance strictly improves.
inline Selection refine_maximin(const Distances& dist, const Selection& start,
                                std::size_t max_outer_iters = 100,
                                MaximinTrace* trace = nullptr) {
    detail::require(start.indices.size() >= 2, "refine_maximin: need at least two centers");
    detail::check_indices(dist.size(), start.indices, "refine_maximin");

    std::vector<std::size_t> centers = start.indices;
    const std::size_t n = centers.size();
    double objective = objective_maximin(dist, centers);

    MaximinTrace local;
    local.objective_per_outer.push_back(objective);
    std::size_t outer = 0;
    for (; outer < max_outer_iters; ++outer) {
        const auto cells = voronoi_cells(assign_voronoi(dist, centers), n);
        std::vector<bool> is_center(dist.size(), false);
        for (auto c : centers) is_center[c] = true;

        std::vector<std::size_t> next(n);
        for (std::size_t i = 0; i < n; ++i) {
            next[i] = centers[i];
            double best = -1.0;
            for (auto k : cells[i]) {
                if (is_center[k] && k != centers[i]) continue;
                double nearest_other = std::numeric_limits<double>::infinity();
                for (std::size_t j = 0; j < n; ++j) {
                    if (j != i) nearest_other = std::min(nearest_other, dist(centers[j], k));
                }
                if (nearest_other > best) {
                    best = nearest_other;
                    next[i] = k;
                }
            }
        }
        const double next_objective = objective_maximin(dist, next);
        if (!(next_objective > objective)) break;
        centers = std::move(next);
        objective = next_objective;
        local.objective_per_outer.push_back(objective);
    }
    local.outer_iterations = outer;
    local.hit_cap = outer == max_outer_iters;
    if (trace) *trace = std::move(local);

    Selection out;
    out.indices = std::move(centers);
    out.method = Method::greedy_maximin;
    out.seed = start.seed;
    out.objectives = evaluate(dist, out.indices);
    return out;
}

inline Selection refine_maximin(const PointSet& points, const Selection& start, Metric metric,
                                std::size_t max_outer_iters = 100) {
    return refine_maximin(Distances(points, metric), start, max_outer_iters);
}

/// Greedy start followed by maxi-min refinement.
inline Selection greedy_maximin(const Distances& dist, std::size_t n, std::uint64_t seed,
                                std::size_t max_outer_iters = 100) {
    detail::require(n >= 2, "greedy_maximin: n must be at least 2");
    auto [start, trace] = greedy_k_center(dist, n, seed);
    return refine_maximin(dist, start, max_outer_iters);
}

}  // namespace repsel

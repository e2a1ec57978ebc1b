#pragma once

#include "repsel/error.hpp"
#include "repsel/greedy.hpp"
#include "repsel/objectives.hpp"
#include "repsel/point_set.hpp"
#include "repsel/selection.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace repsel {

struct OneCenter {
    std::size_t center = 0;
    double radius = 0.0;
};

namespace detail {

/// O(m^2) exact 1-center: argmin over members of the max distance to all
/// members, ties to the lowest point index.
inline OneCenter one_center_exhaustive(const Distances& dist, std::span<const std::size_t> members) {
    OneCenter best{members.front(), std::numeric_limits<double>::infinity()};
    for (auto c : members) {
        double radius = 0.0;
        for (auto m : members) radius = std::max(radius, dist(m, c));
        if (radius < best.radius || (radius == best.radius && c < best.center)) best = {c, radius};
    }
    return best;
}

}  // namespace detail

/// Exact 1-center of `members` using a growing subset of extremal points as a
/// lower bound. The candidate minimizing the max distance to the subset is
/// accepted once its max distance to all members equals that bound; otherwise
/// the member farthest from the candidate joins the subset. Ties go to the
/// lowest point index, matching the exhaustive scan exactly.
///
/// `round_cap` bounds the number of refinement rounds before falling back to
/// the exhaustive scan.
inline OneCenter local_one_center(const Distances& dist, std::span<const std::size_t> members,
                                  std::size_t round_cap = 1000) {
    detail::require(!members.empty(), "local_one_center: empty member set");
    for (auto m : members) detail::require(m < dist.size(), "local_one_center: index out of range");
    const std::size_t count = members.size();
    if (count == 1) return {members.front(), 0.0};

    const auto& points = dist.points();
    const std::size_t dim = points.dim();

    // Positions (into members) of the per-coordinate extremes.
    std::vector<bool> in_subset(count, false);
    std::vector<std::size_t> subset;
    auto add = [&](std::size_t pos) {
        if (!in_subset[pos]) {
            in_subset[pos] = true;
            subset.push_back(pos);
        }
    };
    for (std::size_t k = 0; k < dim; ++k) {
        std::size_t lo = 0;
        std::size_t hi = 0;
        for (std::size_t j = 1; j < count; ++j) {
            const double v = points[members[j]][k];
            const double vlo = points[members[lo]][k];
            const double vhi = points[members[hi]][k];
            if (v < vlo || (v == vlo && members[j] < members[lo])) lo = j;
            if (v > vhi || (v == vhi && members[j] < members[hi])) hi = j;
        }
        add(lo);
        add(hi);
    }

    // bound[j] = max distance from member j to the subset
    std::vector<double> bound(count, 0.0);
    for (auto s : subset) {
        for (std::size_t j = 0; j < count; ++j) {
            bound[j] = std::max(bound[j], dist(members[j], members[s]));
        }
    }

    for (std::size_t round = 0; round < round_cap; ++round) {
        std::size_t cand = 0;
        for (std::size_t j = 1; j < count; ++j) {
            if (bound[j] < bound[cand] || (bound[j] == bound[cand] && members[j] < members[cand])) {
                cand = j;
            }
        }
        double radius = 0.0;
        std::size_t far = cand;
        for (std::size_t j = 0; j < count; ++j) {
            const double d = dist(members[j], members[cand]);
            if (d > radius) {
                radius = d;
                far = j;
            }
        }
        if (radius == bound[cand]) return {members[cand], radius};
        add(far);
        for (std::size_t j = 0; j < count; ++j) {
            bound[j] = std::max(bound[j], dist(members[j], members[far]));
        }
    }
    return detail::one_center_exhaustive(dist, members);
}

inline OneCenter local_one_center(const PointSet& points, std::span<const std::size_t> members,
                                  Metric metric) {
    return local_one_center(Distances(points, metric), members);
}

struct MinimaxConfig {
    /// A center is redundant when the mean count of other centers covering its
    /// cell within the current objective exceeds this value.
    double thresh = 0.9999;
    std::size_t max_outer_iters = 100;
    std::size_t one_center_enumeration_cap = 1000;
};

struct MinimaxTrace {
    /// Objective after the initial refinement and after each outer cycle.
    std::vector<double> objective_per_outer;
    std::size_t outer_iterations = 0;
    std::size_t deletions = 0;
    bool hit_cap = false;
};

namespace detail {

inline void validate(const MinimaxConfig& cfg) {
    require(cfg.thresh > 0.0 && cfg.thresh <= 1.0, "minimax thresh must lie in (0, 1]");
    require(cfg.max_outer_iters >= 1, "max_outer_iters must be at least 1");
}

// Replace every center by the exact 1-center of its Voronoi cell until the
// objective stops improving. Batch update against the current list.
inline double minimax_relocate(const Distances& dist, std::vector<std::size_t>& centers,
                               double objective, const MinimaxConfig& cfg) {
    const std::size_t n = centers.size();
    for (std::size_t iter = 0; iter < cfg.max_outer_iters; ++iter) {
        const auto cells = voronoi_cells(assign_voronoi(dist, centers), n);
        std::vector<std::size_t> next;
        next.reserve(n);
        for (const auto& cell : cells) {
            // cells only empty when a center duplicates an earlier center's coordinates
            if (!cell.empty()) {
                next.push_back(local_one_center(dist, cell, cfg.one_center_enumeration_cap).center);
            }
        }
        farthest_first_extend(dist, next, n);
        const double next_objective = objective_minimax(dist, next);
        if (!(next_objective < objective)) break;
        centers = std::move(next);
        objective = next_objective;
    }
    return objective;
}

// Snapshot redundancy pass. Returns the number of deleted centers.
inline std::size_t minimax_prune(const Distances& dist, std::vector<std::size_t>& centers,
                                 double thresh) {
    const std::size_t n = centers.size();
    const auto voronoi = assign_voronoi(dist, centers);
    const double objective = *std::max_element(voronoi.dists.begin(), voronoi.dists.end());
    std::vector<double> coverage_sum(n, 0.0);
    std::vector<std::size_t> cell_size(n, 0);
    for (std::size_t p = 0; p < dist.size(); ++p) {
        const std::size_t own = voronoi.assignment[p];
        std::size_t covered = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != own && dist(p, centers[j]) <= objective) ++covered;
        }
        coverage_sum[own] += static_cast<double>(covered);
        ++cell_size[own];
    }
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < n; ++i) {
        const bool redundant = cell_size[i] == 0 ||
                               coverage_sum[i] / static_cast<double>(cell_size[i]) > thresh;
        if (!redundant) kept.push_back(centers[i]);
    }
    if (kept.empty()) kept.push_back(centers.front());
    const std::size_t deleted = n - kept.size();
    centers = std::move(kept);
    return deleted;
}

}  // namespace detail

/// Mini-max refinement of a starting selection: relocate centers to the
/// 1-centers of their cells, prune redundant centers, refill by farthest-first
/// and relocate again, until a cycle deletes nothing or reaches a fixed point.
/// A cycle whose objective exceeds the incumbent is discarded, so the result
/// never has a larger objective than `start`.
inline Selection refine_minimax(const Distances& dist, const Selection& start,
                                const MinimaxConfig& cfg, std::uint64_t seed,
                                MinimaxTrace* trace = nullptr) {
    detail::validate(cfg);
    detail::check_indices(dist.size(), start.indices, "refine_minimax");

    std::vector<std::size_t> centers = start.indices;
    const std::size_t n = centers.size();
    double objective = objective_minimax(dist, centers);
    objective = detail::minimax_relocate(dist, centers, objective, cfg);

    MinimaxTrace local;
    local.objective_per_outer.push_back(objective);
    std::size_t outer = 0;
    for (; outer < cfg.max_outer_iters; ++outer) {
        std::vector<std::size_t> candidate = centers;
        const std::size_t deleted = detail::minimax_prune(dist, candidate, cfg.thresh);
        if (deleted == 0) break;
        local.deletions += deleted;
        detail::farthest_first_extend(dist, candidate, n);
        double cand_objective = objective_minimax(dist, candidate);
        cand_objective = detail::minimax_relocate(dist, candidate, cand_objective, cfg);
        if (cand_objective > objective) break;

        auto sorted_old = centers;
        auto sorted_new = candidate;
        std::sort(sorted_old.begin(), sorted_old.end());
        std::sort(sorted_new.begin(), sorted_new.end());
        const bool unchanged = sorted_old == sorted_new;

        centers = std::move(candidate);
        objective = cand_objective;
        local.objective_per_outer.push_back(objective);
        if (unchanged) break;
    }
    local.outer_iterations = outer;
    local.hit_cap = outer == cfg.max_outer_iters;
    if (trace) *trace = std::move(local);

    Selection out;
    out.indices = std::move(centers);
    out.method = Method::greedy_minimax;
    out.seed = seed;
    out.objectives = evaluate(dist, out.indices);
    return out;
}

inline Selection refine_minimax(const PointSet& points, const Selection& start, Metric metric,
                                const MinimaxConfig& cfg, std::uint64_t seed) {
    return refine_minimax(Distances(points, metric), start, cfg, seed);
}

/// Greedy start followed by mini-max refinement.
inline Selection greedy_minimax(const Distances& dist, std::size_t n, std::uint64_t seed,
                                const MinimaxConfig& cfg = {}) {
    auto [start, trace] = greedy_k_center(dist, n, seed);
    return refine_minimax(dist, start, cfg, seed);
}

}  // namespace repsel

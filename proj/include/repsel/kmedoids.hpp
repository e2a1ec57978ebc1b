#pragma once

#include "repsel/error.hpp"
#include "repsel/objectives.hpp"
#include "repsel/point_set.hpp"
#include "repsel/rng.hpp"
#include "repsel/selection.hpp"

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

namespace repsel {

struct KMedoidsTrace {
    /// Objective after seeding and after each alternate iteration.
    std::vector<double> objective;
    std::size_t iterations = 0;
    bool converged = false;
};

namespace detail {

/// k-medoids++ seeding: uniform first medoid, then draws weighted by the
/// squared distance to the nearest medoid chosen so far.
inline std::vector<std::size_t> kmedoids_plus_plus(const Distances& dist, std::size_t n, Rng& rng) {
    const std::size_t count = dist.size();
    std::vector<std::size_t> medoids{rng.index(count)};
    std::vector<double> nearest(count);
    for (std::size_t p = 0; p < count; ++p) nearest[p] = dist(p, medoids.front());
    std::vector<bool> chosen(count, false);
    chosen[medoids.front()] = true;

    while (medoids.size() < n) {
        double total = 0.0;
        for (std::size_t p = 0; p < count; ++p) {
            if (!chosen[p]) total += nearest[p] * nearest[p];
        }
        std::size_t pick = count;
        if (total > 0.0) {
            const double target = rng.unit() * total;
            double cumulative = 0.0;
            for (std::size_t p = 0; p < count; ++p) {
                if (chosen[p]) continue;
                cumulative += nearest[p] * nearest[p];
                if (cumulative > target) {
                    pick = p;
                    break;
                }
            }
        }
        if (pick == count) {
            // zero total weight (duplicates only) or rounding ran off the end
            for (std::size_t p = 0; p < count; ++p) {
                if (!chosen[p] && (total <= 0.0 || nearest[p] > 0.0)) {
                    pick = p;
                    if (total <= 0.0) break;
                }
            }
        }
        medoids.push_back(pick);
        chosen[pick] = true;
        for (std::size_t p = 0; p < count; ++p) nearest[p] = std::min(nearest[p], dist(p, pick));
    }
    return medoids;
}

}  // namespace detail

/// k-medoids with k-medoids++ seeding and the alternate (Voronoi iteration)
/// update. A medoid only moves to a strictly better member, so the objective
/// never increases and the loop stops when no medoid changes.
inline Selection k_medoids(const Distances& dist, std::size_t n, std::uint64_t seed,
                           std::size_t max_iter = 1000, KMedoidsTrace* trace = nullptr) {
    const std::size_t count = dist.size();
    detail::require(n >= 1 && n <= count, "k_medoids: n must be in [1, N]");
    Rng rng(seed);
    std::vector<std::size_t> medoids = detail::kmedoids_plus_plus(dist, n, rng);

    KMedoidsTrace local;
    local.objective.push_back(objective_kmedoids(dist, medoids));
    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        const auto cells = voronoi_cells(assign_voronoi(dist, medoids), n);
        bool changed = false;
        std::vector<bool> is_medoid(count, false);
        for (auto m : medoids) is_medoid[m] = true;

        for (std::size_t i = 0; i < n; ++i) {
            const auto& cell = cells[i];
            if (cell.empty()) {
                // reseat at the point farthest from every current medoid
                std::size_t far = count;
                double far_dist = -1.0;
                for (std::size_t p = 0; p < count; ++p) {
                    if (is_medoid[p]) continue;
                    double nearest = std::numeric_limits<double>::infinity();
                    for (auto m : medoids) nearest = std::min(nearest, dist(p, m));
                    if (nearest > far_dist) {
                        far_dist = nearest;
                        far = p;
                    }
                }
                if (far != count) {
                    is_medoid[medoids[i]] = false;
                    medoids[i] = far;
                    is_medoid[far] = true;
                    changed = true;
                }
                continue;
            }
            auto cost_of = [&](std::size_t candidate) {
                double cost = 0.0;
                for (auto m : cell) cost += dist(m, candidate);
                return cost;
            };
            std::size_t best = medoids[i];
            double best_cost = cost_of(best);
            for (auto candidate : cell) {
                if (is_medoid[candidate]) continue;
                const double cost = cost_of(candidate);
                if (cost < best_cost) {
                    best_cost = cost;
                    best = candidate;
                }
            }
            if (best != medoids[i]) {
                is_medoid[medoids[i]] = false;
                medoids[i] = best;
                is_medoid[best] = true;
                changed = true;
            }
        }
        ++local.iterations;
        local.objective.push_back(objective_kmedoids(dist, medoids));
        if (!changed) {
            local.converged = true;
            break;
        }
    }
    if (trace) *trace = std::move(local);

    Selection out;
    out.indices = std::move(medoids);
    out.method = Method::kmedoids;
    out.seed = seed;
    out.objectives = evaluate(dist, out.indices);
    return out;
}

inline Selection k_medoids(const PointSet& points, std::size_t n, Metric metric, std::uint64_t seed,
                           std::size_t max_iter = 1000) {
    return k_medoids(Distances(points, metric), n, seed, max_iter);
}

}  // namespace repsel

#pragma once

#include "repsel/error.hpp"
#include "repsel/objectives.hpp"
#include "repsel/point_set.hpp"
#include "repsel/rng.hpp"
#include "repsel/selection.hpp"

#include <cstddef>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

namespace repsel {

struct GreedyTrace {
    /// Entry i is the nearest-center distance at which center i+2 was added.
    std::vector<double> addition_distances;
};

namespace detail {

/// Farthest-first extension of `centers` up to `target` points. Returns the
/// distance at which each new center was added. Already-chosen points are
/// never re-selected, so duplicates in the data cannot produce repeated indices.
inline std::vector<double> farthest_first_extend(const Distances& dist,
                                                 std::vector<std::size_t>& centers,
                                                 std::size_t target) {
    const std::size_t count = dist.size();
    std::vector<double> nearest(count, std::numeric_limits<double>::infinity());
    std::vector<bool> chosen(count, false);
    for (auto c : centers) {
        chosen[c] = true;
        for (std::size_t p = 0; p < count; ++p) nearest[p] = std::min(nearest[p], dist(p, c));
    }
    std::vector<double> added;
    while (centers.size() < target) {
        std::size_t best = count;
        double best_dist = -1.0;
        for (std::size_t p = 0; p < count; ++p) {
            if (!chosen[p] && nearest[p] > best_dist) {
                best_dist = nearest[p];
                best = p;
            }
        }
        centers.push_back(best);
        chosen[best] = true;
        added.push_back(best_dist);
        for (std::size_t p = 0; p < count; ++p) nearest[p] = std::min(nearest[p], dist(p, best));
    }
    return added;
}

}  // namespace detail

/// Farthest-first traversal (Gonzalez). The first center is drawn uniformly
/// with `seed`; each later center maximizes the distance to its nearest chosen
/// center, ties to the lowest index. O(N n) distance evaluations.
inline std::pair<Selection, GreedyTrace> greedy_k_center(const Distances& dist, std::size_t n,
                                                         std::uint64_t seed) {
    detail::require(n >= 1 && n <= dist.size(), "greedy_k_center: n must be in [1, N]");
    Rng rng(seed);
    std::vector<std::size_t> centers{rng.index(dist.size())};
    GreedyTrace trace;
    trace.addition_distances = detail::farthest_first_extend(dist, centers, n);

    Selection selection;
    selection.indices = std::move(centers);
    selection.method = Method::greedy;
    selection.seed = seed;
    selection.objectives = evaluate(dist, selection.indices);
    return {std::move(selection), std::move(trace)};
}

inline std::pair<Selection, GreedyTrace> greedy_k_center(const PointSet& points, std::size_t n,
                                                         Metric metric, std::uint64_t seed) {
    return greedy_k_center(Distances(points, metric), n, seed);
}

}  // namespace repsel

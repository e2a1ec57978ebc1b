#include "repsel/greedy.hpp"
#include "repsel/kmedoids.hpp"
#include "repsel/maximin.hpp"
#include "repsel/minimax.hpp"
#include "repsel/objectives.hpp"
#include "repsel/random.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

using namespace repsel;
using repsel::testing::close_rel;

namespace {

PointSet line(std::vector<double> xs) {
    std::vector<std::vector<double>> rows;
    for (double x : xs) rows.push_back({x, 0.0});
    return PointSet::from_rows(rows);
}

bool distinct_in_range(const std::vector<std::size_t>& idx, std::size_t count) {
    std::set<std::size_t> seen(idx.begin(), idx.end());
    return seen.size() == idx.size() && (idx.empty() || *seen.rbegin() < count);
}

}  // namespace

// ---------------------------------------------------------------------------
// greedy

TEST(Greedy, FullBudgetSelectsEverything) {
    const auto points = repsel::testing::random_points(15, 3, 4);
    const auto [sel, trace] = greedy_k_center(points, 15, Metric::euclidean, 9);
    EXPECT_EQ(sel.size(), 15u);
    EXPECT_TRUE(distinct_in_range(sel.indices, 15));
    EXPECT_EQ(sel.objectives->minimax, 0.0);
    EXPECT_EQ(trace.addition_distances.size(), 14u);
}

TEST(Greedy, SingleCenterIsTheSeededDraw) {
    const auto points = repsel::testing::random_points(50, 2, 4);
    const auto [sel, trace] = greedy_k_center(points, 1, Metric::euclidean, 123);
    Rng rng(123);
    EXPECT_EQ(sel.indices, (std::vector<std::size_t>{rng.index(50)}));
    EXPECT_TRUE(trace.addition_distances.empty());
}

TEST(Greedy, RejectsBadBudget) {
    const auto points = repsel::testing::random_points(5, 2, 4);
    EXPECT_THROW(greedy_k_center(points, 0, Metric::euclidean, 0), validation_error);
    EXPECT_THROW(greedy_k_center(points, 6, Metric::euclidean, 0), validation_error);
}

TEST(Greedy, DuplicatePointsStillGiveDistinctIndices) {
    const auto points = PointSet::from_rows({{0, 0}, {0, 0}, {0, 0}, {1, 1}});
    const auto [sel, trace] = greedy_k_center(points, 4, Metric::euclidean, 0);
    EXPECT_TRUE(distinct_in_range(sel.indices, 4));
}

TEST(Greedy, TraceAndTwoOptimalityAgainstExhaustiveOptimum) {
    Rng rng(31337);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t count = 5 + rng.index(8);
        const std::size_t n = 2 + rng.index(3);
        const auto points = repsel::testing::random_points(count, 2 + rng.index(3), 40 + trial);
        for (auto metric : {Metric::euclidean, Metric::cosine}) {
            const Distances dist(points, metric);
            const auto [sel, trace] = greedy_k_center(dist, n, trial);
            const auto opt_mM = brute_force_optimal(points, n, Objective::minimax, metric);
            const auto opt_Mm = brute_force_optimal(points, n, Objective::maximin, metric);
            if (metric == Metric::euclidean) {
                // the factor-2 bounds need the triangle inequality; 1 - cos lacks it
                EXPECT_LE(sel.objectives->minimax, 2.0 * opt_mM.objectives->minimax + 1e-12);
                EXPECT_GE(*sel.objectives->maximin, 0.5 * *opt_Mm.objectives->maximin - 1e-12);
            }
            EXPECT_GE(sel.objectives->minimax, opt_mM.objectives->minimax);
            for (std::size_t i = 1; i < trace.addition_distances.size(); ++i) {
                EXPECT_LE(trace.addition_distances[i], trace.addition_distances[i - 1]);
            }
            // last addition distance = phi_Mm(G_n) = phi_mM(G_{n-1})
            const std::vector<std::size_t> prefix(sel.indices.begin(), sel.indices.end() - 1);
            EXPECT_EQ(trace.addition_distances.back(), *sel.objectives->maximin);
            EXPECT_TRUE(close_rel(objective_minimax(dist, prefix), *sel.objectives->maximin, 1e-9));
        }
    }
}

// ---------------------------------------------------------------------------
// local 1-center

TEST(OneCenter, Examples) {
    const auto pts = line({0, 2, 4});
    const Distances dist(pts, Metric::euclidean);
    const std::vector<std::size_t> one{1};
    auto c = local_one_center(dist, one);
    EXPECT_EQ(c.center, 1u);
    EXPECT_EQ(c.radius, 0.0);
    const std::vector<std::size_t> all{0, 1, 2};
    c = local_one_center(dist, all);
    EXPECT_EQ(c.center, 1u);
    EXPECT_EQ(c.radius, 2.0);
    EXPECT_THROW(local_one_center(dist, std::vector<std::size_t>{}), validation_error);
}

TEST(OneCenter, MatchesExhaustiveScan) {
    Rng rng(5);
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t m = 1 + rng.index(120);
        const std::size_t dim = trial % 2 ? 32 : 2;
        const auto points = repsel::testing::random_points(m + 10, dim, 900 + trial);
        std::vector<std::size_t> members(points.size());
        for (std::size_t i = 0; i < members.size(); ++i) members[i] = i;
        rng.shuffle(members);
        members.resize(m);
        for (auto metric : {Metric::euclidean, Metric::cosine}) {
            const Distances dist(points, metric);
            const auto fast = local_one_center(dist, members);
            // independent O(m^2) scan, ties to the lowest point index
            std::size_t best = members.front();
            double best_r = INFINITY;
            for (auto c : members) {
                double r = 0.0;
                for (auto q : members) r = std::max(r, dist(q, c));
                if (r < best_r || (r == best_r && c < best)) {
                    best_r = r;
                    best = c;
                }
            }
            EXPECT_EQ(fast.center, best);
            EXPECT_EQ(fast.radius, best_r);
        }
    }
}

TEST(OneCenter, GridWithManyTies) {
    std::vector<std::vector<double>> rows;
    for (int x = 0; x < 6; ++x) {
        for (int y = 0; y < 6; ++y) rows.push_back({double(x), double(y)});
    }
    const auto pts = PointSet::from_rows(rows);
    const Distances dist(pts, Metric::euclidean_rounded);
    std::vector<std::size_t> members(pts.size());
    for (std::size_t i = 0; i < members.size(); ++i) members[i] = i;
    const auto fast = local_one_center(dist, members);
    const auto slow = detail::one_center_exhaustive(dist, members);
    EXPECT_EQ(fast.center, slow.center);
    EXPECT_EQ(fast.radius, slow.radius);
}

// ---------------------------------------------------------------------------
// mini-max refinement

TEST(RefineMinimax, SingleClusterFixedPoint) {
    const auto pts = line({0, 2, 4});
    const Distances dist(pts, Metric::euclidean);
    Selection start;
    start.indices = {1};
    const auto out = refine_minimax(dist, start, {}, 0);
    EXPECT_EQ(out.indices, start.indices);
    EXPECT_EQ(out.objectives->minimax, 2.0);
}

TEST(RefineMinimax, MovesOffCenterStart) {
    const auto pts = line({0, 2, 4});
    const Distances dist(pts, Metric::euclidean);
    Selection start;
    start.indices = {0};
    const auto out = refine_minimax(dist, start, {}, 0);
    EXPECT_EQ(out.indices, (std::vector<std::size_t>{1}));
}

TEST(RefineMinimax, BetweenOptimumAndGreedyStart) {
    Rng rng(99);
    for (int trial = 0; trial < 60; ++trial) {
        const auto points = repsel::testing::random_points(12, 2, 3000 + trial);
        for (auto metric : {Metric::euclidean, Metric::cosine}) {
            const Distances dist(points, metric);
            const auto [start, trace] = greedy_k_center(dist, 3, trial);
            MinimaxTrace mt;
            const auto out = refine_minimax(dist, start, {}, trial, &mt);
            const auto opt = brute_force_optimal(points, 3, Objective::minimax, metric);
            EXPECT_LE(out.objectives->minimax, start.objectives->minimax);
            EXPECT_GE(out.objectives->minimax, opt.objectives->minimax);
            EXPECT_EQ(out.size(), 3u);
            EXPECT_TRUE(distinct_in_range(out.indices, 12));
            for (std::size_t i = 1; i < mt.objective_per_outer.size(); ++i) {
                EXPECT_LE(mt.objective_per_outer[i], mt.objective_per_outer[i - 1]);
            }
        }
    }
}

TEST(RefineMinimax, ClusteredDataAndDuplicates) {
    std::vector<std::size_t> blob;
    const auto points = repsel::testing::gaussian_blobs({{0, 0}, {10, 0}, {0, 10}, {10, 10}},
                                                        {40, 40, 40, 40}, 1.0, 8, &blob);
    const Distances dist(points, Metric::euclidean);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto [start, trace] = greedy_k_center(dist, 8, seed);
        const auto out = refine_minimax(dist, start, {}, seed);
        EXPECT_LE(out.objectives->minimax, start.objectives->minimax);
        EXPECT_TRUE(distinct_in_range(out.indices, points.size()));
    }
    const auto dup = PointSet::from_rows({{0, 0}, {0, 0}, {0, 0}, {5, 0}, {5, 0}, {9, 9}});
    const Distances ddist(dup, Metric::euclidean);
    Selection start;
    start.indices = {0, 1, 2};
    const auto out = refine_minimax(ddist, start, {}, 0);
    EXPECT_TRUE(distinct_in_range(out.indices, dup.size()));
    EXPECT_EQ(out.size(), 3u);
    EXPECT_LE(out.objectives->minimax, objective_minimax(ddist, start.indices));
}

TEST(RefineMinimax, RejectsBadConfig) {
    const auto pts = line({0, 2, 4});
    Selection start;
    start.indices = {0};
    MinimaxConfig cfg;
    cfg.thresh = 0.0;
    EXPECT_THROW(refine_minimax(pts, start, Metric::euclidean, cfg, 0), validation_error);
    cfg.thresh = 1.5;
    EXPECT_THROW(refine_minimax(pts, start, Metric::euclidean, cfg, 0), validation_error);
}

// ---------------------------------------------------------------------------
// maxi-min refinement

TEST(RefineMaximin, AntipodalExtremesUnchanged) {
    const auto pts = line({0, 3, 5, 10});
    Selection start;
    start.indices = {0, 3};
    const auto out = refine_maximin(pts, start, Metric::euclidean);
    EXPECT_EQ(out.indices, start.indices);
    EXPECT_EQ(*out.objectives->maximin, 10.0);
}

TEST(RefineMaximin, ForcedSingleMove) {
    const auto pts = line({0, 1, 10});
    Selection start;
    start.indices = {1, 2};
    const auto out = refine_maximin(pts, start, Metric::euclidean);
    EXPECT_EQ(out.indices, (std::vector<std::size_t>{0, 2}));
    EXPECT_EQ(*out.objectives->maximin, 10.0);
}

TEST(RefineMaximin, BetweenGreedyStartAndOptimum) {
    for (int trial = 0; trial < 60; ++trial) {
        const auto points = repsel::testing::random_points(12, 2, 7000 + trial);
        for (auto metric : {Metric::euclidean, Metric::cosine}) {
            const Distances dist(points, metric);
            const auto [start, trace] = greedy_k_center(dist, 3, trial);
            MaximinTrace mt;
            const auto out = refine_maximin(dist, start, 100, &mt);
            const auto opt = brute_force_optimal(points, 3, Objective::maximin, metric);
            EXPECT_GE(*out.objectives->maximin, *start.objectives->maximin);
            EXPECT_LE(*out.objectives->maximin, *opt.objectives->maximin);
            EXPECT_TRUE(distinct_in_range(out.indices, 12));
            for (std::size_t i = 1; i < mt.objective_per_outer.size(); ++i) {
                EXPECT_GE(mt.objective_per_outer[i], mt.objective_per_outer[i - 1]);
            }
        }
    }
}

TEST(RefineMaximin, RequiresTwoCenters) {
    const auto pts = line({0, 1, 10});
    Selection start;
    start.indices = {1};
    EXPECT_THROW(refine_maximin(pts, start, Metric::euclidean), validation_error);
}

// ---------------------------------------------------------------------------
// k-medoids

TEST(KMedoids, FullBudget) {
    const auto points = repsel::testing::random_points(10, 2, 1);
    const auto sel = k_medoids(points, 10, Metric::euclidean, 0);
    EXPECT_EQ(sel.objectives->kmedoids, 0.0);
    EXPECT_TRUE(distinct_in_range(sel.indices, 10));
    EXPECT_THROW(k_medoids(points, 0, Metric::euclidean, 0), validation_error);
    EXPECT_THROW(k_medoids(points, 11, Metric::euclidean, 0), validation_error);
}

TEST(KMedoids, TwoSeparatedBlobsGetOneMedoidEach) {
    std::vector<std::size_t> blob;
    const auto points =
        repsel::testing::gaussian_blobs({{0, 0}, {20, 20}}, {10, 10}, 1.0, 3, &blob);
    const auto opt = brute_force_optimal(points, 2, Objective::kmedoids, Metric::euclidean);
    EXPECT_NE(blob[opt.indices[0]], blob[opt.indices[1]]);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto sel = k_medoids(points, 2, Metric::euclidean, seed);
        EXPECT_NE(blob[sel.indices[0]], blob[sel.indices[1]]);
        EXPECT_TRUE(close_rel(sel.objectives->kmedoids, opt.objectives->kmedoids, 1e-12));
    }
}

TEST(KMedoids, ObjectiveNonIncreasingAndTerminates) {
    for (int trial = 0; trial < 40; ++trial) {
        const auto points = repsel::testing::random_points(60, 3, 100 + trial);
        for (auto metric : {Metric::euclidean, Metric::cosine}) {
            KMedoidsTrace trace;
            const auto sel = k_medoids(Distances(points, metric), 5, trial, 1000, &trace);
            EXPECT_TRUE(trace.converged);
            EXPECT_LE(trace.iterations, 1000u);
            for (std::size_t i = 1; i < trace.objective.size(); ++i) {
                EXPECT_LE(trace.objective[i], trace.objective[i - 1]);
            }
            EXPECT_TRUE(distinct_in_range(sel.indices, 60));
        }
    }
}

TEST(KMedoids, DuplicatesDoNotRepeatIndices) {
    const auto points = PointSet::from_rows({{0, 0}, {0, 0}, {0, 0}, {0, 0}, {3, 3}});
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto sel = k_medoids(points, 4, Metric::euclidean, seed);
        EXPECT_TRUE(distinct_in_range(sel.indices, 5));
        EXPECT_EQ(sel.objectives->kmedoids, 0.0);
    }
}

// ---------------------------------------------------------------------------
// random baselines

TEST(RandomSelect, ContractAndDeterminism) {
    auto all = random_select(7, 7, 3).indices;
    std::sort(all.begin(), all.end());
    EXPECT_EQ(all, (std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6}));
    EXPECT_EQ(random_select(100, 10, 42).indices, random_select(100, 10, 42).indices);
    EXPECT_NE(random_select(100, 10, 42).indices, random_select(100, 10, 43).indices);
    EXPECT_THROW(random_select(5, 0, 0), validation_error);
    EXPECT_THROW(random_select(5, 6, 0), validation_error);
}

TEST(RandomSelect, UniformSingleDraws) {
    std::vector<int> freq(4, 0);
    for (std::uint64_t seed = 0; seed < 10000; ++seed) ++freq[random_select(4, 1, seed).indices[0]];
    double chi2 = 0.0;
    for (int f : freq) {
        EXPECT_NEAR(f, 2500, 150);
        chi2 += (f - 2500.0) * (f - 2500.0) / 2500.0;
    }
    EXPECT_LT(chi2, 16.27);  // 3 dof, p = 0.001
}

TEST(RandomClassBalanced, OnePerClassThenRoundRobin) {
    std::vector<std::string> labels;
    for (int c = 0; c < 10; ++c) {
        for (int i = 0; i < 8; ++i) labels.push_back("class" + std::to_string(c));
    }
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto count_per_class = [&](std::size_t n) {
            std::map<std::string, int> counts;
            const auto sel = random_class_balanced(labels, n, seed);
            EXPECT_TRUE(distinct_in_range(sel.indices, labels.size()));
            for (auto i : sel.indices) ++counts[labels[i]];
            return counts;
        };
        for (const auto& [label, c] : count_per_class(10)) EXPECT_EQ(c, 1) << label;
        const auto counts25 = count_per_class(25);
        EXPECT_EQ(counts25.size(), 10u);
        for (const auto& [label, c] : counts25) EXPECT_TRUE(c == 2 || c == 3) << label;
    }
    EXPECT_EQ(random_class_balanced(labels, 25, 4).indices, random_class_balanced(labels, 25, 4).indices);
    EXPECT_THROW(random_class_balanced(labels, 9, 0), validation_error);
}

TEST(RandomClassBalanced, SkipsExhaustedClasses) {
    const std::vector<std::string> labels{"a", "b", "b", "b", "b"};
    const auto sel = random_class_balanced(labels, 5, 0);
    auto sorted = sel.indices;
    std::sort(sorted.begin(), sorted.end());
    EXPECT_EQ(sorted, (std::vector<std::size_t>{0, 1, 2, 3, 4}));
}

// ---------------------------------------------------------------------------

TEST(Selectors, DeterministicGivenInputs) {
    const auto points = repsel::testing::random_points(80, 4, 17);
    for (auto metric : {Metric::euclidean, Metric::cosine}) {
        const Distances dist(points, metric);
        EXPECT_EQ(greedy_k_center(dist, 9, 5).first.indices, greedy_k_center(dist, 9, 5).first.indices);
        EXPECT_EQ(greedy_minimax(dist, 9, 5).indices, greedy_minimax(dist, 9, 5).indices);
        EXPECT_EQ(greedy_maximin(dist, 9, 5).indices, greedy_maximin(dist, 9, 5).indices);
        EXPECT_EQ(k_medoids(dist, 9, 5).indices, k_medoids(dist, 9, 5).indices);
    }
}

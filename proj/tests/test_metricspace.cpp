#include "repsel/objectives.hpp"
#include "repsel/point_set.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <vector>

using namespace repsel;
using repsel::testing::close_rel;

namespace {

PointSet line(std::vector<double> xs) {
    std::vector<std::vector<double>> rows;
    for (double x : xs) rows.push_back({x, 0.0});
    return PointSet::from_rows(rows);
}

}  // namespace

TEST(PointSet, RejectsDuplicateIdsAndNonFinite) {
    EXPECT_THROW(PointSet({"a", "a"}, {0, 0, 1, 1}, 2), validation_error);
    EXPECT_THROW(PointSet({"a", "b"}, {0, 0, 1}, 2), validation_error);
    EXPECT_THROW(PointSet({"a"}, {0, std::nan("")}, 2), validation_error);
    EXPECT_THROW(PointSet({}, {}, 2), validation_error);
    EXPECT_NO_THROW(PointSet({"a", "b"}, {1, 1, 1, 1}, 2));  // duplicate coordinates are fine
}

TEST(Distance, Examples) {
    const std::vector<double> o{0, 0}, p{3, 4}, e1{1, 0}, e2{0, 1};
    EXPECT_DOUBLE_EQ(distance(o, p, Metric::euclidean), 5.0);
    EXPECT_DOUBLE_EQ(distance(e1, e2, Metric::cosine), 1.0);
    EXPECT_EQ(distance(p, p, Metric::euclidean), 0.0);
    EXPECT_EQ(distance(p, p, Metric::cosine), 0.0);
}

TEST(Distance, Errors) {
    const std::vector<double> a{1, 2}, b{1, 2, 3}, zero{0, 0}, inf{1, INFINITY};
    EXPECT_THROW(distance(a, b, Metric::euclidean), validation_error);
    EXPECT_THROW(distance(a, zero, Metric::cosine), validation_error);
    EXPECT_NO_THROW(distance(a, zero, Metric::euclidean));
    EXPECT_THROW(distance(a, inf, Metric::euclidean), validation_error);
    const auto points = PointSet::from_rows({{1, 0}, {0, 0}});
    EXPECT_THROW(Distances(points, Metric::cosine), validation_error);
}

TEST(Distance, MetricAxiomsOnRandomInputs) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto points = repsel::testing::random_points(12, 1 + seed % 7, seed);
        for (auto metric : {Metric::euclidean, Metric::cosine}) {
            const Distances dist(points, metric);
            for (std::size_t i = 0; i < points.size(); ++i) {
                EXPECT_EQ(dist(i, i), 0.0);
                for (std::size_t j = 0; j < points.size(); ++j) {
                    const double d = dist(i, j);
                    EXPECT_EQ(d, dist(j, i));
                    EXPECT_GE(d, 0.0);
                    if (metric == Metric::cosine) {
                        EXPECT_LE(d, 2.0);
                    }
                    // agrees with the textbook formula
                    EXPECT_NEAR(d, repsel::testing::oracle_distance(points, i, j, metric), 1e-12);
                    EXPECT_DOUBLE_EQ(d, distance(points[i], points[j], metric));
                }
            }
        }
    }
}

TEST(Voronoi, Examples) {
    const auto two = line({0, 10});
    const std::vector<std::size_t> both{0, 1};
    auto v = assign_voronoi(two, both, Metric::euclidean);
    EXPECT_EQ(v.assignment, (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(v.dists, (std::vector<double>{0, 0}));

    const auto four = line({0, 1, 9, 10});
    const std::vector<std::size_t> ends{0, 3};
    v = assign_voronoi(four, ends, Metric::euclidean);
    EXPECT_EQ(v.assignment, (std::vector<std::size_t>{0, 0, 1, 1}));
    EXPECT_EQ(v.dists, (std::vector<double>{0, 1, 1, 0}));
}

TEST(Voronoi, TiesGoToEarlierCenterInList) {
    const auto pts = line({0, 5, 10});
    const std::vector<std::size_t> forward{0, 2};
    const std::vector<std::size_t> backward{2, 0};
    EXPECT_EQ(assign_voronoi(pts, forward, Metric::euclidean).assignment[1], 0u);
    EXPECT_EQ(assign_voronoi(pts, backward, Metric::euclidean).assignment[1], 0u);
}

TEST(Voronoi, Errors) {
    const auto pts = line({0, 1});
    EXPECT_THROW(assign_voronoi(pts, std::vector<std::size_t>{}, Metric::euclidean), validation_error);
    EXPECT_THROW(assign_voronoi(pts, std::vector<std::size_t>{2}, Metric::euclidean), validation_error);
    EXPECT_THROW(assign_voronoi(pts, std::vector<std::size_t>{0, 0}, Metric::euclidean), validation_error);
}

TEST(Objectives, Examples) {
    const auto pts = line({0, 4, 10});
    const std::vector<std::size_t> all{0, 1, 2};
    const std::vector<std::size_t> first{0};
    EXPECT_EQ(objective_minimax(pts, all, Metric::euclidean), 0.0);
    EXPECT_EQ(objective_minimax(pts, first, Metric::euclidean), 10.0);
    EXPECT_EQ(objective_kmedoids(pts, all, Metric::euclidean), 0.0);

    const auto pair = PointSet::from_rows({{0, 0}, {3, 4}});
    EXPECT_EQ(objective_maximin(pair, std::vector<std::size_t>{0, 1}, Metric::euclidean), 5.0);

    const auto dup = PointSet::from_rows({{1, 1}, {1, 1}, {5, 5}});
    EXPECT_EQ(objective_maximin(dup, std::vector<std::size_t>{0, 1, 2}, Metric::euclidean), 0.0);

    const auto km = line({0, 1, 10});
    EXPECT_EQ(objective_kmedoids(km, std::vector<std::size_t>{0, 2}, Metric::euclidean), 1.0);
}

TEST(Objectives, Errors) {
    const auto pts = line({0, 1});
    EXPECT_THROW(objective_minimax(pts, std::vector<std::size_t>{}, Metric::euclidean), validation_error);
    EXPECT_THROW(objective_kmedoids(pts, std::vector<std::size_t>{}, Metric::euclidean), validation_error);
    EXPECT_THROW(objective_maximin(pts, std::vector<std::size_t>{0}, Metric::euclidean), validation_error);
}

TEST(Objectives, AgreeWithBruteForceOnRandomInstances) {
    Rng rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t count = 2 + rng.index(29);
        const std::size_t dim = 1 + rng.index(6);
        const auto points = repsel::testing::random_points(count, dim, 1000 + trial, 3.0);
        const std::size_t n = 2 + rng.index(count - 1);
        std::vector<std::size_t> pool(count);
        for (std::size_t i = 0; i < count; ++i) pool[i] = i;
        rng.shuffle(pool);
        const std::vector<std::size_t> selected(pool.begin(), pool.begin() + static_cast<long>(n));
        for (auto metric : {Metric::euclidean, Metric::cosine}) {
            EXPECT_TRUE(close_rel(objective_minimax(points, selected, metric),
                                  repsel::testing::oracle_minimax(points, selected, metric), 1e-12, 1.0));
            EXPECT_TRUE(close_rel(objective_maximin(points, selected, metric),
                                  repsel::testing::oracle_maximin(points, selected, metric), 1e-12, 1.0));
            EXPECT_TRUE(close_rel(objective_kmedoids(points, selected, metric),
                                  repsel::testing::oracle_kmedoids(points, selected, metric), 1e-12, 1.0));
        }
    }
}

TEST(Objectives, MonotoneUnderGrowth) {
    Rng rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        const auto points = repsel::testing::random_points(20, 3, 500 + trial);
        for (auto metric : {Metric::euclidean, Metric::cosine}) {
            const Distances dist(points, metric);
            std::vector<std::size_t> pool(points.size());
            for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
            rng.shuffle(pool);
            std::vector<std::size_t> selected{pool[0], pool[1]};
            for (std::size_t k = 2; k < pool.size(); ++k) {
                const double before_mM = objective_minimax(dist, selected);
                const double before_Mm = objective_maximin(dist, selected);
                selected.push_back(pool[k]);
                EXPECT_LE(objective_minimax(dist, selected), before_mM);
                EXPECT_LE(objective_maximin(dist, selected), before_Mm);
            }
        }
    }
}

TEST(BruteForce, Examples) {
    const auto three = line({0, 1, 10});
    const auto full = brute_force_optimal(three, 3, Objective::minimax, Metric::euclidean);
    EXPECT_EQ(full.indices, (std::vector<std::size_t>{0, 1, 2}));
    EXPECT_EQ(full.objectives->minimax, 0.0);

    const auto two = brute_force_optimal(three, 2, Objective::minimax, Metric::euclidean);
    EXPECT_EQ(two.objectives->minimax, 1.0);
    EXPECT_EQ(two.indices.back(), 2u);
    EXPECT_EQ(two.indices, (std::vector<std::size_t>{0, 2}));  // lexicographic tie-break

    const auto spread = brute_force_optimal(three, 2, Objective::maximin, Metric::euclidean);
    EXPECT_EQ(spread.indices, (std::vector<std::size_t>{0, 2}));
    EXPECT_EQ(*spread.objectives->maximin, 10.0);
}

TEST(BruteForce, BudgetExceeded) {
    const auto points = repsel::testing::random_points(40, 2, 1);
    EXPECT_THROW(brute_force_optimal(points, 20, Objective::kmedoids, Metric::euclidean),
                 runtime_failure);
    EXPECT_THROW(brute_force_optimal(points, 3, Objective::kmedoids, Metric::euclidean, 100),
                 runtime_failure);
    EXPECT_EQ(binomial(40, 20), 137846528820ull);
    EXPECT_EQ(binomial(8, 2), 28u);
}

TEST(BruteForce, MatchesExplicitEnumeration) {
    // optimum value must equal the min over an independent nested-loop enumeration
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto points = repsel::testing::random_points(9, 2, seed);
        const auto best = brute_force_optimal(points, 2, Objective::kmedoids, Metric::euclidean);
        double expected = INFINITY;
        for (std::size_t a = 0; a < 9; ++a) {
            for (std::size_t b = a + 1; b < 9; ++b) {
                expected = std::min(expected, repsel::testing::oracle_kmedoids(points, {a, b}, Metric::euclidean));
            }
        }
        EXPECT_TRUE(close_rel(best.objectives->kmedoids, expected, 1e-12));
    }
}

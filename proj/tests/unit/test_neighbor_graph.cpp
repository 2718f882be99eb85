#include "umaplab/neighbor_graph.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

using namespace umaplab;

namespace {

DataMatrix line(std::initializer_list<double> xs) {
    RowMatrix m(static_cast<Eigen::Index>(xs.size()), 1);
    Eigen::Index i = 0;
    for (double x : xs) {
        m(i++, 0) = x;
    }
    return DataMatrix(m);
}

/// Full sort of every row, (distance, index) order.
KnnGraph full_sort_oracle(const RowMatrix& x, std::size_t k) {
    KnnGraph g;
    g.n = static_cast<std::size_t>(x.rows());
    g.k = k;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        std::vector<std::pair<double, Index>> all;
        for (Eigen::Index j = 0; j < x.rows(); ++j) {
            if (j != i) {
                all.emplace_back(std::sqrt((x.row(i) - x.row(j)).squaredNorm()), static_cast<Index>(j));
            }
        }
        std::sort(all.begin(), all.end());
        for (std::size_t t = 0; t < k; ++t) {
            g.distances.push_back(all[t].first);
            g.indices.push_back(all[t].second);
        }
    }
    return g;
}

} // namespace

TEST(KnnSearch, LineK1) {
    const auto g = knn_search(line({0.0, 1.0, 3.0}), 1);
    EXPECT_EQ(g.indices, (std::vector<Index>{1, 0, 1}));
    EXPECT_EQ(g.distances, (std::vector<double>{1.0, 1.0, 2.0}));
}

TEST(KnnSearch, LineK2) {
    const auto g = knn_search(line({0.0, 1.0, 3.0}), 2);
    EXPECT_EQ(std::vector<Index>(g.neighbors(0).begin(), g.neighbors(0).end()), (std::vector<Index>{1, 2}));
    EXPECT_EQ(std::vector<double>(g.neighbor_distances(0).begin(), g.neighbor_distances(0).end()),
              (std::vector<double>{1.0, 3.0}));
}

TEST(KnnSearch, TieGoesToSmallerIndex) {
    const auto g = knn_search(line({0.0, -1.0, 1.0, 5.0}), 1);
    EXPECT_EQ(g.neighbors(0)[0], 1u);
}

TEST(KnnSearch, MatchesFullSortOracle) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const RowMatrix x = test::random_matrix(50, 3, seed);
        const auto g = knn_search(DataMatrix(x), 5);
        const auto oracle = full_sort_oracle(x, 5);
        EXPECT_EQ(g.indices, oracle.indices);
        EXPECT_EQ(g.distances, oracle.distances);
    }
}

TEST(KnnSearch, DuplicatesAndTiesMatchOracle) {
    // Integer lattice points with repeats force many exact ties.
    Rng rng(11);
    RowMatrix x(60, 2);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        x(i, 0) = static_cast<double>(rng.index(4));
        x(i, 1) = static_cast<double>(rng.index(4));
    }
    const auto g = knn_search(DataMatrix(x), 7);
    const auto oracle = full_sort_oracle(x, 7);
    EXPECT_EQ(g.indices, oracle.indices);
    EXPECT_EQ(g.distances, oracle.distances);
}

TEST(KnnSearch, RowInvariants) {
    const RowMatrix x = test::random_matrix(80, 4, 9);
    const auto g = knn_search(DataMatrix(x), 10);
    for (std::size_t i = 0; i < g.n; ++i) {
        const auto ids = g.neighbors(i);
        const auto ds = g.neighbor_distances(i);
        std::set<Index> unique(ids.begin(), ids.end());
        EXPECT_EQ(unique.size(), g.k);
        EXPECT_EQ(unique.count(static_cast<Index>(i)), 0u);
        EXPECT_TRUE(std::is_sorted(ds.begin(), ds.end()));
    }
}

TEST(KnnSearch, RejectsBadK) {
    const auto x = line({0.0, 1.0, 3.0});
    EXPECT_THROW(knn_search(x, 0), ConfigError);
    EXPECT_THROW(knn_search(x, 3), ConfigError);
    EXPECT_THROW(knn_search(line({0.0}), 1), ConfigError);
}

TEST(Metric, ParsesEuclidean) {
    EXPECT_EQ(parse_metric("euclidean"), Metric::euclidean);
    EXPECT_THROW(parse_metric("cosine"), ConfigError);
}

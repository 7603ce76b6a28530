#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "signopt/error.hpp"
#include "signopt/graph.hpp"

using namespace signopt;

namespace {

// Two triangles {0,1,2} and {3,4,5} joined by the bridge (2,3).
WeightedGraph two_triangles() {
    return WeightedGraph(6, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {3, 4, 1}, {4, 5, 1}, {3, 5, 1}, {2, 3, 1}});
}

}  // namespace

TEST(WeightedGraph, NormalizesAndSortsAdjacency) {
    WeightedGraph g(4, {{3, 0, 1.5}, {2, 1, 0.5}, {0, 1, 2.0}});
    EXPECT_EQ(g.edges()[0].u, 0u);
    EXPECT_EQ(g.edges()[0].v, 3u);
    const auto& nb = g.neighbors(0);
    ASSERT_EQ(nb.size(), 2u);
    EXPECT_EQ(nb[0].node, 1u);
    EXPECT_EQ(nb[1].node, 3u);
    EXPECT_DOUBLE_EQ(g.weight(3, 0), 1.5);
    EXPECT_DOUBLE_EQ(g.weight(0, 2), 0.0);
}

TEST(WeightedGraph, AdjacencyMatrixIsSymmetricWithZeroDiagonal) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = oracle::random_connected_graph(7, 0.4, rng);
        const auto a = g.adjacency_matrix();
        for (std::size_t i = 0; i < 7; ++i) {
            EXPECT_EQ(a[i * 7 + i], 0.0);
            for (std::size_t j = 0; j < 7; ++j) {
                EXPECT_EQ(a[i * 7 + j], a[j * 7 + i]);
                EXPECT_EQ(a[i * 7 + j] > 0.0, g.weight(i, j) > 0.0);
            }
        }
    }
}

TEST(WeightedGraph, RejectsInvalidEdges) {
    EXPECT_THROW(WeightedGraph(3, {{0, 0, 1}}), ParameterError);
    EXPECT_THROW(WeightedGraph(3, {{0, 3, 1}}), ParameterError);
    EXPECT_THROW(WeightedGraph(3, {{0, 1, 0.0}}), ParameterError);
    EXPECT_THROW(WeightedGraph(3, {{0, 1, -1.0}}), ParameterError);
    EXPECT_THROW(WeightedGraph(3, {{0, 1, 1}, {1, 0, 2}}), ParameterError);
}

TEST(EdgeConnectivity, KnownGraphs) {
    EXPECT_EQ(edge_connectivity(ring_graph(4)), 2u);
    EXPECT_EQ(edge_connectivity(path_graph(3)), 1u);
    EXPECT_EQ(edge_connectivity(complete_graph(4)), 3u);
    EXPECT_EQ(edge_connectivity(two_triangles()), 1u);
    EXPECT_EQ(edge_connectivity(WeightedGraph(4, {{0, 1, 1}, {2, 3, 1}})), 0u);
    EXPECT_EQ(edge_connectivity(WeightedGraph(1, {})), 1u);
}

TEST(EdgeConnectivity, IgnoresWeights) {
    const auto g = ring_graph(6, 1.0).reweighted(std::vector<double>{0.01, 5, 3, 0.2, 9, 1});
    EXPECT_EQ(edge_connectivity(g), 2u);
}

TEST(EdgeConnectivity, MatchesExhaustiveRemoval) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 3 + trial % 5;
        const auto g = oracle::random_connected_graph(n, 0.5, rng);
        if (g.edge_count() > 14) continue;
        EXPECT_EQ(edge_connectivity(g), oracle::brute_edge_connectivity(g)) << "trial " << trial;
    }
}

TEST(EdgeConnectivity, DisjointPathsBetweenEveryPair) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 4 + trial % 9;  // up to 12 nodes
        const auto g = oracle::random_connected_graph(n, 0.35, rng);
        const auto l = edge_connectivity(g);
        for (std::size_t s = 0; s < n; ++s) {
            for (std::size_t t = s + 1; t < n; ++t) EXPECT_GE(edge_disjoint_paths(g, s, t), l);
        }
    }
}

TEST(EdgeConnectivity, TwoConnectedSurvivesAnySingleRemoval) {
    std::mt19937_64 rng(21);
    int checked = 0;
    for (int trial = 0; trial < 80; ++trial) {
        const auto g = oracle::random_connected_graph(3 + trial % 6, 0.6, rng);
        if (edge_connectivity(g) < 2) continue;
        ++checked;
        for (std::size_t e = 0; e < g.edge_count(); ++e) EXPECT_TRUE(g.without_edge(e).is_connected());
    }
    EXPECT_GT(checked, 10);
}

TEST(AMinL, Examples) {
    EXPECT_DOUBLE_EQ(a_min_l(ring_graph(4), 2), 2.0);
    EXPECT_DOUBLE_EQ(a_min_l(two_triangles(), 1), 1.0);
    const WeightedGraph g(3, {{0, 1, 0.5}, {1, 2, 0.2}, {0, 2, 0.9}});
    EXPECT_NEAR(a_min_l(g, 2), 0.7, 1e-15);
    EXPECT_THROW(a_min_l(g, 0), ParameterError);
    EXPECT_THROW(a_min_l(g, 4), ParameterError);
}

TEST(AMinL, MonotoneAndHomogeneous) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = oracle::random_connected_graph(6, 0.5, rng);
        double prev = 0.0;
        for (std::size_t l = 1; l <= g.edge_count(); ++l) {
            const double v = a_min_l(g, l);
            EXPECT_GE(v, prev);
            prev = v;
            EXPECT_NEAR(a_min_l(g.scaled(3.0), l), 3.0 * v, 1e-12 * (1 + v));
        }
    }
}

TEST(InfNorm, Examples) {
    EXPECT_DOUBLE_EQ(inf_norm_A(ring_graph(4)), 2.0);
    EXPECT_DOUBLE_EQ(inf_norm_A(star_graph(4)), 3.0);
    EXPECT_DOUBLE_EQ(inf_norm_A(ring_graph(4).scaled(2.0)), 4.0);
}

TEST(Incidence, SingleEdgeColumn) {
    const auto b = incidence(WeightedGraph(2, {{0, 1, 1}}));
    EXPECT_EQ(b.at(0, 0), 1);
    EXPECT_EQ(b.at(1, 0), -1);
}

TEST(Incidence, ColumnStructureAndTransposeProduct) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-5, 5);
    const auto ring = incidence(ring_graph(4));
    EXPECT_EQ(ring.cols, 4u);
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = oracle::random_connected_graph(8, 0.3, rng);
        const auto b = incidence(g);
        for (std::size_t e = 0; e < b.cols; ++e) {
            int plus = 0, minus = 0, sum = 0;
            for (std::size_t i = 0; i < b.rows; ++i) {
                plus += b.at(i, e) == 1;
                minus += b.at(i, e) == -1;
                sum += b.at(i, e);
            }
            EXPECT_EQ(plus, 1);
            EXPECT_EQ(minus, 1);
            EXPECT_EQ(sum, 0);
            EXPECT_LT(b.source[e], b.sink[e]);
        }
        std::vector<double> x(8);
        for (auto& xi : x) xi = u(rng);
        const auto bx = b.transpose_times(x);
        for (std::size_t e = 0; e < b.cols; ++e) {
            double direct = 0.0;
            for (std::size_t i = 0; i < b.rows; ++i) direct += b.at(i, e) * x[i];
            EXPECT_DOUBLE_EQ(bx[e], direct);
            EXPECT_DOUBLE_EQ(bx[e], x[g.edges()[e].u] - x[g.edges()[e].v]);
        }
    }
}

TEST(Generators, RingRandomWeightsInUnitInterval) {
    const auto g = ring_random_weights(20, 42);
    EXPECT_EQ(g.edge_count(), 20u);
    for (const auto& e : g.edges()) {
        EXPECT_GT(e.weight, 0.0);
        EXPECT_LE(e.weight, 1.0);
    }
    const auto again = ring_random_weights(20, 42);
    for (std::size_t e = 0; e < 20; ++e) EXPECT_EQ(g.edges()[e].weight, again.edges()[e].weight);
    EXPECT_NE(ring_random_weights(20, 43).edges()[0].weight, g.edges()[0].weight);
    EXPECT_THROW(ring_graph(2), ParameterError);
}

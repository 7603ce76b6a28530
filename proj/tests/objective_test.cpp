#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "signopt/algorithms.hpp"
#include "signopt/error.hpp"
#include "signopt/objective.hpp"

using namespace signopt;

namespace {

const std::vector<double> kMedian = {4.45, 14.99, 24.28, 26.21, 44.24, 58.61, 68.78, 75.49};

std::vector<LocalObjective> four_abs_locals() {
    return {AbsDeviation{0}, AbsDeviation{2}, AbsDeviation{4}, AbsDeviation{6}};
}

ProblemInstance four_ring(double lambda) { return {ring_graph(4), four_abs_locals(), lambda}; }

std::vector<LocalObjective> median_locals(double alpha) {
    std::vector<LocalObjective> out;
    for (const double y : kMedian) out.push_back(Quantile{alpha, y, 1.0});
    return out;
}

// Random bounded-subgradient locals.
std::vector<LocalObjective> random_locals(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> loc(-5, 5);
    std::uniform_real_distribution<double> level(0.05, 0.95);
    std::uniform_real_distribution<double> scale(0.5, 1.5);
    std::vector<LocalObjective> out;
    for (std::size_t i = 0; i < n; ++i) {
        if (i % 2 == 0) {
            out.push_back(AbsDeviation{loc(rng)});
        } else {
            out.push_back(Quantile{level(rng), loc(rng), scale(rng)});
        }
    }
    return out;
}

}  // namespace

TEST(EvalLocal, QuantileBranches) {
    const auto a = eval_local(Quantile{0.5, 0.0, 1.0}, -2.0);
    EXPECT_DOUBLE_EQ(a.value, 1.0);
    EXPECT_DOUBLE_EQ(a.subgrad, -0.5);
    const auto b = eval_local(Quantile{0.4, 26.21, 1.0}, 30.0);
    EXPECT_NEAR(b.value, 0.6 * 3.79, 1e-12);
    EXPECT_DOUBLE_EQ(b.subgrad, 0.6);
    // Kink: y == x*s takes the "y >= x s" branch.
    const auto kink = eval_local(Quantile{0.3, 2.0, 2.0}, 1.0);
    EXPECT_DOUBLE_EQ(kink.value, 0.0);
    EXPECT_DOUBLE_EQ(kink.subgrad, -0.6);
}

TEST(EvalLocal, AbsDeviationAndQuadratic) {
    const auto at_kink = eval_local(AbsDeviation{2.0}, 2.0);
    EXPECT_EQ(at_kink.value, 0.0);
    EXPECT_EQ(at_kink.subgrad, 0.0);
    EXPECT_EQ(eval_local(AbsDeviation{2.0}, 5.0).subgrad, 1.0);
    EXPECT_EQ(eval_local(AbsDeviation{2.0}, -1.0).subgrad, -1.0);
    const auto q = eval_local(Quadratic{3.0, 1.0}, 2.0);
    EXPECT_DOUBLE_EQ(q.value, 3.0);
    EXPECT_DOUBLE_EQ(q.subgrad, 6.0);
}

TEST(EvalLocal, SubgradientInequalityOnRandomPairs) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-10, 10);
    std::vector<LocalObjective> family = {AbsDeviation{1.5}, Quantile{0.2, -3.0, 0.7}, Quantile{0.9, 4.0, 1.3},
                                          Quadratic{0.5, 2.0}};
    for (const auto& o : family) {
        for (int t = 0; t < 2000; ++t) {
            const double x = u(rng), y = u(rng);
            const auto ex = eval_local(o, x);
            EXPECT_GE(eval_local(o, y).value, ex.value + (y - x) * ex.subgrad - 1e-12);
        }
    }
}

TEST(EvalLocal, BoundedFamiliesRespectDeclaredBound) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-20, 20);
    const auto locals = random_locals(10, rng);
    const double c = subgradient_bound(locals);
    for (int t = 0; t < 5000; ++t) {
        for (const auto& o : locals) EXPECT_LE(std::abs(eval_local(o, u(rng)).subgrad), c + 1e-15);
    }
}

TEST(PenaltyH, Examples) {
    EXPECT_EQ(penalty_h(ring_graph(5), std::vector<double>(5, 3.3)), 0.0);
    EXPECT_DOUBLE_EQ(penalty_h(ring_graph(4), std::vector<double>{2, 2, 4, 4}), 4.0);
    EXPECT_THROW(penalty_h(ring_graph(4), std::vector<double>{1, 2}), ParameterError);
}

TEST(PenaltyH, MatchesEdgeListSum) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int trial = 0; trial < 50; ++trial) {
        const auto g = oracle::random_connected_graph(7, 0.4, rng);
        std::vector<double> x(7);
        for (auto& xi : x) xi = u(rng);
        EXPECT_NEAR(penalty_h(g, x), oracle::edge_list_penalty(g, x), 1e-12);
    }
}

TEST(EvalPenalized, FourNodeRing) {
    EXPECT_DOUBLE_EQ(eval_penalized(four_ring(1.0), std::vector<double>{2, 2, 4, 4}), 8.0);
    for (const double lambda : {0.0, 0.5, 1.0, 7.0}) {
        EXPECT_DOUBLE_EQ(eval_penalized(four_ring(lambda), std::vector<double>(4, 3.0)), 8.0);
        EXPECT_DOUBLE_EQ(eval_penalized(four_ring(lambda), std::vector<double>{2, 2, 4, 4}), 4.0 + 4.0 * lambda);
    }
}

TEST(SubgradPenalized, Examples) {
    const auto at_consensus = subgrad_penalized(four_ring(1.0), std::vector<double>(4, 10.0));
    for (const double gi : at_consensus) EXPECT_EQ(gi, 1.0);
    const auto g = subgrad_penalized(four_ring(2.0), std::vector<double>{0, 1, 2, 3});
    // 2 * (sgn(0-1) + sgn(0-3)) + sgn(0-0)
    EXPECT_EQ(g[0], -4.0);
}

TEST(SubgradPenalized, StepMatchesLiteralUpdate) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-6, 6);
    for (int trial = 0; trial < 100; ++trial) {
        const auto g = oracle::random_connected_graph(6, 0.5, rng);
        const auto locals = random_locals(6, rng);
        const ProblemInstance p(g, locals, 1.7);
        std::vector<double> x(6);
        for (auto& xi : x) xi = u(rng);
        const double rho = 0.03;
        const auto lit = oracle::literal_sign_step(g.adjacency_matrix(), 6, locals, 1.7, x, rho);
        const auto sg = subgrad_penalized(p, x);
        for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(x[i] - rho * sg[i], lit[i], 1e-12);
    }
}

TEST(SubgradPenalized, IsASubgradient) {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-6, 6);
    for (int trial = 0; trial < 200; ++trial) {
        const auto g = oracle::random_connected_graph(5, 0.5, rng);
        const ProblemInstance p(g, random_locals(5, rng), 2.5);
        std::vector<double> x(5), y(5);
        for (auto& xi : x) xi = u(rng);
        for (auto& yi : y) yi = u(rng);
        const auto s = subgrad_penalized(p, x);
        double lin = eval_penalized(p, x);
        for (std::size_t i = 0; i < 5; ++i) lin += (y[i] - x[i]) * s[i];
        EXPECT_GE(eval_penalized(p, y), lin - 1e-9);
    }
}

TEST(SubgradPenalized, NormBoundedByCa) {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u(-6, 6);
    for (int trial = 0; trial < 200; ++trial) {
        const auto g = oracle::random_connected_graph(6, 0.5, rng);
        const ProblemInstance p(g, random_locals(6, rng), 1.3);
        const double ca = std::sqrt(6.0) * (subgradient_bound(p) + 1.3 * inf_norm_A(g));
        std::vector<double> x(6);
        for (auto& xi : x) xi = u(rng);
        double sq = 0.0;
        for (const double gi : subgrad_penalized(p, x)) sq += gi * gi;
        EXPECT_LE(std::sqrt(sq), ca + 1e-12);
    }
}

TEST(SubgradientBound, Examples) {
    EXPECT_EQ(subgradient_bound(four_ring(1.0)), 1.0);
    EXPECT_EQ(subgradient_bound(median_locals(0.5)), 0.5);
    const std::vector<LocalObjective> q = {Quantile{0.9, 0, 1}, Quantile{0.9, 0, 2}};
    EXPECT_NEAR(subgradient_bound(q), 1.8, 1e-15);
    const std::vector<LocalObjective> quad = {Quadratic{1, 0}, AbsDeviation{1}};
    try {
        subgradient_bound(quad);
        FAIL() << "expected ParameterError";
    } catch (const ParameterError& e) {
        EXPECT_NE(std::string(e.what()).find("use c_star_estimate"), std::string::npos);
    }
}

TEST(LambdaLowerBound, Examples) {
    EXPECT_EQ(lambda_lower_bound(four_ring(1.0)), 1.0);
    EXPECT_EQ(lambda_lower_bound(ProblemInstance(ring_graph(8), median_locals(0.5), 1.0)), 1.0);
    const ProblemInstance heavy(ring_graph(4, 2.0), four_abs_locals(), 1.0);
    EXPECT_EQ(lambda_lower_bound(heavy), 0.5);
    EXPECT_THROW(lambda_lower_bound(ProblemInstance(WeightedGraph(4, {{0, 1, 1}, {2, 3, 1}}), four_abs_locals(), 1)),
                 ParameterError);
}

TEST(CStarEstimate, Examples) {
    EXPECT_EQ(c_star_estimate(std::vector<LocalObjective>{Quadratic{1, 3}, Quadratic{1, 3}, Quadratic{1, 3}}), 0.0);
    EXPECT_EQ(c_star_estimate(std::vector<LocalObjective>{Quadratic{1, 0}, Quadratic{1, 2}}), 4.0);
    std::mt19937_64 rng(1);
    std::vector<LocalObjective> abs;
    std::uniform_real_distribution<double> u(-5, 5);
    for (int i = 0; i < 6; ++i) abs.push_back(AbsDeviation{u(rng)});
    EXPECT_LE(c_star_estimate(abs), 1.0);
}

TEST(OptimalSetOracle, Examples) {
    const auto ex1 = optimal_set_oracle(four_abs_locals());
    EXPECT_EQ(ex1.lo, 2.0);
    EXPECT_EQ(ex1.hi, 4.0);
    EXPECT_EQ(ex1.f_star, 8.0);
    const auto med = optimal_set_oracle(median_locals(0.5));
    EXPECT_EQ(med.lo, 26.21);
    EXPECT_EQ(med.hi, 44.24);
    const auto single = optimal_set_oracle(std::vector<LocalObjective>{AbsDeviation{5}});
    EXPECT_EQ(single.lo, 5.0);
    EXPECT_EQ(single.hi, 5.0);
    EXPECT_EQ(single.f_star, 0.0);
    const auto q04 = optimal_set_oracle(median_locals(0.4));
    EXPECT_EQ(q04.lo, 26.21);
    EXPECT_EQ(q04.hi, 26.21);
}

TEST(OptimalSetOracle, Quadratic) {
    const std::vector<LocalObjective> q = {Quadratic{1, 0}, Quadratic{3, 4}};
    const auto opt = optimal_set_oracle(q);
    EXPECT_DOUBLE_EQ(opt.lo, 3.0);
    EXPECT_DOUBLE_EQ(opt.f_star, 9.0 + 3.0);
    EXPECT_THROW(optimal_set_oracle(std::vector<LocalObjective>{Quadratic{1, 0}, AbsDeviation{1}}), ParameterError);
    // All-alpha-zero quantiles: flat to one side, no bounded minimizer.
    EXPECT_THROW(optimal_set_oracle(std::vector<LocalObjective>{Quantile{0.0, 1, 1}}), ParameterError);
}

TEST(OptimalSetOracle, AgreesWithGridSearch) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        const auto locals = random_locals(7, rng);
        const auto opt = optimal_set_oracle(locals);
        const auto f = [&](double x) { return global_value(locals, x); };
        const auto [gx, gv] = oracle::grid_min_1d(f, -20, 20, 400001);
        EXPECT_LE(opt.f_star, gv + 1e-12);
        EXPECT_NEAR(opt.f_star, gv, 1e-3);
        EXPECT_TRUE(opt.contains(gx, 2e-4)) << gx << " vs [" << opt.lo << ", " << opt.hi << "]";
        EXPECT_NEAR(f(opt.lo), opt.f_star, 1e-9);
        EXPECT_NEAR(f(opt.hi), opt.f_star, 1e-9);
        EXPECT_NEAR(f(0.5 * (opt.lo + opt.hi)), opt.f_star, 1e-9);
    }
}

TEST(OptimalSet, VectorDistance) {
    const OptimalSet s{2, 4, 8};
    EXPECT_DOUBLE_EQ(s.distance(std::vector<double>{0, 2, 4, 6}), std::sqrt(20.0));
    EXPECT_EQ(s.distance(std::vector<double>(4, 3.0)), 0.0);
    EXPECT_DOUBLE_EQ(s.distance(std::vector<double>(4, 5.0)), 2.0);
    // Brute force over candidate anchors.
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-3, 9);
    for (int t = 0; t < 200; ++t) {
        std::vector<double> x(5);
        for (auto& xi : x) xi = u(rng);
        double best = 1e300;
        for (int i = 0; i <= 20000; ++i) {
            const double a = 2.0 + 2.0 * i / 20000.0;
            double sq = 0;
            for (const double xi : x) sq += (xi - a) * (xi - a);
            best = std::min(best, std::sqrt(sq));
        }
        EXPECT_NEAR(s.distance(x), best, 1e-6);
    }
}

TEST(SublevelInterval, EndpointsOnLevel) {
    const auto locals = four_abs_locals();
    const auto opt = optimal_set_oracle(locals);
    const auto band = sublevel_interval(locals, opt, 0.5);
    // Slope of f is -2 on (0, 2) and +2 on (4, 6).
    EXPECT_NEAR(band.lower, 1.75, 1e-9);
    EXPECT_NEAR(band.upper, 4.25, 1e-9);
    const auto zero = sublevel_interval(locals, opt, 0.0);
    EXPECT_NEAR(zero.lower, 2.0, 1e-9);
    EXPECT_NEAR(zero.upper, 4.0, 1e-9);
}

TEST(PenaltyCalculus, ChainInequality) {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> u(-6, 6);
    for (int trial = 0; trial < 100; ++trial) {
        const auto g = oracle::random_connected_graph(6, 0.5, rng);
        const auto locals = random_locals(6, rng);
        ProblemInstance p(g, locals, 1.0);
        const double lambda = 1.01 * lambda_lower_bound(p);
        p = p.with_lambda(lambda);
        std::vector<double> x(6);
        for (auto& xi : x) xi = u(rng);
        const double doubled = eval_penalized(p, x, 2.0 * lambda);
        for (const double xi : x) EXPECT_LE(global_value(locals, xi), doubled + 1e-9);
    }
}

TEST(PenaltyCalculus, LowerBoundThroughMeanAndSpread) {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(-6, 6);
    for (int trial = 0; trial < 200; ++trial) {
        const auto g = oracle::random_connected_graph(6, 0.5, rng);
        const auto locals = random_locals(6, rng);
        const ProblemInstance p(g, locals, 0.3 + trial * 0.02);
        const auto opt = optimal_set_oracle(locals);
        std::vector<double> x(6);
        for (auto& xi : x) xi = u(rng);
        const double c = subgradient_bound(locals);
        const double amin = a_min_l(g, edge_connectivity(g));
        const double rhs = global_value(locals, mean(x)) - opt.f_star + (p.lambda * amin - c * 6 / 2.0) * spread(x);
        EXPECT_GE(eval_penalized(p, x) - opt.f_star, rhs - 1e-9);
    }
}

TEST(PenaltyCalculus, EquivalenceAlongConsensusLine) {
    const auto p = four_ring(1.05);
    const auto f = [&](double a) { return eval_penalized(p, std::vector<double>(4, a)); };
    const auto [x, v] = oracle::grid_min_1d(f, -1, 7, 80001);
    EXPECT_NEAR(v, 8.0, 1e-12);
    EXPECT_GE(x, 2.0);
    EXPECT_LE(x, 4.0);
}

TEST(GrowthConstants, QuadraticBoundHolds) {
    const std::vector<LocalObjective> q = {Quadratic{1, 0}, Quadratic{2, 3}, Quadratic{0.5, -1}};
    const auto gc = quadratic_growth_constants(q);
    const auto opt = optimal_set_oracle(q);
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> u(-30, 30);
    for (int t = 0; t < 10000; ++t) {
        const double x = u(rng);
        const double d = opt.distance(x);
        for (const auto& o : q) {
            const double g = eval_local(o, x).subgrad;
            EXPECT_LE(g * g, 0.5 * gc.c * gc.c * (gc.alpha + d * d) + 1e-9);
        }
    }
    const auto same = quadratic_growth_constants(std::vector<LocalObjective>{Quadratic{1, 2}, Quadratic{1, 2}});
    EXPECT_EQ(same.alpha, 1.0);
}

TEST(ProblemInstance, Validates) {
    EXPECT_THROW(ProblemInstance(ring_graph(4), {AbsDeviation{0}}, 1.0), ParameterError);
    EXPECT_THROW(ProblemInstance(ring_graph(4), four_abs_locals(), -1.0), ParameterError);
    EXPECT_THROW(ProblemInstance(path_graph(2), {Quadratic{0.0, 1}, Quadratic{1, 1}}, 1.0), ParameterError);
    EXPECT_THROW(ProblemInstance(path_graph(2), {Quantile{1.5, 0, 1}, AbsDeviation{1}}, 1.0), ParameterError);
}

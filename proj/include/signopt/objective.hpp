#ifndef SIGNOPT_OBJECTIVE_HPP
#define SIGNOPT_OBJECTIVE_HPP

#include <span>
#include <variant>
#include <vector>

#include "signopt/graph.hpp"

namespace signopt {

// Three-valued sign: sgn(0) == 0.
constexpr double sgn(double x) noexcept { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// |x - s|
struct AbsDeviation {
    double s = 0.0;
};

// Pinball loss Q_alpha(y - x*s), alpha in [0, 1].
struct Quantile {
    double alpha = 0.5;
    double y = 0.0;
    double s = 1.0;
};

// a * (x - b)^2, a > 0.
struct Quadratic {
    double a = 1.0;
    double b = 0.0;
};

using LocalObjective = std::variant<AbsDeviation, Quantile, Quadratic>;

struct LocalEval {
    double value;
    double subgrad;
};

// Value and the deterministic subgradient selection. Kinks: AbsDeviation
// returns 0; Quantile takes the "y >= x*s" branch (-alpha*s).
LocalEval eval_local(const LocalObjective& o, double x);

bool has_bounded_subgradient(const LocalObjective& o);

// A finite minimizer of the local function.
double local_minimizer(const LocalObjective& o);

// f(x) = sum_i f_i(x)
double global_value(std::span<const LocalObjective> locals, double x);
double global_subgrad(std::span<const LocalObjective> locals, double x);

struct ProblemInstance {
    WeightedGraph graph;
    std::vector<LocalObjective> locals;
    double lambda = 1.0;

    ProblemInstance() = default;
    ProblemInstance(WeightedGraph g, std::vector<LocalObjective> l, double penalty);

    std::size_t size() const noexcept { return locals.size(); }
    ProblemInstance with_lambda(double penalty) const;
};

// Closed interval X* = [lo, hi] with optimal value f*.
struct OptimalSet {
    double lo = 0.0;
    double hi = 0.0;
    double f_star = 0.0;

    bool contains(double x, double tol = 0.0) const { return x >= lo - tol && x <= hi + tol; }
    // Distance from a scalar to X*.
    double distance(double x) const;
    // d(x) = min over x* in X* of ||x - x* 1||.
    double distance(std::span<const double> x) const;
};

// h(x) = 1/2 sum_i sum_{j in N_i} a_ij |x_i - x_j|
double penalty_h(const WeightedGraph& g, std::span<const double> x);

// g(x) + lambda * h(x)
double eval_penalized(const ProblemInstance& p, std::span<const double> x);
double eval_penalized(const ProblemInstance& p, std::span<const double> x, double lambda);

// Component i: lambda * sum_j a_ij sgn(x_i - x_j) + grad f_i(x_i).
State subgrad_penalized(const ProblemInstance& p, std::span<const double> x);

// Tightest uniform |grad f_i| bound; throws ParameterError for Quadratic locals.
double subgradient_bound(const ProblemInstance& p);
double subgradient_bound(std::span<const LocalObjective> locals);

// n * c / (2 * a_min^(l)) with l = edge_connectivity(g). Throws on a
// disconnected graph.
double lambda_lower_bound(const WeightedGraph& g, std::size_t n, double c);
double lambda_lower_bound(const ProblemInstance& p);

// min_i max_j |grad f_i(x_j^opt)|
double c_star_estimate(const ProblemInstance& p);
double c_star_estimate(std::span<const LocalObjective> locals);

// X* and f* by breakpoint enumeration (piecewise-linear sums) or closed
// form (all-quadratic sums). Throws for mixed or unbounded problems.
OptimalSet optimal_set_oracle(std::span<const LocalObjective> locals);

// {x : f(x) <= f* + delta} as [lower, upper], endpoints by bisection.
struct Interval {
    double lower;
    double upper;
};
Interval sublevel_interval(std::span<const LocalObjective> locals, const OptimalSet& opt,
                           double delta, double tol = 1e-10);

// Growth constants (c, alpha) with |grad f_i(x)|^2 <= c^2/2 * (alpha + dist(x, X*)^2)
// for all-quadratic locals. Derived from (x-b)^2 <= 2(x-x*)^2 + 2(x*-b)^2:
// c = 4 max_i a_i, alpha = 16 max_i a_i^2 (x* - b_i)^2 / c^2 (or 1 if that is 0).
struct GrowthConstants {
    double c;
    double alpha;
};
GrowthConstants quadratic_growth_constants(std::span<const LocalObjective> locals);

}  // namespace signopt

#endif  // SIGNOPT_OBJECTIVE_HPP

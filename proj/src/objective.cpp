#include "signopt/objective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "signopt/error.hpp"

namespace signopt {

namespace {

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

void check_dimension(const WeightedGraph& g, std::span<const double> x) {
    if (x.size() != g.node_count()) {
        throw ParameterError("state has " + std::to_string(x.size()) + " components, graph has " +
                             std::to_string(g.node_count()) + " nodes");
    }
}

void check_dimension(const ProblemInstance& p, std::span<const double> x) {
    check_dimension(p.graph, x);
}

}  // namespace

LocalEval eval_local(const LocalObjective& o, double x) {
    return std::visit(
        overloaded{
            [x](const AbsDeviation& f) -> LocalEval {
                return {std::abs(x - f.s), sgn(x - f.s)};
            },
            [x](const Quantile& f) -> LocalEval {
                const double r = f.y - x * f.s;
                if (f.y >= x * f.s) return {f.alpha * r, -f.alpha * f.s};
                return {(f.alpha - 1.0) * r, (1.0 - f.alpha) * f.s};
            },
            [x](const Quadratic& f) -> LocalEval {
                const double d = x - f.b;
                return {f.a * d * d, 2.0 * f.a * d};
            },
        },
        o);
}

bool has_bounded_subgradient(const LocalObjective& o) {
    return !std::holds_alternative<Quadratic>(o);
}

double local_minimizer(const LocalObjective& o) {
    return std::visit(overloaded{
                          [](const AbsDeviation& f) { return f.s; },
                          [](const Quantile& f) { return f.s == 0.0 ? 0.0 : f.y / f.s; },
                          [](const Quadratic& f) { return f.b; },
                      },
                      o);
}

double global_value(std::span<const LocalObjective> locals, double x) {
    double total = 0.0;
    for (const auto& o : locals) total += eval_local(o, x).value;
    return total;
}

double global_subgrad(std::span<const LocalObjective> locals, double x) {
    double total = 0.0;
    for (const auto& o : locals) total += eval_local(o, x).subgrad;
    return total;
}

ProblemInstance::ProblemInstance(WeightedGraph g, std::vector<LocalObjective> l, double penalty)
    : graph(std::move(g)), locals(std::move(l)), lambda(penalty) {
    if (locals.size() != graph.node_count()) {
        throw ParameterError("problem has " + std::to_string(locals.size()) +
                             " local objectives for " + std::to_string(graph.node_count()) +
                             " nodes");
    }
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw ParameterError("penalty factor must be finite and nonnegative");
    }
    for (const auto& o : locals) {
        if (const auto* q = std::get_if<Quadratic>(&o); q && !(q->a > 0.0)) {
            throw ParameterError("quadratic local needs a > 0");
        }
        if (const auto* q = std::get_if<Quantile>(&o); q && !(q->alpha >= 0.0 && q->alpha <= 1.0)) {
            throw ParameterError("quantile level alpha must lie in [0, 1]");
        }
    }
}

ProblemInstance ProblemInstance::with_lambda(double penalty) const {
    return ProblemInstance(graph, locals, penalty);
}

double OptimalSet::distance(double x) const {
    if (x < lo) return lo - x;
    if (x > hi) return x - hi;
    return 0.0;
}

double OptimalSet::distance(std::span<const double> x) const {
    if (x.empty()) return 0.0;
    double mean = 0.0;
    for (const double xi : x) mean += xi;
    mean /= static_cast<double>(x.size());
    const double anchor = std::clamp(mean, lo, hi);
    double sq = 0.0;
    for (const double xi : x) sq += (xi - anchor) * (xi - anchor);
    return std::sqrt(sq);
}

double penalty_h(const WeightedGraph& g, std::span<const double> x) {
    check_dimension(g, x);
    double total = 0.0;
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        for (const auto& nb : g.neighbors(i)) total += nb.weight * std::abs(x[i] - x[nb.node]);
    }
    return 0.5 * total;
}

double eval_penalized(const ProblemInstance& p, std::span<const double> x) {
    return eval_penalized(p, x, p.lambda);
}

double eval_penalized(const ProblemInstance& p, std::span<const double> x, double lambda) {
    check_dimension(p, x);
    double g = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) g += eval_local(p.locals[i], x[i]).value;
    return g + lambda * penalty_h(p.graph, x);
}

State subgrad_penalized(const ProblemInstance& p, std::span<const double> x) {
    check_dimension(p, x);
    State out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double h = 0.0;
        for (const auto& nb : p.graph.neighbors(i)) h += nb.weight * sgn(x[i] - x[nb.node]);
        out[i] = p.lambda * h + eval_local(p.locals[i], x[i]).subgrad;
    }
    return out;
}

double subgradient_bound(std::span<const LocalObjective> locals) {
    double c = 0.0;
    for (const auto& o : locals) {
        const double bound = std::visit(
            overloaded{
                [](const AbsDeviation&) { return 1.0; },
                [](const Quantile& f) {
                    return std::max(f.alpha * std::abs(f.s), (1.0 - f.alpha) * std::abs(f.s));
                },
                [](const Quadratic&) -> double {
                    throw ParameterError("unbounded subgradient; use c_star_estimate");
                },
            },
            o);
        c = std::max(c, bound);
    }
    return c;
}

double subgradient_bound(const ProblemInstance& p) { return subgradient_bound(p.locals); }

double lambda_lower_bound(const WeightedGraph& g, std::size_t n, double c) {
    const auto l = edge_connectivity(g);
    if (l == 0 || g.edge_count() == 0) {
        throw ParameterError("lambda_lower_bound: graph is disconnected");
    }
    return static_cast<double>(n) * c / (2.0 * a_min_l(g, std::min(l, g.edge_count())));
}

double lambda_lower_bound(const ProblemInstance& p) {
    return lambda_lower_bound(p.graph, p.size(), subgradient_bound(p));
}

double c_star_estimate(std::span<const LocalObjective> locals) {
    if (locals.empty()) throw ParameterError("c_star_estimate: no local objectives");
    std::vector<double> minimizers;
    for (const auto& o : locals) {
        const double m = local_minimizer(o);
        if (!std::isfinite(m)) throw ParameterError("local objective has no finite minimizer");
        minimizers.push_back(m);
    }
    double best = std::numeric_limits<double>::infinity();
    for (const auto& o : locals) {
        double worst = 0.0;
        for (const double m : minimizers) worst = std::max(worst, std::abs(eval_local(o, m).subgrad));
        best = std::min(best, worst);
    }
    return best;
}

double c_star_estimate(const ProblemInstance& p) { return c_star_estimate(p.locals); }

namespace {

OptimalSet quadratic_optimum(std::span<const LocalObjective> locals) {
    double num = 0.0;
    double den = 0.0;
    for (const auto& o : locals) {
        const auto& q = std::get<Quadratic>(o);
        num += q.a * q.b;
        den += q.a;
    }
    const double x = num / den;
    return {x, x, global_value(locals, x)};
}

OptimalSet piecewise_linear_optimum(std::span<const LocalObjective> locals) {
    std::vector<double> breaks;
    double slope_scale = 0.0;
    for (const auto& o : locals) {
        if (const auto* a = std::get_if<AbsDeviation>(&o)) {
            breaks.push_back(a->s);
            slope_scale += 1.0;
        } else if (const auto* q = std::get_if<Quantile>(&o)) {
            if (q->s != 0.0) breaks.push_back(q->y / q->s);
            slope_scale += std::abs(q->s);
        }
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    if (breaks.empty()) throw ParameterError("optimal_set_oracle: objective is constant");

    const double tol = 1e-12 * std::max(1.0, slope_scale);
    const auto m = breaks.size();
    // slope[k] is the exact slope on the open segment left of breaks[k];
    // slope[m] is the right tail.
    std::vector<double> slope(m + 1);
    slope[0] = global_subgrad(locals, breaks.front() - 1.0);
    slope[m] = global_subgrad(locals, breaks.back() + 1.0);
    for (std::size_t k = 1; k < m; ++k) {
        slope[k] = global_subgrad(locals, 0.5 * (breaks[k - 1] + breaks[k]));
    }
    if (slope[0] >= -tol || slope[m] <= tol) {
        throw ParameterError("optimal_set_oracle: optimal set is unbounded");
    }
    std::size_t first = 0;
    while (slope[first + 1] < -tol) ++first;
    std::size_t last = first;
    while (std::abs(slope[last + 1]) <= tol) ++last;
    OptimalSet out{breaks[first], breaks[last], 0.0};
    out.f_star = std::min(global_value(locals, out.lo), global_value(locals, out.hi));
    return out;
}

}  // namespace

OptimalSet optimal_set_oracle(std::span<const LocalObjective> locals) {
    if (locals.empty()) throw ParameterError("optimal_set_oracle: no local objectives");
    const auto quadratic_count = static_cast<std::size_t>(
        std::count_if(locals.begin(), locals.end(),
                      [](const LocalObjective& o) { return std::holds_alternative<Quadratic>(o); }));
    if (quadratic_count == locals.size()) return quadratic_optimum(locals);
    if (quadratic_count != 0) {
        throw ParameterError("optimal_set_oracle: mixed quadratic and piecewise-linear locals");
    }
    return piecewise_linear_optimum(locals);
}

Interval sublevel_interval(std::span<const LocalObjective> locals, const OptimalSet& opt,
                           double delta, double tol) {
    if (!(delta >= 0.0)) throw ParameterError("sublevel_interval: delta must be >= 0");
    const double level = opt.f_star + delta;
    auto inside = [&](double x) { return global_value(locals, x) <= level; };

    auto edge = [&](double anchor, double direction) {
        double step = std::max(1.0, std::abs(anchor) * 1e-3);
        double far = anchor + direction * step;
        while (inside(far)) {
            step *= 2.0;
            far = anchor + direction * step;
            if (!std::isfinite(far)) throw ParameterError("sublevel set is unbounded");
        }
        double near = anchor;
        while (std::abs(far - near) > tol) {
            const double mid = 0.5 * (near + far);
            if (mid == near || mid == far) break;
            (inside(mid) ? near : far) = mid;
        }
        return near;
    };
    return {edge(opt.lo, -1.0), edge(opt.hi, 1.0)};
}

GrowthConstants quadratic_growth_constants(std::span<const LocalObjective> locals) {
    const auto opt = optimal_set_oracle(locals);
    double a_max = 0.0;
    double offset = 0.0;
    for (const auto& o : locals) {
        const auto* q = std::get_if<Quadratic>(&o);
        if (q == nullptr) throw ParameterError("quadratic_growth_constants: non-quadratic local");
        a_max = std::max(a_max, q->a);
        offset = std::max(offset, q->a * q->a * (opt.lo - q->b) * (opt.lo - q->b));
    }
    const double c = 4.0 * a_max;
    const double alpha = offset > 0.0 ? 16.0 * offset / (c * c) : 1.0;
    return {c, alpha};
}

}  // namespace signopt

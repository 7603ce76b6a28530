#include "signopt/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "signopt/error.hpp"

namespace signopt {

StepSchedule StepSchedule::power_law(double alpha) {
    if (!(alpha >= 0.5 && alpha <= 1.0)) {
        throw ParameterError("power-law exponent must lie in [0.5, 1]");
    }
    return {Kind::power_law, alpha, 0.0};
}

StepSchedule StepSchedule::constant(double rho) {
    if (!(rho > 0.0) || !std::isfinite(rho)) throw ParameterError("constant step must be > 0");
    return {Kind::constant, rho, 0.0};
}

StepSchedule StepSchedule::affine_reciprocal(double a, double b) {
    if (!(a > 0.0) || !(b > -1.0)) {
        throw ParameterError("affine step a/(k+b) needs a > 0 and b > -1");
    }
    return {Kind::affine_reciprocal, a, b};
}

double StepSchedule::operator()(std::uint64_t k) const {
    const auto kd = static_cast<double>(k);
    switch (kind_) {
        case Kind::power_law:
            return std::pow(kd, -p0_);
        case Kind::constant:
            return p0_;
        case Kind::affine_reciprocal:
            return p0_ / (kd + p1_);
    }
    return 0.0;
}

bool StepSchedule::is_square_summable_diminishing() const noexcept {
    switch (kind_) {
        case Kind::power_law:
            return p0_ > 0.5;
        case Kind::constant:
            return false;
        case Kind::affine_reciprocal:
            return true;
    }
    return false;
}

std::string StepSchedule::describe() const {
    std::ostringstream out;
    switch (kind_) {
        case Kind::power_law:
            out << "power(" << p0_ << ")";
            break;
        case Kind::constant:
            out << "constant(" << p0_ << ")";
            break;
        case Kind::affine_reciprocal:
            out << "affine(" << p0_ << "," << p1_ << ")";
            break;
    }
    return out.str();
}

namespace {

void check_dimension(const ProblemInstance& p, std::span<const double> x) {
    if (x.size() != p.size()) throw ParameterError("state dimension does not match the problem");
}

// Shared kernel for the sign-based updates. `sign_term(i, nb)` returns the
// weighted sign contribution of neighbor nb to node i, already oriented as
// a term of the penalty subgradient (sgn(x_i - x_j) in the noiseless case).
template <class SignTerm>
State sign_update(const ProblemInstance& p, const std::vector<std::vector<Neighbor>>& adjacency,
                  std::span<const double> x, double rho, SignTerm&& sign_term) {
    State out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double h = 0.0;
        for (const auto& nb : adjacency[i]) h += sign_term(i, nb);
        out[i] = x[i] - rho * (p.lambda * h + eval_local(p.locals[i], x[i]).subgrad);
    }
    return out;
}

std::vector<std::vector<Neighbor>> adjacency_of(const WeightedGraph& g) {
    std::vector<std::vector<Neighbor>> adj(g.node_count());
    for (std::size_t i = 0; i < g.node_count(); ++i) adj[i] = g.neighbors(i);
    return adj;
}

State algo2_kernel(const ProblemInstance& p, const NoiseModel& noise, std::uint64_t k,
                   std::span<const double> x, double rho) {
    if (noise.n != p.size()) throw ParameterError("noise model dimension mismatch");
    const auto adj = adjacency_of(p.graph);
    return sign_update(p, adj, x, rho, [&](std::size_t i, const Neighbor& nb) {
        // -sgn(x_j - x_i + eps_ij) equals sgn(x_i - x_j) when eps_ij = 0.
        return nb.weight * -sgn(x[nb.node] - x[i] + noise.draw(k, i, nb.node));
    });
}

State algo3_kernel(const ProblemInstance& p, const ActivationMatrix& act,
                   const std::vector<std::vector<Neighbor>>& mean_adjacency, std::uint64_t k,
                   std::span<const double> x, double rho) {
    return sign_update(p, mean_adjacency, x, rho, [&](std::size_t i, const Neighbor& nb) {
        return act.active(k, i, nb.node) ? sgn(x[i] - x[nb.node]) : 0.0;
    });
}

}  // namespace

State step_algo1(const ProblemInstance& p, std::span<const double> x, double rho) {
    const auto g = subgrad_penalized(p, x);
    State out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - rho * g[i];
    return out;
}

State step_algo2(const ProblemInstance& p, const NoiseModel& noise, std::uint64_t k,
                 std::span<const double> x, double rho) {
    check_dimension(p, x);
    return algo2_kernel(p, noise, k, x, rho);
}

State step_algo3(const ProblemInstance& p, const ActivationMatrix& act, std::uint64_t k,
                 std::span<const double> x, double rho) {
    check_dimension(p, x);
    if (act.n != p.size()) throw ParameterError("activation matrix dimension mismatch");
    return algo3_kernel(p, act, adjacency_of(act.mean_graph()), k, x, rho);
}

State step_dgd(const ProblemInstance& p, std::span<const double> x, double rho) {
    check_dimension(p, x);
    State out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double mix = 0.0;
        for (const auto& nb : p.graph.neighbors(i)) mix += nb.weight * (x[nb.node] - x[i]);
        out[i] = x[i] + mix - rho * eval_local(p.locals[i], x[i]).subgrad;
    }
    return out;
}

bool dgd_weights_stable(const WeightedGraph& g) { return inf_norm_A(g) <= 1.0; }

std::string to_string(Algorithm a) {
    switch (a) {
        case Algorithm::algo1:
            return "algo1";
        case Algorithm::algo2:
            return "algo2";
        case Algorithm::algo3:
            return "algo3";
        case Algorithm::dgd:
            return "dgd";
    }
    return "unknown";
}

Engine Engine::algo1(ProblemInstance p) { return {Algorithm::algo1, std::move(p), {}, {}}; }

Engine Engine::algo2(ProblemInstance p, NoiseModel noise) {
    if (noise.n != p.size()) throw ParameterError("noise model dimension mismatch");
    return {Algorithm::algo2, std::move(p), std::move(noise), {}};
}

Engine Engine::algo3(ProblemInstance p, ActivationMatrix act) {
    if (act.n != p.size()) throw ParameterError("activation matrix dimension mismatch");
    return {Algorithm::algo3, std::move(p), {}, std::move(act)};
}

Engine Engine::dgd(ProblemInstance p) { return {Algorithm::dgd, std::move(p), {}, {}}; }

State Engine::step(std::uint64_t k, std::span<const double> x, double rho) const {
    switch (algorithm) {
        case Algorithm::algo1:
            return step_algo1(problem, x, rho);
        case Algorithm::algo2:
            return step_algo2(problem, *noise, k, x, rho);
        case Algorithm::algo3:
            return step_algo3(problem, *activation, k, x, rho);
        case Algorithm::dgd:
            return step_dgd(problem, x, rho);
    }
    return State(x.begin(), x.end());
}

double spread(std::span<const double> x) {
    if (x.empty()) return 0.0;
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    return *hi - *lo;
}

double mean(std::span<const double> x) {
    if (x.empty()) return 0.0;
    double total = 0.0;
    for (const double v : x) total += v;
    return total / static_cast<double>(x.size());
}

namespace {

// Per-step metric bookkeeping for run().
class Tracker {
public:
    Tracker(std::span<const LocalObjective> locals, std::optional<OptimalSet> opt, std::size_t n)
        : locals_(locals),
          opt_(opt),
          node_best_(n, std::numeric_limits<double>::infinity()),
          node_best_late_(n, std::numeric_limits<double>::infinity()) {}

    // Updates running minima with x^t.
    void observe(std::uint64_t t, std::span<const double> x) {
        if (!opt_) return;
        double worst = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double gap = global_value(locals_, x[i]) - opt_->f_star;
            node_best_[i] = std::min(node_best_[i], gap);
            if (t >= 2) node_best_late_[i] = std::min(node_best_late_[i], gap);
            worst = std::max(worst, gap);
        }
        min_gap_ = std::min(min_gap_, worst);
    }

    RecordedStep snapshot(std::uint64_t k, std::span<const double> x) const {
        constexpr double nan = std::numeric_limits<double>::quiet_NaN();
        RecordedStep r;
        r.k = k;
        r.x.assign(x.begin(), x.end());
        r.v = spread(x);
        r.xbar = mean(x);
        r.d = opt_ ? opt_->distance(x) : nan;
        r.node_value.reserve(x.size());
        for (const double xi : x) r.node_value.push_back(global_value(locals_, xi));
        r.min_gap = opt_ ? min_gap_ : nan;
        r.node_min_gap = opt_ ? *std::max_element(node_best_.begin(), node_best_.end()) : nan;
        r.node_min_gap_late =
            opt_ && k >= 2 ? *std::max_element(node_best_late_.begin(), node_best_late_.end()) : nan;
        return r;
    }

private:
    std::span<const LocalObjective> locals_;
    std::optional<OptimalSet> opt_;
    std::vector<double> node_best_;
    std::vector<double> node_best_late_;
    double min_gap_ = std::numeric_limits<double>::infinity();
};

// Engine::step for algo3 rebuilds G_P on every call; cache it for long runs.
struct CachedStepper {
    const Engine& engine;
    std::vector<std::vector<Neighbor>> mean_adjacency;

    explicit CachedStepper(const Engine& e) : engine(e) {
        if (e.algorithm == Algorithm::algo3) mean_adjacency = adjacency_of(e.activation->mean_graph());
    }

    State operator()(std::uint64_t k, std::span<const double> x, double rho) const {
        if (engine.algorithm == Algorithm::algo3) {
            return algo3_kernel(engine.problem, *engine.activation, mean_adjacency, k, x, rho);
        }
        return engine.step(k, x, rho);
    }
};

}  // namespace

RunRecord run(const Engine& engine, const StepSchedule& schedule, std::span<const double> x0,
              std::uint64_t steps, const RunOptions& options) {
    if (steps < 1) throw ParameterError("run: need at least one step");
    if (options.record_stride < 1) throw ParameterError("run: record_stride must be >= 1");
    check_dimension(engine.problem, x0);

    std::optional<OptimalSet> opt = options.optimum;
    if (!opt && options.compute_optimum) {
        try {
            opt = optimal_set_oracle(engine.problem.locals);
        } catch (const ParameterError&) {
            opt.reset();
        }
    }

    RunRecord record;
    record.algorithm = engine.algorithm;
    record.schedule = schedule.describe();
    record.steps = steps;
    record.optimum = opt;
    if (engine.noise) record.seed = engine.noise->seed;
    if (engine.activation) record.seed = engine.activation->seed;

    const auto tail = static_cast<std::uint64_t>(
        std::ceil(std::clamp(options.tail_fraction, 0.0, 1.0) * static_cast<double>(steps)));
    record.tail_length = std::max<std::uint64_t>(tail, 1);
    const std::uint64_t tail_start = steps - record.tail_length + 1;
    record.tail_max_d = opt ? 0.0 : std::numeric_limits<double>::quiet_NaN();

    Tracker tracker(engine.problem.locals, opt, x0.size());
    CachedStepper stepper(engine);
    State x(x0.begin(), x0.end());
    tracker.observe(0, x);
    record.recorded.push_back(tracker.snapshot(0, x));

    for (std::uint64_t k = 1; k <= steps; ++k) {
        const double rho = schedule(k);
        State next = stepper(k, x, rho);
        for (const double v : next) {
            if (!std::isfinite(v) || std::abs(v) > options.divergence_limit) {
                std::ostringstream msg;
                msg << "state diverged at k=" << k << " (rho^k=" << rho << ", value " << v << ")";
                throw NumericAbort(k, rho, msg.str());
            }
        }
        if (options.observer) options.observer(k, rho, x, next);
        x = std::move(next);
        tracker.observe(k, x);
        if (opt && k >= tail_start) record.tail_max_d = std::max(record.tail_max_d, opt->distance(x));
        if (k % options.record_stride == 0 || k == steps) {
            record.recorded.push_back(tracker.snapshot(k, x));
        }
    }
    return record;
}

}  // namespace signopt

#ifndef SIGNOPT_ALGORITHMS_HPP
#define SIGNOPT_ALGORITHMS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "signopt/objective.hpp"
#include "signopt/stochastic.hpp"

namespace signopt {

// Stepsize rule rho^k, evaluated for k >= 1.
class StepSchedule {
public:
    enum class Kind { power_law, constant, affine_reciprocal };

    // rho^k = k^(-alpha), alpha in [0.5, 1]
    static StepSchedule power_law(double alpha);
    static StepSchedule constant(double rho);
    // rho^k = a / (k + b)
    static StepSchedule affine_reciprocal(double a, double b);

    double operator()(std::uint64_t k) const;

    Kind kind() const noexcept { return kind_; }
    double p0() const noexcept { return p0_; }
    double p1() const noexcept { return p1_; }
    // True when sum rho = inf and sum rho^2 < inf.
    bool is_square_summable_diminishing() const noexcept;
    std::string describe() const;

private:
    StepSchedule(Kind kind, double p0, double p1) : kind_(kind), p0_(p0), p1_(p1) {}
    Kind kind_;
    double p0_;
    double p1_;
};

// x_i' = x_i + lambda*rho*sum_j a_ij sgn(x_j - x_i) - rho*grad f_i(x_i),
// evaluated as x - rho * subgrad_penalized(p, x).
State step_algo1(const ProblemInstance& p, std::span<const double> x, double rho);

// Sign arguments perturbed by eps_ij^k for each ordered pair.
State step_algo2(const ProblemInstance& p, const NoiseModel& noise, std::uint64_t k,
                 std::span<const double> x, double rho);

// Edges active at step k (one Bernoulli draw per pair) carry weight 1; the
// edge set comes from the activation matrix.
State step_algo3(const ProblemInstance& p, const ActivationMatrix& act, std::uint64_t k,
                 std::span<const double> x, double rho);

// x_i' = x_i + sum_j a_ij (x_j - x_i) - rho*grad f_i(x_i)
State step_dgd(const ProblemInstance& p, std::span<const double> x, double rho);

// sum_j a_ij <= 1 for every node.
bool dgd_weights_stable(const WeightedGraph& g);

enum class Algorithm { algo1, algo2, algo3, dgd };
std::string to_string(Algorithm a);

// One of the four steppers bound to its problem data.
struct Engine {
    Algorithm algorithm = Algorithm::algo1;
    ProblemInstance problem;
    std::optional<NoiseModel> noise;
    std::optional<ActivationMatrix> activation;

    static Engine algo1(ProblemInstance p);
    static Engine algo2(ProblemInstance p, NoiseModel noise);
    static Engine algo3(ProblemInstance p, ActivationMatrix act);
    static Engine dgd(ProblemInstance p);

    State step(std::uint64_t k, std::span<const double> x, double rho) const;
};

struct RecordedStep {
    std::uint64_t k = 0;
    State x;
    double v = 0.0;         // max_i x_i - min_i x_i
    double xbar = 0.0;      // mean state
    double d = 0.0;         // distance to {x* 1 : x* in X*}; NaN without oracle
    State node_value;       // f(x_i) per node
    double min_gap = 0.0;         // min over 0 <= t <= k of max_i f(x_i^t) - f*
    double node_min_gap = 0.0;    // max_i of min over 0 <= t <= k of f(x_i^t) - f*
    double node_min_gap_late = 0.0;  // same with 1 < t <= k; NaN for k < 2
};

struct RunRecord {
    Algorithm algorithm = Algorithm::algo1;
    std::string schedule;
    std::uint64_t steps = 0;
    std::uint64_t seed = 0;
    std::string config_echo;
    std::optional<OptimalSet> optimum;
    std::vector<RecordedStep> recorded;
    // Max of d(x^k) over the final tail of the run (k > steps - tail_length).
    double tail_max_d = 0.0;
    std::uint64_t tail_length = 0;

    const RecordedStep& initial() const { return recorded.front(); }
    const RecordedStep& final() const { return recorded.back(); }
};

// Called after each step with (k, rho^k, x^{k-1}, x^k).
using StepObserver =
    std::function<void(std::uint64_t, double, std::span<const double>, std::span<const double>)>;

struct RunOptions {
    std::uint64_t record_stride = 1;
    std::optional<OptimalSet> optimum;  // computed from the locals when absent and possible
    bool compute_optimum = true;
    double tail_fraction = 0.1;
    StepObserver observer;
    double divergence_limit = 1e12;  // abort when ||x||_inf exceeds this
};

// Iterates k = 1..steps, x^k = step(k, x^{k-1}, rho^k). Records k = 0, every
// stride-th step, and the final step. Gap metrics are maintained every step.
RunRecord run(const Engine& engine, const StepSchedule& schedule, std::span<const double> x0,
              std::uint64_t steps, const RunOptions& options = {});

double spread(std::span<const double> x);
double mean(std::span<const double> x);

}  // namespace signopt

#endif  // SIGNOPT_ALGORITHMS_HPP

#ifndef SIGNOPT_ANALYSIS_HPP
#define SIGNOPT_ANALYSIS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "signopt/algorithms.hpp"
#include "signopt/objective.hpp"
#include "signopt/stochastic.hpp"

namespace signopt {

// sqrt(n) * (c + lambda * ||A||_inf), c from subgradient_bound.
double c_a(const ProblemInstance& p);
double c_a(const ProblemInstance& p, double c);

// Gradient-growth constant for locals with |grad f_i(x)|^2 <= c^2/2 (alpha + d^2):
// sqrt(n*alpha*c^2 + 2*n*lambda^2*||A||_inf^2). The penalty term carries a
// factor n: the alternating-sign state attains n * lambda^2 * ||A||_inf^2 on
// a regular graph, so dropping it would understate the bound.
double c_b(const ProblemInstance& p, double c, double alpha_2b);

// lambda_lower_bound(p) < lambda.
bool lambda_admissible(const ProblemInstance& p);

// 2 * lambda * a_min^(l) - c * n; throws when not positive.
double floor_denominator(const ProblemInstance& p);

// Diminishing-step rate bound for rho^k = k^(-alpha). alpha in (0.5, 1] uses
// s(k); alpha = 0.5 uses the (d0^2 + c_a^2 ln k) / (4 sqrt k) form. k >= 2.
double thm3_rhs(const ProblemInstance& p, double alpha, std::uint64_t k, double d0);
double thm3_rhs_from(double ca, double alpha, std::uint64_t k, double d0);

// max d(x) over the scalar sublevel set {x : f(x) <= f* + rho c_a^2 / 2},
// i.e. the larger endpoint distance to X*.
double d_tilde(const ProblemInstance& p, double rho);

// Constant-step neighborhood radius:
// 2 sqrt(n) max{d_tilde(rho), rho c_a^2 / (2 lambda a_min - c n)} + rho c_a.
double thm4_rhs(const ProblemInstance& p, double rho);

// Same radius using growth f - f* >= gamma d^alpha in place of d_tilde.
double corollary1_rhs(const ProblemInstance& p, double rho, double gamma, double alpha);

// rho c_a^2 / 2 + d0^2 / (2 rho k)
double thm5_rhs(const ProblemInstance& p, double rho, std::uint64_t k, double d0);

struct BestConstantStep {
    double rho;    // d0 / (c_a sqrt k)
    double bound;  // c_a d0 / sqrt k
};
BestConstantStep thm5_best_step(const ProblemInstance& p, std::uint64_t k, double d0);

// 1/2 sum_{i,j} a_ij sigma_ij = sum over edges of a_e sigma_e.
double sigma_s(const WeightedGraph& g, const NoiseModel& noise);

// sqrt(2/pi) * 2 lambda sigma_s / (2 lambda a_min - c n)
double thm7_rhs(const ProblemInstance& p, const NoiseModel& noise);

// 2 lambda a_min^(l) / n - c
double thm1b_floor(const ProblemInstance& p);

// ||x_next - x* 1||^2 -(||x - x* 1||^2 - 2 rho (f_lambda(x) - f*) + rho^2 c_a^2)
// for one step x -> x_next. Nonpositive for a valid subgradient step.
double descent_residual(const ProblemInstance& p, std::span<const double> x,
                        std::span<const double> x_next, double rho, double x_star, double f_star,
                        double ca);

struct BoundEntry {
    std::uint64_t k = 0;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;  // rhs - lhs
};

struct BoundReport {
    std::string bound_name;
    std::vector<BoundEntry> entries;
    bool applicable = true;
    bool pass = true;
    std::string note;

    void add(std::uint64_t k, double lhs, double rhs);
    // pass <=> every margin >= -1e-9 max(1, |rhs|); inapplicable reports pass.
    void finalize();
    double min_margin() const;
};

// ||subgrad_penalized(p, x)||_inf >= thm1b_floor(p). Throws on consensus x.
BoundReport check_floor(const ProblemInstance& p, std::span<const double> x);

enum class BoundKind { thm3, thm4, thm5, thm7 };
std::string to_string(BoundKind b);
BoundKind parse_bound(const std::string& name);

// Checks a run against each requested bound. thm3/thm5 use the per-node
// min-gap at recorded steps, thm4 the max d over the run's tail, thm7 the
// terminal spread against rhs * (1 + slack). Bounds whose
// preconditions fail (lambda not above the threshold, wrong schedule kind,
// no noise model) are reported inapplicable.
BoundReport verify_bound(const RunRecord& r, const ProblemInstance& p, const StepSchedule& schedule,
                         BoundKind bound, const NoiseModel* noise = nullptr,
                         double thm7_slack = 0.1);
std::vector<BoundReport> verify_run(const RunRecord& r, const ProblemInstance& p,
                                    const StepSchedule& schedule,
                                    std::span<const BoundKind> bounds,
                                    const NoiseModel* noise = nullptr);

std::string to_json(std::span<const BoundReport> reports);
// Header "bound_name,k,lhs,rhs,margin,pass" then one row per entry.
std::string to_csv(std::span<const BoundReport> reports);

}  // namespace signopt

#endif  // SIGNOPT_ANALYSIS_HPP

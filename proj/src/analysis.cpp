#include "signopt/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "signopt/error.hpp"

namespace signopt {

namespace {

double connectivity_weight(const WeightedGraph& g) {
    const auto l = edge_connectivity(g);
    if (l == 0 || g.edge_count() == 0) throw ParameterError("graph is disconnected");
    return a_min_l(g, std::min(l, g.edge_count()));
}

double nonneg(double v) { return v < 0.0 ? 0.0 : v; }

// Shortest repr that round-trips; nan/inf spelled out.
std::string number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream out;
    out.imbue(std::locale::classic());
    out.precision(17);
    out << v;
    return out.str();
}

}  // namespace

double c_a(const ProblemInstance& p) { return c_a(p, subgradient_bound(p)); }

double c_a(const ProblemInstance& p, double c) {
    return std::sqrt(static_cast<double>(p.size())) * (c + p.lambda * inf_norm_A(p.graph));
}

double c_b(const ProblemInstance& p, double c, double alpha_2b) {
    const auto n = static_cast<double>(p.size());
    const double a = inf_norm_A(p.graph);
    return std::sqrt(n * alpha_2b * c * c + 2.0 * n * p.lambda * p.lambda * a * a);
}

bool lambda_admissible(const ProblemInstance& p) {
    try {
        return p.lambda > lambda_lower_bound(p);
    } catch (const ParameterError&) {
        return false;
    }
}

double floor_denominator(const ProblemInstance& p) {
    const double den = 2.0 * p.lambda * connectivity_weight(p.graph) -
                       subgradient_bound(p) * static_cast<double>(p.size());
    if (!(den > 0.0)) {
        throw ParameterError("lambda does not exceed the penalty threshold (2 lambda a_min - c n <= 0)");
    }
    return den;
}

double thm3_rhs_from(double ca, double alpha, std::uint64_t k, double d0) {
    if (k < 2) throw ParameterError("thm3_rhs: need k >= 2");
    if (!(alpha >= 0.5 && alpha <= 1.0)) throw ParameterError("thm3_rhs: alpha must lie in [0.5, 1]");
    const auto kd = static_cast<double>(k);
    if (alpha == 0.5) return (d0 * d0 + ca * ca * std::log(kd)) / (4.0 * std::sqrt(kd));
    const double s = alpha == 1.0 ? std::log(kd) : (std::pow(kd, 1.0 - alpha) - 1.0) / (1.0 - alpha);
    const double w = 2.0 * alpha - 1.0;
    return (w * d0 * d0 + 2.0 * alpha * ca * ca) / (2.0 * w * s);
}

double thm3_rhs(const ProblemInstance& p, double alpha, std::uint64_t k, double d0) {
    return thm3_rhs_from(c_a(p), alpha, k, d0);
}

double d_tilde(const ProblemInstance& p, double rho) {
    if (!(rho >= 0.0)) throw ParameterError("d_tilde: rho must be >= 0");
    const auto opt = optimal_set_oracle(p.locals);
    const double ca = c_a(p);
    const auto band = sublevel_interval(p.locals, opt, rho * ca * ca / 2.0);
    return std::max(nonneg(opt.lo - band.lower), nonneg(band.upper - opt.hi));
}

namespace {

double neighborhood_radius(const ProblemInstance& p, double rho, double spread_term) {
    const double ca = c_a(p);
    const double second = rho * ca * ca / floor_denominator(p);
    return 2.0 * std::sqrt(static_cast<double>(p.size())) * std::max(spread_term, second) + rho * ca;
}

}  // namespace

double thm4_rhs(const ProblemInstance& p, double rho) {
    if (!(rho > 0.0)) throw ParameterError("thm4_rhs: rho must be > 0");
    return neighborhood_radius(p, rho, d_tilde(p, rho));
}

double corollary1_rhs(const ProblemInstance& p, double rho, double gamma, double alpha) {
    if (!(rho > 0.0) || !(gamma > 0.0) || !(alpha >= 1.0)) {
        throw ParameterError("corollary1_rhs: need rho > 0, gamma > 0, alpha >= 1");
    }
    const double ca = c_a(p);
    return neighborhood_radius(p, rho, std::pow(rho * ca * ca / (2.0 * gamma), 1.0 / alpha));
}

double thm5_rhs(const ProblemInstance& p, double rho, std::uint64_t k, double d0) {
    if (k < 1) throw ParameterError("thm5_rhs: need k >= 1");
    if (!(rho > 0.0)) throw ParameterError("thm5_rhs: rho must be > 0");
    const double ca = c_a(p);
    return rho * ca * ca / 2.0 + d0 * d0 / (2.0 * rho * static_cast<double>(k));
}

BestConstantStep thm5_best_step(const ProblemInstance& p, std::uint64_t k, double d0) {
    if (k < 1) throw ParameterError("thm5_best_step: need k >= 1");
    const double ca = c_a(p);
    const double root = std::sqrt(static_cast<double>(k));
    return {d0 / (ca * root), ca * d0 / root};
}

double sigma_s(const WeightedGraph& g, const NoiseModel& noise) {
    if (noise.n != g.node_count()) throw ParameterError("sigma_s: noise model dimension mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        for (const auto& nb : g.neighbors(i)) total += nb.weight * noise.sigma_at(i, nb.node);
    }
    return 0.5 * total;
}

double thm7_rhs(const ProblemInstance& p, const NoiseModel& noise) {
    const double den = floor_denominator(p);
    return std::sqrt(2.0 / std::numbers::pi) * 2.0 * p.lambda * sigma_s(p.graph, noise) / den;
}

double thm1b_floor(const ProblemInstance& p) {
    return 2.0 * p.lambda * connectivity_weight(p.graph) / static_cast<double>(p.size()) -
           subgradient_bound(p);
}

double descent_residual(const ProblemInstance& p, std::span<const double> x,
                        std::span<const double> x_next, double rho, double x_star, double f_star,
                        double ca) {
    if (x.size() != p.size() || x_next.size() != p.size()) {
        throw ParameterError("descent_residual: dimension mismatch");
    }
    double before = 0.0;
    double after = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        before += (x[i] - x_star) * (x[i] - x_star);
        after += (x_next[i] - x_star) * (x_next[i] - x_star);
    }
    const double gap = eval_penalized(p, x) - f_star;
    return after - (before - 2.0 * rho * gap + rho * rho * ca * ca);
}

void BoundReport::add(std::uint64_t k, double lhs, double rhs) {
    entries.push_back({k, lhs, rhs, rhs - lhs});
}

void BoundReport::finalize() {
    pass = true;
    if (!applicable) return;
    for (const auto& e : entries) {
        if (!(e.margin >= -1e-9 * std::max(1.0, std::abs(e.rhs)))) pass = false;
    }
}

double BoundReport::min_margin() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& e : entries) m = std::min(m, e.margin);
    return m;
}

BoundReport check_floor(const ProblemInstance& p, std::span<const double> x) {
    if (x.size() != p.size()) throw ParameterError("check_floor: dimension mismatch");
    if (spread(x) == 0.0) throw ParameterError("check_floor: state is at consensus");
    BoundReport r;
    r.bound_name = "subgradient_floor";
    const auto g = subgrad_penalized(p, x);
    double norm = 0.0;
    for (const double gi : g) norm = std::max(norm, std::abs(gi));
    // Reported as floor <= ||g||_inf.
    r.add(0, thm1b_floor(p), norm);
    r.finalize();
    return r;
}

std::string to_string(BoundKind b) {
    switch (b) {
        case BoundKind::thm3:
            return "thm3";
        case BoundKind::thm4:
            return "thm4";
        case BoundKind::thm5:
            return "thm5";
        case BoundKind::thm7:
            return "thm7";
    }
    return "unknown";
}

BoundKind parse_bound(const std::string& name) {
    for (const auto b : {BoundKind::thm3, BoundKind::thm4, BoundKind::thm5, BoundKind::thm7}) {
        if (to_string(b) == name) return b;
    }
    throw ParameterError("unknown bound '" + name + "' (expected thm3, thm4, thm5 or thm7)");
}

namespace {

void require_metric(const RunRecord& r, const char* metric) {
    if (!r.optimum) {
        throw ParameterError(std::string("verify_run: missing metric ") + metric +
                             " (no optimal-set oracle for this problem)");
    }
}

BoundReport inapplicable(BoundReport r, std::string why) {
    r.applicable = false;
    r.note = std::move(why);
    r.finalize();
    return r;
}

}  // namespace

BoundReport verify_bound(const RunRecord& r, const ProblemInstance& p, const StepSchedule& schedule,
                         BoundKind bound, const NoiseModel* noise, double thm7_slack) {
    BoundReport report;
    report.bound_name = to_string(bound);
    if (r.recorded.size() <= 1) {
        report.note = "no steps to check";
        report.finalize();
        return report;
    }
    if (!lambda_admissible(p)) {
        return inapplicable(report, "lambda does not exceed the penalty threshold");
    }
    const double d0 = r.initial().d;
    switch (bound) {
        case BoundKind::thm3: {
            if (schedule.kind() != StepSchedule::Kind::power_law) {
                return inapplicable(report, "needs a power-law schedule");
            }
            require_metric(r, "min_gap");
            const double ca = c_a(p);
            for (const auto& s : r.recorded) {
                if (s.k < 2) continue;
                report.add(s.k, s.node_min_gap_late, thm3_rhs_from(ca, schedule.p0(), s.k, d0));
            }
            break;
        }
        case BoundKind::thm5: {
            if (schedule.kind() != StepSchedule::Kind::constant) {
                return inapplicable(report, "needs a constant schedule");
            }
            require_metric(r, "min_gap");
            for (const auto& s : r.recorded) {
                if (s.k < 1) continue;
                report.add(s.k, s.node_min_gap, thm5_rhs(p, schedule.p0(), s.k, d0));
            }
            break;
        }
        case BoundKind::thm4: {
            if (schedule.kind() != StepSchedule::Kind::constant) {
                return inapplicable(report, "needs a constant schedule");
            }
            require_metric(r, "d");
            report.add(r.steps, r.tail_max_d, thm4_rhs(p, schedule.p0()));
            report.note = "lhs is max d over the final " + std::to_string(r.tail_length) + " steps";
            break;
        }
        case BoundKind::thm7: {
            if (noise == nullptr) return inapplicable(report, "needs a noise model");
            const double rhs = thm7_rhs(p, *noise);
            report.add(r.final().k, r.final().v, rhs * (1.0 + thm7_slack));
            report.note = "rhs includes " + number(100.0 * thm7_slack) + "% slack over " + number(rhs);
            break;
        }
    }
    report.finalize();
    return report;
}

std::vector<BoundReport> verify_run(const RunRecord& r, const ProblemInstance& p,
                                    const StepSchedule& schedule,
                                    std::span<const BoundKind> bounds, const NoiseModel* noise) {
    std::vector<BoundReport> out;
    for (const auto b : bounds) out.push_back(verify_bound(r, p, schedule, b, noise));
    return out;
}

std::string to_json(std::span<const BoundReport> reports) {
    auto finite_or_null = [](double v) -> nlohmann::json {
        if (std::isfinite(v)) return v;
        return nullptr;
    };
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& r : reports) {
        nlohmann::json entries = nlohmann::json::array();
        for (const auto& e : r.entries) {
            entries.push_back({{"k", e.k},
                               {"lhs", finite_or_null(e.lhs)},
                               {"rhs", finite_or_null(e.rhs)},
                               {"margin", finite_or_null(e.margin)}});
        }
        doc.push_back({{"bound_name", r.bound_name},
                       {"applicable", r.applicable},
                       {"pass", r.pass},
                       {"note", r.note},
                       {"entries", entries}});
    }
    return doc.dump(2) + "\n";
}

std::string to_csv(std::span<const BoundReport> reports) {
    std::string out = "bound_name,k,lhs,rhs,margin,pass\n";
    for (const auto& r : reports) {
        const std::string flag = !r.applicable ? "inapplicable" : (r.pass ? "true" : "false");
        if (r.entries.empty()) {
            out += r.bound_name + ",,,,," + flag + "\n";
            continue;
        }
        const double tol_floor = -1e-9;
        for (const auto& e : r.entries) {
            const bool ok = e.margin >= tol_floor * std::max(1.0, std::abs(e.rhs));
            out += r.bound_name + "," + std::to_string(e.k) + "," + number(e.lhs) + "," +
                   number(e.rhs) + "," + number(e.margin) + "," +
                   (!r.applicable ? "inapplicable" : (ok ? "true" : "false")) + "\n";
        }
    }
    return out;
}

}  // namespace signopt

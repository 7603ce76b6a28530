#include "signopt/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "signopt/error.hpp"

namespace signopt {

namespace {

using nlohmann::json;

const json& require(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object() || !obj.contains(key)) throw ConfigError(path + key, "missing");
    return obj.at(key);
}

double as_number(const json& v, const std::string& field) {
    if (!v.is_number()) throw ConfigError(field, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(field, "must be finite");
    return d;
}

std::uint64_t as_count(const json& v, const std::string& field, std::uint64_t min = 0) {
    if (!v.is_number_integer() || v.get<long long>() < static_cast<long long>(min)) {
        throw ConfigError(field, "expected an integer >= " + std::to_string(min));
    }
    return v.get<std::uint64_t>();
}

std::vector<double> as_numbers(const json& v, const std::string& field) {
    if (!v.is_array()) throw ConfigError(field, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(as_number(v[i], field + "[" + std::to_string(i) + "]"));
    }
    return out;
}

// Runs a library call and blames `field` for any ParameterError it raises.
template <class F>
auto blame(const std::string& field, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ParameterError& e) {
        throw ConfigError(field, e.what());
    }
}

// Generator parameters given either inline ({"ring": 8, "weight": 2}) or as an
// object ({"ring": {"n": 8, "weight": 2}}).
struct GeneratorArgs {
    std::uint64_t n;
    const json* params;
    std::string prefix;
};

GeneratorArgs generator_args(const json& g, const std::string& kind, std::uint64_t min_n) {
    const auto& v = g[kind];
    if (v.is_object()) {
        const auto prefix = "graph." + kind + ".";
        return {as_count(require(v, "n", prefix), prefix + "n", min_n), &v, prefix};
    }
    return {as_count(v, "graph." + kind, min_n), &g, "graph."};
}

WeightedGraph parse_graph(const json& g) {
    if (!g.is_object()) throw ConfigError("graph", "expected an object");
    auto weight_of = [](const GeneratorArgs& a) {
        return a.params->contains("weight") ? as_number((*a.params)["weight"], a.prefix + "weight") : 1.0;
    };
    if (g.contains("ring")) {
        const auto a = generator_args(g, "ring", 3);
        return blame("graph", [&] { return ring_graph(a.n, weight_of(a)); });
    }
    if (g.contains("ring_random_weights")) {
        const auto a = generator_args(g, "ring_random_weights", 3);
        const auto seed = as_count(require(*a.params, "seed", a.prefix), a.prefix + "seed");
        return blame("graph", [&] { return ring_random_weights(a.n, seed); });
    }
    for (const char* kind : {"complete", "path", "star"}) {
        if (!g.contains(kind)) continue;
        const auto a = generator_args(g, kind, 1);
        const double w = weight_of(a);
        return blame("graph", [&] {
            if (std::string(kind) == "complete") return complete_graph(a.n, w);
            if (std::string(kind) == "path") return path_graph(a.n, w);
            return star_graph(a.n, w);
        });
    }
    const char* count_key = g.contains("nodes") ? "nodes" : "n";
    const auto n = as_count(require(g, count_key, "graph."), std::string("graph.") + count_key, 1);
    std::vector<Edge> edges;
    const auto& list = require(g, "edges", "graph.");
    if (!list.is_array()) throw ConfigError("graph.edges", "expected an array of [u, v, weight]");
    for (std::size_t e = 0; e < list.size(); ++e) {
        const auto field = "graph.edges[" + std::to_string(e) + "]";
        const auto& item = list[e];
        if (!item.is_array() || item.size() < 2 || item.size() > 3) {
            throw ConfigError(field, "expected [u, v] or [u, v, weight]");
        }
        const auto u = as_count(item[0], field);
        const auto v = as_count(item[1], field);
        const double w = item.size() == 3 ? as_number(item[2], field) : 1.0;
        edges.push_back({u, v, w});
    }
    return blame("graph.edges", [&] { return WeightedGraph(n, std::move(edges)); });
}

LocalObjective parse_local(const json& item, const std::string& field) {
    if (item.is_number()) return AbsDeviation{as_number(item, field)};
    if (!item.is_object()) throw ConfigError(field, "expected a number or an object");
    if (item.contains("abs")) {
        const auto& a = item["abs"];
        if (a.is_object()) return AbsDeviation{as_number(require(a, "s", field + ".abs."), field + ".abs.s")};
        return AbsDeviation{as_number(a, field + ".abs")};
    }
    if (item.contains("quantile")) {
        const auto& q = item["quantile"];
        const auto f = field + ".quantile.";
        Quantile out;
        out.alpha = as_number(require(q, "alpha", f), f + "alpha");
        out.y = as_number(require(q, "y", f), f + "y");
        out.s = q.contains("s") ? as_number(q["s"], f + "s") : 1.0;
        if (!(out.alpha >= 0.0 && out.alpha <= 1.0)) throw ConfigError(f + "alpha", "must lie in [0, 1]");
        return out;
    }
    if (item.contains("quadratic")) {
        const auto& q = item["quadratic"];
        const auto f = field + ".quadratic.";
        Quadratic out;
        out.a = q.contains("a") ? as_number(q["a"], f + "a") : 1.0;
        out.b = as_number(require(q, "b", f), f + "b");
        if (!(out.a > 0.0)) throw ConfigError(f + "a", "must be > 0");
        return out;
    }
    throw ConfigError(field, "expected one of abs, quantile, quadratic");
}

// Either a per-node list or a compact {"quantile": {"alpha", "y": [...], "s": [...]}} /
// {"abs": [...]} / {"quadratic": {"a": [...], "b": [...]}} form.
std::vector<LocalObjective> parse_locals(const json& l) {
    std::vector<LocalObjective> out;
    if (l.is_array()) {
        for (std::size_t i = 0; i < l.size(); ++i) {
            out.push_back(parse_local(l[i], "locals[" + std::to_string(i) + "]"));
        }
        return out;
    }
    if (!l.is_object()) throw ConfigError("locals", "expected an array or an object");
    if (l.contains("abs")) {
        for (const double s : as_numbers(l["abs"], "locals.abs")) out.push_back(AbsDeviation{s});
        return out;
    }
    if (l.contains("quantile")) {
        const auto& q = l["quantile"];
        const double alpha = as_number(require(q, "alpha", "locals.quantile."), "locals.quantile.alpha");
        if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("locals.quantile.alpha", "must lie in [0, 1]");
        const auto y = as_numbers(require(q, "y", "locals.quantile."), "locals.quantile.y");
        std::vector<double> s(y.size(), 1.0);
        if (q.contains("s")) s = as_numbers(q["s"], "locals.quantile.s");
        if (s.size() != y.size()) throw ConfigError("locals.quantile.s", "length differs from y");
        for (std::size_t i = 0; i < y.size(); ++i) out.push_back(Quantile{alpha, y[i], s[i]});
        return out;
    }
    if (l.contains("quadratic")) {
        const auto& q = l["quadratic"];
        const auto b = as_numbers(require(q, "b", "locals.quadratic."), "locals.quadratic.b");
        std::vector<double> a(b.size(), 1.0);
        if (q.contains("a")) a = as_numbers(q["a"], "locals.quadratic.a");
        if (a.size() != b.size()) throw ConfigError("locals.quadratic.a", "length differs from b");
        for (std::size_t i = 0; i < b.size(); ++i) {
            if (!(a[i] > 0.0)) throw ConfigError("locals.quadratic.a", "must be > 0");
            out.push_back(Quadratic{a[i], b[i]});
        }
        return out;
    }
    throw ConfigError("locals", "expected one of abs, quantile, quadratic");
}

Algorithm parse_algorithm(const json& a) {
    if (!a.is_string()) throw ConfigError("algorithm", "expected a string");
    const auto s = a.get<std::string>();
    for (const auto alg : {Algorithm::algo1, Algorithm::algo2, Algorithm::algo3, Algorithm::dgd}) {
        if (to_string(alg) == s) return alg;
    }
    throw ConfigError("algorithm", "unknown algorithm '" + s + "' (expected algo1, algo2, algo3 or dgd)");
}

StepSchedule parse_schedule(const json& s) {
    if (!s.is_object() || s.size() != 1) {
        throw ConfigError("schedule", "expected exactly one of power, constant, affine");
    }
    if (s.contains("power")) {
        const double a = as_number(s["power"], "schedule.power");
        return blame("schedule.power", [&] { return StepSchedule::power_law(a); });
    }
    if (s.contains("constant")) {
        const double r = as_number(s["constant"], "schedule.constant");
        return blame("schedule.constant", [&] { return StepSchedule::constant(r); });
    }
    if (s.contains("affine")) {
        const auto ab = as_numbers(s["affine"], "schedule.affine");
        if (ab.size() != 2) throw ConfigError("schedule.affine", "expected [a, b]");
        return blame("schedule.affine", [&] { return StepSchedule::affine_reciprocal(ab[0], ab[1]); });
    }
    throw ConfigError("schedule", "expected exactly one of power, constant, affine");
}

State spread_state(std::size_t n, double lo, double hi) {
    State x(n, lo);
    if (n > 1) {
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        }
    }
    return x;
}

State parse_x0(const json& doc, const std::vector<LocalObjective>& locals) {
    const auto n = locals.size();
    if (!doc.contains("x0")) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (const auto& o : locals) {
            const double m = local_minimizer(o);
            lo = std::min(lo, m);
            hi = std::max(hi, m);
        }
        return spread_state(n, lo, hi);
    }
    const auto& x = doc["x0"];
    State out;
    if (x.is_array()) {
        out = as_numbers(x, "x0");
    } else if (x.is_object() && x.contains("zeros")) {
        out.assign(as_count(x["zeros"], "x0.zeros"), 0.0);
    } else if (x.is_object() && x.contains("spread")) {
        const auto r = as_numbers(x["spread"], "x0.spread");
        if (r.size() != 2) throw ConfigError("x0.spread", "expected [lo, hi]");
        out = spread_state(n, r[0], r[1]);
    } else {
        throw ConfigError("x0", "expected a list, {\"zeros\": n} or {\"spread\": [lo, hi]}");
    }
    if (out.size() != n) {
        throw ConfigError("x0", "has " + std::to_string(out.size()) + " entries for " +
                                    std::to_string(n) + " nodes");
    }
    return out;
}

bool all_quadratic(const std::vector<LocalObjective>& locals) {
    return std::all_of(locals.begin(), locals.end(), [](const LocalObjective& o) {
        return std::holds_alternative<Quadratic>(o);
    });
}

std::optional<double> threshold_for(const WeightedGraph& g, const std::vector<LocalObjective>& locals) {
    try {
        const double c = all_quadratic(locals) ? c_star_estimate(locals) : subgradient_bound(locals);
        return lambda_lower_bound(g, locals.size(), c);
    } catch (const ParameterError&) {
        return std::nullopt;
    }
}

}  // namespace

RunConfig parse_config(const json& doc) {
    if (!doc.is_object()) throw ConfigError("config", "expected a JSON object");
    RunConfig cfg;
    cfg.source = doc;
    if (doc.contains("name")) {
        if (!doc["name"].is_string()) throw ConfigError("name", "expected a string");
        cfg.name = doc["name"].get<std::string>();
    }
    cfg.algorithm = doc.contains("algorithm") ? parse_algorithm(doc["algorithm"]) : Algorithm::algo1;
    auto graph = parse_graph(require(doc, "graph", ""));
    auto locals = parse_locals(require(doc, "locals", ""));
    if (locals.size() != graph.node_count()) {
        throw ConfigError("locals", "has " + std::to_string(locals.size()) + " entries for " +
                                        std::to_string(graph.node_count()) + " nodes");
    }
    const bool needs_connected = cfg.algorithm == Algorithm::algo1 || cfg.algorithm == Algorithm::algo2;
    if (needs_connected && !graph.is_connected()) {
        throw ConfigError("graph", "is disconnected; " + to_string(cfg.algorithm) +
                                       " needs a connected graph");
    }

    if (doc.contains("strict")) {
        if (!doc["strict"].is_boolean()) throw ConfigError("strict", "expected true or false");
        cfg.strict = doc["strict"].get<bool>();
    }
    cfg.schedule = parse_schedule(require(doc, "schedule", ""));
    cfg.steps = as_count(require(doc, "steps", ""), "steps", 1);
    if (doc.contains("record_stride")) cfg.record_stride = as_count(doc["record_stride"], "record_stride", 1);
    cfg.x0 = parse_x0(doc, locals);

    if (cfg.algorithm == Algorithm::algo2) {
        const auto& nz = require(doc, "noise", "");
        const auto seed = as_count(require(nz, "seed", "noise."), "noise.seed");
        const auto& sigma = require(nz, "sigma", "noise.");
        cfg.noise = blame("noise.sigma", [&] {
            if (sigma.is_array()) return NoiseModel::per_edge(graph, as_numbers(sigma, "noise.sigma"), seed);
            return NoiseModel::uniform(graph, as_number(sigma, "noise.sigma"), seed);
        });
    }
    WeightedGraph threshold_graph = graph;
    if (cfg.algorithm == Algorithm::algo3) {
        const auto& act = require(doc, "activation", "");
        const auto seed = as_count(require(act, "seed", "activation."), "activation.seed");
        const auto& p = act.contains("p") ? act["p"] : json("from_weights");
        cfg.activation = blame("activation.p", [&] {
            if (p.is_string() && p.get<std::string>() == "from_weights") {
                return ActivationMatrix::from_weights(graph, seed);
            }
            if (!p.is_array()) throw ConfigError("activation.p", "expected \"from_weights\" or per-edge list");
            return ActivationMatrix::per_edge(graph, as_numbers(p, "activation.p"), seed);
        });
        threshold_graph = cfg.activation->mean_graph();
        if (!threshold_graph.is_connected()) {
            throw ConfigError("activation.p", "mean graph of the activation probabilities is disconnected");
        }
    }
    cfg.lambda_threshold = threshold_for(threshold_graph, locals);

    const auto& lam = require(doc, "lambda", "");
    double lambda = 0.0;
    if (lam.is_string() && lam.get<std::string>() == "auto") {
        if (!cfg.lambda_threshold) throw ConfigError("lambda", "\"auto\" needs a computable threshold");
        lambda = 1.05 * *cfg.lambda_threshold;
    } else if (lam.is_string()) {
        throw ConfigError("lambda", "expected a number or \"auto\"");
    } else {
        lambda = as_number(lam, "lambda");
        if (lambda < 0.0) throw ConfigError("lambda", "must be >= 0");
    }
    if (cfg.strict && cfg.algorithm != Algorithm::dgd) {
        if (!cfg.lambda_threshold) throw ConfigError("lambda", "strict mode needs a computable threshold");
        if (!(lambda > *cfg.lambda_threshold)) {
            std::ostringstream msg;
            msg << "strict mode requires lambda > " << *cfg.lambda_threshold << ", got " << lambda;
            throw ConfigError("lambda", msg.str());
        }
    }
    cfg.problem = blame("locals", [&] { return ProblemInstance(graph, locals, lambda); });

    if (doc.contains("bounds")) {
        const auto& b = doc["bounds"];
        if (!b.is_array()) throw ConfigError("bounds", "expected a list of bound names");
        for (std::size_t i = 0; i < b.size(); ++i) {
            const auto field = "bounds[" + std::to_string(i) + "]";
            if (!b[i].is_string()) throw ConfigError(field, "expected a string");
            cfg.bounds.push_back(blame(field, [&] { return parse_bound(b[i].get<std::string>()); }));
        }
    }
    if (doc.contains("outputs")) {
        const auto& o = doc["outputs"];
        if (!o.is_object()) throw ConfigError("outputs", "expected an object");
        for (const auto& [key, target] :
             {std::pair{"csv", &cfg.outputs.csv}, {"svg", &cfg.outputs.svg}, {"report", &cfg.outputs.report}}) {
            if (!o.contains(key)) continue;
            if (!o[key].is_string()) throw ConfigError(std::string("outputs.") + key, "expected a path");
            *target = o[key].get<std::string>();
        }
        if (o.contains("width")) cfg.outputs.width = static_cast<int>(as_count(o["width"], "outputs.width", 64));
        if (o.contains("height")) cfg.outputs.height = static_cast<int>(as_count(o["height"], "outputs.height", 64));
    }
    return cfg;
}

nlohmann::json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open " + path.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config", std::string("invalid JSON: ") + e.what());
    }
}

RunConfig load_config(const std::filesystem::path& path) { return parse_config(read_json(path)); }

Engine make_engine(const RunConfig& cfg) {
    switch (cfg.algorithm) {
        case Algorithm::algo1:
            return Engine::algo1(cfg.problem);
        case Algorithm::algo2:
            return Engine::algo2(cfg.problem, *cfg.noise);
        case Algorithm::algo3:
            return Engine::algo3(cfg.problem, *cfg.activation);
        case Algorithm::dgd:
            return Engine::dgd(cfg.problem);
    }
    return Engine::algo1(cfg.problem);
}

std::uint64_t run_seed(const RunConfig& cfg) {
    if (cfg.noise) return cfg.noise->seed;
    if (cfg.activation) return cfg.activation->seed;
    return 0;
}

}  // namespace signopt

#include "signopt/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <set>
#include <string>
#include <utility>

#include "signopt/error.hpp"
#include "signopt/stochastic.hpp"

namespace signopt {

WeightedGraph::WeightedGraph(std::size_t n, std::vector<Edge> edges)
    : n_(n), edges_(std::move(edges)), adjacency_(n) {
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        auto& edge = edges_[e];
        if (edge.u >= n_ || edge.v >= n_) {
            throw ParameterError("edge " + std::to_string(e) + " references a node outside 0.." +
                                 std::to_string(n_ == 0 ? 0 : n_ - 1));
        }
        if (edge.u == edge.v) {
            throw ParameterError("self-loop at node " + std::to_string(edge.u));
        }
        if (!(edge.weight > 0.0) || !std::isfinite(edge.weight)) {
            throw ParameterError("edge weight must be positive and finite");
        }
        if (edge.u > edge.v) std::swap(edge.u, edge.v);
        if (!seen.emplace(edge.u, edge.v).second) {
            throw ParameterError("duplicate edge (" + std::to_string(edge.u) + ", " +
                                 std::to_string(edge.v) + ")");
        }
        adjacency_[edge.u].push_back({edge.v, edge.weight, e});
        adjacency_[edge.v].push_back({edge.u, edge.weight, e});
    }
    for (auto& list : adjacency_) {
        std::sort(list.begin(), list.end(),
                  [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
    }
}

double WeightedGraph::weight(std::size_t i, std::size_t j) const {
    for (const auto& nb : adjacency_.at(i)) {
        if (nb.node == j) return nb.weight;
    }
    return 0.0;
}

std::vector<double> WeightedGraph::adjacency_matrix() const {
    std::vector<double> a(n_ * n_, 0.0);
    for (const auto& e : edges_) {
        a[e.u * n_ + e.v] = e.weight;
        a[e.v * n_ + e.u] = e.weight;
    }
    return a;
}

bool WeightedGraph::is_connected() const {
    if (n_ <= 1) return true;
    std::vector<bool> visited(n_, false);
    std::vector<std::size_t> stack{0};
    visited[0] = true;
    std::size_t count = 1;
    while (!stack.empty()) {
        const auto u = stack.back();
        stack.pop_back();
        for (const auto& nb : adjacency_[u]) {
            if (!visited[nb.node]) {
                visited[nb.node] = true;
                ++count;
                stack.push_back(nb.node);
            }
        }
    }
    return count == n_;
}

WeightedGraph WeightedGraph::scaled(double factor) const {
    auto edges = edges_;
    for (auto& e : edges) e.weight *= factor;
    return WeightedGraph(n_, std::move(edges));
}

WeightedGraph WeightedGraph::reweighted(std::span<const double> weights) const {
    if (weights.size() != edges_.size()) {
        throw ParameterError("reweighted: expected " + std::to_string(edges_.size()) +
                             " weights, got " + std::to_string(weights.size()));
    }
    auto edges = edges_;
    for (std::size_t e = 0; e < edges.size(); ++e) edges[e].weight = weights[e];
    return WeightedGraph(n_, std::move(edges));
}

WeightedGraph WeightedGraph::without_edge(std::size_t edge_index) const {
    auto edges = edges_;
    edges.erase(edges.begin() + static_cast<std::ptrdiff_t>(edge_index));
    return WeightedGraph(n_, std::move(edges));
}

std::vector<double> IncidenceMatrix::transpose_times(std::span<const double> x) const {
    if (x.size() != rows) throw ParameterError("incidence: dimension mismatch");
    std::vector<double> out(cols);
    for (std::size_t e = 0; e < cols; ++e) out[e] = x[source[e]] - x[sink[e]];
    return out;
}

namespace {

// Residual network for an undirected unit-capacity graph: each edge becomes a
// pair of opposite arcs, each with capacity 1, that are residuals of each other.
struct FlowNetwork {
    struct Arc {
        std::size_t to;
        int capacity;
    };
    std::vector<Arc> arcs;
    std::vector<std::vector<std::size_t>> out;

    explicit FlowNetwork(const WeightedGraph& g) : out(g.node_count()) {
        for (const auto& e : g.edges()) {
            out[e.u].push_back(arcs.size());
            arcs.push_back({e.v, 1});
            out[e.v].push_back(arcs.size());
            arcs.push_back({e.u, 1});
        }
    }

    std::size_t max_flow(std::size_t s, std::size_t t) {
        constexpr auto none = std::numeric_limits<std::size_t>::max();
        std::size_t flow = 0;
        std::vector<std::size_t> via(out.size());
        while (true) {
            std::fill(via.begin(), via.end(), none);
            std::queue<std::size_t> frontier;
            frontier.push(s);
            std::vector<bool> seen(out.size(), false);
            seen[s] = true;
            while (!frontier.empty() && !seen[t]) {
                const auto u = frontier.front();
                frontier.pop();
                for (const auto a : out[u]) {
                    const auto& arc = arcs[a];
                    if (arc.capacity > 0 && !seen[arc.to]) {
                        seen[arc.to] = true;
                        via[arc.to] = a;
                        frontier.push(arc.to);
                    }
                }
            }
            if (!seen[t]) return flow;
            for (auto v = t; v != s;) {
                const auto a = via[v];
                arcs[a].capacity -= 1;
                arcs[a ^ 1U].capacity += 1;
                v = arcs[a ^ 1U].to;
            }
            ++flow;
        }
    }
};

}  // namespace

std::size_t edge_disjoint_paths(const WeightedGraph& g, std::size_t s, std::size_t t) {
    if (s >= g.node_count() || t >= g.node_count() || s == t) {
        throw ParameterError("edge_disjoint_paths: need two distinct nodes in range");
    }
    FlowNetwork net(g);
    return net.max_flow(s, t);
}

std::size_t edge_connectivity(const WeightedGraph& g) {
    const auto n = g.node_count();
    if (n <= 1) return n;
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (std::size_t t = 1; t < n; ++t) {
        best = std::min(best, edge_disjoint_paths(g, 0, t));
        if (best == 0) break;
    }
    return best;
}

double a_min_l(const WeightedGraph& g, std::size_t l) {
    const auto m = g.edge_count();
    if (l < 1 || l > m) {
        throw ParameterError("a_min_l: l = " + std::to_string(l) + " outside [1, " +
                             std::to_string(m) + "]");
    }
    std::vector<double> w;
    w.reserve(m);
    for (const auto& e : g.edges()) w.push_back(e.weight);
    std::partial_sort(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(l), w.end());
    return std::accumulate(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(l), 0.0);
}

double inf_norm_A(const WeightedGraph& g) {
    double best = 0.0;
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        double deg = 0.0;
        for (const auto& nb : g.neighbors(i)) deg += nb.weight;
        best = std::max(best, deg);
    }
    return best;
}

IncidenceMatrix incidence(const WeightedGraph& g) {
    IncidenceMatrix b;
    b.rows = g.node_count();
    b.cols = g.edge_count();
    b.entries.assign(b.rows * b.cols, 0);
    for (std::size_t e = 0; e < b.cols; ++e) {
        const auto& edge = g.edges()[e];
        b.source.push_back(edge.u);
        b.sink.push_back(edge.v);
        b.entries[edge.u * b.cols + e] = 1;
        b.entries[edge.v * b.cols + e] = -1;
    }
    return b;
}

WeightedGraph ring_graph(std::size_t n, double weight) {
    if (n < 3) throw ParameterError("ring_graph: need n >= 3");
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, weight});
    return WeightedGraph(n, std::move(edges));
}

WeightedGraph ring_random_weights(std::size_t n, std::uint64_t seed) {
    auto g = ring_graph(n, 1.0);
    std::vector<double> w(g.edge_count());
    for (std::size_t e = 0; e < w.size(); ++e) {
        w[e] = uniform_open_closed(seed, Stream::graph_weights, 0, static_cast<std::uint32_t>(e), 0);
    }
    return g.reweighted(w);
}

WeightedGraph path_graph(std::size_t n, double weight) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, weight});
    return WeightedGraph(n, std::move(edges));
}

WeightedGraph star_graph(std::size_t n, double weight) {
    std::vector<Edge> edges;
    for (std::size_t i = 1; i < n; ++i) edges.push_back({0, i, weight});
    return WeightedGraph(n, std::move(edges));
}

WeightedGraph complete_graph(std::size_t n, double weight) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) edges.push_back({i, j, weight});
    }
    return WeightedGraph(n, std::move(edges));
}

}  // namespace signopt

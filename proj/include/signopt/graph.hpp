#ifndef SIGNOPT_GRAPH_HPP
#define SIGNOPT_GRAPH_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace signopt {

using State = std::vector<double>;

struct Edge {
    std::size_t u;  // u < v
    std::size_t v;
    double weight;
};

struct Neighbor {
    std::size_t node;
    double weight;
    std::size_t edge;  // index into the edge list
};

// Undirected weighted graph on nodes 0..n-1. Immutable after construction.
//
// Edges are normalized to (min, max) orientation and kept in the order
// given. Adjacency lists are sorted by neighbor index so every per-node
// reduction visits neighbors in the same order.
class WeightedGraph {
public:
    WeightedGraph() = default;
    WeightedGraph(std::size_t n, std::vector<Edge> edges);

    std::size_t node_count() const noexcept { return n_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const std::vector<Neighbor>& neighbors(std::size_t i) const { return adjacency_.at(i); }

    // Dense weight a_ij (0 when no edge).
    double weight(std::size_t i, std::size_t j) const;
    std::vector<double> adjacency_matrix() const;  // row-major n*n

    bool is_connected() const;

    // Same topology with every weight multiplied by `factor`.
    WeightedGraph scaled(double factor) const;
    // Same topology with per-edge weights replaced (aligned with edges()).
    WeightedGraph reweighted(std::span<const double> weights) const;
    WeightedGraph without_edge(std::size_t edge_index) const;

private:
    std::size_t n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<Neighbor>> adjacency_;
};

// Node-by-edge incidence matrix with entries in {-1, 0, +1}, row-major n*m.
struct IncidenceMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<int> entries;
    std::vector<std::size_t> source;  // per column
    std::vector<std::size_t> sink;

    int at(std::size_t i, std::size_t e) const { return entries[i * cols + e]; }
    // (B^T x)_e = x_source(e) - x_sink(e)
    std::vector<double> transpose_times(std::span<const double> x) const;
};

// Global edge connectivity, ignoring weights. 0 for a disconnected graph;
// a single-node graph returns n (= 1) as its "infinite" sentinel.
std::size_t edge_connectivity(const WeightedGraph& g);

// Number of edge-disjoint s-t paths (unit-capacity max-flow).
std::size_t edge_disjoint_paths(const WeightedGraph& g, std::size_t s, std::size_t t);

// Sum of the l smallest edge weights; requires 1 <= l <= m.
double a_min_l(const WeightedGraph& g, std::size_t l);

// max_i sum_j a_ij
double inf_norm_A(const WeightedGraph& g);

// Orientation: source = smaller node index; column order = edge-list order.
IncidenceMatrix incidence(const WeightedGraph& g);

// Generators.
WeightedGraph ring_graph(std::size_t n, double weight = 1.0);
WeightedGraph ring_random_weights(std::size_t n, std::uint64_t seed);
WeightedGraph path_graph(std::size_t n, double weight = 1.0);
WeightedGraph star_graph(std::size_t n, double weight = 1.0);
WeightedGraph complete_graph(std::size_t n, double weight = 1.0);

}  // namespace signopt

#endif  // SIGNOPT_GRAPH_HPP

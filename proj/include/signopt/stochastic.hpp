#ifndef SIGNOPT_STOCHASTIC_HPP
#define SIGNOPT_STOCHASTIC_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "signopt/graph.hpp"

namespace signopt {

// Philox4x32-10 counter-based generator. Stateless: every output block is a
// pure function of (counter, key), so draws keyed on (seed, k, i, j) do not
// depend on evaluation order or thread count.
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

// Distinct streams so that draws for different purposes never collide.
enum class Stream : std::uint32_t {
    noise = 0x6e6f6973u,
    activation = 0x61637476u,
    graph_weights = 0x67726170u,
    sample_data = 0x64617461u,
    monte_carlo = 0x6d636172u,
};

// Keyed draws. `a`, `b` are caller-chosen coordinates (node indices, sample
// indices, ...).
double uniform_open_closed(std::uint64_t seed, Stream stream, std::uint64_t k,
                           std::uint32_t a, std::uint32_t b);  // (0, 1]
double standard_normal(std::uint64_t seed, Stream stream, std::uint64_t k,
                       std::uint32_t a, std::uint32_t b);

// Per-edge Gaussian noise eps_ij ~ N(0, sigma_ij^2). One independent draw per
// ordered pair and step. sigma is dense row-major n*n and symmetric.
struct NoiseModel {
    std::size_t n = 0;
    std::vector<double> sigma;
    std::uint64_t seed = 0;

    double sigma_at(std::size_t i, std::size_t j) const { return sigma[i * n + j]; }
    double draw(std::uint64_t k, std::size_t i, std::size_t j) const;

    static NoiseModel uniform(const WeightedGraph& g, double sigma, std::uint64_t seed);
    static NoiseModel per_edge(const WeightedGraph& g, const std::vector<double>& sigma,
                               std::uint64_t seed);
};

// Bernoulli edge activation with probabilities p_ij. One draw per unordered
// pair and step, so the active set is symmetric.
struct ActivationMatrix {
    std::size_t n = 0;
    std::vector<double> p;  // dense row-major n*n, symmetric, zero diagonal
    std::uint64_t seed = 0;

    double p_at(std::size_t i, std::size_t j) const { return p[i * n + j]; }
    bool active(std::uint64_t k, std::size_t i, std::size_t j) const;

    // Mean graph G_P: edges where p_ij > 0, weighted by p_ij.
    WeightedGraph mean_graph() const;

    static ActivationMatrix from_weights(const WeightedGraph& g, std::uint64_t seed);
    static ActivationMatrix per_edge(const WeightedGraph& g, const std::vector<double>& p,
                                     std::uint64_t seed);
};

// Dense n*n realization for step k: entry (i,j) holds eps_ij (0 where sigma_ij = 0).
std::vector<double> sample_noise(const NoiseModel& m, std::uint64_t k);

// Active unordered pairs (i < j) at step k.
std::vector<std::pair<std::size_t, std::size_t>> sample_activation(const ActivationMatrix& a,
                                                                   std::uint64_t k);

// Standard normal CDF. Uses std::erfc, which is accurate to a few ulp over
// the whole real line (absolute error far below 1e-12).
double normal_cdf(double z);

// E|X| for X ~ N(mu, sigma^2); |mu| when sigma = 0.
double folded_normal_mean(double mu, double sigma);

}  // namespace signopt

#endif  // SIGNOPT_STOCHASTIC_HPP

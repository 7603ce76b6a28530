#include "signopt/stochastic.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "signopt/error.hpp"

namespace signopt {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(product >> 32);
    lo = static_cast<std::uint32_t>(product);
}

inline PhiloxCounter philox_round(const PhiloxCounter& c, const PhiloxKey& key) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, c[0], hi0, lo0);
    mulhilo(kPhiloxM1, c[2], hi1, lo1);
    return {hi1 ^ c[1] ^ key[0], lo1, hi0 ^ c[3] ^ key[1], lo0};
}

PhiloxCounter block(std::uint64_t seed, Stream stream, std::uint64_t k, std::uint32_t a,
                    std::uint32_t b) {
    // Step indices beyond 2^32 fold their high word into the stream slot.
    const auto k_hi = static_cast<std::uint32_t>(k >> 32);
    const PhiloxCounter counter{static_cast<std::uint32_t>(k),
                                static_cast<std::uint32_t>(stream) ^ (k_hi * kPhiloxW1), a, b};
    const PhiloxKey key{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    return philox4x32_10(counter, key);
}

// 53 random bits mapped to (0, 1].
inline double to_open_closed(std::uint32_t w0, std::uint32_t w1) {
    const std::uint64_t bits = ((static_cast<std::uint64_t>(w0) << 32) | w1) >> 11;
    return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
}

void check_square(std::size_t n, std::size_t size, const char* what) {
    if (size != n * n) {
        throw ParameterError(std::string(what) + ": expected an n*n matrix");
    }
}

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key) {
    counter = philox_round(counter, key);
    for (int r = 1; r < 10; ++r) {
        key[0] += kPhiloxW0;
        key[1] += kPhiloxW1;
        counter = philox_round(counter, key);
    }
    return counter;
}

double uniform_open_closed(std::uint64_t seed, Stream stream, std::uint64_t k, std::uint32_t a,
                           std::uint32_t b) {
    const auto r = block(seed, stream, k, a, b);
    return to_open_closed(r[0], r[1]);
}

double standard_normal(std::uint64_t seed, Stream stream, std::uint64_t k, std::uint32_t a,
                       std::uint32_t b) {
    // Box-Muller on the two halves of one Philox block.
    const auto r = block(seed, stream, k, a, b);
    const double u1 = to_open_closed(r[0], r[1]);
    const double u2 = to_open_closed(r[2], r[3]);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double NoiseModel::draw(std::uint64_t k, std::size_t i, std::size_t j) const {
    const double s = sigma_at(i, j);
    if (s == 0.0) return 0.0;
    return s * standard_normal(seed, Stream::noise, k, static_cast<std::uint32_t>(i),
                               static_cast<std::uint32_t>(j));
}

NoiseModel NoiseModel::uniform(const WeightedGraph& g, double sigma, std::uint64_t seed) {
    if (!(sigma >= 0.0)) throw ParameterError("noise sigma must be >= 0");
    std::vector<double> per_edge_sigma(g.edge_count(), sigma);
    return per_edge(g, per_edge_sigma, seed);
}

NoiseModel NoiseModel::per_edge(const WeightedGraph& g, const std::vector<double>& sigma,
                                std::uint64_t seed) {
    if (sigma.size() != g.edge_count()) {
        throw ParameterError("noise sigma: expected one value per edge");
    }
    NoiseModel m;
    m.n = g.node_count();
    m.sigma.assign(m.n * m.n, 0.0);
    m.seed = seed;
    for (std::size_t e = 0; e < sigma.size(); ++e) {
        if (!(sigma[e] >= 0.0)) throw ParameterError("noise sigma must be >= 0");
        const auto& edge = g.edges()[e];
        m.sigma[edge.u * m.n + edge.v] = sigma[e];
        m.sigma[edge.v * m.n + edge.u] = sigma[e];
    }
    return m;
}

bool ActivationMatrix::active(std::uint64_t k, std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    const double prob = p_at(i, j);
    if (prob <= 0.0) return false;
    if (prob >= 1.0) return true;
    const double u = uniform_open_closed(seed, Stream::activation, k, static_cast<std::uint32_t>(i),
                                         static_cast<std::uint32_t>(j));
    return u <= prob;
}

WeightedGraph ActivationMatrix::mean_graph() const {
    check_square(n, p.size(), "activation");
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (p_at(i, j) > 0.0) edges.push_back({i, j, p_at(i, j)});
        }
    }
    return WeightedGraph(n, std::move(edges));
}

ActivationMatrix ActivationMatrix::from_weights(const WeightedGraph& g, std::uint64_t seed) {
    std::vector<double> p;
    for (const auto& e : g.edges()) p.push_back(e.weight);
    return per_edge(g, p, seed);
}

ActivationMatrix ActivationMatrix::per_edge(const WeightedGraph& g, const std::vector<double>& p,
                                            std::uint64_t seed) {
    if (p.size() != g.edge_count()) {
        throw ParameterError("activation p: expected one value per edge");
    }
    ActivationMatrix a;
    a.n = g.node_count();
    a.p.assign(a.n * a.n, 0.0);
    a.seed = seed;
    for (std::size_t e = 0; e < p.size(); ++e) {
        if (!(p[e] >= 0.0 && p[e] <= 1.0)) {
            throw ParameterError("activation probability outside [0, 1] on edge " +
                                 std::to_string(e));
        }
        const auto& edge = g.edges()[e];
        a.p[edge.u * a.n + edge.v] = p[e];
        a.p[edge.v * a.n + edge.u] = p[e];
    }
    return a;
}

std::vector<double> sample_noise(const NoiseModel& m, std::uint64_t k) {
    check_square(m.n, m.sigma.size(), "noise");
    std::vector<double> eps(m.n * m.n, 0.0);
    for (std::size_t i = 0; i < m.n; ++i) {
        for (std::size_t j = 0; j < m.n; ++j) {
            if (i != j) eps[i * m.n + j] = m.draw(k, i, j);
        }
    }
    return eps;
}

std::vector<std::pair<std::size_t, std::size_t>> sample_activation(const ActivationMatrix& a,
                                                                   std::uint64_t k) {
    check_square(a.n, a.p.size(), "activation");
    std::vector<std::pair<std::size_t, std::size_t>> on;
    for (std::size_t i = 0; i < a.n; ++i) {
        for (std::size_t j = i + 1; j < a.n; ++j) {
            if (a.active(k, i, j)) on.emplace_back(i, j);
        }
    }
    return on;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double folded_normal_mean(double mu, double sigma) {
    if (!(sigma >= 0.0)) throw ParameterError("folded_normal_mean: sigma must be >= 0");
    if (sigma == 0.0) return std::abs(mu);
    // 1 - 2*Phi(-mu/sigma) == erf(mu / (sigma*sqrt2)); erf avoids cancellation.
    const double z = mu / sigma;
    return mu * std::erf(z / std::numbers::sqrt2) +
           sigma * std::sqrt(2.0 / std::numbers::pi) * std::exp(-0.5 * z * z);
}

}  // namespace signopt

#include "signopt/presets.hpp"

#include "signopt/config.hpp"
#include "signopt/stochastic.hpp"

namespace signopt {

using nlohmann::json;

const std::vector<double> kMedianData = {4.45, 14.99, 24.28, 26.21, 44.24, 58.61, 68.78, 75.49};

std::vector<RegressionSample> regression_samples(std::size_t count, std::uint64_t seed) {
    std::vector<RegressionSample> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const auto idx = static_cast<std::uint32_t>(i);
        // (0, 1] draws mapped onto [0.5, 1.5) and [-5, 5).
        const double s = 1.5 - uniform_open_closed(seed, Stream::sample_data, 0, idx, 0);
        const double noise = 5.0 - 10.0 * uniform_open_closed(seed, Stream::sample_data, 0, idx, 1);
        out.push_back({2.0 * s + noise, s});
    }
    return out;
}

namespace {

constexpr std::uint64_t kSampleSeed = 42;
constexpr std::uint64_t kWeightSeed = 42;
constexpr std::uint64_t kDefaultRunSeed = 1;

json ring8_median(double alpha) {
    return {{"graph", {{"ring", {{"n", 8}, {"weight", 1.0}}}}}, {"locals", {{"quantile", {{"alpha", alpha}, {"y", kMedianData}}}}}};
}

json with(json base, const json& extra) {
    base.update(extra);
    return base;
}

std::string fmt(double v) {
    std::string s = std::to_string(v);
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
}

std::vector<PresetRun> fig3() {
    std::vector<PresetRun> runs;
    for (const double lambda : {0.95, 1.05, 10.0}) {
        runs.push_back({"fig3_lambda" + fmt(lambda),
                        with(ring8_median(0.5), {{"name", "fig3 lambda=" + fmt(lambda)},
                                                 {"algorithm", "algo1"},
                                                 {"lambda", lambda},
                                                 {"schedule", {{"affine", {100.0, 10.0}}}},
                                                 {"steps", 100000},
                                                 {"record_stride", 100}})});
    }
    return runs;
}

std::vector<PresetRun> fig4() {
    const json base = with(ring8_median(0.5), {{"algorithm", "algo1"}, {"lambda", 2.0},
                                               {"steps", 100000}, {"record_stride", 100}});
    return {
        {"fig4_4overk", with(base, {{"name", "fig4 rho=4/k"}, {"schedule", {{"affine", {4.0, 0.0}}}}})},
        {"fig4_invsqrt",
         with(base, {{"name", "fig4 rho=1/sqrt(k)"}, {"schedule", {{"power", 0.5}}}, {"bounds", {"thm3"}}})},
        {"fig4_constant", with(base, {{"name", "fig4 rho=0.01"},
                                      {"schedule", {{"constant", 0.01}}},
                                      {"bounds", {"thm4", "thm5"}}})},
    };
}

std::vector<PresetRun> fig5(std::uint64_t seed) {
    const json base = with(ring8_median(0.4), {{"lambda", 2.0},
                                               {"schedule", {{"affine", {40.0, 20.0}}}},
                                               {"steps", 100000},
                                               {"record_stride", 100}});
    return {
        {"fig5_exact", with(base, {{"name", "fig5 exact signs"}, {"algorithm", "algo1"}})},
        {"fig5_noisy", with(base, {{"name", "fig5 noisy signs"},
                                   {"algorithm", "algo2"},
                                   {"noise", {{"sigma", 3.0}, {"seed", seed}}},
                                   {"bounds", {"thm7"}}})},
    };
}

std::vector<PresetRun> fig6(std::uint64_t seed) {
    const auto samples = regression_samples(20, kSampleSeed);
    std::vector<double> y;
    std::vector<double> s;
    for (const auto& p : samples) {
        y.push_back(p.y);
        s.push_back(p.s);
    }
    std::vector<PresetRun> runs;
    for (const double alpha : {0.1, 0.5, 0.9}) {
        const json base = {{"graph", {{"ring_random_weights", {{"n", 20}, {"seed", kWeightSeed}}}}},
                           {"locals", {{"quantile", {{"alpha", alpha}, {"y", y}, {"s", s}}}}},
                           {"lambda", "auto"},
                           {"schedule", {{"affine", {8.0, 1000.0}}}},
                           {"steps", 200000},
                           {"record_stride", 200}};
        runs.push_back({"fig6_static_alpha" + fmt(alpha),
                        with(base, {{"name", "fig6 static alpha=" + fmt(alpha)}, {"algorithm", "algo1"}})});
        runs.push_back({"fig6_random_alpha" + fmt(alpha),
                        with(base, {{"name", "fig6 random graphs alpha=" + fmt(alpha)},
                                    {"algorithm", "algo3"},
                                    {"activation", {{"p", "from_weights"}, {"seed", seed}}}})});
    }
    return runs;
}

}  // namespace

std::vector<std::string> preset_names() { return {"fig3", "fig4", "fig5", "fig6"}; }

std::vector<PresetRun> preset_runs(const std::string& figure, std::uint64_t seed) {
    const auto run_seed = seed == 0 ? kDefaultRunSeed : seed;
    if (figure == "fig3") return fig3();
    if (figure == "fig4") return fig4();
    if (figure == "fig5") return fig5(run_seed);
    if (figure == "fig6") return fig6(run_seed);
    throw ConfigError("preset", "unknown preset '" + figure + "' (expected fig3, fig4, fig5 or fig6)");
}

}  // namespace signopt

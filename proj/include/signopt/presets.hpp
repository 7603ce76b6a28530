#ifndef SIGNOPT_PRESETS_HPP
#define SIGNOPT_PRESETS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace signopt {

// Eight-sample data set used by the median, step-size and noise experiments.
extern const std::vector<double> kMedianData;

struct RegressionSample {
    double y;
    double s;
};

// Seeded synthetic regression data: s ~ U[0.5, 1.5], y = 2 s + U[-5, 5].
std::vector<RegressionSample> regression_samples(std::size_t count, std::uint64_t seed);

struct PresetRun {
    std::string name;  // file stem, e.g. "fig3_lambda1.05"
    nlohmann::json config;
};

// Configs for fig3, fig4, fig5, fig6. `seed` replaces the random seed of the
// stochastic runs (noise or activation) when nonzero. Throws ConfigError on an
// unknown figure.
std::vector<PresetRun> preset_runs(const std::string& figure, std::uint64_t seed = 0);

std::vector<std::string> preset_names();

}  // namespace signopt

#endif  // SIGNOPT_PRESETS_HPP

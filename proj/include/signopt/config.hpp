#ifndef SIGNOPT_CONFIG_HPP
#define SIGNOPT_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "signopt/algorithms.hpp"
#include "signopt/analysis.hpp"

namespace signopt {

// Validation failure tied to a config field ("schedule.power", "x0[3]", ...).
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

struct OutputSpec {
    std::string csv;
    std::string svg;
    std::string report;  // bound reports; ".csv" suffix selects CSV, JSON otherwise
    int width = 800;
    int height = 480;
};

struct RunConfig {
    std::string name = "run";
    Algorithm algorithm = Algorithm::algo1;
    ProblemInstance problem;  // lambda already resolved
    // Threshold the chosen lambda is compared against (on G_P for algo3);
    // empty when it cannot be computed.
    std::optional<double> lambda_threshold;
    bool strict = false;
    StepSchedule schedule = StepSchedule::constant(1.0);
    std::uint64_t steps = 1;
    State x0;
    std::optional<NoiseModel> noise;
    std::optional<ActivationMatrix> activation;
    std::uint64_t record_stride = 1;
    std::vector<BoundKind> bounds;
    OutputSpec outputs;
    nlohmann::json source;  // the parsed document, echoed into outputs
};

// Throws ConfigError naming the offending field.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);
nlohmann::json read_json(const std::filesystem::path& path);

Engine make_engine(const RunConfig& cfg);

// Seed used by the run's random components (noise or activation), 0 if none.
std::uint64_t run_seed(const RunConfig& cfg);

}  // namespace signopt

#endif  // SIGNOPT_CONFIG_HPP

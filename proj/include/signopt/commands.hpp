#ifndef SIGNOPT_COMMANDS_HPP
#define SIGNOPT_COMMANDS_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "signopt/analysis.hpp"
#include "signopt/config.hpp"

namespace signopt {

enum ExitCode : int { exit_ok = 0, exit_config_error = 2, exit_numeric_abort = 3 };

struct RunOutcome {
    RunRecord record;
    std::vector<BoundReport> reports;
};

// Runs the configured engine and evaluates the requested bounds.
RunOutcome execute(const RunConfig& cfg);

// CSV / SVG / bound report files named in `spec`; empty paths are skipped.
void write_outputs(const RunConfig& cfg, const RunOutcome& outcome, const OutputSpec& spec);

// Pool size: SIGNOPT_THREADS if set (>= 1), else hardware concurrency, capped at `jobs`.
std::size_t worker_count(std::size_t jobs);

// Runs job(0..count-1) on a pool of worker_count(count) threads.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& job);

int cmd_run(const std::filesystem::path& config, std::ostream& out, std::ostream& err);

int cmd_reproduce(const std::string& preset, const std::filesystem::path& out_dir, std::ostream& out,
                  std::ostream& err, std::uint64_t seed = 0);

// Grid keys (each optional): "lambda": [..], "schedule": [{..}, ..], "seed": [..].
// One summary row per combination, written to `summary` (stdout when empty).
int cmd_sweep(const std::filesystem::path& config, const std::filesystem::path& grid,
              const std::filesystem::path& summary, std::ostream& out, std::ostream& err);

// Expands a sweep grid against a base config document; exposed for testing.
std::vector<nlohmann::json> expand_grid(const nlohmann::json& base, const nlohmann::json& grid);

}  // namespace signopt

#endif  // SIGNOPT_COMMANDS_HPP

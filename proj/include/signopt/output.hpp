#ifndef SIGNOPT_OUTPUT_HPP
#define SIGNOPT_OUTPUT_HPP

#include <filesystem>
#include <string>

#include "signopt/algorithms.hpp"

namespace signopt {

// Shortest round-trip decimal, independent of the global locale.
std::string format_number(double v);

// Header "k,x_0,...,x_{n-1},v,xbar,d,min_gap", one row per recorded step, LF endings.
std::string trajectory_csv(const RunRecord& r);

struct SvgOptions {
    int width = 800;
    int height = 480;
    std::string title;
};

// Per-node trajectories against k with the optimal set drawn as a band.
std::string trajectory_svg(const RunRecord& r, const SvgOptions& options);

// Writes to a sibling temp file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace signopt

#endif  // SIGNOPT_OUTPUT_HPP

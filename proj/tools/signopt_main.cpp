#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "signopt/commands.hpp"
#include "signopt/presets.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Sign-based distributed subgradient experiments"};
    app.require_subcommand(1);

    std::string config;
    auto* run = app.add_subcommand("run", "Run one configured experiment");
    run->add_option("config", config, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);

    std::string preset;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    auto* reproduce = app.add_subcommand("reproduce", "Run a figure preset");
    reproduce->add_option("preset", preset, "fig3, fig4, fig5 or fig6")
        ->required()
        ->check(CLI::IsMember(signopt::preset_names()));
    reproduce->add_option("--out", out_dir, "Output directory");
    reproduce->add_option("--seed", seed, "Seed for the stochastic runs (0 keeps the preset default)");

    std::string sweep_config;
    std::string grid;
    std::string summary;
    auto* sweep = app.add_subcommand("sweep", "Run every combination of a parameter grid");
    sweep->add_option("config", sweep_config, "Base configuration (JSON)")->required()->check(CLI::ExistingFile);
    sweep->add_option("--grid", grid, "Grid over lambda, schedule, seed (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    sweep->add_option("--out", summary, "Summary CSV path (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : signopt::exit_config_error;
    }

    if (*run) return signopt::cmd_run(config, std::cout, std::cerr);
    if (*reproduce) return signopt::cmd_reproduce(preset, out_dir, std::cout, std::cerr, seed);
    return signopt::cmd_sweep(sweep_config, grid, summary, std::cout, std::cerr);
}

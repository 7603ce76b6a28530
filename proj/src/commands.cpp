#include "signopt/commands.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <optional>
#include <ostream>
#include <thread>

#include "signopt/error.hpp"
#include "signopt/output.hpp"
#include "signopt/presets.hpp"

namespace signopt {

using nlohmann::json;

RunOutcome execute(const RunConfig& cfg) {
    const auto engine = make_engine(cfg);
    RunOptions options;
    options.record_stride = cfg.record_stride;
    RunOutcome outcome;
    outcome.record = run(engine, cfg.schedule, cfg.x0, cfg.steps, options);
    outcome.record.seed = run_seed(cfg);
    outcome.record.config_echo = cfg.source.dump();
    if (!cfg.bounds.empty()) {
        outcome.reports = verify_run(outcome.record, cfg.problem, cfg.schedule, cfg.bounds,
                                     cfg.noise ? &*cfg.noise : nullptr);
    }
    return outcome;
}

void write_outputs(const RunConfig& cfg, const RunOutcome& outcome, const OutputSpec& spec) {
    if (!spec.csv.empty()) write_atomic(spec.csv, trajectory_csv(outcome.record));
    if (!spec.svg.empty()) {
        write_atomic(spec.svg, trajectory_svg(outcome.record, {spec.width, spec.height, cfg.name}));
    }
    if (!spec.report.empty()) {
        const bool csv = std::filesystem::path(spec.report).extension() == ".csv";
        write_atomic(spec.report, csv ? to_csv(outcome.reports) : to_json(outcome.reports));
    }
}

std::size_t worker_count(std::size_t jobs) {
    std::size_t n = std::max(1U, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("SIGNOPT_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) n = static_cast<std::size_t>(v);
    }
    return std::max<std::size_t>(1, std::min(n, jobs));
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& job) {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                job(i);
            } catch (...) {
                const std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const auto threads = worker_count(count);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
}

namespace {

std::string summarize(const RunOutcome& o) {
    const auto& last = o.record.final();
    std::string line = "k=" + std::to_string(last.k) + " v=" + format_number(last.v) +
                       " d=" + format_number(last.d) + " min_gap=" + format_number(last.min_gap);
    for (const auto& r : o.reports) {
        line += " " + r.bound_name + "=" + (!r.applicable ? "inapplicable" : (r.pass ? "pass" : "FAIL"));
    }
    return line;
}

// Runs `body`, mapping library errors onto exit codes.
template <class F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return exit_config_error;
    } catch (const ParameterError& e) {
        err << "invalid parameter: " << e.what() << "\n";
        return exit_config_error;
    } catch (const NumericAbort& e) {
        err << "numeric abort: " << e.what() << "\n";
        return exit_numeric_abort;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_config_error;
    }
}

}  // namespace

int cmd_run(const std::filesystem::path& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto cfg = load_config(config);
        const auto outcome = execute(cfg);
        write_outputs(cfg, outcome, cfg.outputs);
        out << cfg.name << ": " << summarize(outcome) << "\n";
        return exit_ok;
    });
}

int cmd_reproduce(const std::string& preset, const std::filesystem::path& out_dir, std::ostream& out,
                  std::ostream& err, std::uint64_t seed) {
    return guarded(err, [&] {
        const auto runs = preset_runs(preset, seed);
        std::vector<RunConfig> configs;
        for (const auto& r : runs) configs.push_back(parse_config(r.config));
        std::vector<std::optional<RunOutcome>> outcomes(runs.size());
        parallel_for(runs.size(), [&](std::size_t i) {
            outcomes[i] = execute(configs[i]);
            OutputSpec spec = configs[i].outputs;
            spec.csv = (out_dir / (runs[i].name + ".csv")).string();
            spec.svg = (out_dir / (runs[i].name + ".svg")).string();
            spec.report = configs[i].bounds.empty() ? "" : (out_dir / (runs[i].name + "_bounds.json")).string();
            write_outputs(configs[i], *outcomes[i], spec);
        });
        for (std::size_t i = 0; i < runs.size(); ++i) {
            out << runs[i].name << ": " << summarize(*outcomes[i]) << "\n";
        }
        return exit_ok;
    });
}

std::vector<json> expand_grid(const json& base, const json& grid) {
    if (!grid.is_object()) throw ConfigError("grid", "expected an object");
    for (const auto& [key, value] : grid.items()) {
        if (key != "lambda" && key != "schedule" && key != "seed") {
            throw ConfigError("grid." + key, "unknown grid axis (expected lambda, schedule, seed)");
        }
        if (!value.is_array() || value.empty()) throw ConfigError("grid." + key, "expected a non-empty list");
    }
    const json one = json::array({nullptr});
    const auto& lambdas = grid.contains("lambda") ? grid["lambda"] : one;
    const auto& schedules = grid.contains("schedule") ? grid["schedule"] : one;
    const auto& seeds = grid.contains("seed") ? grid["seed"] : one;
    std::vector<json> out;
    for (const auto& lambda : lambdas) {
        for (const auto& schedule : schedules) {
            for (const auto& seed : seeds) {
                json cfg = base;
                if (!lambda.is_null()) cfg["lambda"] = lambda;
                if (!schedule.is_null()) cfg["schedule"] = schedule;
                if (!seed.is_null()) {
                    bool used = false;
                    for (const char* key : {"noise", "activation"}) {
                        if (cfg.contains(key)) {
                            cfg[key]["seed"] = seed;
                            used = true;
                        }
                    }
                    if (!used) throw ConfigError("grid.seed", "config has no noise or activation block");
                }
                out.push_back(std::move(cfg));
            }
        }
    }
    return out;
}

int cmd_sweep(const std::filesystem::path& config, const std::filesystem::path& grid,
              const std::filesystem::path& summary, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto docs = expand_grid(read_json(config), read_json(grid));
        std::vector<RunConfig> configs;
        for (std::size_t i = 0; i < docs.size(); ++i) {
            try {
                configs.push_back(parse_config(docs[i]));
            } catch (const ConfigError& e) {
                throw ConfigError("grid point " + std::to_string(i) + ": " + e.field(), e.what());
            }
        }
        std::vector<std::optional<RunOutcome>> outcomes(configs.size());
        std::vector<std::string> aborts(configs.size());
        parallel_for(configs.size(), [&](std::size_t i) {
            try {
                outcomes[i] = execute(configs[i]);
            } catch (const NumericAbort& e) {
                aborts[i] = e.what();
            }
        });

        std::string csv = "run,lambda,schedule,seed,terminal_v,terminal_d,min_gap,status";
        const auto& bounds = configs.front().bounds;
        for (const auto b : bounds) csv += ",pass_" + to_string(b);
        csv += "\n";
        bool aborted = false;
        for (std::size_t i = 0; i < configs.size(); ++i) {
            const auto& c = configs[i];
            csv += std::to_string(i) + "," + format_number(c.problem.lambda) + "," + c.schedule.describe() +
                   "," + std::to_string(run_seed(c)) + ",";
            if (!outcomes[i]) {
                aborted = true;
                csv += "nan,nan,nan,numeric_abort";
                for (std::size_t b = 0; b < bounds.size(); ++b) csv += ",";
                csv += "\n";
                err << "run " << i << ": numeric abort: " << aborts[i] << "\n";
                continue;
            }
            const auto& last = outcomes[i]->record.final();
            csv += format_number(last.v) + "," + format_number(last.d) + "," + format_number(last.min_gap) + ",ok";
            for (const auto& r : outcomes[i]->reports) {
                csv += ",";
                csv += !r.applicable ? "inapplicable" : (r.pass ? "true" : "false");
            }
            csv += "\n";
        }
        if (summary.empty()) {
            out << csv;
        } else {
            write_atomic(summary, csv);
            out << "wrote " << configs.size() << " rows to " << summary.string() << "\n";
        }
        return aborted ? exit_numeric_abort : exit_ok;
    });
}

}  // namespace signopt

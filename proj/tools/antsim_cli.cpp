// SPDX-License-Identifier: Apache-2.0
//
// Command-line driver for the antenna experiments: sensor calibration sweep,
// boulder-wall stiffness robustness, and closed- vs open-loop tunnel
// traversal. Results are written as CSV under the output directory.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "antsim/report.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::int64_t seed = -1;
    int trials = -1;
    std::string out_dir;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "Experiment config JSON");
    cmd->add_option("--seed", opts.seed, "Base seed (overrides config)");
    cmd->add_option("--trials", opts.trials, "Trial count (overrides config)");
    cmd->add_option("--out", opts.out_dir, "Output directory (overrides config)");
}

antsim::ExperimentConfig resolve(const CommonOpts& opts, antsim::Scenario scenario) {
    antsim::ExperimentConfig cfg;
    if (!opts.config_path.empty())
        cfg = antsim::experiment_config_from_json(antsim::load_json_file(opts.config_path));
    cfg.scenario = scenario;
    if (opts.seed >= 0) cfg.base_seed = static_cast<std::uint64_t>(opts.seed);
    if (opts.trials > 0) cfg.trials = opts.trials;
    if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
    if (scenario == antsim::Scenario::BoulderWall && opts.config_path.empty() &&
        opts.trials <= 0)
        cfg.trials = 20;  // protocol default: n=20 per condition
    cfg.validate();
    return cfg;
}

void print_summary(const antsim::ExperimentSummary& summary) {
    for (const auto& c : summary.conditions)
        std::cout << c.condition << ": " << c.successes << "/" << c.trials
                  << " success (rate " << antsim::fmt(c.success_rate(), 3)
                  << ", mean speed " << antsim::fmt(c.mean_speed, 4) << " m/s)\n";
    if (summary.skipped > 0)
        std::cout << "skipped trials (environment generation): " << summary.skipped << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tactile-antenna navigation simulator"};
    app.require_subcommand(1);

    CommonOpts calibrate_opts, boulder_opts, tunnel_opts;
    CLI::App* calibrate = app.add_subcommand("calibrate", "Run the calibration sweep and fit");
    add_common(calibrate, calibrate_opts);
    CLI::App* boulder =
        app.add_subcommand("boulder-wall", "Stiffness robustness protocol on a boulder wall");
    add_common(boulder, boulder_opts);
    CLI::App* tunnel =
        app.add_subcommand("tunnel", "Closed- vs open-loop cluttered tunnel traversal");
    add_common(tunnel, tunnel_opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (calibrate->parsed()) {
            auto cfg = resolve(calibrate_opts, antsim::Scenario::CalibrationSweep);
            antsim::run_experiment_to_dir(cfg);
            std::cout << "calibration written to " << cfg.out_dir << "\n";
        } else if (boulder->parsed()) {
            auto cfg = resolve(boulder_opts, antsim::Scenario::BoulderWall);
            print_summary(antsim::run_experiment_to_dir(cfg));
            std::cout << "results written to " << cfg.out_dir << "\n";
        } else if (tunnel->parsed()) {
            auto cfg = resolve(tunnel_opts, antsim::Scenario::Tunnel);
            print_summary(antsim::run_experiment_to_dir(cfg));
            std::cout << "results written to " << cfg.out_dir << "\n";
        }
    } catch (const antsim::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

// splitrx command line: run experiment configs, run the built-in presets, and
// list what the presets do.
//
//   splitrx run <config> [--out DIR] [--threads N]
//   splitrx preset <name> [--trials N] [--seed S] [--out DIR] [--threads N]
//   splitrx list-presets
//
// Exit codes: 0 success, 1 runtime failure, 2 config parse/validation error.
// SPLITRX_THREADS caps the worker count.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "splitrx/experiment.hpp"
#include "splitrx/version.hpp"

namespace {

int run_config(splitrx::ExperimentConfig cfg, const std::string& out_override, int threads) {
    if (!out_override.empty()) cfg.output_dir = out_override;
    try {
        const auto manifest = splitrx::run_experiment(cfg, threads);
        std::cout << "wrote " << cfg.output_dir << " (config " << manifest.config_hash
                  << ", seed " << manifest.master_seed << ")\n";
        for (const auto& [id, secs] : manifest.timing_seconds)
            std::cout << "  " << id << ": " << secs << " s\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error while running '" << cfg.name << "': " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"splitting-receiver symbol error rate experiments"};
    app.set_version_flag("--version", std::string(splitrx::kVersion));
    app.require_subcommand(1);

    std::string config_path, preset_name, out_dir;
    int threads = 0;
    std::uint64_t trials = 0, seed = 0;
    bool have_trials = false, have_seed = false;

    auto* run = app.add_subcommand("run", "run an experiment config file");
    run->add_option("config", config_path, "path to the config file")->required();
    run->add_option("--out", out_dir, "output directory (overrides the config)");
    run->add_option("--threads", threads, "worker thread count (0 = auto)");

    auto* preset = app.add_subcommand("preset", "run a built-in preset (fig3, fig4, fig5, complexity)");
    preset->add_option("name", preset_name, "preset name")->required();
    preset->add_option("--trials", trials, "override trials per grid point")
        ->each([&](const std::string&) { have_trials = true; });
    preset->add_option("--seed", seed, "override the master seed")
        ->each([&](const std::string&) { have_seed = true; });
    preset->add_option("--out", out_dir, "output directory");
    preset->add_option("--threads", threads, "worker thread count (0 = auto)");

    auto* list = app.add_subcommand("list-presets", "describe the built-in presets");

    CLI11_PARSE(app, argc, argv);

    if (list->parsed()) {
        std::cout << splitrx::list_presets_text();
        return 0;
    }

    if (run->parsed()) {
        splitrx::ExperimentConfig cfg;
        try {
            cfg = splitrx::load_config_file(config_path);
        } catch (const splitrx::ConfigError& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return 2;
        }
        return run_config(std::move(cfg), out_dir, threads);
    }

    // preset
    auto cfg = splitrx::preset_by_name(preset_name);
    if (!cfg) {
        std::cerr << "unknown preset '" << preset_name << "' (try list-presets)\n";
        return 2;
    }
    for (auto& sweep : cfg->sweeps) {
        if (have_trials) sweep.trials = trials;
        if (have_seed) sweep.seed = seed;
    }
    if (have_trials) {
        for (auto& sweep : cfg->sweeps) {
            if (sweep.mode != "complexity" && sweep.trials < 1000) {
                std::cerr << "config error: trials must be >= 1000\n";
                return 2;
            }
        }
    }
    return run_config(std::move(*cfg), out_dir, threads);
}

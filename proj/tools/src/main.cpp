#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"PRADA link-adaptation toolkit"};
    app.require_subcommand(1);

    prada::cli::Options options;
    std::string out_dir;
    uint64_t seed = 0;
    long frames = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", options.config_path, "Run configuration (JSON)")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "Output directory (overrides the config)");
        sub->add_option("--seed", seed, "Master seed (overrides the config)");
        sub->add_option("--frames", frames, "Total frames to simulate (overrides the config)");
        return sub;
    };

    CLI::App* channel = add_common(app.add_subcommand("channel", "Export the channel model"));
    CLI::App* predict =
        add_common(app.add_subcommand("predict", "Export expected period throughputs"));
    CLI::App* optimize =
        add_common(app.add_subcommand("optimize", "Compile the switching threshold table"));
    CLI::App* analyze =
        add_common(app.add_subcommand("analyze", "Analytical throughput of every policy"));
    CLI::App* simulate = add_common(app.add_subcommand("simulate", "Monte Carlo comparison run"));
    CLI::App* sweep =
        add_common(app.add_subcommand("sweep", "Analytical sweep over SNR and Doppler"));

    CLI11_PARSE(app, argc, argv);

    try {
        for (const CLI::App* sub : {channel, predict, optimize, analyze, simulate, sweep}) {
            if (sub->parsed()) {
                if (sub->count("--out")) options.out_dir = out_dir;
                if (sub->count("--seed")) options.seed = seed;
                if (sub->count("--frames")) options.frames = frames;
            }
        }
        const prada::RunConfig config = prada::cli::load_config(options);
        if (channel->parsed()) return prada::cli::run_channel(config);
        if (predict->parsed()) return prada::cli::run_predict(config);
        if (optimize->parsed()) return prada::cli::run_optimize(config);
        if (analyze->parsed()) return prada::cli::run_analyze(config);
        if (simulate->parsed()) return prada::cli::run_simulate(config);
        if (sweep->parsed()) return prada::cli::run_sweep(config);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

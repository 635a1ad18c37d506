#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "prada/pipeline.hpp"

namespace prada::cli {

struct Options {
    std::filesystem::path config_path;
    std::optional<std::string> out_dir;
    std::optional<uint64_t> seed;
    std::optional<long> frames;
};

/// Load the config and apply the command-line overrides.
RunConfig load_config(const Options& options);

std::filesystem::path output_dir(const RunConfig& config);

int run_channel(const RunConfig& config);
int run_predict(const RunConfig& config);
int run_optimize(const RunConfig& config);
int run_analyze(const RunConfig& config);
int run_simulate(const RunConfig& config);
int run_sweep(const RunConfig& config);

}  // namespace prada::cli

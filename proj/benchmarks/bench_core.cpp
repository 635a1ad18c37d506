#include <benchmark/benchmark.h>

#include <string>

#include "prada/pipeline.hpp"

namespace {

using namespace prada;

struct Fixture {
    RunConfig config;
    double frame_period;
    FerTable fer;
    ModelBundle bundle;

    Fixture()
        : config(load_run_config(std::string(PRADA_CONFIG_DIR) + "/paper_4hz.json")),
          frame_period(resolve_frame_period(config.channel, config.base_dir)),
          fer(load_fer_table_file(config)),
          bundle(build_model_bundle(config.channel, fer, frame_period, 4.0,
                                    config.channel.avg_snr_db)) {}
};

const Fixture& fx() {
    static Fixture fixture;
    return fixture;
}

void BM_ErrorCountDistribution(benchmark::State& state) {
    const int horizon = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            error_count_distribution_all(fx().bundle.sim, fx().bundle.fer_sim, horizon));
    }
}
BENCHMARK(BM_ErrorCountDistribution)->Arg(30)->Arg(120);

void BM_InducedChainBuild(benchmark::State& state) {
    const auto f = cached_error_count_distribution(fx().bundle.sim, fx().bundle.fer_sim, 30);
    const ThresholdSet t = ThresholdSet::no_switching(f->num_settings(), 30);
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_induced_chain(*f, fx().bundle.sim, t));
    }
}
BENCHMARK(BM_InducedChainBuild);

void BM_LocalSearch(benchmark::State& state) {
    const auto f = cached_error_count_distribution(fx().bundle.sim, fx().bundle.fer_sim, 30);
    const ThroughputVector xi = expected_period_throughput(*f, fx().config.settings);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            local_search_thresholds(*f, fx().bundle.sim, xi, 0, 4, 8, 1234));
    }
}
BENCHMARK(BM_LocalSearch)->Unit(benchmark::kMillisecond);

void BM_ThresholdTableCompile(benchmark::State& state) {
    const auto f = cached_error_count_distribution(fx().bundle.sim, fx().bundle.fer_sim, 30);
    const ThroughputVector xi = expected_period_throughput(*f, fx().config.settings);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            compile_threshold_table(*f, fx().bundle.sim, xi, 4, 8, 1234));
    }
}
BENCHMARK(BM_ThresholdTableCompile)->Unit(benchmark::kMillisecond);

void BM_MillionFrameComparison(benchmark::State& state) {
    const long frames = 1'000'000;
    const SimulationPlan plan(fx().config, fx().fer, fx().frame_period, {4.0},
                              fx().config.channel.avg_snr_db, frames);
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_comparison(plan.runs(), plan.sim_models(), {0},
                                                plan.block_frames(), frames, 1));
    }
    state.SetItemsProcessed(state.iterations() * frames * plan.runs().size());
}
BENCHMARK(BM_MillionFrameComparison)->Unit(benchmark::kMillisecond);

void BM_ChannelTrace(benchmark::State& state) {
    const long frames = 1'000'000;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_channel_trace(fx().bundle.sim, frames, 7));
    }
    state.SetItemsProcessed(state.iterations() * frames);
}
BENCHMARK(BM_ChannelTrace)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

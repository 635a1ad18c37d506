#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "prada/policies.hpp"

namespace prada {

enum class PolicyKind { fixed, prada_a, prada_b, greedy_first_frame };

struct ScenarioConfig {
    std::string id;
    PolicyKind kind = PolicyKind::fixed;
    int fixed_setting = 0;     // for PolicyKind::fixed
    int period_frames = 1;     // M
    int k_periods = 1;         // K (prada_b)
    long total_frames = 0;
    int csi_feedback_interval = 0;  // must be M (prada_a/greedy) or K*M (prada_b)
    int window_frames = 30;

    void validate() const;
};

/// Precomputed policy inputs for one channel model (one Doppler bucket).
/// `xi` must be computed for the scenario's own M; `thresholds` only for
/// PRADA-B.
struct PolicyArtifacts {
    const ThroughputVector* xi = nullptr;
    const ThresholdTable* thresholds = nullptr;
};

struct SimulationReport {
    std::string scenario_id;
    long total_frames = 0;
    double average_throughput = 0.0;        // delivered bits / total frames
    std::vector<double> window_series;      // per-window average bits/frame
    std::vector<double> cdf_samples;        // window_series, sorted
    long frame_error_total = 0;
    std::vector<double> setting_occupancy;  // fraction of frames per setting
    uint64_t channel_seed = 0;
    uint64_t error_seed = 0;
};

/// Per-frame channel states: first from the stationary law, then one
/// Markov step per frame.
std::vector<int> sample_channel_trace(const FsmcChannel& channel, long n_frames, uint64_t seed);

/// Trace under a per-block model schedule (Doppler variation): within
/// block b the step uses models[schedule[b]]'s transition matrix. All
/// models must share the state space.
std::vector<int> sample_channel_trace(const std::vector<const FsmcChannel*>& models,
                                      const std::vector<int>& schedule, int block_frames,
                                      long n_frames, uint64_t seed);

/// Shared per-comparison inputs. `model_schedule` maps block index to an
/// artifact index (all zeros for a fixed-Doppler run).
struct SimulationInputs {
    const SettingTable* settings = nullptr;
    const FerTable* fer = nullptr;
    const std::vector<int>* trace = nullptr;
    const std::vector<double>* error_uniforms = nullptr;
    const std::vector<int>* model_schedule = nullptr;
    int block_frames = 0;
};

SimulationReport run_scenario(const ScenarioConfig& scenario,
                              const std::vector<PolicyArtifacts>& artifacts,
                              const SimulationInputs& inputs);

struct ScenarioRun {
    ScenarioConfig config;
    std::vector<PolicyArtifacts> artifacts;  // one entry per channel model
    const SettingTable* settings = nullptr;
    const FerTable* fer = nullptr;
};

/// Run all scenarios against one shared channel trace and (by default) one
/// shared per-frame error stream derived from the master seed.
std::vector<SimulationReport> run_comparison(const std::vector<ScenarioRun>& scenarios,
                                             const std::vector<const FsmcChannel*>& models,
                                             const std::vector<int>& model_schedule,
                                             int block_frames, long total_frames,
                                             uint64_t master_seed,
                                             bool shared_error_stream = true);

/// Draw a uniform per-block model schedule for Doppler-variation runs.
std::vector<int> random_model_schedule(int num_models, long num_blocks, uint64_t schedule_seed);

}  // namespace prada

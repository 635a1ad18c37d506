#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "prada/simulator.hpp"

namespace prada {

struct ChannelConfig {
    int n_states = 0;
    std::vector<double> boundaries_db;  // interior boundaries; empty -> equal-duration solver
    double avg_snr_db = 0.0;
    double doppler_hz = 0.0;
    double frame_period_s = 0.0;        // 0 -> calibrated from fit_table_csv
    std::string fit_table_csv;
    double fit_doppler_hz = 0.0;
    bool outage_state = false;
};

struct PolicyParams {
    bool enabled = false;
    int period_frames = 0;   // M
    int k_periods = 1;       // K
    int restarts = 8;
    uint64_t search_seed = 1;
};

struct SimulationParams {
    long total_frames = 1'000'000;
    uint64_t master_seed = 1;
    int window_frames = 30;
    bool shared_error_stream = true;
};

struct DopplerScheduleParams {
    bool enabled = false;
    std::vector<double> values_hz;
    uint64_t seed = 1;
};

struct SweepParams {
    std::vector<double> snr_db;
    std::vector<double> doppler_hz;
};

struct RunConfig {
    std::filesystem::path config_path;
    std::filesystem::path base_dir;
    ChannelConfig channel;
    SettingTable settings;
    std::string fer_table_path;
    PolicyParams prada_a;
    PolicyParams prada_b;
    PolicyParams greedy;
    std::vector<int> fixed_settings;  // 1-based setting numbers
    SimulationParams simulation;
    DopplerScheduleParams schedule;
    SweepParams sweep;
    std::string output_dir = "out";
};

RunConfig load_run_config(const std::filesystem::path& path);

/// Resolve the FER table path against the config directory and load it.
FerTable load_fer_table_file(const RunConfig& config);

/// "state,p_down,p_up" rows with 1-based state indices.
std::vector<TransitionObservation> load_transition_observations(const std::filesystem::path& path);

/// Configured value, or the least-squares calibration against the
/// reference transition table.
double resolve_frame_period(const ChannelConfig& channel, const std::filesystem::path& base_dir);

SnrPartition partition_from_config(const ChannelConfig& channel);

/// One channel model instance: the configured chain plus the effective
/// transmission model the link analysis and simulation run on.
struct ModelBundle {
    double doppler_hz = 0.0;
    double avg_snr_db = 0.0;
    FsmcChannel full;
    FsmcChannel sim;
    FerTable fer_sim;
};

ModelBundle build_model_bundle(const ChannelConfig& channel, const FerTable& full_fer,
                               double frame_period_s, double doppler_hz, double avg_snr_db);

ThroughputVector throughput_for_horizon(const ModelBundle& bundle, const SettingTable& settings,
                                        int horizon);

ThresholdTable compile_thresholds(const ModelBundle& bundle, const SettingTable& settings,
                                  const PolicyParams& prada_b);

/// Everything needed to run one comparison suite: channel bundles per
/// Doppler value, the per-scenario artifacts, and the model schedule
/// granularity. Owns all derived artifacts.
class SimulationPlan {
  public:
    SimulationPlan(const RunConfig& config, const FerTable& full_fer, double frame_period_s,
                   std::vector<double> doppler_values, double avg_snr_db, long total_frames);

    const std::vector<ScenarioRun>& runs() const { return runs_; }
    const SettingTable& settings() const { return settings_; }
    std::vector<const FsmcChannel*> sim_models() const;
    const std::vector<ModelBundle>& bundles() const { return bundles_; }
    const FerTable& fer_sim() const { return bundles_.front().fer_sim; }
    int block_frames() const { return block_frames_; }
    long total_frames() const { return total_frames_; }

    const ThroughputVector& xi(int bundle_index, int horizon) const;
    const ThresholdTable* thresholds(int bundle_index) const;

  private:
    SettingTable settings_;
    std::vector<ModelBundle> bundles_;
    std::map<std::pair<int, int>, ThroughputVector> xi_;          // (bundle, M)
    std::map<int, ThresholdTable> thresholds_;                    // bundle
    std::vector<ScenarioRun> runs_;
    int block_frames_ = 0;
    long total_frames_ = 0;
};

/// Scenario display name -> safe file stem.
std::string sanitize_filename(const std::string& name);

/// Write the per-scenario series CSVs, the combined CDF CSV, and the
/// summary CSV into `out_dir`.
void write_simulation_reports(const std::filesystem::path& out_dir,
                              const std::vector<SimulationReport>& reports,
                              const SettingTable& settings);

}  // namespace prada

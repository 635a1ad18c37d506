#include "prada/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "prada/errors.hpp"
#include "prada/rng.hpp"

namespace prada {

void ScenarioConfig::validate() const {
    if (id.empty()) throw ValidationError("scenario id is empty");
    if (total_frames <= 0) throw ValidationError("total_frames must be positive");
    if (window_frames <= 0) throw ValidationError("window_frames must be positive");
    if (period_frames < 1) throw ValidationError("period_frames must be at least 1");
    switch (kind) {
        case PolicyKind::fixed:
            if (fixed_setting < 0) throw ValidationError("fixed_setting must be set");
            break;
        case PolicyKind::prada_a:
        case PolicyKind::greedy_first_frame:
            if (csi_feedback_interval != period_frames) {
                throw ValidationError("CSI feedback interval must equal the period length");
            }
            break;
        case PolicyKind::prada_b:
            if (k_periods < 1) throw ValidationError("k_periods must be at least 1");
            if (csi_feedback_interval != k_periods * period_frames) {
                throw ValidationError("CSI feedback interval must equal the block length");
            }
            break;
    }
}

namespace {

int step_state(const Matrix& p, int state, double u) {
    const int n = p.cols();
    double acc = 0.0;
    for (int j = std::max(0, state - 1); j < n; ++j) {
        acc += p(state, j);
        if (u < acc) return j;
    }
    return std::min(state + 1, n - 1);
}

int model_at(const std::vector<int>& schedule, int block_frames, long frame) {
    if (schedule.size() <= 1) return schedule.empty() ? 0 : schedule[0];
    const size_t block = std::min(static_cast<size_t>(frame / block_frames), schedule.size() - 1);
    return schedule[block];
}

}  // namespace

std::vector<int> sample_channel_trace(const FsmcChannel& channel, long n_frames, uint64_t seed) {
    return sample_channel_trace({&channel}, {0}, 1, n_frames, seed);
}

std::vector<int> sample_channel_trace(const std::vector<const FsmcChannel*>& models,
                                      const std::vector<int>& schedule, int block_frames,
                                      long n_frames, uint64_t seed) {
    if (models.empty() || schedule.empty()) throw ValidationError("no channel models");
    if (n_frames <= 0) throw ValidationError("n_frames must be positive");
    if (block_frames <= 0) throw ValidationError("block_frames must be positive");
    const int n = models[0]->num_states();
    for (const FsmcChannel* m : models) {
        if (m->num_states() != n) throw ValidationError("channel models differ in state count");
    }
    for (int s : schedule) {
        if (s < 0 || s >= static_cast<int>(models.size())) {
            throw ValidationError("model schedule index out of range");
        }
    }

    Rng rng(seed);
    std::vector<int> trace(n_frames);
    {
        const auto& pi = models[schedule[0]]->stationary;
        const double u = rng.uniform();
        double acc = 0.0;
        int state = n - 1;
        for (int i = 0; i < n; ++i) {
            acc += pi[i];
            if (u < acc) {
                state = i;
                break;
            }
        }
        trace[0] = state;
    }
    for (long t = 1; t < n_frames; ++t) {
        const Matrix& p = models[model_at(schedule, block_frames, t)]->transition;
        trace[t] = step_state(p, trace[t - 1], rng.uniform());
    }
    return trace;
}

SimulationReport run_scenario(const ScenarioConfig& scenario,
                              const std::vector<PolicyArtifacts>& artifacts,
                              const SimulationInputs& inputs) {
    scenario.validate();
    if (!inputs.settings || !inputs.fer || !inputs.trace || !inputs.error_uniforms ||
        !inputs.model_schedule) {
        throw ValidationError("incomplete simulation inputs");
    }
    const long n_frames = scenario.total_frames;
    if (static_cast<long>(inputs.trace->size()) < n_frames ||
        static_cast<long>(inputs.error_uniforms->size()) < n_frames) {
        throw ValidationError("input streams shorter than the frame count");
    }
    const SettingTable& settings = *inputs.settings;
    const FerTable& fer = *inputs.fer;
    const int r_count = settings.count();
    const int m = scenario.period_frames;

    for (const PolicyArtifacts& a : artifacts) {
        if (scenario.kind == PolicyKind::prada_a && !a.xi) {
            throw ValidationError("PRADA-A needs a throughput vector per model");
        }
        if (scenario.kind == PolicyKind::prada_b && (!a.xi || !a.thresholds)) {
            throw ValidationError("PRADA-B needs throughput and threshold artifacts per model");
        }
    }
    if (scenario.kind == PolicyKind::fixed &&
        (scenario.fixed_setting < 0 || scenario.fixed_setting >= r_count)) {
        throw ValidationError("fixed_setting out of range");
    }

    SimulationReport report;
    report.scenario_id = scenario.id;
    report.total_frames = n_frames;
    report.setting_occupancy.assign(r_count, 0.0);

    int setting = scenario.fixed_setting;
    const ThresholdSet* thresholds = nullptr;
    int period_errors = 0;
    double delivered_bits = 0.0;
    double window_bits = 0.0;

    for (long t = 0; t < n_frames; ++t) {
        const int state = (*inputs.trace)[t];
        const int model = model_at(*inputs.model_schedule, inputs.block_frames, t);
        const PolicyArtifacts& art = artifacts[model];

        switch (scenario.kind) {
            case PolicyKind::fixed:
                break;
            case PolicyKind::prada_a:
                if (t % m == 0) setting = prada_a_select(state, *art.xi);
                break;
            case PolicyKind::greedy_first_frame:
                if (t % m == 0) setting = greedy_first_frame_select(state, settings, fer);
                break;
            case PolicyKind::prada_b:
                if (t % (static_cast<long>(scenario.k_periods) * m) == 0) {
                    if (thresholds == nullptr) setting = prada_a_select(state, *art.xi);
                    thresholds = &prada_b_threshold_update(state, setting, *art.thresholds);
                    period_errors = 0;
                }
                break;
        }

        const bool error = (*inputs.error_uniforms)[t] < fer.at(setting, state);
        if (error) {
            ++report.frame_error_total;
        } else {
            delivered_bits += settings.bits(setting);
            window_bits += settings.bits(setting);
        }
        report.setting_occupancy[setting] += 1.0;

        if (scenario.kind == PolicyKind::prada_b) {
            if (error) ++period_errors;
            if ((t + 1) % m == 0) {
                setting = prada_b_switch(setting, std::min(period_errors, m), *thresholds);
                period_errors = 0;
            }
        }

        if ((t + 1) % scenario.window_frames == 0) {
            report.window_series.push_back(window_bits / scenario.window_frames);
            window_bits = 0.0;
        }
    }

    report.average_throughput = delivered_bits / n_frames;
    for (double& occ : report.setting_occupancy) occ /= static_cast<double>(n_frames);
    report.cdf_samples = report.window_series;
    std::sort(report.cdf_samples.begin(), report.cdf_samples.end());
    return report;
}

std::vector<SimulationReport> run_comparison(const std::vector<ScenarioRun>& scenarios,
                                             const std::vector<const FsmcChannel*>& models,
                                             const std::vector<int>& model_schedule,
                                             int block_frames, long total_frames,
                                             uint64_t master_seed, bool shared_error_stream) {
    const uint64_t channel_seed = derive_stream_seed(master_seed, 0);
    const std::vector<int> trace =
        sample_channel_trace(models, model_schedule, block_frames, total_frames, channel_seed);

    std::vector<double> shared_uniforms;
    const uint64_t shared_error_seed = derive_stream_seed(master_seed, 1);
    if (shared_error_stream) {
        Rng rng(shared_error_seed);
        shared_uniforms.resize(total_frames);
        for (double& u : shared_uniforms) u = rng.uniform();
    }

    std::vector<SimulationReport> reports;
    reports.reserve(scenarios.size());
    for (size_t s = 0; s < scenarios.size(); ++s) {
        std::vector<double> own_uniforms;
        uint64_t error_seed = shared_error_seed;
        if (!shared_error_stream) {
            error_seed = derive_stream_seed(master_seed, 2 + s);
            Rng rng(error_seed);
            own_uniforms.resize(total_frames);
            for (double& u : own_uniforms) u = rng.uniform();
        }

        ScenarioConfig config = scenarios[s].config;
        config.total_frames = total_frames;

        SimulationInputs inputs;
        inputs.trace = &trace;
        inputs.error_uniforms = shared_error_stream ? &shared_uniforms : &own_uniforms;
        inputs.model_schedule = &model_schedule;
        inputs.block_frames = block_frames;
        inputs.settings = scenarios[s].settings;
        inputs.fer = scenarios[s].fer;

        SimulationReport report = run_scenario(config, scenarios[s].artifacts, inputs);
        report.channel_seed = channel_seed;
        report.error_seed = error_seed;
        reports.push_back(std::move(report));
    }
    return reports;
}

std::vector<int> random_model_schedule(int num_models, long num_blocks, uint64_t schedule_seed) {
    if (num_models <= 0 || num_blocks <= 0) throw ValidationError("empty schedule request");
    Rng rng(schedule_seed);
    std::vector<int> schedule(num_blocks);
    for (int& s : schedule) s = static_cast<int>(rng.bounded(static_cast<uint64_t>(num_models)));
    return schedule;
}

}  // namespace prada

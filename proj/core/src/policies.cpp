#include "prada/policies.hpp"

#include <string>

#include "prada/errors.hpp"
#include "prada/rng.hpp"

namespace prada {

int prada_a_select(int state, const ThroughputVector& xi) {
    if (state < 0 || state >= xi.num_states) throw ValidationError("state out of range");
    int best = 0;
    for (int r = 1; r < xi.num_settings; ++r) {
        if (xi.at(r, state) >= xi.at(best, state)) best = r;
    }
    return best;
}

int greedy_first_frame_select(int state, const SettingTable& settings, const FerTable& fer) {
    if (state < 0 || state >= fer.num_states) throw ValidationError("state out of range");
    int best = 0;
    for (int r = 1; r < settings.count(); ++r) {
        if (first_frame_throughput(r, state, settings, fer) >=
            first_frame_throughput(best, state, settings, fer)) {
            best = r;
        }
    }
    return best;
}

int prada_b_switch(int setting, int errors, const ThresholdSet& thresholds) {
    if (setting < 0 || setting >= thresholds.num_settings()) {
        throw ValidationError("setting out of range");
    }
    if (errors < 0 || errors > thresholds.horizon) throw ValidationError("error count out of range");
    if (errors <= thresholds.down[setting]) return setting - 1;
    if (errors > thresholds.up[setting]) return setting + 1;
    return setting;
}

const ThresholdSet& prada_b_threshold_update(int state, int setting, const ThresholdTable& table) {
    if (setting < 0 || setting >= table.num_settings || state < 0 || state >= table.num_states) {
        throw ConfigError("threshold table does not cover setting " + std::to_string(setting + 1) +
                          ", state " + std::to_string(state + 1));
    }
    return table.lookup(setting, state);
}

double analytical_throughput_prada_a(const FsmcChannel& channel, const ThroughputVector& xi) {
    if (xi.num_states != channel.num_states()) {
        throw ValidationError("throughput vector does not match the channel");
    }
    double total = 0.0;
    for (int i = 0; i < channel.num_states(); ++i) {
        total += channel.stationary[i] * xi.at(prada_a_select(i, xi), i);
    }
    return total;
}

double analytical_throughput_greedy(const FsmcChannel& channel, const SettingTable& settings,
                                    const FerTable& fer, const ThroughputVector& xi) {
    if (xi.num_states != channel.num_states() || fer.num_states != channel.num_states()) {
        throw ValidationError("tables do not match the channel");
    }
    double total = 0.0;
    for (int i = 0; i < channel.num_states(); ++i) {
        total += channel.stationary[i] * xi.at(greedy_first_frame_select(i, settings, fer), i);
    }
    return total;
}

AnalyticThroughput analytical_throughput_prada_b(const FsmcChannel& channel,
                                                 const ErrorCountDistribution& f,
                                                 const ThroughputVector& xi,
                                                 const ThresholdTable& table, int k_periods,
                                                 uint64_t fallback_seed) {
    const int n = channel.num_states();
    const int r_count = f.num_settings();
    if (table.num_settings != r_count || table.num_states != n) {
        throw ValidationError("threshold table does not match the model");
    }
    const int pairs = r_count * n;

    // Block-level chain: a block starting in pair m runs K periods under
    // that start's thresholds; the row of the block chain is the m-th row
    // of the induced chain's K-th power.
    Matrix block(pairs, pairs);
    for (int idx = 0; idx < pairs; ++idx) {
        const InducedChain chain = build_induced_chain(f, channel, table.sets[idx]);
        std::vector<double> row(pairs, 0.0);
        row[idx] = 1.0;
        for (int t = 0; t < k_periods; ++t) row = chain.transition.left_apply(row);
        for (int j = 0; j < pairs; ++j) block(idx, j) = row[j];
    }

    const auto stationary = stationary_distribution(block);
    if (stationary) {
        double total = 0.0;
        for (int idx = 0; idx < pairs; ++idx) total += (*stationary)[idx] * table.objectives[idx];
        return {total, true};
    }

    // Reducible block chain: fall back to a long chain walk.
    Rng rng(fallback_seed);
    int idx = 0;
    const long blocks = 1'000'000;
    double total = 0.0;
    for (long b = 0; b < blocks; ++b) {
        total += table.objectives[idx];
        const double u = rng.uniform();
        double acc = 0.0;
        int next = pairs - 1;
        for (int j = 0; j < pairs; ++j) {
            acc += block(idx, j);
            if (u < acc) {
                next = j;
                break;
            }
        }
        idx = next;
    }
    return {total / blocks, false};
}

}  // namespace prada

#pragma once

#include <functional>
#include <istream>
#include <string>
#include <vector>

#include "prada/channel_model.hpp"

namespace prada {

/// One modulation/coding combination.
struct Setting {
    std::string label;
    int frame_symbols = 0;
    int data_bits_per_frame = 0;  // k_r
};

/// Settings ordered by descending data rate (and descending FER).
struct SettingTable {
    std::vector<Setting> settings;

    int count() const { return static_cast<int>(settings.size()); }
    int bits(int r) const { return settings[r].data_bits_per_frame; }
    std::string id(int r) const { return "s_" + std::to_string(r + 1); }

    void validate() const;
};

/// Frame error rate per (setting, channel state).
struct FerTable {
    int num_settings = 0;
    int num_states = 0;
    std::vector<double> values;  // [r * num_states + i]

    double at(int setting, int state) const {
        return values[static_cast<size_t>(setting) * num_states + state];
    }
    double& at(int setting, int state) {
        return values[static_cast<size_t>(setting) * num_states + state];
    }

    /// Drop the lowest `count` channel states (outage states are not part
    /// of the transmission model).
    FerTable drop_lowest_states(int count) const;

    void validate(bool hard_monotonicity = true) const;
};

/// Parse a FER table from CSV: header row of setting ids, then one row per
/// channel state in index order. Throws IngestionError with row/column
/// coordinates on dimension, range, or monotonicity problems.
FerTable load_fer_table(std::istream& source, const SettingTable& settings, int n_states,
                        bool hard_monotonicity = true);

/// State-conditional FER from a continuous frame-error-probability curve:
/// the curve averaged against the exponential SNR density over the state's
/// interval. Adaptive quadrature; the open upper limit is handled by an
/// exponential-tail substitution (the curve is evaluated at +infinity once,
/// so it must have a limit there).
double state_fer_from_curve(const std::function<double(double)>& curve, int state,
                            const SnrPartition& partition, double avg_snr, double rel_tol = 1e-8);

double state_fer_from_curve(const std::function<double(double)>& curve, int state,
                            const FsmcChannel& channel, double rel_tol = 1e-8);

/// k_r * (1 - E[r][i]).
double first_frame_throughput(int setting, int state, const SettingTable& settings,
                              const FerTable& fer);

}  // namespace prada

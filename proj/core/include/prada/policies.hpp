#pragma once

#include <cstdint>

#include "prada/adaptation.hpp"

namespace prada {

/// Setting maximizing the expected M-frame throughput from the observed
/// state. Ties break toward the larger index (the more robust setting).
int prada_a_select(int state, const ThroughputVector& xi);

/// Setting maximizing the first frame's expected throughput only.
int greedy_first_frame_select(int state, const SettingTable& settings, const FerTable& fer);

/// Next period's setting from the previous period's error count.
int prada_b_switch(int setting, int errors, const ThresholdSet& thresholds);

/// Threshold set for the block starting in (setting, state). Throws
/// ConfigError if the table does not cover the pair.
const ThresholdSet& prada_b_threshold_update(int state, int setting, const ThresholdTable& table);

/// Stationary-state average of the per-state best expected period
/// throughput, in data bits per frame.
double analytical_throughput_prada_a(const FsmcChannel& channel, const ThroughputVector& xi);

/// Same average for the first-frame-greedy rule.
double analytical_throughput_greedy(const FsmcChannel& channel, const SettingTable& settings,
                                    const FerTable& fer, const ThroughputVector& xi);

struct AnalyticThroughput {
    double value = 0.0;
    /// False when the block chain was reducible and the value comes from a
    /// long-run chain simulation instead of the stationary solve.
    bool exact = true;
};

/// Long-run PRADA-B throughput: stationary law of the block-level chain
/// (each block-start uses its own optimized thresholds for K periods),
/// weighted by the per-start K-period objectives.
AnalyticThroughput analytical_throughput_prada_b(const FsmcChannel& channel,
                                                 const ErrorCountDistribution& f,
                                                 const ThroughputVector& xi,
                                                 const ThresholdTable& table, int k_periods,
                                                 uint64_t fallback_seed = 0x5eedu);

}  // namespace prada

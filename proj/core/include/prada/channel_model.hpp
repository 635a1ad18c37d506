#pragma once

#include <vector>

#include "prada/matrix.hpp"

namespace prada {

/// SNR quantization of the fading range. Boundaries are in linear scale,
/// strictly increasing, with +infinity as the last element. The first
/// boundary is 0 for a full-support partition; truncated sub-partitions
/// (used when the lowest state is an outage state) start above 0.
struct SnrPartition {
    std::vector<double> boundaries;

    /// Build from the interior boundaries in dB: prepends 0 and appends
    /// the infinity sentinel.
    static SnrPartition from_interior_db(const std::vector<double>& interior_db);

    int num_states() const { return static_cast<int>(boundaries.size()) - 1; }
    double lower(int state) const { return boundaries[state]; }
    double upper(int state) const { return boundaries[state + 1]; }

    void validate() const;
};

/// How the lowest channel state is treated when building transitions.
///
/// `first_state` marks state 0 as an outage state: the transmitter is
/// silent there, so the transmitting states form an FSMC of their own on
/// the truncated SNR support and their rates are normalized by the
/// conditional stationary probabilities. The outage row keeps its
/// full-support escape rate.
enum class OutageMode { none, first_state };

struct FsmcChannel {
    SnrPartition partition;
    double avg_snr = 0.0;         // linear
    double doppler_hz = 0.0;
    double frame_period_s = 0.0;
    OutageMode outage = OutageMode::none;
    std::vector<double> stationary;  // left fixed point of `transition`
    Matrix transition;               // row-stochastic, tridiagonal

    int num_states() const { return partition.num_states(); }
    void validate() const;
};

/// Per-state occupancy probabilities of the exponential SNR density on the
/// partition intervals, normalized over the partition support.
std::vector<double> stationary_probabilities(const SnrPartition& partition, double avg_snr);

/// Expected one-directional crossings per second of the given SNR level.
double level_crossing_rate(double snr_level, double avg_snr, double doppler_hz);

/// Build the per-frame channel transition chain. Throws ModelValidityError
/// when some row's crossing mass exceeds 1 (frame period too long for the
/// requested Doppler).
FsmcChannel build_transition_matrix(const SnrPartition& partition, double avg_snr, double doppler_hz,
                                    double frame_period_s, OutageMode outage = OutageMode::none);

/// Censor the lowest state out of the chain: states 1..N-1 become a
/// channel of their own, with the removed state's return mass folded into
/// the first remaining state's self-transition. This is the channel the
/// link actually experiences when state 0 is an outage state.
FsmcChannel transmission_submodel(const FsmcChannel& channel);

/// One observed off-diagonal transition probability, used for frame-period
/// calibration. `delta` is +1 (up) or -1 (down).
struct TransitionObservation {
    int state = 0;  // 0-based row index
    int delta = 0;
    double probability = 0.0;
};

/// Least-squares fit of the frame period to observed transition
/// probabilities at the given Doppler.
double calibrate_frame_period(const SnrPartition& partition, double avg_snr, double doppler_hz,
                              const std::vector<TransitionObservation>& observations,
                              OutageMode outage = OutageMode::none);

/// Solve for boundaries giving all states the same average time duration.
/// The Doppler frequency cancels in the duration-equality condition; it is
/// accepted for interface symmetry and validated only.
SnrPartition partition_equal_duration(int n_states, double avg_snr, double doppler_hz,
                                      int max_iterations = 200);

}  // namespace prada

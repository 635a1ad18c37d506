#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <vector>

#include "prada/prediction.hpp"

namespace prada {

/// Integer error-count switching thresholds for every setting.
///
/// After an M-frame period with l errors under setting r:
///   rate-up (to r-1)   iff l <= down[r]
///   rate-down (to r+1) iff l >  up[r]
///   stay               otherwise
/// Sentinels: down[0] = -1 (never rate-up from the top setting) and
/// up[R-1] = M (never rate-down from the bottom one).
struct ThresholdSet {
    int horizon = 0;           // M
    std::vector<int> down;     // L_{r,r-1}
    std::vector<int> up;       // L_{r,r+1}

    int num_settings() const { return static_cast<int>(down.size()); }

    static ThresholdSet no_switching(int num_settings, int horizon);

    bool feasible() const;
    void validate() const;
};

/// Markov chain over (setting, channel state) pairs at period boundaries.
/// Index m = setting * N + state.
struct InducedChain {
    int num_settings = 0;
    int num_states = 0;
    Matrix transition;  // RN x RN

    int index(int setting, int state) const { return setting * num_states + state; }
};

InducedChain build_induced_chain(const ErrorCountDistribution& f, const FsmcChannel& channel,
                                 const ThresholdSet& thresholds);

/// Average per-frame throughput over K periods from a given start pair.
double k_horizon_throughput(const InducedChain& chain, const ThroughputVector& xi, int start_index,
                            int k_periods);

struct ThresholdSearchResult {
    ThresholdSet thresholds;
    double objective = 0.0;
};

/// Steepest-ascent hill climbing over the 2R-2 free threshold values
/// (+/-1 neighbors, infeasible ones skipped), best of `restarts` random
/// initializations. Deterministic given the seed; ties go to the lowest
/// coordinate and to -1 before +1.
ThresholdSearchResult local_search_thresholds(const ErrorCountDistribution& f,
                                              const FsmcChannel& channel, const ThroughputVector& xi,
                                              int start_index, int k_periods, int restarts,
                                              uint64_t rng_seed);

/// Optimized threshold set per block-start pair, plus the objective each
/// one achieved.
struct ThresholdTable {
    int horizon = 0;   // M
    int k_periods = 0; // K
    int num_settings = 0;
    int num_states = 0;
    std::vector<ThresholdSet> sets;     // indexed by setting * N + state
    std::vector<double> objectives;

    const ThresholdSet& lookup(int setting, int state) const;
    double objective(int setting, int state) const {
        return objectives[static_cast<size_t>(setting) * num_states + state];
    }
};

ThresholdTable compile_threshold_table(const ErrorCountDistribution& f, const FsmcChannel& channel,
                                       const ThroughputVector& xi, int k_periods, int restarts,
                                       uint64_t rng_seed);

void write_threshold_table_csv(std::ostream& out, const ThresholdTable& table);
ThresholdTable read_threshold_table_csv(std::istream& in);

}  // namespace prada

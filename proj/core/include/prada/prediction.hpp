#pragma once

#include <array>
#include <memory>
#include <vector>

#include "prada/channel_model.hpp"
#include "prada/link_model.hpp"

namespace prada {

/// Coefficient array of an error-count generating polynomial:
/// coefficient[l] is the probability weight of exactly l errors.
using ErrorCountPolynomial = std::vector<double>;

/// Joint distribution of (error count, final channel state) over an
/// M-frame period for one setting: entry (i, k, l) is the probability of
/// ending in state k with l errors, starting from state i.
class ErrorCountSlice {
  public:
    ErrorCountSlice() = default;
    ErrorCountSlice(int n_states, int horizon)
        : n_states_(n_states),
          horizon_(horizon),
          f_(static_cast<size_t>(n_states) * n_states * (horizon + 1), 0.0) {}

    int num_states() const { return n_states_; }
    int horizon() const { return horizon_; }

    double at(int i, int k, int l) const { return f_[index(i, k, l)]; }
    double& at(int i, int k, int l) { return f_[index(i, k, l)]; }

    ErrorCountPolynomial polynomial(int i, int k) const;

  private:
    size_t index(int i, int k, int l) const {
        return (static_cast<size_t>(i) * n_states_ + k) * (horizon_ + 1) + l;
    }

    int n_states_ = 0;
    int horizon_ = 0;
    std::vector<double> f_;
};

/// All per-setting slices for one (channel, horizon).
struct ErrorCountDistribution {
    int horizon = 0;
    std::vector<ErrorCountSlice> per_setting;

    int num_settings() const { return static_cast<int>(per_setting.size()); }
    int num_states() const { return per_setting.empty() ? 0 : per_setting[0].num_states(); }
};

/// Expected M-frame throughput per (setting, start state), in data bits
/// per frame.
struct ThroughputVector {
    int num_settings = 0;
    int num_states = 0;
    std::vector<double> xi;  // [r * num_states + i]

    double at(int setting, int state) const {
        return xi[static_cast<size_t>(setting) * num_states + state];
    }
    double& at(int setting, int state) {
        return xi[static_cast<size_t>(setting) * num_states + state];
    }
};

/// Diagonal of the per-frame error PGF matrix for one setting: entry i is
/// the degree-1 polynomial [1-E, E].
std::vector<std::array<double, 2>> psi_matrix(int setting, const FerTable& fer);

/// Error-count distribution for one setting over an M-frame period, by
/// polynomial-matrix algebra with degree truncation at M.
ErrorCountSlice error_count_distribution(const FsmcChannel& channel, const FerTable& fer,
                                         int setting, int horizon);

/// All settings at once.
ErrorCountDistribution error_count_distribution_all(const FsmcChannel& channel, const FerTable& fer,
                                                    int horizon);

/// Process-wide cache keyed by a content hash of (transition matrix, FER
/// table, horizon); analysis and threshold optimization share results.
std::shared_ptr<const ErrorCountDistribution> cached_error_count_distribution(
    const FsmcChannel& channel, const FerTable& fer, int horizon);

/// xi[r][i] = k_r * sum_k sum_l ((M-l)/M) * F(i,k,l).
ThroughputVector expected_period_throughput(const ErrorCountDistribution& f,
                                            const SettingTable& settings);

}  // namespace prada

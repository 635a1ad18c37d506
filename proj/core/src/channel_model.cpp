#include "prada/channel_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "prada/errors.hpp"

namespace prada {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double exp_tail(double gamma, double avg_snr) {
    // P[SNR > gamma] for the exponential density; exp(-inf) underflows to 0
    return std::isfinite(gamma) ? std::exp(-gamma / avg_snr) : 0.0;
}

}  // namespace

SnrPartition SnrPartition::from_interior_db(const std::vector<double>& interior_db) {
    SnrPartition p;
    p.boundaries.reserve(interior_db.size() + 2);
    p.boundaries.push_back(0.0);
    for (double b : interior_db) p.boundaries.push_back(std::pow(10.0, b / 10.0));
    p.boundaries.push_back(kInf);
    p.validate();
    return p;
}

void SnrPartition::validate() const {
    if (boundaries.size() < 2) throw ValidationError("partition needs at least one state");
    if (boundaries.front() < 0.0) throw ValidationError("partition lower bound must be >= 0");
    if (!std::isinf(boundaries.back())) {
        throw ValidationError("partition upper bound must be the infinity sentinel");
    }
    for (size_t i = 1; i < boundaries.size(); ++i) {
        if (!(boundaries[i] > boundaries[i - 1])) {
            throw ValidationError("partition boundaries must be strictly increasing (index " +
                                  std::to_string(i) + ")");
        }
    }
}

void FsmcChannel::validate() const {
    partition.validate();
    const int n = num_states();
    if (transition.rows() != n || transition.cols() != n) {
        throw ValidationError("transition matrix dimension mismatch");
    }
    if (static_cast<int>(stationary.size()) != n) {
        throw ValidationError("stationary vector dimension mismatch");
    }
    double total = 0.0;
    for (double p : stationary) {
        if (p < 0.0 || p > 1.0) throw ValidationError("stationary entry outside [0,1]");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) throw ValidationError("stationary does not sum to 1");
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) {
            const double p = transition(i, j);
            if (p < 0.0 || p > 1.0) throw ValidationError("transition entry outside [0,1]");
            if (std::abs(i - j) > 1 && p != 0.0) throw ValidationError("transition not tridiagonal");
            row += p;
        }
        if (std::abs(row - 1.0) > 1e-12) {
            throw ValidationError("transition row " + std::to_string(i + 1) + " does not sum to 1");
        }
    }
    const std::vector<double> next = transition.left_apply(stationary);
    for (int i = 0; i < n; ++i) {
        if (std::abs(next[i] - stationary[i]) > 1e-9) {
            throw ValidationError("stationary is not a fixed point of the transition matrix");
        }
    }
}

std::vector<double> stationary_probabilities(const SnrPartition& partition, double avg_snr) {
    partition.validate();
    if (!(avg_snr > 0.0)) throw ValidationError("average SNR must be positive");
    const int n = partition.num_states();
    const double support = exp_tail(partition.boundaries.front(), avg_snr);
    std::vector<double> pi(n);
    for (int i = 0; i < n; ++i) {
        pi[i] = (exp_tail(partition.lower(i), avg_snr) - exp_tail(partition.upper(i), avg_snr)) /
                support;
    }
    return pi;
}

double level_crossing_rate(double snr_level, double avg_snr, double doppler_hz) {
    if (snr_level < 0.0) throw ValidationError("SNR level must be >= 0");
    if (!(avg_snr > 0.0)) throw ValidationError("average SNR must be positive");
    if (doppler_hz < 0.0) throw ValidationError("Doppler frequency must be >= 0");
    if (!std::isfinite(snr_level)) return 0.0;
    const double ratio = snr_level / avg_snr;
    return std::sqrt(2.0 * std::numbers::pi * ratio) * doppler_hz * std::exp(-ratio);
}

namespace {

// Row normalizers for the transition construction. With an outage state,
// rows of the transmitting states use probabilities conditioned on the
// channel being above the outage boundary.
std::vector<double> row_weights(const SnrPartition& partition, double avg_snr, OutageMode outage) {
    std::vector<double> pi = stationary_probabilities(partition, avg_snr);
    if (outage == OutageMode::first_state) {
        if (partition.num_states() < 2) {
            throw ValidationError("outage handling needs at least two states");
        }
        const double transmitting = 1.0 - pi[0];
        for (size_t i = 1; i < pi.size(); ++i) pi[i] /= transmitting;
    }
    return pi;
}

}  // namespace

FsmcChannel build_transition_matrix(const SnrPartition& partition, double avg_snr, double doppler_hz,
                                    double frame_period_s, OutageMode outage) {
    if (!(frame_period_s > 0.0)) throw ValidationError("frame period must be positive");
    const int n = partition.num_states();
    const std::vector<double> pi = stationary_probabilities(partition, avg_snr);
    const std::vector<double> weights = row_weights(partition, avg_snr, outage);

    Matrix p(n, n);
    for (int i = 0; i < n; ++i) {
        const double up = i < n - 1 ? level_crossing_rate(partition.upper(i), avg_snr, doppler_hz) *
                                          frame_period_s / weights[i]
                                    : 0.0;
        const double down = i > 0 ? level_crossing_rate(partition.lower(i), avg_snr, doppler_hz) *
                                        frame_period_s / weights[i]
                                  : 0.0;
        if (up + down > 1.0) {
            throw ModelValidityError("state " + std::to_string(i + 1) +
                                     ": per-frame crossing mass " + std::to_string(up + down) +
                                     " exceeds 1; reduce the frame period");
        }
        if (i < n - 1) p(i, i + 1) = up;
        if (i > 0) p(i, i - 1) = down;
        p(i, i) = 1.0 - up - down;
    }

    FsmcChannel channel;
    channel.partition = partition;
    channel.avg_snr = avg_snr;
    channel.doppler_hz = doppler_hz;
    channel.frame_period_s = frame_period_s;
    channel.outage = outage;

    if (outage == OutageMode::none || doppler_hz == 0.0) {
        channel.stationary = pi;
    } else {
        // detailed balance of the birth-death chain actually built
        std::vector<double> s(n, 0.0);
        s[0] = 1.0;
        for (int i = 0; i + 1 < n; ++i) {
            if (p(i + 1, i) == 0.0) throw ModelValidityError("degenerate down transition");
            s[i + 1] = s[i] * p(i, i + 1) / p(i + 1, i);
        }
        double total = 0.0;
        for (double v : s) total += v;
        for (double& v : s) v /= total;
        channel.stationary = std::move(s);
    }
    channel.transition = std::move(p);
    channel.validate();
    return channel;
}

FsmcChannel transmission_submodel(const FsmcChannel& channel) {
    const int n = channel.num_states();
    if (n < 2) throw ValidationError("cannot censor the only state");

    SnrPartition sub;
    sub.boundaries.assign(channel.partition.boundaries.begin() + 1,
                          channel.partition.boundaries.end());

    FsmcChannel out;
    out.partition = sub;
    out.avg_snr = channel.avg_snr;
    out.doppler_hz = channel.doppler_hz;
    out.frame_period_s = channel.frame_period_s;
    out.outage = OutageMode::none;
    out.stationary = stationary_probabilities(sub, channel.avg_snr);

    Matrix q(n - 1, n - 1);
    for (int i = 1; i < n; ++i) {
        for (int j = 1; j < n; ++j) q(i - 1, j - 1) = channel.transition(i, j);
    }
    // excursions through the censored state always re-enter at its neighbor
    q(0, 0) += channel.transition(1, 0);
    out.transition = std::move(q);
    out.validate();
    return out;
}

double calibrate_frame_period(const SnrPartition& partition, double avg_snr, double doppler_hz,
                              const std::vector<TransitionObservation>& observations,
                              OutageMode outage) {
    if (observations.empty()) throw ValidationError("no transition observations to calibrate against");
    if (!(doppler_hz > 0.0)) throw ValidationError("calibration needs a positive Doppler frequency");
    const int n = partition.num_states();
    const std::vector<double> weights = row_weights(partition, avg_snr, outage);

    double num = 0.0;
    double den = 0.0;
    for (const TransitionObservation& obs : observations) {
        if (obs.state < 0 || obs.state >= n || (obs.delta != 1 && obs.delta != -1)) {
            throw ValidationError("invalid transition observation");
        }
        const double boundary = obs.delta > 0 ? partition.upper(obs.state) : partition.lower(obs.state);
        const double coeff =
            level_crossing_rate(boundary, avg_snr, doppler_hz) / weights[obs.state];
        num += coeff * obs.probability;
        den += coeff * coeff;
    }
    if (den == 0.0) throw NumericError("calibration is degenerate (all coefficients zero)");
    return num / den;
}

namespace {

// Mean time in a state per unit Doppler: pi_i / (N(lower) + N(upper)).
double state_duration(double lo, double hi, double avg_snr) {
    const double mass = exp_tail(lo, avg_snr) - exp_tail(hi, avg_snr);
    return mass / (level_crossing_rate(lo, avg_snr, 1.0) + level_crossing_rate(hi, avg_snr, 1.0));
}

// Next boundary making the state [lo, G) last `tau`; nullopt if no G does.
std::optional<double> solve_next_boundary(double lo, double tau, double avg_snr, int iters) {
    const double rate_lo = level_crossing_rate(lo, avg_snr, 1.0);
    auto residual = [&](double g) {
        return (exp_tail(lo, avg_snr) - exp_tail(g, avg_snr)) -
               tau * (rate_lo + level_crossing_rate(g, avg_snr, 1.0));
    };
    double a = lo + 1e-15 * (1.0 + lo);
    double b = lo + 50.0 * avg_snr;
    if (residual(b) < 0.0) return std::nullopt;
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (a + b);
        (residual(mid) > 0.0 ? b : a) = mid;
    }
    return 0.5 * (a + b);
}

}  // namespace

SnrPartition partition_equal_duration(int n_states, double avg_snr, double doppler_hz,
                                      int max_iterations) {
    if (n_states < 2) throw ValidationError("equal-duration partition needs at least two states");
    if (!(avg_snr > 0.0)) throw ValidationError("average SNR must be positive");
    if (doppler_hz < 0.0) throw ValidationError("Doppler frequency must be >= 0");

    // Outer bisection on the common duration tau (per unit Doppler; the
    // Doppler frequency cancels in the equality condition). Given tau the
    // boundaries follow one by one; the residual is the last state's
    // duration mismatch.
    auto boundaries_for = [&](double tau) -> std::optional<std::vector<double>> {
        std::vector<double> g{0.0};
        for (int i = 0; i < n_states - 1; ++i) {
            auto next = solve_next_boundary(g.back(), tau, avg_snr, max_iterations);
            if (!next) return std::nullopt;
            g.push_back(*next);
        }
        return g;
    };
    auto residual = [&](double tau) -> std::optional<double> {
        auto g = boundaries_for(tau);
        if (!g) return std::nullopt;
        const double last = exp_tail(g->back(), avg_snr) /
                            level_crossing_rate(g->back(), avg_snr, 1.0);
        return last - tau;
    };

    double lo = 1e-9;
    double hi = 10.0;
    const auto r_lo = residual(lo);
    if (!r_lo) throw NumericError("equal-duration solver: no valid bracket");
    for (int i = 0; i < max_iterations; ++i) {
        const double mid = 0.5 * (lo + hi);
        const auto r = residual(mid);
        if (!r) {
            hi = mid;  // tau too large to place all boundaries
        } else if ((*r > 0.0) == (*r_lo > 0.0)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double tau = 0.5 * (lo + hi);
    const auto g = boundaries_for(tau);
    if (!g) throw NumericError("equal-duration solver failed to converge");

    SnrPartition partition;
    partition.boundaries = *g;
    partition.boundaries.push_back(kInf);
    partition.validate();

    // convergence check: relative spread of the state durations
    double min_tau = kInf;
    double max_tau = 0.0;
    for (int i = 0; i < n_states; ++i) {
        const double t = state_duration(partition.lower(i), partition.upper(i), avg_snr);
        min_tau = std::min(min_tau, t);
        max_tau = std::max(max_tau, t);
    }
    const double spread = (max_tau - min_tau) / max_tau;
    if (spread > 1e-6) {
        throw NumericError("equal-duration solver residual " + std::to_string(spread) +
                           " above tolerance");
    }
    return partition;
}

}  // namespace prada

#include "prada/link_model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "prada/csv.hpp"
#include "prada/errors.hpp"

namespace prada {

void SettingTable::validate() const {
    if (settings.empty()) throw ValidationError("setting table is empty");
    for (int r = 0; r < count(); ++r) {
        const Setting& s = settings[r];
        if (s.data_bits_per_frame <= 0) {
            throw ValidationError("setting " + id(r) + " has non-positive data bits per frame");
        }
        if (s.frame_symbols <= 0) {
            throw ValidationError("setting " + id(r) + " has non-positive frame symbols");
        }
        if (r > 0 && s.data_bits_per_frame >= settings[r - 1].data_bits_per_frame) {
            throw ValidationError("setting data rates must be strictly decreasing (" + id(r) + ")");
        }
    }
}

FerTable FerTable::drop_lowest_states(int count) const {
    if (count < 0 || count >= num_states) throw ValidationError("invalid state drop count");
    FerTable out;
    out.num_settings = num_settings;
    out.num_states = num_states - count;
    out.values.resize(static_cast<size_t>(num_settings) * out.num_states);
    for (int r = 0; r < num_settings; ++r) {
        for (int i = 0; i < out.num_states; ++i) out.at(r, i) = at(r, i + count);
    }
    return out;
}

void FerTable::validate(bool hard_monotonicity) const {
    if (num_settings <= 0 || num_states <= 0) throw ValidationError("empty FER table");
    if (values.size() != static_cast<size_t>(num_settings) * num_states) {
        throw ValidationError("FER table storage size mismatch");
    }
    for (int r = 0; r < num_settings; ++r) {
        for (int i = 0; i < num_states; ++i) {
            const double e = at(r, i);
            if (!(e >= 0.0 && e <= 1.0)) {
                throw ValidationError("FER outside [0,1] at setting " + std::to_string(r + 1) +
                                      ", state " + std::to_string(i + 1));
            }
            if (hard_monotonicity && i > 0 && at(r, i) > at(r, i - 1)) {
                throw ValidationError("FER not non-increasing in state at setting " +
                                      std::to_string(r + 1) + ", state " + std::to_string(i + 1));
            }
        }
    }
}

FerTable load_fer_table(std::istream& source, const SettingTable& settings, int n_states,
                        bool hard_monotonicity) {
    const auto rows = read_csv(source);
    if (rows.empty()) throw IngestionError("FER table is empty");
    const int n_settings = settings.count();

    const auto& header = rows[0];
    if (static_cast<int>(header.size()) != n_settings) {
        throw IngestionError("FER table header has " + std::to_string(header.size()) +
                             " columns, expected " + std::to_string(n_settings));
    }
    for (int r = 0; r < n_settings; ++r) {
        if (header[r] != settings.id(r)) {
            throw IngestionError("FER table header column " + std::to_string(r + 1) + " is '" +
                                 header[r] + "', expected '" + settings.id(r) + "'");
        }
    }
    if (static_cast<int>(rows.size()) - 1 != n_states) {
        throw IngestionError("FER table has " + std::to_string(rows.size() - 1) +
                             " state rows, expected " + std::to_string(n_states));
    }

    FerTable table;
    table.num_settings = n_settings;
    table.num_states = n_states;
    table.values.resize(static_cast<size_t>(n_settings) * n_states);
    for (int i = 0; i < n_states; ++i) {
        const auto& row = rows[i + 1];
        if (static_cast<int>(row.size()) != n_settings) {
            throw IngestionError("FER table row " + std::to_string(i + 2) + " has " +
                                 std::to_string(row.size()) + " cells, expected " +
                                 std::to_string(n_settings));
        }
        for (int r = 0; r < n_settings; ++r) {
            double value = 0.0;
            try {
                size_t used = 0;
                value = std::stod(row[r], &used);
                if (used != row[r].size()) throw std::invalid_argument(row[r]);
            } catch (const std::exception&) {
                throw IngestionError("FER table row " + std::to_string(i + 2) + ", column " +
                                     std::to_string(r + 1) + ": cannot parse '" + row[r] + "'");
            }
            if (!(value >= 0.0 && value <= 1.0)) {
                throw IngestionError("FER table row " + std::to_string(i + 2) + ", column " +
                                     std::to_string(r + 1) + ": value " + row[r] +
                                     " outside [0,1]");
            }
            table.at(r, i) = value;
        }
    }
    try {
        table.validate(hard_monotonicity);
    } catch (const ValidationError& e) {
        throw IngestionError(e.what());
    }
    return table;
}

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double fa, double b, double fb,
                double m, double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(a, fa, m, fm, flm);
    const double right = simpson(m, fm, b, fb, frm);
    // At depth 0 the subinterval is ~(b-a)/2^48 wide, so even a jump
    // discontinuity contributes less than the tolerance; accept the estimate.
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
    }
    return adaptive(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(m);
    return adaptive(f, a, fa, b, fb, m, fm, simpson(a, fa, b, fb, fm), tol, 48);
}

}  // namespace

double state_fer_from_curve(const std::function<double(double)>& curve, int state,
                            const SnrPartition& partition, double avg_snr, double rel_tol) {
    partition.validate();
    if (state < 0 || state >= partition.num_states()) throw ValidationError("state out of range");
    if (!(avg_snr > 0.0)) throw ValidationError("average SNR must be positive");

    const double lo = partition.lower(state);
    const double hi = partition.upper(state);
    const double mass = std::exp(-lo / avg_snr) -
                        (std::isfinite(hi) ? std::exp(-hi / avg_snr) : 0.0);
    if (mass <= 0.0) throw NumericError("state has no probability mass");

    double weighted;
    if (std::isfinite(hi)) {
        auto f = [&](double g) { return curve(g) * std::exp(-g / avg_snr) / avg_snr; };
        weighted = integrate(f, lo, hi, rel_tol * mass);
    } else {
        // substitute u = exp(-(g - lo)/avg_snr): the open tail becomes
        // integral over u in (0,1] with gamma(u) = lo - avg_snr * ln(u);
        // u = 0 maps to the curve's limit at +infinity.
        auto f = [&](double u) {
            const double g = u > 0.0 ? lo - avg_snr * std::log(u)
                                     : std::numeric_limits<double>::infinity();
            return curve(g) * std::exp(-lo / avg_snr);
        };
        weighted = integrate(f, 0.0, 1.0, rel_tol * mass);
    }
    return weighted / mass;
}

double state_fer_from_curve(const std::function<double(double)>& curve, int state,
                            const FsmcChannel& channel, double rel_tol) {
    return state_fer_from_curve(curve, state, channel.partition, channel.avg_snr, rel_tol);
}

double first_frame_throughput(int setting, int state, const SettingTable& settings,
                              const FerTable& fer) {
    return settings.bits(setting) * (1.0 - fer.at(setting, state));
}

}  // namespace prada

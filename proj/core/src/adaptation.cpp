#include "prada/adaptation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "prada/csv.hpp"
#include "prada/errors.hpp"
#include "prada/rng.hpp"

namespace prada {

ThresholdSet ThresholdSet::no_switching(int num_settings, int horizon) {
    ThresholdSet t;
    t.horizon = horizon;
    t.down.assign(num_settings, -1);
    t.up.assign(num_settings, horizon);
    return t;
}

bool ThresholdSet::feasible() const {
    const int r_count = num_settings();
    if (r_count == 0 || static_cast<int>(up.size()) != r_count) return false;
    if (down[0] != -1 || up[r_count - 1] != horizon) return false;
    for (int r = 0; r < r_count; ++r) {
        if (down[r] < -1 || up[r] > horizon || down[r] > up[r]) return false;
    }
    return true;
}

void ThresholdSet::validate() const {
    if (!feasible()) throw ValidationError("threshold set violates -1 <= down <= up <= M");
}

namespace {

/// Cumulative error-count mass per setting: entry (i, k, l+1) is
/// P[end in k with at most l errors | start in i]. Lets a chain row be
/// assembled from three range lookups per destination state.
class CumulativeMass {
  public:
    CumulativeMass(const ErrorCountDistribution& f) : n_(f.num_states()), m_(f.horizon) {
        c_.resize(f.num_settings());
        for (int r = 0; r < f.num_settings(); ++r) {
            const ErrorCountSlice& slice = f.per_setting[r];
            auto& c = c_[r];
            c.assign(static_cast<size_t>(n_) * n_ * (m_ + 2), 0.0);
            for (int i = 0; i < n_; ++i) {
                for (int k = 0; k < n_; ++k) {
                    double acc = 0.0;
                    for (int l = 0; l <= m_; ++l) {
                        acc += slice.at(i, k, l);
                        c[index(i, k, l + 1)] = acc;
                    }
                }
            }
        }
    }

    /// P[end in k, l in (lo, hi] | start in i] under setting r.
    double range(int r, int i, int k, int lo, int hi) const {
        const auto& c = c_[r];
        return c[index(i, k, hi + 1)] - c[index(i, k, lo + 1)];
    }

    int num_states() const { return n_; }
    int horizon() const { return m_; }
    int num_settings() const { return static_cast<int>(c_.size()); }

  private:
    size_t index(int i, int k, int l) const {
        return (static_cast<size_t>(i) * n_ + k) * (m_ + 2) + l;
    }

    int n_;
    int m_;
    std::vector<std::vector<double>> c_;
};

InducedChain build_chain_from(const CumulativeMass& mass, const Matrix& p,
                              const ThresholdSet& t) {
    const int r_count = mass.num_settings();
    const int n = mass.num_states();
    const int m = mass.horizon();
    InducedChain chain;
    chain.num_settings = r_count;
    chain.num_states = n;
    chain.transition = Matrix(r_count * n, r_count * n);
    std::vector<double> bucket(n);
    for (int r = 0; r < r_count; ++r) {
        for (int i = 0; i < n; ++i) {
            const int row = chain.index(r, i);
            // The switch happens at the period boundary: the period's last
            // state k takes one more channel step into the next period.
            const auto deposit = [&](int q, int lo, int hi) {
                for (int k = 0; k < n; ++k) bucket[k] = mass.range(r, i, k, lo, hi);
                for (int k = 0; k < n; ++k) {
                    if (bucket[k] == 0.0) continue;
                    for (int k2 = std::max(0, k - 1); k2 <= std::min(n - 1, k + 1); ++k2) {
                        chain.transition(row, chain.index(q, k2)) += bucket[k] * p(k, k2);
                    }
                }
            };
            if (t.down[r] >= 0) deposit(r - 1, -1, t.down[r]);
            deposit(r, t.down[r], t.up[r]);
            if (t.up[r] < m) deposit(r + 1, t.up[r], m);
        }
    }
    return chain;
}

double objective_from(const InducedChain& chain, const ThroughputVector& xi, int start_index,
                      int k_periods) {
    const int dim = chain.num_settings * chain.num_states;
    std::vector<double> state(dim, 0.0);
    state[start_index] = 1.0;
    double total = 0.0;
    for (int t = 0; t < k_periods; ++t) {
        for (int m = 0; m < dim; ++m) {
            if (state[m] != 0.0) {
                total += state[m] * xi.xi[m];
            }
        }
        if (t + 1 < k_periods) state = chain.transition.left_apply(state);
    }
    return total / k_periods;
}

}  // namespace

InducedChain build_induced_chain(const ErrorCountDistribution& f, const FsmcChannel& channel,
                                 const ThresholdSet& thresholds) {
    if (f.num_states() != channel.num_states()) {
        throw ValidationError("distribution does not match the channel");
    }
    thresholds.validate();
    if (thresholds.num_settings() != f.num_settings()) {
        throw ValidationError("threshold set does not match the setting count");
    }
    if (thresholds.horizon != f.horizon) {
        throw ValidationError("threshold horizon does not match the distribution");
    }
    return build_chain_from(CumulativeMass(f), channel.transition, thresholds);
}

double k_horizon_throughput(const InducedChain& chain, const ThroughputVector& xi, int start_index,
                            int k_periods) {
    if (k_periods < 1) throw ValidationError("k_periods must be at least 1");
    if (xi.num_settings != chain.num_settings || xi.num_states != chain.num_states) {
        throw ValidationError("throughput vector does not match the chain");
    }
    if (start_index < 0 || start_index >= chain.num_settings * chain.num_states) {
        throw ValidationError("start index out of range");
    }
    return objective_from(chain, xi, start_index, k_periods);
}

namespace {

struct Coordinate {
    int setting;
    bool is_up;  // false -> down threshold
};

std::vector<Coordinate> free_coordinates(int num_settings) {
    std::vector<Coordinate> coords;
    for (int r = 0; r < num_settings; ++r) {
        if (r > 0) coords.push_back({r, false});
        if (r < num_settings - 1) coords.push_back({r, true});
    }
    return coords;
}

int& coord_value(ThresholdSet& t, const Coordinate& c) {
    return c.is_up ? t.up[c.setting] : t.down[c.setting];
}

ThresholdSet random_start(int num_settings, int horizon, Rng& rng) {
    ThresholdSet t = ThresholdSet::no_switching(num_settings, horizon);
    for (int r = 1; r < num_settings; ++r) t.down[r] = rng.int_range(-1, horizon);
    for (int r = 0; r < num_settings - 1; ++r) t.up[r] = rng.int_range(t.down[r], horizon);
    return t;
}

}  // namespace

ThresholdSearchResult local_search_thresholds(const ErrorCountDistribution& f,
                                              const FsmcChannel& channel, const ThroughputVector& xi,
                                              int start_index, int k_periods, int restarts,
                                              uint64_t rng_seed) {
    if (restarts < 1) throw ValidationError("restarts must be at least 1");
    const int r_count = f.num_settings();
    const int horizon = f.horizon;
    const CumulativeMass mass(f);
    if (mass.num_states() != channel.num_states()) {
        throw ValidationError("distribution does not match the channel");
    }
    const auto coords = free_coordinates(r_count);

    auto evaluate = [&](const ThresholdSet& t) {
        return objective_from(build_chain_from(mass, channel.transition, t), xi, start_index,
                              k_periods);
    };

    ThresholdSearchResult best;
    best.objective = -1.0;
    for (int restart = 0; restart < restarts; ++restart) {
        Rng rng(derive_stream_seed(rng_seed, static_cast<uint64_t>(restart)));
        ThresholdSet current = restart == 0 ? ThresholdSet::no_switching(r_count, horizon)
                                            : random_start(r_count, horizon, rng);
        double value = evaluate(current);
        for (;;) {
            ThresholdSet best_neighbor;
            double best_value = value;
            bool improved = false;
            for (const Coordinate& c : coords) {
                for (int delta : {-1, +1}) {
                    ThresholdSet candidate = current;
                    coord_value(candidate, c) += delta;
                    if (!candidate.feasible()) continue;
                    const double v = evaluate(candidate);
                    if (v > best_value) {
                        best_value = v;
                        best_neighbor = candidate;
                        improved = true;
                    }
                }
            }
            if (!improved) break;
            current = std::move(best_neighbor);
            value = best_value;
        }
        if (value > best.objective) {
            best.objective = value;
            best.thresholds = current;
        }
    }
    return best;
}

const ThresholdSet& ThresholdTable::lookup(int setting, int state) const {
    return sets[static_cast<size_t>(setting) * num_states + state];
}

ThresholdTable compile_threshold_table(const ErrorCountDistribution& f, const FsmcChannel& channel,
                                       const ThroughputVector& xi, int k_periods, int restarts,
                                       uint64_t rng_seed) {
    ThresholdTable table;
    table.horizon = f.horizon;
    table.k_periods = k_periods;
    table.num_settings = f.num_settings();
    table.num_states = f.num_states();
    const int pairs = table.num_settings * table.num_states;
    table.sets.resize(pairs);
    table.objectives.resize(pairs);
    for (int idx = 0; idx < pairs; ++idx) {
        const auto result =
            local_search_thresholds(f, channel, xi, idx, k_periods, restarts,
                                    derive_stream_seed(rng_seed, static_cast<uint64_t>(idx)));
        table.sets[idx] = result.thresholds;
        table.objectives[idx] = result.objective;
    }
    return table;
}

void write_threshold_table_csv(std::ostream& out, const ThresholdTable& table) {
    out << "horizon,k_periods,num_settings,num_states\n";
    out << table.horizon << ',' << table.k_periods << ',' << table.num_settings << ','
        << table.num_states << '\n';
    out << "start_setting,start_state,setting,down,up,objective\n";
    for (int r0 = 0; r0 < table.num_settings; ++r0) {
        for (int i0 = 0; i0 < table.num_states; ++i0) {
            const ThresholdSet& t = table.lookup(r0, i0);
            const std::string objective = format_general(table.objective(r0, i0), 17);
            for (int r = 0; r < table.num_settings; ++r) {
                out << (r0 + 1) << ',' << (i0 + 1) << ',' << (r + 1) << ',' << t.down[r] << ','
                    << t.up[r] << ',' << objective << '\n';
            }
        }
    }
}

ThresholdTable read_threshold_table_csv(std::istream& in) {
    const auto rows = read_csv(in);
    if (rows.size() < 3) throw IngestionError("threshold table truncated");
    if (rows[0] != std::vector<std::string>{"horizon", "k_periods", "num_settings", "num_states"}) {
        throw IngestionError("unexpected threshold table header");
    }
    ThresholdTable table;
    try {
        table.horizon = std::stoi(rows[1].at(0));
        table.k_periods = std::stoi(rows[1].at(1));
        table.num_settings = std::stoi(rows[1].at(2));
        table.num_states = std::stoi(rows[1].at(3));
    } catch (const std::exception&) {
        throw IngestionError("cannot parse threshold table dimensions");
    }
    if (table.horizon < 1 || table.k_periods < 1 || table.num_settings < 1 ||
        table.num_states < 1) {
        throw IngestionError("non-positive threshold table dimension");
    }
    const int pairs = table.num_settings * table.num_states;
    table.sets.assign(pairs, ThresholdSet::no_switching(table.num_settings, table.horizon));
    table.objectives.assign(pairs, 0.0);

    const size_t expected = 3 + static_cast<size_t>(pairs) * table.num_settings;
    if (rows.size() != expected) {
        throw IngestionError("threshold table has " + std::to_string(rows.size() - 3) +
                             " data rows, expected " + std::to_string(expected - 3));
    }
    size_t row_index = 3;
    for (int idx = 0; idx < pairs; ++idx) {
        ThresholdSet t;
        t.horizon = table.horizon;
        t.down.resize(table.num_settings);
        t.up.resize(table.num_settings);
        for (int r = 0; r < table.num_settings; ++r, ++row_index) {
            const auto& row = rows[row_index];
            if (row.size() != 6) throw IngestionError("bad threshold table row");
            try {
                const int r0 = std::stoi(row[0]) - 1;
                const int i0 = std::stoi(row[1]) - 1;
                const int r_here = std::stoi(row[2]) - 1;
                if (r0 * table.num_states + i0 != idx || r_here != r) {
                    throw IngestionError("threshold table rows out of order");
                }
                t.down[r] = std::stoi(row[3]);
                t.up[r] = std::stoi(row[4]);
                table.objectives[idx] = std::stod(row[5]);
            } catch (const IngestionError&) {
                throw;
            } catch (const std::exception&) {
                throw IngestionError("cannot parse threshold table row " +
                                     std::to_string(row_index + 1));
            }
        }
        t.validate();
        table.sets[idx] = std::move(t);
    }
    return table;
}

}  // namespace prada

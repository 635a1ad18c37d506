// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Monte Carlo criteria state their frame counts explicitly.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "prada/pipeline.hpp"
#include "prada/rng.hpp"
#include "prada/snr.hpp"

using namespace prada;

namespace {

int g_failures = 0;
std::vector<std::string> g_notes;

void note(const std::string& text) { g_notes.push_back(text); }

void report(int criterion, const std::string& title, bool pass) {
    std::printf("criterion %d %s: %s\n", criterion, pass ? "PASS" : "FAIL", title.c_str());
    for (const std::string& n : g_notes) std::printf("    %s\n", n.c_str());
    g_notes.clear();
    if (!pass) ++g_failures;
}

bool within(double value, double target, double rel_tol, const std::string& label) {
    const double rel = value / target - 1.0;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s: got %.4f, target %.4f (%+.2f%%, tol %.1f%%)",
                  label.c_str(), value, target, 100.0 * rel, 100.0 * rel_tol);
    note(buf);
    return std::abs(rel) <= rel_tol;
}

struct Fixture {
    RunConfig config;
    double frame_period;
    FerTable fer;

    Fixture()
        : config(load_run_config(std::string(PRADA_CONFIG_DIR) + "/paper_4hz.json")),
          frame_period(resolve_frame_period(config.channel, config.base_dir)),
          fer(load_fer_table_file(config)) {}

    ModelBundle at(double doppler) const {
        return build_model_bundle(config.channel, fer, frame_period, doppler,
                                  config.channel.avg_snr_db);
    }
};

const std::vector<double> kDopplerGrid{2, 4, 6, 8, 10, 12, 14, 16, 18, 20};
const std::vector<double> kTargetsA{1911.65, 1831.16, 1779.94, 1745.16, 1742.85,
                                    1737.48, 1733.25, 1730.02, 1727.65, 1725.66};
const std::vector<double> kTargetsB{1939.18, 1872.55, 1828.52, 1798.56, 1779.25,
                                    1764.22, 1754.44, 1747.02, 1740.13, 1736.69};

void criterion_1(const Fixture& fx) {
    bool pass = true;
    const auto obs = load_transition_observations(std::string(PRADA_CONFIG_DIR) +
                                                  "/reference_transitions_4hz.csv");
    const ModelBundle bundle = fx.at(4.0);
    double max_err = 0.0;
    for (const TransitionObservation& o : obs) {
        max_err = std::max(max_err,
                           std::abs(bundle.full.transition(o.state, o.state + o.delta) -
                                    o.probability));
    }
    char buf[120];
    std::snprintf(buf, sizeof(buf), "max transition entry error %.5f (tol 0.0005)", max_err);
    note(buf);
    pass = pass && max_err <= 5e-4;

    const double p12 = bundle.full.transition(0, 1) / 4.0;
    const double p21 = bundle.full.transition(1, 0) / 4.0;
    std::snprintf(buf, sizeof(buf), "Doppler-normalized P12/f=%.5f (0.00268), P21/f=%.5f (0.00386)",
                  p12, p21);
    note(buf);
    pass = pass && std::abs(p12 - 0.00268) <= 2e-4 && std::abs(p21 - 0.00386) <= 2e-4;
    report(1, "channel transition table reproduction", pass);
}

void criterion_2(const Fixture& fx) {
    bool pass = true;
    for (size_t j = 0; j < kDopplerGrid.size(); ++j) {
        const ModelBundle bundle = fx.at(kDopplerGrid[j]);
        const ThroughputVector xi_a = throughput_for_horizon(bundle, fx.config.settings, 120);
        const double value_a = analytical_throughput_prada_a(bundle.sim, xi_a);
        pass = within(value_a, kTargetsA[j], 0.01,
                      "analytical PRADA-A f=" + std::to_string((int)kDopplerGrid[j])) &&
               pass;

        const auto f = cached_error_count_distribution(bundle.sim, bundle.fer_sim, 30);
        const ThroughputVector xi_b = expected_period_throughput(*f, fx.config.settings);
        const ThresholdTable table = compile_thresholds(bundle, fx.config.settings,
                                                        fx.config.prada_b);
        const AnalyticThroughput value_b =
            analytical_throughput_prada_b(bundle.sim, *f, xi_b, table, fx.config.prada_b.k_periods);
        pass = within(value_b.value, kTargetsB[j], 0.02,
                      "analytical PRADA-B f=" + std::to_string((int)kDopplerGrid[j])) &&
               pass;
    }
    report(2, "analytical throughput over the Doppler grid", pass);
}

std::map<std::string, double> simulate_at(const Fixture& fx, double doppler, long frames) {
    const SimulationPlan plan(fx.config, fx.fer, fx.frame_period, {doppler},
                              fx.config.channel.avg_snr_db, frames);
    const auto reports = run_comparison(plan.runs(), plan.sim_models(), {0}, plan.block_frames(),
                                        frames, fx.config.simulation.master_seed);
    std::map<std::string, double> out;
    for (const auto& r : reports) out[r.scenario_id] = r.average_throughput;
    return out;
}

void criterion_3(const Fixture& fx) {
    const long frames = 20'000'000;  // slow mixing at 4 Hz needs the long run
    note("frames = " + std::to_string(frames));
    const auto results = simulate_at(fx, 4.0, frames);
    bool pass = true;
    const std::vector<std::pair<std::string, double>> targets{
        {"fixed_s_1", 527.6}, {"fixed_s_2", 920.8},  {"fixed_s_3", 1724.8},
        {"fixed_s_4", 1544.4}, {"fixed_s_5", 854.2}, {"prada_a", 1829.7},
        {"prada_b", 1873.9}};
    double best_fixed = 0.0;
    for (const auto& [id, target] : targets) {
        pass = within(results.at(id), target, 0.02, id) && pass;
        if (id.rfind("fixed_", 0) == 0) best_fixed = std::max(best_fixed, results.at(id));
    }
    const bool order = results.at("prada_b") > results.at("prada_a") &&
                       results.at("prada_a") > best_fixed;
    note(std::string("ordering PRADA-B > PRADA-A > best fixed: ") + (order ? "yes" : "no"));
    report(3, "simulated scenario suite at 4 Hz", pass && order);
}

void criterion_4(const Fixture& fx) {
    const RunConfig config =
        load_run_config(std::string(PRADA_CONFIG_DIR) + "/doppler_variation.json");
    const long frames = config.simulation.total_frames;
    note("frames = " + std::to_string(frames));
    const SimulationPlan plan(config, fx.fer, fx.frame_period, config.schedule.values_hz,
                              config.channel.avg_snr_db, frames);
    const long blocks = (frames + plan.block_frames() - 1) / plan.block_frames();
    const auto schedule = random_model_schedule(
        static_cast<int>(config.schedule.values_hz.size()), blocks, config.schedule.seed);
    const auto reports = run_comparison(plan.runs(), plan.sim_models(), schedule,
                                        plan.block_frames(), frames,
                                        config.simulation.master_seed);
    std::map<std::string, double> results;
    for (const auto& r : reports) results[r.scenario_id] = r.average_throughput;
    bool pass = within(results.at("prada_a"), 1768.0, 0.03, "PRADA-A");
    pass = within(results.at("prada_b"), 1792.0, 0.03, "PRADA-B") && pass;
    pass = within(results.at("greedy"), 1731.0, 0.03, "greedy") && pass;
    const bool order = results.at("prada_b") > results.at("prada_a") &&
                       results.at("prada_a") > results.at("greedy");
    note(std::string("ordering PRADA-B > PRADA-A > greedy: ") + (order ? "yes" : "no"));
    report(4, "Doppler-variation run", pass && order);
}

void criterion_5(const Fixture& fx) {
    const long frames = 5'000'000;
    note("frames per Doppler point = " + std::to_string(frames));
    bool pass = true;
    for (size_t j = 0; j < kDopplerGrid.size(); ++j) {
        const double doppler = kDopplerGrid[j];
        const ModelBundle bundle = fx.at(doppler);
        const ThroughputVector xi_a = throughput_for_horizon(bundle, fx.config.settings, 120);
        const double ana_a = analytical_throughput_prada_a(bundle.sim, xi_a);
        const auto f = cached_error_count_distribution(bundle.sim, bundle.fer_sim, 30);
        const ThroughputVector xi_b = expected_period_throughput(*f, fx.config.settings);
        const ThresholdTable table = compile_thresholds(bundle, fx.config.settings,
                                                        fx.config.prada_b);
        const AnalyticThroughput ana_b =
            analytical_throughput_prada_b(bundle.sim, *f, xi_b, table, fx.config.prada_b.k_periods);
        const auto sim = simulate_at(fx, doppler, frames);
        pass = within(sim.at("prada_a"), ana_a, 0.02,
                      "sim vs analytic PRADA-A f=" + std::to_string((int)doppler)) &&
               pass;
        pass = within(sim.at("prada_b"), ana_b.value, 0.02,
                      "sim vs analytic PRADA-B f=" + std::to_string((int)doppler)) &&
               pass;
    }
    report(5, "simulation cross-validates the analytical values", pass);
}

// --- property-based criteria ----------------------------------------------

FsmcChannel toy_channel(const Matrix& p) {
    FsmcChannel channel;
    for (int i = 0; i <= p.rows(); ++i) channel.partition.boundaries.push_back(i);
    channel.partition.boundaries.back() = std::numeric_limits<double>::infinity();
    channel.avg_snr = 1.0;
    channel.transition = p;
    channel.stationary.assign(p.rows(), 1.0 / p.rows());
    return channel;
}

Matrix random_chain(int n, Rng& rng) {
    Matrix p(n, n);
    for (int i = 0; i < n; ++i) {
        double up = i < n - 1 ? rng.uniform() : 0.0;
        double down = i > 0 ? rng.uniform() : 0.0;
        double stay = rng.uniform() + 0.5;
        const double total = up + down + stay;
        if (i < n - 1) p(i, i + 1) = up / total;
        if (i > 0) p(i, i - 1) = down / total;
        p(i, i) = stay / total;
    }
    return p;
}

FerTable random_fer(int r_count, int n, Rng& rng) {
    FerTable fer;
    fer.num_settings = r_count;
    fer.num_states = n;
    fer.values.resize(static_cast<size_t>(r_count) * n);
    for (double& v : fer.values) v = rng.uniform();
    return fer;
}

void criterion_6() {
    Rng rng(2026);
    bool pass = true;
    double worst = 0.0;
    for (int trial = 0; trial < 100 && pass; ++trial) {
        const int n = 1 + static_cast<int>(rng.bounded(3));
        const int m = 1 + static_cast<int>(rng.bounded(5));
        const Matrix p = random_chain(n, rng);
        const FerTable fer = random_fer(1, n, rng);
        const FsmcChannel ch = toy_channel(p);
        const ErrorCountSlice fast = error_count_distribution(ch, fer, 0, m);

        // brute force: enumerate all state paths and convolve the errors
        std::vector<double> oracle(static_cast<size_t>(n) * n * (m + 1), 0.0);
        long num_paths = 1;
        for (int t = 1; t < m; ++t) num_paths *= n;
        for (int start = 0; start < n; ++start) {
            for (long code = 0; code < num_paths; ++code) {
                long c = code;
                int state = start;
                double prob = 1.0;
                std::vector<double> dist(m + 1, 0.0);
                dist[0] = 1.0;
                for (int t = 0; t < m; ++t) {
                    if (t > 0) {
                        const int next = static_cast<int>(c % n);
                        c /= n;
                        prob *= p(state, next);
                        state = next;
                    }
                    const double e = fer.at(0, state);
                    for (int l = t + 1; l >= 1; --l) dist[l] = dist[l] * (1 - e) + dist[l - 1] * e;
                    dist[0] *= (1 - e);
                }
                if (prob == 0.0) continue;
                for (int l = 0; l <= m; ++l) {
                    oracle[(static_cast<size_t>(start) * n + state) * (m + 1) + l] +=
                        prob * dist[l];
                }
            }
        }
        for (int i = 0; i < n; ++i) {
            double total = 0.0;
            double mean = 0.0;
            for (int k = 0; k < n; ++k) {
                for (int l = 0; l <= m; ++l) {
                    const double diff = std::abs(
                        fast.at(i, k, l) -
                        oracle[(static_cast<size_t>(i) * n + k) * (m + 1) + l]);
                    worst = std::max(worst, diff);
                    if (diff > 1e-10) pass = false;
                    total += fast.at(i, k, l);
                    mean += l * fast.at(i, k, l);
                }
            }
            if (std::abs(total - 1.0) > 1e-9) pass = false;
            double expect_mean = 0.0;
            for (int t = 0; t < m; ++t) {
                const Matrix pt = p.power(t);
                for (int k = 0; k < n; ++k) expect_mean += pt(i, k) * fer.at(0, k);
            }
            if (std::abs(mean - expect_mean) > 1e-9) pass = false;
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "100 random instances, worst deviation %.2e (tol 1e-10)",
                  worst);
    note(buf);
    report(6, "error-count distribution vs brute-force enumeration", pass);
}

void criterion_7() {
    Rng rng(4096);
    bool pass = true;
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng.bounded(2));
        const int r_count = 2 + static_cast<int>(rng.bounded(2));
        const int m = 1 + static_cast<int>(rng.bounded(5));
        const Matrix p = random_chain(n, rng);
        const FerTable fer = random_fer(r_count, n, rng);
        const FsmcChannel ch = toy_channel(p);
        const auto f = error_count_distribution_all(ch, fer, m);
        ThresholdSet t = ThresholdSet::no_switching(r_count, m);
        for (int r = 1; r < r_count; ++r) t.down[r] = rng.int_range(-1, m);
        for (int r = 0; r + 1 < r_count; ++r) t.up[r] = rng.int_range(t.down[r], m);

        const InducedChain chain = build_induced_chain(f, ch, t);
        if (!chain.transition.is_row_stochastic(1e-10)) pass = false;
        for (int r = 0; r < r_count; ++r) {
            for (int i = 0; i < n; ++i) {
                std::vector<double> row(r_count * n, 0.0);
                for (int k = 0; k < n; ++k) {
                    for (int l = 0; l <= m; ++l) {
                        int q = r;
                        if (l <= t.down[r]) q = r - 1;
                        else if (l > t.up[r]) q = r + 1;
                        for (int k2 = 0; k2 < n; ++k2) {
                            row[q * n + k2] += f.per_setting[r].at(i, k, l) * p(k, k2);
                        }
                    }
                }
                for (int b = 0; b < r_count * n; ++b) {
                    const double diff = std::abs(chain.transition(r * n + i, b) - row[b]);
                    worst = std::max(worst, diff);
                    if (diff > 1e-10) pass = false;
                }
            }
        }
    }
    // R = 1 equals the M-step channel law
    {
        Rng rng2(8);
        const Matrix p = random_chain(4, rng2);
        const FerTable fer = random_fer(1, 4, rng2);
        const FsmcChannel ch = toy_channel(p);
        const auto f = error_count_distribution_all(ch, fer, 6);
        const InducedChain chain = build_induced_chain(f, ch, ThresholdSet::no_switching(1, 6));
        const Matrix pm = p.power(6);
        for (int i = 0; i < 4; ++i) {
            for (int k = 0; k < 4; ++k) {
                if (std::abs(chain.transition(i, k) - pm(i, k)) > 1e-12) pass = false;
            }
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "100 random instances, worst deviation %.2e (tol 1e-10)",
                  worst);
    note(buf);
    report(7, "induced chain vs direct oracle", pass);
}

void criterion_8() {
    Rng rng(515);
    int hits = 0;
    const int trials = 100;
    for (int trial = 0; trial < trials; ++trial) {
        const int n = 2 + static_cast<int>(rng.bounded(2));
        const int m = 2 + static_cast<int>(rng.bounded(3));
        const Matrix p = random_chain(n, rng);
        const FerTable fer = random_fer(2, n, rng);
        const FsmcChannel ch = toy_channel(p);
        const auto f = error_count_distribution_all(ch, fer, m);
        SettingTable settings;
        settings.settings = {{"t_1", 10, 300}, {"t_2", 10, 100}};
        const ThroughputVector xi = expected_period_throughput(f, settings);
        const int start = static_cast<int>(rng.bounded(2 * n));
        const int k = 1 + static_cast<int>(rng.bounded(4));

        double best = -1.0;
        ThresholdSet t = ThresholdSet::no_switching(2, m);
        for (int up0 = -1; up0 <= m; ++up0) {
            for (int down1 = -1; down1 <= m; ++down1) {
                t.up[0] = up0;
                t.down[1] = down1;
                if (!t.feasible()) continue;
                best = std::max(best,
                                k_horizon_throughput(build_induced_chain(f, ch, t), xi, start, k));
            }
        }
        const auto result = local_search_thresholds(f, ch, xi, start, k, 8, 7000 + trial);
        if (result.objective >= best - 1e-9) {
            ++hits;
        } else {
            char buf[96];
            std::snprintf(buf, sizeof(buf), "miss at trial %d: %.6f < %.6f", trial,
                          result.objective, best);
            note(buf);
        }
    }
    note("exhaustive optimum attained in " + std::to_string(hits) + "/100 (need >= 95)");
    report(8, "local search vs exhaustive enumeration on R=2", hits >= 95);
}

void criterion_9(const Fixture& fx) {
    bool pass = true;
    const long frames = 200000;
    const SimulationPlan plan(fx.config, fx.fer, fx.frame_period, {20.0},
                              fx.config.channel.avg_snr_db, frames);
    const auto run = [&] {
        return run_comparison(plan.runs(), plan.sim_models(), {0}, plan.block_frames(), frames,
                              321);
    };
    const auto a = run();
    const auto b = run();
    bool identical = a.size() == b.size();
    for (size_t i = 0; identical && i < a.size(); ++i) {
        identical = a[i].average_throughput == b[i].average_throughput &&
                    a[i].window_series == b[i].window_series &&
                    a[i].frame_error_total == b[i].frame_error_total &&
                    a[i].setting_occupancy == b[i].setting_occupancy;
    }
    note(std::string("identical seeds give identical reports: ") + (identical ? "yes" : "no"));
    pass = pass && identical;

    // fixed-setting empirical mean vs stationary analytic within 3 MC
    // standard errors (inflated for frame-to-frame correlation)
    const ModelBundle& bundle = plan.bundles()[0];
    for (const auto& r : a) {
        if (r.scenario_id.rfind("fixed_", 0) != 0) continue;
        const int setting = r.scenario_id.back() - '1';
        double analytic = 0.0;
        double second = 0.0;
        for (int i = 0; i < bundle.sim.num_states(); ++i) {
            const double x = first_frame_throughput(setting, i, fx.config.settings,
                                                    bundle.fer_sim);
            analytic += bundle.sim.stationary[i] * x;
            second += bundle.sim.stationary[i] * x * x;
        }
        const double se = std::sqrt((second - analytic * analytic) / frames) * 10.0;
        const bool ok = std::abs(r.average_throughput - analytic) < 3.0 * se;
        if (!ok) {
            char buf[120];
            std::snprintf(buf, sizeof(buf), "%s off analytic: %.2f vs %.2f (3se = %.2f)",
                          r.scenario_id.c_str(), r.average_throughput, analytic, 3.0 * se);
            note(buf);
        }
        pass = pass && ok;
    }

    // PRADA-B switching never skips a level
    ThresholdSet t = ThresholdSet::no_switching(5, 30);
    Rng rng(55);
    for (int r = 1; r < 5; ++r) t.down[r] = rng.int_range(-1, 30);
    for (int r = 0; r < 4; ++r) t.up[r] = rng.int_range(t.down[r], 30);
    bool steps_ok = true;
    for (int r = 0; r < 5; ++r) {
        for (int l = 0; l <= 30; ++l) {
            const int next = prada_b_switch(r, l, t);
            steps_ok = steps_ok && std::abs(next - r) <= 1 && next >= 0 && next < 5;
        }
    }
    note(std::string("PRADA-B moves at most one setting per period: ") +
         (steps_ok ? "yes" : "no"));
    report(9, "simulator determinism, coupling, and path properties", pass && steps_ok);
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    const Fixture fx;
    criterion_1(fx);
    criterion_2(fx);
    criterion_3(fx);
    criterion_4(fx);
    criterion_5(fx);
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9(fx);
    const auto dt = std::chrono::duration_cast<std::chrono::seconds>(
        std::chrono::steady_clock::now() - t0);
    std::printf("%d/9 criteria passed in %llds\n", 9 - g_failures,
                static_cast<long long>(dt.count()));
    return g_failures == 0 ? 0 : 1;
}

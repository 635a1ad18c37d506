#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>

#include "prada/csv.hpp"
#include "prada/errors.hpp"
#include "prada/manifest.hpp"
#include "prada/snr.hpp"

namespace prada::cli {

namespace fs = std::filesystem;

RunConfig load_config(const Options& options) {
    RunConfig config = load_run_config(options.config_path);
    if (options.out_dir) config.output_dir = *options.out_dir;
    if (options.seed) config.simulation.master_seed = *options.seed;
    if (options.frames) {
        if (*options.frames <= 0) throw ConfigError("--frames must be positive");
        config.simulation.total_frames = *options.frames;
    }
    return config;
}

fs::path output_dir(const RunConfig& config) {
    const fs::path dir(config.output_dir);
    return dir.is_absolute() ? dir : config.base_dir / dir;
}

namespace {

Manifest base_manifest(const std::string& command, const RunConfig& config,
                       double frame_period_s) {
    Manifest m;
    m.set("command", command);
    m.set("config", config.config_path.string());
    m.set("config_hash", hash_hex(hash_file(config.config_path)));
    m.set("fer_table_hash", hash_hex(hash_file(config.base_dir / config.fer_table_path)));
    if (!config.channel.fit_table_csv.empty()) {
        m.set("fit_table_hash",
              hash_hex(hash_file(config.base_dir / config.channel.fit_table_csv)));
    }
    m.set("frame_period_s", frame_period_s);
    m.set("avg_snr_db", config.channel.avg_snr_db);
    m.set("doppler_hz", config.channel.doppler_hz);
    return m;
}

void add_output(Manifest& m, const fs::path& out_dir, const std::string& name) {
    m.set("output." + name, hash_hex(hash_file(out_dir / name)));
}

void finish(Manifest& m, const fs::path& out_dir) {
    m.write(out_dir / "manifest.json");
    std::cout << "wrote " << (out_dir / "manifest.json").string() << "\n";
}

std::vector<int> enabled_horizons(const RunConfig& config) {
    std::vector<int> horizons;
    auto push = [&](const PolicyParams& p) {
        if (p.enabled && std::find(horizons.begin(), horizons.end(), p.period_frames) ==
                             horizons.end()) {
            horizons.push_back(p.period_frames);
        }
    };
    push(config.prada_a);
    push(config.greedy);
    push(config.prada_b);
    return horizons;
}

}  // namespace

int run_channel(const RunConfig& config) {
    const double tp = resolve_frame_period(config.channel, config.base_dir);
    const FerTable fer = load_fer_table_file(config);
    const ModelBundle bundle =
        build_model_bundle(config.channel, fer, tp, config.channel.doppler_hz,
                           config.channel.avg_snr_db);
    const FsmcChannel& full = bundle.full;

    const fs::path out_dir = output_dir(config);
    fs::create_directories(out_dir);

    {
        std::ofstream out(out_dir / "partition.csv");
        out << "state,lower_db,upper_db\n";
        for (int i = 0; i < full.num_states(); ++i) {
            out << (i + 1) << ',' << format_fixed(linear_to_db(full.partition.lower(i)), 6) << ','
                << format_fixed(linear_to_db(full.partition.upper(i)), 6) << '\n';
        }
    }
    {
        std::ofstream out(out_dir / "stationary.csv");
        out << "state,probability\n";
        for (int i = 0; i < full.num_states(); ++i) {
            out << (i + 1) << ',' << format_fixed(full.stationary[i], 6) << '\n';
        }
    }
    {
        std::ofstream out(out_dir / "transitions.csv");
        out << "state,p_down,p_stay,p_up\n";
        const int n = full.num_states();
        for (int i = 0; i < n; ++i) {
            out << (i + 1) << ',' << format_fixed(i > 0 ? full.transition(i, i - 1) : 0.0, 6)
                << ',' << format_fixed(full.transition(i, i), 6) << ','
                << format_fixed(i < n - 1 ? full.transition(i, i + 1) : 0.0, 6) << '\n';
        }
    }

    Manifest m = base_manifest("channel", config, tp);
    add_output(m, out_dir, "partition.csv");
    add_output(m, out_dir, "stationary.csv");
    add_output(m, out_dir, "transitions.csv");
    finish(m, out_dir);
    return 0;
}

int run_predict(const RunConfig& config) {
    const double tp = resolve_frame_period(config.channel, config.base_dir);
    const FerTable fer = load_fer_table_file(config);
    const ModelBundle bundle =
        build_model_bundle(config.channel, fer, tp, config.channel.doppler_hz,
                           config.channel.avg_snr_db);

    const auto horizons = enabled_horizons(config);
    if (horizons.empty()) throw ConfigError("no policy with a period is enabled");

    const fs::path out_dir = output_dir(config);
    fs::create_directories(out_dir);
    Manifest m = base_manifest("predict", config, tp);

    for (int horizon : horizons) {
        const ThroughputVector xi = throughput_for_horizon(bundle, config.settings, horizon);
        const std::string name = "xi_M" + std::to_string(horizon) + ".csv";
        std::ofstream out(out_dir / name);
        out << "setting,state,xi\n";
        for (int r = 0; r < xi.num_settings; ++r) {
            for (int i = 0; i < xi.num_states; ++i) {
                out << config.settings.id(r) << ',' << (i + 1) << ','
                    << format_general(xi.at(r, i), 6) << '\n';
            }
        }
        out.close();
        add_output(m, out_dir, name);
    }
    finish(m, out_dir);
    return 0;
}

int run_optimize(const RunConfig& config) {
    if (!config.prada_b.enabled) throw ConfigError("optimize needs policies.prada_b enabled");
    const double tp = resolve_frame_period(config.channel, config.base_dir);
    const FerTable fer = load_fer_table_file(config);
    const ModelBundle bundle =
        build_model_bundle(config.channel, fer, tp, config.channel.doppler_hz,
                           config.channel.avg_snr_db);
    const ThresholdTable table = compile_thresholds(bundle, config.settings, config.prada_b);

    const fs::path out_dir = output_dir(config);
    fs::create_directories(out_dir);
    {
        std::ofstream out(out_dir / "thresholds.csv");
        write_threshold_table_csv(out, table);
    }
    Manifest m = base_manifest("optimize", config, tp);
    m.set("search_seed", config.prada_b.search_seed);
    m.set("restarts", static_cast<long>(config.prada_b.restarts));
    add_output(m, out_dir, "thresholds.csv");
    finish(m, out_dir);
    return 0;
}

int run_analyze(const RunConfig& config) {
    const double tp = resolve_frame_period(config.channel, config.base_dir);
    const FerTable fer = load_fer_table_file(config);
    const ModelBundle bundle =
        build_model_bundle(config.channel, fer, tp, config.channel.doppler_hz,
                           config.channel.avg_snr_db);
    const FsmcChannel& sim = bundle.sim;
    const FerTable& fer_sim = bundle.fer_sim;

    const fs::path out_dir = output_dir(config);
    fs::create_directories(out_dir);
    std::ofstream out(out_dir / "analysis.csv");
    out << "policy,value,exact\n";

    for (int r : config.fixed_settings) {
        double value = 0.0;
        for (int i = 0; i < sim.num_states(); ++i) {
            value += sim.stationary[i] *
                     first_frame_throughput(r - 1, i, config.settings, fer_sim);
        }
        out << "fixed_" << config.settings.id(r - 1) << ',' << format_general(value, 6)
            << ",1\n";
    }
    if (config.greedy.enabled) {
        const ThroughputVector xi =
            throughput_for_horizon(bundle, config.settings, config.greedy.period_frames);
        const double value = analytical_throughput_greedy(sim, config.settings, fer_sim, xi);
        out << "greedy," << format_general(value, 6) << ",1\n";
    }
    if (config.prada_a.enabled) {
        const ThroughputVector xi =
            throughput_for_horizon(bundle, config.settings, config.prada_a.period_frames);
        const double value = analytical_throughput_prada_a(sim, xi);
        out << "prada_a," << format_general(value, 6) << ",1\n";
    }
    if (config.prada_b.enabled) {
        const auto f = cached_error_count_distribution(sim, fer_sim,
                                                       config.prada_b.period_frames);
        const ThroughputVector xi = expected_period_throughput(*f, config.settings);
        const ThresholdTable table = compile_thresholds(bundle, config.settings, config.prada_b);
        const AnalyticThroughput result =
            analytical_throughput_prada_b(sim, *f, xi, table, config.prada_b.k_periods);
        out << "prada_b," << format_general(result.value, 6) << ',' << (result.exact ? 1 : 0)
            << '\n';
    }
    out.close();

    Manifest m = base_manifest("analyze", config, tp);
    add_output(m, out_dir, "analysis.csv");
    finish(m, out_dir);
    return 0;
}

int run_simulate(const RunConfig& config) {
    const double tp = resolve_frame_period(config.channel, config.base_dir);
    const FerTable fer = load_fer_table_file(config);

    std::vector<double> doppler_values{config.channel.doppler_hz};
    if (config.schedule.enabled) doppler_values = config.schedule.values_hz;

    const SimulationPlan plan(config, fer, tp, doppler_values, config.channel.avg_snr_db,
                              config.simulation.total_frames);

    std::vector<int> model_schedule{0};
    if (config.schedule.enabled) {
        const long num_blocks =
            (plan.total_frames() + plan.block_frames() - 1) / plan.block_frames();
        model_schedule = random_model_schedule(static_cast<int>(doppler_values.size()),
                                               num_blocks, config.schedule.seed);
    }

    const auto reports =
        run_comparison(plan.runs(), plan.sim_models(), model_schedule, plan.block_frames(),
                       plan.total_frames(), config.simulation.master_seed,
                       config.simulation.shared_error_stream);

    const fs::path out_dir = output_dir(config);
    write_simulation_reports(out_dir, reports, plan.settings());

    Manifest m = base_manifest("simulate", config, tp);
    m.set("master_seed", config.simulation.master_seed);
    m.set("total_frames", static_cast<long>(plan.total_frames()));
    m.set("block_frames", static_cast<long>(plan.block_frames()));
    m.set("shared_error_stream", static_cast<long>(config.simulation.shared_error_stream ? 1 : 0));
    if (!reports.empty()) {
        m.set("channel_seed", reports.front().channel_seed);
        m.set("error_seed", reports.front().error_seed);
    }
    if (config.schedule.enabled) m.set("schedule_seed", config.schedule.seed);
    add_output(m, out_dir, "summary.csv");
    add_output(m, out_dir, "cdf.csv");
    for (const auto& report : reports) {
        add_output(m, out_dir, sanitize_filename(report.scenario_id) + "_series.csv");
    }
    finish(m, out_dir);

    for (const auto& report : reports) {
        std::cout << report.scenario_id << ": " << format_general(report.average_throughput, 6)
                  << " bits/frame\n";
    }
    return 0;
}

int run_sweep(const RunConfig& config) {
    if (config.sweep.snr_db.empty() || config.sweep.doppler_hz.empty()) {
        throw ConfigError("sweep needs sweep.snr_db and sweep.doppler_hz");
    }
    const double tp = resolve_frame_period(config.channel, config.base_dir);
    const FerTable fer = load_fer_table_file(config);

    const fs::path out_dir = output_dir(config);
    fs::create_directories(out_dir);
    std::ofstream out(out_dir / "sweep.csv");
    out << "avg_snr_db,doppler_hz,policy,value,exact\n";

    for (double snr : config.sweep.snr_db) {
        for (double doppler : config.sweep.doppler_hz) {
            const ModelBundle bundle = build_model_bundle(config.channel, fer, tp, doppler, snr);
            auto emit = [&](const std::string& policy, double value, bool exact) {
                out << format_general(snr, 6) << ',' << format_general(doppler, 6) << ','
                    << policy << ',' << format_general(value, 6) << ',' << (exact ? 1 : 0)
                    << '\n';
            };
            for (int r : config.fixed_settings) {
                double value = 0.0;
                for (int i = 0; i < bundle.sim.num_states(); ++i) {
                    value += bundle.sim.stationary[i] *
                             first_frame_throughput(r - 1, i, config.settings, bundle.fer_sim);
                }
                emit("fixed_" + config.settings.id(r - 1), value, true);
            }
            if (config.greedy.enabled) {
                const ThroughputVector xi =
                    throughput_for_horizon(bundle, config.settings, config.greedy.period_frames);
                emit("greedy",
                     analytical_throughput_greedy(bundle.sim, config.settings, bundle.fer_sim, xi),
                     true);
            }
            if (config.prada_a.enabled) {
                const ThroughputVector xi =
                    throughput_for_horizon(bundle, config.settings, config.prada_a.period_frames);
                emit("prada_a", analytical_throughput_prada_a(bundle.sim, xi), true);
            }
            if (config.prada_b.enabled) {
                const auto f = cached_error_count_distribution(bundle.sim, bundle.fer_sim,
                                                               config.prada_b.period_frames);
                const ThroughputVector xi = expected_period_throughput(*f, config.settings);
                const ThresholdTable table =
                    compile_thresholds(bundle, config.settings, config.prada_b);
                const AnalyticThroughput result = analytical_throughput_prada_b(
                    bundle.sim, *f, xi, table, config.prada_b.k_periods);
                emit("prada_b", result.value, result.exact);
            }
        }
    }
    out.close();

    Manifest m = base_manifest("sweep", config, tp);
    add_output(m, out_dir, "sweep.csv");
    finish(m, out_dir);
    return 0;
}

}  // namespace prada::cli

#include "prada/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "prada/csv.hpp"
#include "prada/errors.hpp"
#include "prada/snr.hpp"

namespace prada {

namespace {

using nlohmann::json;

const json& require(const json& j, const std::string& key) {
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError("missing config key '" + key + "'");
    return *it;
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config key '" + key + "' has the wrong type");
    }
}

PolicyParams parse_policy(const json& j, const std::string& name) {
    PolicyParams p;
    auto it = j.find(name);
    if (it == j.end()) return p;
    p.enabled = get_or(*it, "enabled", true);
    p.period_frames = get_or(*it, "period_frames", 0);
    p.k_periods = get_or(*it, "k_periods", 1);
    p.restarts = get_or(*it, "restarts", 8);
    p.search_seed = get_or<uint64_t>(*it, "search_seed", 1);
    if (p.enabled && p.period_frames < 1) {
        throw ConfigError("policy '" + name + "' needs a positive period_frames");
    }
    if (p.k_periods < 1) throw ConfigError("policy '" + name + "' needs k_periods >= 1");
    return p;
}

}  // namespace

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config parse error in " + path.string() + ": " + e.what());
    }

    RunConfig config;
    config.config_path = path;
    config.base_dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");

    const json& ch = require(j, "channel");
    config.channel.n_states = require(ch, "n_states").get<int>();
    if (config.channel.n_states < 2) throw ConfigError("channel.n_states must be at least 2");
    config.channel.boundaries_db = get_or(ch, "boundaries_db", std::vector<double>{});
    config.channel.avg_snr_db = require(ch, "avg_snr_db").get<double>();
    config.channel.doppler_hz = require(ch, "doppler_hz").get<double>();
    config.channel.frame_period_s = get_or(ch, "frame_period_s", 0.0);
    config.channel.fit_table_csv = get_or(ch, "fit_table_csv", std::string{});
    config.channel.fit_doppler_hz = get_or(ch, "fit_doppler_hz", config.channel.doppler_hz);
    config.channel.outage_state = get_or(ch, "outage_state", false);
    if (!config.channel.boundaries_db.empty() &&
        static_cast<int>(config.channel.boundaries_db.size()) != config.channel.n_states - 1) {
        throw ConfigError("channel.boundaries_db needs n_states - 1 interior boundaries");
    }
    if (config.channel.frame_period_s <= 0.0 && config.channel.fit_table_csv.empty()) {
        throw ConfigError("set channel.frame_period_s or channel.fit_table_csv");
    }

    for (const json& s : require(j, "settings")) {
        Setting setting;
        setting.label = require(s, "label").get<std::string>();
        setting.frame_symbols = require(s, "frame_symbols").get<int>();
        setting.data_bits_per_frame = require(s, "data_bits_per_frame").get<int>();
        config.settings.settings.push_back(std::move(setting));
    }
    try {
        config.settings.validate();
    } catch (const ValidationError& e) {
        throw ConfigError(e.what());
    }

    config.fer_table_path = require(j, "fer_table").get<std::string>();

    if (auto it = j.find("policies"); it != j.end()) {
        config.prada_a = parse_policy(*it, "prada_a");
        config.prada_b = parse_policy(*it, "prada_b");
        config.greedy = parse_policy(*it, "greedy");
    }

    config.fixed_settings = get_or(j, "fixed_settings", std::vector<int>{});
    for (int r : config.fixed_settings) {
        if (r < 1 || r > config.settings.count()) {
            throw ConfigError("fixed_settings entry " + std::to_string(r) + " out of range");
        }
    }

    if (auto it = j.find("simulation"); it != j.end()) {
        config.simulation.total_frames = get_or<long>(*it, "total_frames", 1'000'000);
        config.simulation.master_seed = get_or<uint64_t>(*it, "master_seed", 1);
        config.simulation.window_frames = get_or(*it, "window_frames", 30);
        config.simulation.shared_error_stream = get_or(*it, "shared_error_stream", true);
        if (config.simulation.total_frames <= 0) throw ConfigError("total_frames must be positive");
        if (config.simulation.window_frames <= 0) throw ConfigError("window_frames must be positive");
    }

    if (auto it = j.find("doppler_schedule"); it != j.end()) {
        config.schedule.enabled = get_or(*it, "enabled", true);
        config.schedule.values_hz = get_or(*it, "values_hz", std::vector<double>{});
        config.schedule.seed = get_or<uint64_t>(*it, "seed", 1);
        if (config.schedule.enabled && config.schedule.values_hz.size() < 2) {
            throw ConfigError("doppler_schedule.values_hz needs at least two values");
        }
    }

    if (auto it = j.find("sweep"); it != j.end()) {
        config.sweep.snr_db = get_or(*it, "snr_db", std::vector<double>{});
        config.sweep.doppler_hz = get_or(*it, "doppler_hz", std::vector<double>{});
    }

    config.output_dir = get_or(j, "output_dir", std::string("out"));
    return config;
}

FerTable load_fer_table_file(const RunConfig& config) {
    const std::filesystem::path path = config.base_dir / config.fer_table_path;
    std::ifstream in(path);
    if (!in) throw IngestionError("cannot open FER table: " + path.string());
    return load_fer_table(in, config.settings, config.channel.n_states);
}

std::vector<TransitionObservation> load_transition_observations(
    const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IngestionError("cannot open transition table: " + path.string());
    const auto rows = read_csv(in);
    if (rows.empty() || rows[0] != std::vector<std::string>{"state", "p_down", "p_up"}) {
        throw IngestionError("transition table must start with header 'state,p_down,p_up'");
    }
    std::vector<TransitionObservation> observations;
    for (size_t row = 1; row < rows.size(); ++row) {
        const auto& cells = rows[row];
        if (cells.size() != 3) {
            throw IngestionError("transition table row " + std::to_string(row + 1) +
                                 " needs 3 cells");
        }
        int state = 0;
        try {
            state = std::stoi(cells[0]) - 1;
        } catch (const std::exception&) {
            throw IngestionError("transition table row " + std::to_string(row + 1) +
                                 ": bad state index '" + cells[0] + "'");
        }
        for (int which = 0; which < 2; ++which) {
            const std::string& cell = cells[which + 1];
            if (cell.empty()) continue;  // boundary rows leave the missing direction blank
            double p = 0.0;
            try {
                p = std::stod(cell);
            } catch (const std::exception&) {
                throw IngestionError("transition table row " + std::to_string(row + 1) +
                                     ": bad probability '" + cell + "'");
            }
            observations.push_back({state, which == 0 ? -1 : +1, p});
        }
    }
    return observations;
}

SnrPartition partition_from_config(const ChannelConfig& channel) {
    if (!channel.boundaries_db.empty()) {
        return SnrPartition::from_interior_db(channel.boundaries_db);
    }
    return partition_equal_duration(channel.n_states, db_to_linear(channel.avg_snr_db),
                                    channel.doppler_hz > 0.0 ? channel.doppler_hz : 1.0);
}

double resolve_frame_period(const ChannelConfig& channel, const std::filesystem::path& base_dir) {
    if (channel.frame_period_s > 0.0) return channel.frame_period_s;
    if (channel.fit_table_csv.empty()) throw ConfigError("no frame period source configured");
    const auto observations = load_transition_observations(base_dir / channel.fit_table_csv);
    const SnrPartition partition = partition_from_config(channel);
    return calibrate_frame_period(partition, db_to_linear(channel.avg_snr_db),
                                  channel.fit_doppler_hz, observations,
                                  channel.outage_state ? OutageMode::first_state
                                                       : OutageMode::none);
}

ModelBundle build_model_bundle(const ChannelConfig& channel, const FerTable& full_fer,
                               double frame_period_s, double doppler_hz, double avg_snr_db) {
    ChannelConfig local = channel;
    local.avg_snr_db = avg_snr_db;
    local.doppler_hz = doppler_hz;

    ModelBundle bundle;
    bundle.doppler_hz = doppler_hz;
    bundle.avg_snr_db = avg_snr_db;
    const SnrPartition partition = partition_from_config(local);
    bundle.full = build_transition_matrix(
        partition, db_to_linear(avg_snr_db), doppler_hz, frame_period_s,
        channel.outage_state ? OutageMode::first_state : OutageMode::none);
    if (channel.outage_state) {
        bundle.sim = transmission_submodel(bundle.full);
        bundle.fer_sim = full_fer.drop_lowest_states(1);
    } else {
        bundle.sim = bundle.full;
        bundle.fer_sim = full_fer;
    }
    return bundle;
}

ThroughputVector throughput_for_horizon(const ModelBundle& bundle, const SettingTable& settings,
                                        int horizon) {
    const auto f = cached_error_count_distribution(bundle.sim, bundle.fer_sim, horizon);
    return expected_period_throughput(*f, settings);
}

ThresholdTable compile_thresholds(const ModelBundle& bundle, const SettingTable& settings,
                                  const PolicyParams& prada_b) {
    const auto f =
        cached_error_count_distribution(bundle.sim, bundle.fer_sim, prada_b.period_frames);
    const ThroughputVector xi = expected_period_throughput(*f, settings);
    return compile_threshold_table(*f, bundle.sim, xi, prada_b.k_periods, prada_b.restarts,
                                   prada_b.search_seed);
}

SimulationPlan::SimulationPlan(const RunConfig& config, const FerTable& full_fer,
                               double frame_period_s, std::vector<double> doppler_values,
                               double avg_snr_db, long total_frames)
    : settings_(config.settings), total_frames_(total_frames) {
    if (doppler_values.empty()) throw ConfigError("no Doppler values for the plan");

    for (double f : doppler_values) {
        bundles_.push_back(
            build_model_bundle(config.channel, full_fer, frame_period_s, f, avg_snr_db));
    }

    // One artifact set per bundle, for each horizon a policy needs.
    std::vector<int> horizons;
    if (config.prada_a.enabled) horizons.push_back(config.prada_a.period_frames);
    if (config.greedy.enabled) horizons.push_back(config.greedy.period_frames);
    if (config.prada_b.enabled) horizons.push_back(config.prada_b.period_frames);
    for (size_t b = 0; b < bundles_.size(); ++b) {
        for (int m : horizons) {
            const auto key = std::make_pair(static_cast<int>(b), m);
            if (!xi_.count(key)) {
                xi_.emplace(key, throughput_for_horizon(bundles_[b], settings_, m));
            }
        }
        if (config.prada_b.enabled) {
            thresholds_.emplace(static_cast<int>(b),
                                compile_thresholds(bundles_[b], settings_, config.prada_b));
        }
    }

    // Model blocks must line up with every policy's decision points.
    block_frames_ = 1;
    if (config.prada_a.enabled) block_frames_ = std::lcm(block_frames_, config.prada_a.period_frames);
    if (config.greedy.enabled) block_frames_ = std::lcm(block_frames_, config.greedy.period_frames);
    if (config.prada_b.enabled) {
        block_frames_ =
            std::lcm(block_frames_, config.prada_b.period_frames * config.prada_b.k_periods);
    }

    const int window = config.simulation.window_frames;
    auto base_scenario = [&](const std::string& id, PolicyKind kind) {
        ScenarioConfig s;
        s.id = id;
        s.kind = kind;
        s.total_frames = total_frames_;
        s.window_frames = window;
        return s;
    };

    for (int r : config.fixed_settings) {
        ScenarioRun run;
        run.config = base_scenario("fixed_" + settings_.id(r - 1), PolicyKind::fixed);
        run.config.fixed_setting = r - 1;
        run.artifacts.assign(bundles_.size(), PolicyArtifacts{});
        runs_.push_back(std::move(run));
    }
    if (config.greedy.enabled) {
        ScenarioRun run;
        run.config = base_scenario("greedy", PolicyKind::greedy_first_frame);
        run.config.period_frames = config.greedy.period_frames;
        run.config.csi_feedback_interval = config.greedy.period_frames;
        run.artifacts.assign(bundles_.size(), PolicyArtifacts{});
        runs_.push_back(std::move(run));
    }
    if (config.prada_a.enabled) {
        ScenarioRun run;
        run.config = base_scenario("prada_a", PolicyKind::prada_a);
        run.config.period_frames = config.prada_a.period_frames;
        run.config.csi_feedback_interval = config.prada_a.period_frames;
        for (size_t b = 0; b < bundles_.size(); ++b) {
            PolicyArtifacts art;
            art.xi = &xi(static_cast<int>(b), config.prada_a.period_frames);
            run.artifacts.push_back(art);
        }
        runs_.push_back(std::move(run));
    }
    if (config.prada_b.enabled) {
        ScenarioRun run;
        run.config = base_scenario("prada_b", PolicyKind::prada_b);
        run.config.period_frames = config.prada_b.period_frames;
        run.config.k_periods = config.prada_b.k_periods;
        run.config.csi_feedback_interval =
            config.prada_b.period_frames * config.prada_b.k_periods;
        for (size_t b = 0; b < bundles_.size(); ++b) {
            PolicyArtifacts art;
            art.xi = &xi(static_cast<int>(b), config.prada_b.period_frames);
            art.thresholds = thresholds(static_cast<int>(b));
            run.artifacts.push_back(art);
        }
        runs_.push_back(std::move(run));
    }

    for (ScenarioRun& run : runs_) {
        run.settings = &settings_;
        run.fer = &bundles_.front().fer_sim;
    }
}

std::vector<const FsmcChannel*> SimulationPlan::sim_models() const {
    std::vector<const FsmcChannel*> models;
    models.reserve(bundles_.size());
    for (const ModelBundle& b : bundles_) models.push_back(&b.sim);
    return models;
}

const ThroughputVector& SimulationPlan::xi(int bundle_index, int horizon) const {
    auto it = xi_.find({bundle_index, horizon});
    if (it == xi_.end()) throw ConfigError("no throughput vector for the requested horizon");
    return it->second;
}

const ThresholdTable* SimulationPlan::thresholds(int bundle_index) const {
    auto it = thresholds_.find(bundle_index);
    return it == thresholds_.end() ? nullptr : &it->second;
}

std::string sanitize_filename(const std::string& name) {
    std::string out;
    for (char c : name) {
        const unsigned char u = static_cast<unsigned char>(c);
        out += std::isalnum(u) ? static_cast<char>(std::tolower(u)) : '_';
    }
    return out;
}

void write_simulation_reports(const std::filesystem::path& out_dir,
                              const std::vector<SimulationReport>& reports,
                              const SettingTable& settings) {
    std::filesystem::create_directories(out_dir);

    {
        std::ofstream out(out_dir / "summary.csv");
        std::vector<std::string> header{"scenario", "frames", "avg_throughput", "frame_errors"};
        for (int r = 0; r < settings.count(); ++r) header.push_back("occupancy_" + settings.id(r));
        out << join_csv(header) << '\n';
        for (const SimulationReport& report : reports) {
            std::vector<std::string> row{report.scenario_id, std::to_string(report.total_frames),
                                         format_general(report.average_throughput, 6),
                                         std::to_string(report.frame_error_total)};
            for (double occ : report.setting_occupancy) row.push_back(format_general(occ, 6));
            out << join_csv(row) << '\n';
        }
    }

    for (const SimulationReport& report : reports) {
        std::ofstream out(out_dir / (sanitize_filename(report.scenario_id) + "_series.csv"));
        out << "window,avg_throughput\n";
        for (size_t w = 0; w < report.window_series.size(); ++w) {
            out << (w + 1) << ',' << format_general(report.window_series[w], 6) << '\n';
        }
    }

    {
        std::ofstream out(out_dir / "cdf.csv");
        out << "scenario,throughput,cdf\n";
        for (const SimulationReport& report : reports) {
            const size_t n = report.cdf_samples.size();
            for (size_t s = 0; s < n; ++s) {
                out << report.scenario_id << ',' << format_general(report.cdf_samples[s], 6) << ','
                    << format_general(static_cast<double>(s + 1) / n, 6) << '\n';
            }
        }
    }
}

}  // namespace prada

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "animat/io.hpp"
#include "animat/neurodev.hpp"
#include "animat/world.hpp"

namespace animat {

// Flat key=value run configuration. Every paper-gap default lives here so a
// run directory's resolved copy fully determines the run.

struct RunConfig {
    uint64_t master_seed = 1;
    int population = 100;
    int generations = 100;
    double lifetime_s = 300.0;
    double dt_s = 0.01;
    int workers = 0; // 0 = hardware concurrency

    // world
    double striking_distance = 0.15;
    double sigma_brownian = 0.5;
    double drift_strength = 5.0;
    double cal_high = 3.0;
    double cal_low = 1.0;
    double animat_radius = 0.04;
    double animat_top_speed = 1.0;
    double turn_gain = 10.0;
    double respawn_min_dist = 0.25;

    // network + development
    int n_inter = 64;
    double w_max = 1.0;
    double learning_rate = 0.05;
    double target_sum = 0.0; // 0 = auto: n_incoming * 0.25 * w_max
    int fine_map_epochs = 20;
    int settle_steps = 50;
    double prune_threshold = 0.05; // fraction of w_max
    double inhibitory_fraction = 0.2;
    double homeostatic_period_s = 0.5;

    // evolution + logging
    std::string narrow_schedule; // "gen:factor[,gen:factor...]"
    bool narrow_auto = true;
    bool trace_elite = false;
    int trace_every = 10;
    std::string out_dir = "run";

    bool operator==(const RunConfig&) const = default;

    WorldConfig world() const {
        WorldConfig w;
        w.striking_distance = striking_distance;
        w.sigma_brownian = sigma_brownian;
        w.drift_strength = drift_strength;
        w.cal_high = cal_high;
        w.cal_low = cal_low;
        w.animat_radius = animat_radius;
        w.animat_top_speed = animat_top_speed;
        w.turn_gain = turn_gain;
        w.respawn_min_dist = respawn_min_dist;
        return w;
    }

    Layout layout() const { return Layout{kSensorChannels, n_inter, 2}; }

    DevParams dev_params() const {
        DevParams d;
        d.fine_map_epochs = fine_map_epochs;
        d.settle_steps = settle_steps;
        d.dt = dt_s;
        d.learning_rate = learning_rate;
        d.target_sum = target_sum;
        d.prune_threshold_frac = prune_threshold;
        d.inhibitory_fraction = inhibitory_fraction;
        d.w_max = w_max;
        return d;
    }

    int lifetime_steps() const { return static_cast<int>(std::llround(lifetime_s / dt_s)); }
    int homeostatic_period_steps() const {
        return std::max(1, static_cast<int>(std::llround(homeostatic_period_s / dt_s)));
    }
    double resolved_target_sum() const {
        return target_sum > 0.0 ? target_sum : default_target_sum(layout(), w_max);
    }

    std::vector<std::pair<int, double>> narrowing_schedule() const;
};

namespace detail {

struct ConfigKey {
    std::string name;
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

inline double parse_double(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    double d = 0.0;
    try {
        d = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("config key " + key + ": not a number: '" + v + "'");
    }
    if (pos != v.size())
        throw std::invalid_argument("config key " + key + ": trailing garbage in '" + v + "'");
    return d;
}

inline long long parse_int(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    long long i = 0;
    try {
        i = std::stoll(v, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("config key " + key + ": not an integer: '" + v + "'");
    }
    if (pos != v.size())
        throw std::invalid_argument("config key " + key + ": trailing garbage in '" + v + "'");
    return i;
}

inline uint64_t parse_u64(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    unsigned long long u = 0;
    try {
        u = std::stoull(v, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("config key " + key + ": not an unsigned integer: '" + v + "'");
    }
    if (pos != v.size())
        throw std::invalid_argument("config key " + key + ": trailing garbage in '" + v + "'");
    return u;
}

inline bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw std::invalid_argument("config key " + key + ": expected true/false, got '" + v + "'");
}

inline const std::vector<ConfigKey>& config_keys() {
    static const std::vector<ConfigKey> keys = [] {
        std::vector<ConfigKey> k;
        auto add_u64 = [&k](std::string name, uint64_t RunConfig::* m) {
            k.push_back({name,
                         [m, name](RunConfig& c, const std::string& v) { c.*m = parse_u64(name, v); },
                         [m](const RunConfig& c) { return std::to_string(c.*m); }});
        };
        auto add_int = [&k](std::string name, int RunConfig::* m) {
            k.push_back({name,
                         [m, name](RunConfig& c, const std::string& v) {
                             c.*m = static_cast<int>(parse_int(name, v));
                         },
                         [m](const RunConfig& c) { return std::to_string(c.*m); }});
        };
        auto add_dbl = [&k](std::string name, double RunConfig::* m) {
            k.push_back({name,
                         [m, name](RunConfig& c, const std::string& v) { c.*m = parse_double(name, v); },
                         [m](const RunConfig& c) { return io::dtos(c.*m); }});
        };
        auto add_bool = [&k](std::string name, bool RunConfig::* m) {
            k.push_back({name,
                         [m, name](RunConfig& c, const std::string& v) { c.*m = parse_bool(name, v); },
                         [m](const RunConfig& c) { return c.*m ? "true" : "false"; }});
        };
        auto add_str = [&k](std::string name, std::string RunConfig::* m) {
            k.push_back({name, [m](RunConfig& c, const std::string& v) { c.*m = v; },
                         [m](const RunConfig& c) { return c.*m; }});
        };
        add_u64("master_seed", &RunConfig::master_seed);
        add_int("population", &RunConfig::population);
        add_int("generations", &RunConfig::generations);
        add_dbl("lifetime_s", &RunConfig::lifetime_s);
        add_dbl("dt_s", &RunConfig::dt_s);
        add_int("workers", &RunConfig::workers);
        add_dbl("striking_distance", &RunConfig::striking_distance);
        add_dbl("sigma_brownian", &RunConfig::sigma_brownian);
        add_dbl("drift_strength", &RunConfig::drift_strength);
        add_dbl("cal_high", &RunConfig::cal_high);
        add_dbl("cal_low", &RunConfig::cal_low);
        add_dbl("animat_radius", &RunConfig::animat_radius);
        add_dbl("animat_top_speed", &RunConfig::animat_top_speed);
        add_dbl("turn_gain", &RunConfig::turn_gain);
        add_dbl("respawn_min_dist", &RunConfig::respawn_min_dist);
        add_int("n_inter", &RunConfig::n_inter);
        add_dbl("w_max", &RunConfig::w_max);
        add_dbl("learning_rate", &RunConfig::learning_rate);
        add_dbl("target_sum", &RunConfig::target_sum);
        add_int("fine_map_epochs", &RunConfig::fine_map_epochs);
        add_int("settle_steps", &RunConfig::settle_steps);
        add_dbl("prune_threshold", &RunConfig::prune_threshold);
        add_dbl("inhibitory_fraction", &RunConfig::inhibitory_fraction);
        add_dbl("homeostatic_period_s", &RunConfig::homeostatic_period_s);
        add_str("narrow_schedule", &RunConfig::narrow_schedule);
        add_bool("narrow_auto", &RunConfig::narrow_auto);
        add_bool("trace_elite", &RunConfig::trace_elite);
        add_int("trace_every", &RunConfig::trace_every);
        add_str("out_dir", &RunConfig::out_dir);
        return k;
    }();
    return keys;
}

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace detail

inline std::vector<std::pair<int, double>> RunConfig::narrowing_schedule() const {
    std::vector<std::pair<int, double>> sched;
    std::string s = narrow_schedule;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = detail::trim(item);
        if (item.empty()) continue;
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("narrow_schedule entry '" + item + "' must be gen:factor");
        const int gen = static_cast<int>(detail::parse_int("narrow_schedule", item.substr(0, colon)));
        const double factor = detail::parse_double("narrow_schedule", item.substr(colon + 1));
        if (gen < 0) throw std::invalid_argument("narrow_schedule: generation must be >= 0");
        if (!(factor > 0.0 && factor <= 1.0))
            throw std::invalid_argument("narrow_schedule: factor must be in (0, 1]");
        sched.emplace_back(gen, factor);
    }
    std::sort(sched.begin(), sched.end());
    return sched;
}

inline void apply_config_line(RunConfig& c, const std::string& key, const std::string& value) {
    for (const auto& k : detail::config_keys()) {
        if (k.name == key) {
            k.set(c, value);
            return;
        }
    }
    throw std::invalid_argument("unknown config key: " + key);
}

inline RunConfig parse_config_text(const std::string& text, RunConfig base = {}) {
    std::vector<std::string> seen;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (std::find(seen.begin(), seen.end(), key) != seen.end())
            throw std::invalid_argument("duplicate config key: " + key);
        seen.push_back(key);
        apply_config_line(base, key, value);
    }
    return base;
}

inline RunConfig load_config_file(const std::filesystem::path& path, RunConfig base = {}) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), base);
}

inline std::string serialize_config(const RunConfig& c) {
    std::string out;
    for (const auto& k : detail::config_keys()) out += k.name + " = " + k.get(c) + "\n";
    return out;
}

/// Range checks for every key; error messages name the key.
inline void validate_config(const RunConfig& c) {
    auto require = [](bool ok, const std::string& msg) {
        if (!ok) throw std::invalid_argument("config: " + msg);
    };
    require(c.population >= 1, "population must be >= 1");
    require(c.generations >= 0, "generations must be >= 0");
    require(c.dt_s > 0.0, "dt_s must be > 0");
    require(c.lifetime_s >= c.dt_s, "lifetime_s must be >= dt_s");
    require(c.workers >= 0, "workers must be >= 0");
    require(c.striking_distance >= 0.0, "striking_distance must be >= 0");
    require(c.sigma_brownian >= 0.0, "sigma_brownian must be >= 0");
    require(c.drift_strength >= 0.0, "drift_strength must be >= 0");
    require(c.cal_high > 0.0 && c.cal_low > 0.0, "calorie values must be > 0");
    require(c.cal_high >= c.cal_low, "cal_high must be >= cal_low");
    require(c.animat_radius > 0.0 && c.animat_radius < 0.5, "animat_radius must be in (0, 0.5)");
    require(c.animat_top_speed > 0.0, "animat_top_speed must be > 0");
    require(c.turn_gain >= 0.0, "turn_gain must be >= 0");
    require(c.respawn_min_dist >= 0.0 && c.respawn_min_dist <= 0.5,
            "respawn_min_dist must be in [0, 0.5]");
    require(c.n_inter >= 0, "n_inter must be >= 0");
    require(c.w_max > 0.0, "w_max must be > 0");
    require(c.learning_rate >= 0.0, "learning_rate must be >= 0");
    require(c.target_sum >= 0.0, "target_sum must be >= 0 (0 = auto)");
    require(c.fine_map_epochs >= 0, "fine_map_epochs must be >= 0");
    require(c.settle_steps >= 1, "settle_steps must be >= 1");
    require(c.prune_threshold >= 0.0, "prune_threshold must be >= 0");
    require(c.inhibitory_fraction >= 0.0 && c.inhibitory_fraction <= 1.0,
            "inhibitory_fraction must be in [0, 1]");
    require(c.homeostatic_period_s > 0.0, "homeostatic_period_s must be > 0");
    require(c.trace_every >= 1, "trace_every must be >= 1");
    c.narrowing_schedule(); // throws on malformed entries
}

} // namespace animat

#pragma once

// Scenario configuration: JSON schema with strict key checking, defaults for
// the 10 km aerial-network scenario, and a stable content hash used by the
// run manifest.

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "skycell/cells.hpp"
#include "skycell/link_budget.hpp"
#include "skycell/propagation.hpp"

namespace skycell {

using ordered_json = nlohmann::ordered_json;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RadioConfig {
    PathlossModel pathloss_model = PathlossModel::rma;
    ShadowingMode shadowing = ShadowingMode::deterministic;
    double building_height_m = 5.0;
    double street_width_m = 5.0;
    double extra_shadowing_db = 0.0;
    bool strict_range = false;
};

struct CoverageCellConfig {
    double tx_power_dbm = 36.0;
    double fc_mhz = 3300.0;
    double bandwidth_mhz = 20.0;
    double altitude_m = 1000.0;
    double antenna_gain_dbi = 2.0;
    Duplex duplex = Duplex::tdd;
};

struct CapacityCellsConfig {
    int count = 9;
    double tx_power_dbm = 28.0;
    double bandwidth_mhz = 40.0;
    double fc_first_mhz = 3600.0;
    double fc_step_mhz = 40.0;
    double altitude_m = 60.0;
    double antenna_gain_dbi = 2.0;
    Duplex duplex = Duplex::tdd;
};

struct UesConfig {
    int count = 50;
    std::uint64_t seed = 0;  // 0 -> inherit the run seed
    double height_m = 1.5;
    double sensitivity_dbm = -125.0;
    double noise_figure_db = 7.0;
};

struct TrafficConfig {
    int start_hour_min = 9;
    int start_hour_max = 11;
    int duration_hours_min = 6;
    int duration_hours_max = 12;
    double demand_mbps_min = 1.0;
    double demand_mbps_max = 20.0;
    double daily_jitter = 0.2;  // +/- fraction applied to each hour's demand per day
};

struct EnergyConfig {
    EnergyModel coverage{50.0, 20.0, 3.0};
    EnergyModel capacity{110.0, 15.0, 3.0};
};

struct SimConfig {
    double arena_m = 10000.0;
    RadioConfig radio;
    CoverageCellConfig coverage_cell;
    CapacityCellsConfig capacity_cells;
    UesConfig ues;
    TrafficConfig traffic;
    EnergyConfig energy;
    LinkParams link;

    void validate() const {
        if (!(arena_m > 0.0)) throw ConfigError("config: arena_m must be positive");
        if (capacity_cells.count < 0 || capacity_cells.count > 32)
            throw ConfigError("config: capacity_cells.count outside [0, 32]");
        if (ues.count < 0) throw ConfigError("config: ues.count must be non-negative");
        if (!(radio.extra_shadowing_db >= 0.0))
            throw ConfigError("config: radio.extra_shadowing_db must be >= 0");
        if (traffic.start_hour_min < 0 || traffic.start_hour_max > 23 ||
            traffic.start_hour_min > traffic.start_hour_max)
            throw ConfigError("config: traffic start hour range invalid");
        if (traffic.duration_hours_min < 1 || traffic.duration_hours_max > 24 ||
            traffic.duration_hours_min > traffic.duration_hours_max)
            throw ConfigError("config: traffic duration range invalid");
        if (!(traffic.demand_mbps_min >= 0.0) ||
            !(traffic.demand_mbps_max >= traffic.demand_mbps_min) ||
            !(traffic.demand_mbps_max > 0.0))
            throw ConfigError("config: traffic demand range invalid");
        if (!(traffic.daily_jitter >= 0.0) || !(traffic.daily_jitter < 1.0))
            throw ConfigError("config: traffic.daily_jitter outside [0, 1)");
        if (!(link.hysteresis_db >= 0.0)) throw ConfigError("config: link.hysteresis_db < 0");
        if (!(link.overhead_factor > 0.0) || !(link.overhead_factor <= 1.0))
            throw ConfigError("config: link.overhead_factor outside (0, 1]");
        if (!(link.se_cap_bps_hz > 0.0)) throw ConfigError("config: link.se_cap_bps_hz <= 0");
        for (double f : {link.dl_fraction_tdd, link.dl_fraction_fdd})
            if (!(f > 0.0) || f > 1.0)
                throw ConfigError("config: dl fraction outside (0, 1]");
        try {
            energy.coverage.validate();
            energy.capacity.validate();
        } catch (const std::domain_error& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
    }
};

namespace detail {

inline void require_known_keys(const ordered_json& j, std::initializer_list<const char*> keys,
                               const std::string& scope) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : keys) known = known || it.key() == k;
        if (!known) throw ConfigError("config: unknown key '" + scope + it.key() + "'");
    }
}

template <typename T>
void read_field(const ordered_json& j, const char* key, T& out, const std::string& scope) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError("config: bad value for '" + scope + key + "'");
    }
}

inline void read_duplex(const ordered_json& j, const char* key, Duplex& out,
                        const std::string& scope) {
    if (!j.contains(key)) return;
    std::string s;
    read_field(j, key, s, scope);
    if (s == "fdd") out = Duplex::fdd;
    else if (s == "tdd") out = Duplex::tdd;
    else throw ConfigError("config: '" + scope + key + "' must be \"fdd\" or \"tdd\"");
}

inline const char* duplex_name(Duplex d) { return d == Duplex::fdd ? "fdd" : "tdd"; }

}  // namespace detail

inline SimConfig config_from_json(const ordered_json& root) {
    if (!root.is_object()) throw ConfigError("config: top level must be an object");
    detail::require_known_keys(root,
                               {"arena_m", "radio", "coverage_cell", "capacity_cells", "ues",
                                "traffic", "energy", "link"},
                               "");
    SimConfig c;
    detail::read_field(root, "arena_m", c.arena_m, "");
    if (root.contains("radio")) {
        const auto& r = root.at("radio");
        detail::require_known_keys(r,
                                   {"pathloss_model", "shadowing", "building_height_m",
                                    "street_width_m", "extra_shadowing_db", "strict_range"},
                                   "radio.");
        std::string model = "rma", shadow = "deterministic";
        if (c.radio.pathloss_model == PathlossModel::fspl) model = "fspl";
        detail::read_field(r, "pathloss_model", model, "radio.");
        detail::read_field(r, "shadowing", shadow, "radio.");
        if (model == "rma") c.radio.pathloss_model = PathlossModel::rma;
        else if (model == "fspl") c.radio.pathloss_model = PathlossModel::fspl;
        else throw ConfigError("config: 'radio.pathloss_model' must be \"rma\" or \"fspl\"");
        if (shadow == "deterministic") c.radio.shadowing = ShadowingMode::deterministic;
        else if (shadow == "lognormal") c.radio.shadowing = ShadowingMode::lognormal;
        else
            throw ConfigError(
                "config: 'radio.shadowing' must be \"deterministic\" or \"lognormal\"");
        detail::read_field(r, "building_height_m", c.radio.building_height_m, "radio.");
        detail::read_field(r, "street_width_m", c.radio.street_width_m, "radio.");
        detail::read_field(r, "extra_shadowing_db", c.radio.extra_shadowing_db, "radio.");
        detail::read_field(r, "strict_range", c.radio.strict_range, "radio.");
    }
    if (root.contains("coverage_cell")) {
        const auto& v = root.at("coverage_cell");
        detail::require_known_keys(v,
                                   {"tx_power_dbm", "fc_mhz", "bandwidth_mhz", "altitude_m",
                                    "antenna_gain_dbi", "duplex"},
                                   "coverage_cell.");
        detail::read_field(v, "tx_power_dbm", c.coverage_cell.tx_power_dbm, "coverage_cell.");
        detail::read_field(v, "fc_mhz", c.coverage_cell.fc_mhz, "coverage_cell.");
        detail::read_field(v, "bandwidth_mhz", c.coverage_cell.bandwidth_mhz, "coverage_cell.");
        detail::read_field(v, "altitude_m", c.coverage_cell.altitude_m, "coverage_cell.");
        detail::read_field(v, "antenna_gain_dbi", c.coverage_cell.antenna_gain_dbi,
                           "coverage_cell.");
        detail::read_duplex(v, "duplex", c.coverage_cell.duplex, "coverage_cell.");
    }
    if (root.contains("capacity_cells")) {
        const auto& v = root.at("capacity_cells");
        detail::require_known_keys(v,
                                   {"count", "tx_power_dbm", "bandwidth_mhz", "fc_first_mhz",
                                    "fc_step_mhz", "altitude_m", "antenna_gain_dbi", "duplex"},
                                   "capacity_cells.");
        detail::read_field(v, "count", c.capacity_cells.count, "capacity_cells.");
        detail::read_field(v, "tx_power_dbm", c.capacity_cells.tx_power_dbm, "capacity_cells.");
        detail::read_field(v, "bandwidth_mhz", c.capacity_cells.bandwidth_mhz, "capacity_cells.");
        detail::read_field(v, "fc_first_mhz", c.capacity_cells.fc_first_mhz, "capacity_cells.");
        detail::read_field(v, "fc_step_mhz", c.capacity_cells.fc_step_mhz, "capacity_cells.");
        detail::read_field(v, "altitude_m", c.capacity_cells.altitude_m, "capacity_cells.");
        detail::read_field(v, "antenna_gain_dbi", c.capacity_cells.antenna_gain_dbi,
                           "capacity_cells.");
        detail::read_duplex(v, "duplex", c.capacity_cells.duplex, "capacity_cells.");
    }
    if (root.contains("ues")) {
        const auto& v = root.at("ues");
        detail::require_known_keys(
            v, {"count", "seed", "height_m", "sensitivity_dbm", "noise_figure_db"}, "ues.");
        detail::read_field(v, "count", c.ues.count, "ues.");
        detail::read_field(v, "seed", c.ues.seed, "ues.");
        detail::read_field(v, "height_m", c.ues.height_m, "ues.");
        detail::read_field(v, "sensitivity_dbm", c.ues.sensitivity_dbm, "ues.");
        detail::read_field(v, "noise_figure_db", c.ues.noise_figure_db, "ues.");
    }
    if (root.contains("traffic")) {
        const auto& v = root.at("traffic");
        detail::require_known_keys(v,
                                   {"start_hour_min", "start_hour_max", "duration_hours_min",
                                    "duration_hours_max", "demand_mbps_min", "demand_mbps_max",
                                    "daily_jitter"},
                                   "traffic.");
        detail::read_field(v, "start_hour_min", c.traffic.start_hour_min, "traffic.");
        detail::read_field(v, "start_hour_max", c.traffic.start_hour_max, "traffic.");
        detail::read_field(v, "duration_hours_min", c.traffic.duration_hours_min, "traffic.");
        detail::read_field(v, "duration_hours_max", c.traffic.duration_hours_max, "traffic.");
        detail::read_field(v, "demand_mbps_min", c.traffic.demand_mbps_min, "traffic.");
        detail::read_field(v, "demand_mbps_max", c.traffic.demand_mbps_max, "traffic.");
        detail::read_field(v, "daily_jitter", c.traffic.daily_jitter, "traffic.");
    }
    if (root.contains("energy")) {
        const auto& v = root.at("energy");
        detail::require_known_keys(v, {"coverage", "capacity"}, "energy.");
        for (const char* group : {"coverage", "capacity"}) {
            if (!v.contains(group)) continue;
            const auto& g = v.at(group);
            const std::string scope = std::string("energy.") + group + ".";
            detail::require_known_keys(g, {"p_fixed_w", "delta_p", "p_sleep_w"}, scope);
            EnergyModel& m =
                std::string(group) == "coverage" ? c.energy.coverage : c.energy.capacity;
            detail::read_field(g, "p_fixed_w", m.p_fixed_w, scope);
            detail::read_field(g, "delta_p", m.delta_p, scope);
            detail::read_field(g, "p_sleep_w", m.p_sleep_w, scope);
        }
    }
    if (root.contains("link")) {
        const auto& v = root.at("link");
        detail::require_known_keys(v,
                                   {"hysteresis_db", "overhead_factor", "se_cap_bps_hz",
                                    "dl_fraction_tdd", "dl_fraction_fdd"},
                                   "link.");
        detail::read_field(v, "hysteresis_db", c.link.hysteresis_db, "link.");
        detail::read_field(v, "overhead_factor", c.link.overhead_factor, "link.");
        detail::read_field(v, "se_cap_bps_hz", c.link.se_cap_bps_hz, "link.");
        detail::read_field(v, "dl_fraction_tdd", c.link.dl_fraction_tdd, "link.");
        detail::read_field(v, "dl_fraction_fdd", c.link.dl_fraction_fdd, "link.");
    }
    c.validate();
    return c;
}

inline ordered_json config_to_json(const SimConfig& c) {
    ordered_json j;
    j["arena_m"] = c.arena_m;
    j["radio"] = {{"pathloss_model", c.radio.pathloss_model == PathlossModel::rma ? "rma" : "fspl"},
                  {"shadowing", c.radio.shadowing == ShadowingMode::deterministic ? "deterministic"
                                                                                  : "lognormal"},
                  {"building_height_m", c.radio.building_height_m},
                  {"street_width_m", c.radio.street_width_m},
                  {"extra_shadowing_db", c.radio.extra_shadowing_db},
                  {"strict_range", c.radio.strict_range}};
    j["coverage_cell"] = {{"tx_power_dbm", c.coverage_cell.tx_power_dbm},
                          {"fc_mhz", c.coverage_cell.fc_mhz},
                          {"bandwidth_mhz", c.coverage_cell.bandwidth_mhz},
                          {"altitude_m", c.coverage_cell.altitude_m},
                          {"antenna_gain_dbi", c.coverage_cell.antenna_gain_dbi},
                          {"duplex", detail::duplex_name(c.coverage_cell.duplex)}};
    j["capacity_cells"] = {{"count", c.capacity_cells.count},
                           {"tx_power_dbm", c.capacity_cells.tx_power_dbm},
                           {"bandwidth_mhz", c.capacity_cells.bandwidth_mhz},
                           {"fc_first_mhz", c.capacity_cells.fc_first_mhz},
                           {"fc_step_mhz", c.capacity_cells.fc_step_mhz},
                           {"altitude_m", c.capacity_cells.altitude_m},
                           {"antenna_gain_dbi", c.capacity_cells.antenna_gain_dbi},
                           {"duplex", detail::duplex_name(c.capacity_cells.duplex)}};
    j["ues"] = {{"count", c.ues.count},
                {"seed", c.ues.seed},
                {"height_m", c.ues.height_m},
                {"sensitivity_dbm", c.ues.sensitivity_dbm},
                {"noise_figure_db", c.ues.noise_figure_db}};
    j["traffic"] = {{"start_hour_min", c.traffic.start_hour_min},
                    {"start_hour_max", c.traffic.start_hour_max},
                    {"duration_hours_min", c.traffic.duration_hours_min},
                    {"duration_hours_max", c.traffic.duration_hours_max},
                    {"demand_mbps_min", c.traffic.demand_mbps_min},
                    {"demand_mbps_max", c.traffic.demand_mbps_max},
                    {"daily_jitter", c.traffic.daily_jitter}};
    j["energy"] = {{"coverage",
                    {{"p_fixed_w", c.energy.coverage.p_fixed_w},
                     {"delta_p", c.energy.coverage.delta_p},
                     {"p_sleep_w", c.energy.coverage.p_sleep_w}}},
                   {"capacity",
                    {{"p_fixed_w", c.energy.capacity.p_fixed_w},
                     {"delta_p", c.energy.capacity.delta_p},
                     {"p_sleep_w", c.energy.capacity.p_sleep_w}}}};
    j["link"] = {{"hysteresis_db", c.link.hysteresis_db},
                 {"overhead_factor", c.link.overhead_factor},
                 {"se_cap_bps_hz", c.link.se_cap_bps_hz},
                 {"dl_fraction_tdd", c.link.dl_fraction_tdd},
                 {"dl_fraction_fdd", c.link.dl_fraction_fdd}};
    return j;
}

inline SimConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config: parse error in " + path + ": " + e.what());
    }
    return config_from_json(j);
}

// FNV-1a over the canonical serialization; stable across runs and platforms.
inline std::uint64_t config_hash(const SimConfig& c) {
    return fnv1a(config_to_json(c).dump());
}

}  // namespace skycell

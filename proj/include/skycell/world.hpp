#pragma once

// The hourly-tick network world: cell/UE placement, RSRP-based association
// with hysteresis, equal-share throughput, and per-cell energy accounting.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "skycell/env_config.hpp"
#include "skycell/link_budget.hpp"
#include "skycell/rng.hpp"
#include "skycell/traffic.hpp"

namespace skycell {

inline constexpr int kUnattached = -1;

// Per-(UE, cell) link measurements for one day, precomputed so association
// and throughput never re-run the propagation model inside the hot loop.
struct LinkTable {
    int n_ues = 0;
    int n_cells = 0;
    std::vector<double> rsrp_dbm;  // ue-major
    std::vector<double> snr_db;

    double rsrp(int ue, int cell) const {
        return rsrp_dbm[static_cast<std::size_t>(ue) * n_cells + cell];
    }
    double snr(int ue, int cell) const {
        return snr_db[static_cast<std::size_t>(ue) * n_cells + cell];
    }
};

struct Environment {
    SimConfig config;
    std::uint64_t env_seed = 0;  // placement + traffic stream
    RadioEnvironment radio;
    std::vector<CellConfig> cells;  // index == id; id 0 is the coverage cell
    std::vector<UeConfig> ues;
    std::vector<int> strongest_cell;  // all-on max-RSRP cell per UE (day-0 links)

    int n_cells() const { return static_cast<int>(cells.size()); }
    int n_ues() const { return static_cast<int>(ues.size()); }

    LinkTable link_table(int day) const {
        LinkTable t;
        t.n_ues = n_ues();
        t.n_cells = n_cells();
        t.rsrp_dbm.resize(static_cast<std::size_t>(t.n_ues) * t.n_cells);
        t.snr_db.resize(t.rsrp_dbm.size());
        for (int u = 0; u < t.n_ues; ++u)
            for (int c = 0; c < t.n_cells; ++c) {
                const LinkMeasurement m =
                    measure_link(cells[c], ues[u], radio, static_cast<std::uint64_t>(day));
                t.rsrp_dbm[static_cast<std::size_t>(u) * t.n_cells + c] = m.rsrp_dbm;
                t.snr_db[static_cast<std::size_t>(u) * t.n_cells + c] = m.snr_db;
            }
        return t;
    }

    double demand(int ue, int day, int hour) const {
        return demand_mbps(ues[ue].traffic, config.traffic, env_seed, ue, day, hour);
    }
};

// Places the coverage cell over the arena center, the capacity cells on a
// 3x3-style grid at 1/6, 1/2, 5/6 of the arena edge, and the UEs uniformly.
inline Environment build_environment(std::uint64_t run_seed, const SimConfig& config) {
    config.validate();
    Environment env;
    env.config = config;
    env.env_seed = config.ues.seed != 0 ? config.ues.seed : run_seed;
    env.radio.pathloss_model = config.radio.pathloss_model;
    env.radio.shadowing_mode = config.radio.shadowing;
    env.radio.building_height_m = config.radio.building_height_m;
    env.radio.street_width_m = config.radio.street_width_m;
    env.radio.extra_shadowing_db = config.radio.extra_shadowing_db;
    env.radio.strict_range = config.radio.strict_range;
    env.radio.rng_seed = mix_seed(env.env_seed, "radio");

    const double a = config.arena_m;
    CellConfig cov;
    cov.id = 0;
    cov.role = CellRole::coverage;
    cov.position = {a / 2.0, a / 2.0, config.coverage_cell.altitude_m};
    cov.tx_power_dbm = config.coverage_cell.tx_power_dbm;
    cov.fc_mhz = config.coverage_cell.fc_mhz;
    cov.bandwidth_mhz = config.coverage_cell.bandwidth_mhz;
    cov.antenna_gain_dbi = config.coverage_cell.antenna_gain_dbi;
    cov.duplex = config.coverage_cell.duplex;
    cov.switchable = false;
    cov.energy = config.energy.coverage;
    env.cells.push_back(cov);

    const int grid = static_cast<int>(std::ceil(std::sqrt(std::max(1, config.capacity_cells.count))));
    for (int k = 0; k < config.capacity_cells.count; ++k) {
        CellConfig cap;
        cap.id = k + 1;
        cap.role = CellRole::capacity;
        const int col = k % grid;
        const int row = k / grid;
        const double fx = grid == 1 ? 0.5 : (1.0 + 2.0 * col) / (2.0 * grid);
        const double fy = grid == 1 ? 0.5 : (1.0 + 2.0 * row) / (2.0 * grid);
        cap.position = {a * fx, a * fy, config.capacity_cells.altitude_m};
        cap.tx_power_dbm = config.capacity_cells.tx_power_dbm;
        cap.fc_mhz = config.capacity_cells.fc_first_mhz + k * config.capacity_cells.fc_step_mhz;
        cap.bandwidth_mhz = config.capacity_cells.bandwidth_mhz;
        cap.antenna_gain_dbi = config.capacity_cells.antenna_gain_dbi;
        cap.duplex = config.capacity_cells.duplex;
        cap.switchable = true;
        cap.energy = config.energy.capacity;
        env.cells.push_back(cap);
    }

    const std::uint64_t place_key = mix_seed(env.env_seed, "ue-place");
    env.ues.reserve(static_cast<std::size_t>(config.ues.count));
    for (int u = 0; u < config.ues.count; ++u) {
        UeConfig ue;
        ue.id = u;
        ue.position = {keyed_uniform(place_key, static_cast<std::uint64_t>(u), 1) * a,
                       keyed_uniform(place_key, static_cast<std::uint64_t>(u), 2) * a,
                       config.ues.height_m};
        ue.noise_figure_db = config.ues.noise_figure_db;
        ue.sensitivity_dbm = config.ues.sensitivity_dbm;
        ue.traffic = draw_traffic_profile(config.traffic, env.env_seed, u);
        env.ues.push_back(ue);
    }

    const LinkTable t0 = env.link_table(0);
    env.strongest_cell.assign(static_cast<std::size_t>(env.n_ues()), kUnattached);
    for (int u = 0; u < env.n_ues(); ++u) {
        int best = kUnattached;
        for (int c = 0; c < env.n_cells(); ++c) {
            if (t0.rsrp(u, c) < env.ues[u].sensitivity_dbm) continue;
            if (best == kUnattached || t0.rsrp(u, c) > t0.rsrp(u, best)) best = c;
        }
        env.strongest_cell[u] = best;
    }
    return env;
}

struct WorldState {
    int day = 0;
    int hour = 0;
    std::vector<std::uint8_t> on;  // per cell
    std::vector<int> serving;      // per UE: cell id or kUnattached
};

inline WorldState initial_state(const Environment& env) {
    WorldState s;
    s.on.assign(static_cast<std::size_t>(env.n_cells()), 1);
    s.serving.assign(static_cast<std::size_t>(env.n_ues()), kUnattached);
    return s;
}

// Max-RSRP association with handover hysteresis: a UE leaves a still-valid
// serving cell only for a candidate better by more than hysteresis_db.
// Ties go to the lowest cell id.
inline std::vector<int> associate(const Environment& env, const LinkTable& table,
                                  const std::vector<std::uint8_t>& on,
                                  const std::vector<int>& prev_serving) {
    std::vector<int> serving(static_cast<std::size_t>(env.n_ues()), kUnattached);
    for (int u = 0; u < env.n_ues(); ++u) {
        const double sens = env.ues[u].sensitivity_dbm;
        int best = kUnattached;
        for (int c = 0; c < env.n_cells(); ++c) {
            if (!on[c] || table.rsrp(u, c) < sens) continue;
            if (best == kUnattached || table.rsrp(u, c) > table.rsrp(u, best)) best = c;
        }
        const int prev = prev_serving[u];
        if (prev != kUnattached && on[prev] && table.rsrp(u, prev) >= sens) {
            serving[u] = best != kUnattached &&
                                 table.rsrp(u, best) >
                                     table.rsrp(u, prev) + env.config.link.hysteresis_db
                             ? best
                             : prev;
        } else {
            serving[u] = best;
        }
    }
    return serving;
}

// Everything the world produces for one hour under a fixed on/off pattern.
struct HourOutcome {
    std::vector<int> serving;
    std::vector<double> ue_throughput_mbps;
    std::vector<double> cell_throughput_mbps;
    std::vector<double> cell_energy_wh;
    std::vector<int> cell_connected;  // attached UEs, idle ones included
    std::vector<int> cell_unserved;   // attached UEs whose demand was not fully met
    double total_throughput_mbps = 0.0;
    double total_energy_wh = 0.0;
};

// Associates, splits each cell's capacity equally among its active UEs, and
// charges on/sleep power for the hour. Shared by the simulator step and the
// exhaustive per-hour optimizer so both see identical physics.
inline HourOutcome evaluate_hour(const Environment& env, const LinkTable& table,
                                 const std::vector<std::uint8_t>& on,
                                 const std::vector<int>& prev_serving,
                                 const std::vector<double>& demand) {
    HourOutcome out;
    out.serving = associate(env, table, on, prev_serving);
    out.ue_throughput_mbps.assign(static_cast<std::size_t>(env.n_ues()), 0.0);
    out.cell_throughput_mbps.assign(static_cast<std::size_t>(env.n_cells()), 0.0);
    out.cell_energy_wh.assign(static_cast<std::size_t>(env.n_cells()), 0.0);
    out.cell_connected.assign(static_cast<std::size_t>(env.n_cells()), 0);
    out.cell_unserved.assign(static_cast<std::size_t>(env.n_cells()), 0);

    std::vector<int> sharers(static_cast<std::size_t>(env.n_cells()), 0);
    for (int u = 0; u < env.n_ues(); ++u) {
        const int c = out.serving[u];
        if (c == kUnattached) continue;
        ++out.cell_connected[c];
        if (demand[u] > 0.0) ++sharers[c];
    }
    for (int u = 0; u < env.n_ues(); ++u) {
        const int c = out.serving[u];
        if (c == kUnattached || demand[u] <= 0.0) continue;
        const CellConfig& cell = env.cells[c];
        const double cap = link_capacity_mbps(
            table.snr(u, c), cell.bandwidth_mhz, env.config.link.dl_fraction(cell.duplex),
            env.config.link.overhead_factor, env.config.link.se_cap_bps_hz, sharers[c]);
        const double served = std::min(demand[u], cap);
        out.ue_throughput_mbps[u] = served;
        out.cell_throughput_mbps[c] += served;
        if (served < demand[u]) ++out.cell_unserved[c];
    }
    for (int c = 0; c < env.n_cells(); ++c) {
        out.cell_energy_wh[c] = on[c] ? env.cells[c].on_power_w() : env.cells[c].sleep_power_w();
        out.total_throughput_mbps += out.cell_throughput_mbps[c];
        out.total_energy_wh += out.cell_energy_wh[c];
    }
    return out;
}

// Key-performance-measurement record for one cell-hour.
struct KpmReport {
    int day = 0;
    int hour = 0;
    int cell_id = 0;
    bool on = true;
    int connected_ues = 0;
    double throughput_mbps = 0.0;
    double energy_wh = 0.0;
    int unserved_ue_count = 0;
};

enum class CellCommand { turn_on, turn_off };

struct RcAction {
    CellCommand command = CellCommand::turn_off;
    int target_cell_id = 0;
};

struct StepResult {
    WorldState next;
    std::vector<KpmReport> reports;        // one per cell, ascending id
    std::vector<RcAction> rejected;        // actions refused (bad id / not switchable)
    std::vector<double> demand;            // offered demand per UE this hour
    std::vector<double> ue_throughput_mbps;
    double total_throughput_mbps = 0.0;
    double total_energy_wh = 0.0;
};

// Applies the hour's control actions, re-associates, serves traffic, charges
// energy, and advances the clock. Actions targeting unknown or non-switchable
// cells are reported back as rejected and have no effect.
inline StepResult step_hour(const Environment& env, const WorldState& state,
                            const std::vector<RcAction>& actions, const LinkTable& table) {
    StepResult res;
    res.next = state;
    for (const RcAction& a : actions) {
        if (a.target_cell_id < 0 || a.target_cell_id >= env.n_cells() ||
            !env.cells[a.target_cell_id].switchable) {
            res.rejected.push_back(a);
            continue;
        }
        res.next.on[a.target_cell_id] = a.command == CellCommand::turn_on ? 1 : 0;
    }

    res.demand.resize(static_cast<std::size_t>(env.n_ues()));
    for (int u = 0; u < env.n_ues(); ++u) res.demand[u] = env.demand(u, state.day, state.hour);

    HourOutcome hour = evaluate_hour(env, table, res.next.on, state.serving, res.demand);
    res.next.serving = hour.serving;
    res.ue_throughput_mbps = std::move(hour.ue_throughput_mbps);
    res.total_throughput_mbps = hour.total_throughput_mbps;
    res.total_energy_wh = hour.total_energy_wh;

    res.reports.reserve(static_cast<std::size_t>(env.n_cells()));
    for (int c = 0; c < env.n_cells(); ++c) {
        KpmReport r;
        r.day = state.day;
        r.hour = state.hour;
        r.cell_id = c;
        r.on = res.next.on[c] != 0;
        r.connected_ues = hour.cell_connected[c];
        r.throughput_mbps = hour.cell_throughput_mbps[c];
        r.energy_wh = hour.cell_energy_wh[c];
        r.unserved_ue_count = hour.cell_unserved[c];
        res.reports.push_back(r);
    }

    res.next.hour = (state.hour + 1) % 24;
    res.next.day = state.day + (state.hour + 1) / 24;
    return res;
}

inline StepResult step_hour(const Environment& env, const WorldState& state,
                            const std::vector<RcAction>& actions) {
    return step_hour(env, state, actions, env.link_table(state.day));
}

// Network energy efficiency in bits per joule: served megabits-for-an-hour
// against watt-hours. 1 Mbps for 1 h = 1e6 * 3600 bits; 1 Wh = 3600 J.
inline double efficiency_bits_per_joule(double throughput_mbps_hours, double energy_wh) {
    if (!(energy_wh > 0.0)) throw std::domain_error("efficiency: energy must be positive");
    return throughput_mbps_hours * 1e6 / energy_wh;
}

}  // namespace skycell

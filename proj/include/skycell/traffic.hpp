#pragma once

// Diurnal traffic profiles: each UE gets one active window per day (daytime
// start, 6-12 h length by default) and a per-hour base demand, re-jittered
// every day. All draws are keyed so they do not depend on evaluation order.

#include <cstdint>

#include "skycell/env_config.hpp"
#include "skycell/rng.hpp"
#include "skycell/ues.hpp"

namespace skycell {

// One profile per UE, fully determined by (env_seed, ue_id).
inline TrafficProfile draw_traffic_profile(const TrafficConfig& cfg, std::uint64_t env_seed,
                                           int ue_id) {
    const std::uint64_t key = mix_seed(env_seed, "traffic");
    const std::uint64_t ue = static_cast<std::uint64_t>(ue_id);
    TrafficProfile p;
    const int start_span = cfg.start_hour_max - cfg.start_hour_min + 1;
    const int dur_span = cfg.duration_hours_max - cfg.duration_hours_min + 1;
    const int start = cfg.start_hour_min +
                      static_cast<int>(keyed_uniform(key, ue, 1) * start_span) % start_span;
    const int duration = cfg.duration_hours_min +
                         static_cast<int>(keyed_uniform(key, ue, 2) * dur_span) % dur_span;
    p.active_start_hour = start % 24;
    p.active_end_hour = duration >= 24 ? p.active_start_hour : (start + duration) % 24;
    for (int h = 0; h < 24; ++h) {
        if (!p.active(h)) {
            p.demand_mbps_by_hour[h] = 0.0;
            continue;
        }
        const double u = keyed_uniform(key, ue, 3, static_cast<std::uint64_t>(h));
        p.demand_mbps_by_hour[h] =
            cfg.demand_mbps_min + u * (cfg.demand_mbps_max - cfg.demand_mbps_min);
    }
    return p;
}

// Offered demand for one UE-hour: the base profile value scaled by the day's
// jitter factor in [1 - j, 1 + j].
inline double demand_mbps(const TrafficProfile& profile, const TrafficConfig& cfg,
                          std::uint64_t env_seed, int ue_id, int day, int hour) {
    const double base = profile.demand_mbps_by_hour.at(static_cast<std::size_t>(hour));
    if (base == 0.0) return 0.0;
    const double u = keyed_uniform(mix_seed(env_seed, "jitter"), static_cast<std::uint64_t>(ue_id),
                                   static_cast<std::uint64_t>(day),
                                   static_cast<std::uint64_t>(hour));
    return base * (1.0 + cfg.daily_jitter * (2.0 * u - 1.0));
}

}  // namespace skycell

#pragma once

// User terminals: static position, receiver parameters, and a diurnal
// traffic profile (one active window per day, per-hour base demand).

#include <array>
#include <stdexcept>

#include "skycell/geometry.hpp"

namespace skycell {

struct TrafficProfile {
    int active_start_hour = 0;  // [0,24)
    int active_end_hour = 0;    // [0,24), exclusive; window may wrap midnight
    std::array<double, 24> demand_mbps_by_hour{};  // base demand, 0 outside window

    bool active(int hour) const {
        if (hour < 0 || hour > 23) throw std::domain_error("TrafficProfile: hour out of range");
        if (active_start_hour == active_end_hour) return true;  // 24 h window
        if (active_start_hour < active_end_hour)
            return hour >= active_start_hour && hour < active_end_hour;
        return hour >= active_start_hour || hour < active_end_hour;
    }
};

struct UeConfig {
    int id = 0;
    Position3D position;          // height fixed at build time (default 1.5 m)
    double noise_figure_db = 7.0;
    double sensitivity_dbm = -125.0;
    double rx_gain_dbi = 0.0;
    TrafficProfile traffic;
};

}  // namespace skycell

#pragma once

// Static cell description and the linearized base-station power model.

#include <cmath>
#include <stdexcept>

#include "skycell/geometry.hpp"

namespace skycell {

enum class CellRole { coverage, capacity };
enum class Duplex { fdd, tdd };

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

// P_on = p_fixed + delta_p * P_tx  (classic linear BS power model),
// P_off = p_sleep. Energy per hour tick is the power in W times 1 h.
struct EnergyModel {
    double p_fixed_w = 0.0;
    double delta_p = 0.0;   // PA slope, dimensionless
    double p_sleep_w = 0.0;

    double on_power_w(double tx_power_dbm) const {
        return p_fixed_w + delta_p * dbm_to_watts(tx_power_dbm);
    }
    void validate() const {
        if (!(p_fixed_w > p_sleep_w) || !(p_sleep_w >= 0.0))
            throw std::domain_error("EnergyModel: requires p_fixed_w > p_sleep_w >= 0");
        if (delta_p < 0.0) throw std::domain_error("EnergyModel: delta_p must be >= 0");
    }
};

struct CellConfig {
    int id = 0;
    CellRole role = CellRole::capacity;
    Position3D position;
    double tx_power_dbm = 0.0;
    double fc_mhz = 0.0;
    double bandwidth_mhz = 0.0;
    double antenna_gain_dbi = 0.0;
    Duplex duplex = Duplex::tdd;
    bool switchable = true;   // coverage cell: false (always on)
    EnergyModel energy;

    double on_power_w() const { return energy.on_power_w(tx_power_dbm); }
    double sleep_power_w() const { return energy.p_sleep_w; }
};

}  // namespace skycell

#pragma once

// Downlink link budget: per-resource-element RSRP, wideband SNR against the
// thermal noise floor, and Shannon-with-overhead throughput.

#include <cmath>
#include <stdexcept>

#include "skycell/cells.hpp"
#include "skycell/propagation.hpp"
#include "skycell/ues.hpp"

namespace skycell {

inline constexpr double kNoiseDensityDbmHz = -174.0;

// Link-layer tunables shared by association and throughput.
struct LinkParams {
    double hysteresis_db = 3.0;     // handover hysteresis
    double overhead_factor = 0.8;   // control/reference-signal overhead
    double se_cap_bps_hz = 5.5;     // spectral-efficiency ceiling (~256QAM)
    double dl_fraction_tdd = 0.75;  // downlink share of a TDD frame
    double dl_fraction_fdd = 1.0;   // FDD: the full carrier is downlink

    double dl_fraction(Duplex duplex) const {
        return duplex == Duplex::fdd ? dl_fraction_fdd : dl_fraction_tdd;
    }
};

// 12 subcarriers per RB, 5 RB per MHz at 15 kHz spacing.
inline int n_subcarriers(double bandwidth_mhz) {
    if (!(bandwidth_mhz > 0.0))
        throw std::domain_error("n_subcarriers: bandwidth must be positive");
    return static_cast<int>(std::lround(60.0 * bandwidth_mhz));
}

// Tx power spread evenly over all subcarriers, plus antenna gain.
inline double eirp_per_re_dbm(double tx_power_dbm, double antenna_gain_dbi,
                              double bandwidth_mhz) {
    return tx_power_dbm - 10.0 * std::log10(static_cast<double>(n_subcarriers(bandwidth_mhz))) +
           antenna_gain_dbi;
}

// kTB over the carrier bandwidth plus receiver noise figure.
inline double noise_floor_dbm(double bandwidth_mhz, double noise_figure_db) {
    if (!(bandwidth_mhz > 0.0))
        throw std::domain_error("noise_floor_dbm: bandwidth must be positive");
    return kNoiseDensityDbmHz + 10.0 * std::log10(bandwidth_mhz * 1e6) + noise_figure_db;
}

struct LinkMeasurement {
    double pathloss_db = 0.0;   // mean pathloss of the selected branch
    double shadowing_db = 0.0;  // shadow fading + extra losses
    double rsrp_dbm = 0.0;
    double snr_db = 0.0;
    bool los = true;
};

// Full downlink measurement for one cell/UE pair. `epoch_key` pins the
// shadow-fading draw (e.g. the day index) so it stays constant within an
// epoch and redraws across epochs.
inline LinkMeasurement measure_link(const CellConfig& cell, const UeConfig& ue,
                                    const RadioEnvironment& env, std::uint64_t epoch_key = 0) {
    LinkMeasurement m;
    m.los = los_check(env.terrain.get(), cell.position, ue.position);
    const LinkGeometry geom = LinkGeometry::between(cell.position, ue.position, cell.fc_mhz);
    const Pathloss pl = pathloss_db(geom, env, m.los);
    m.pathloss_db = pl.loss_db;
    m.shadowing_db = shadowing_db(env, pl.sigma_sf_db, static_cast<std::uint64_t>(cell.id),
                                  static_cast<std::uint64_t>(ue.id), epoch_key);
    const double coupling = m.pathloss_db + m.shadowing_db - cell.antenna_gain_dbi - ue.rx_gain_dbi;
    m.rsrp_dbm = cell.tx_power_dbm - 10.0 * std::log10(n_subcarriers(cell.bandwidth_mhz)) - coupling;
    m.snr_db = cell.tx_power_dbm - coupling - noise_floor_dbm(cell.bandwidth_mhz, ue.noise_figure_db);
    return m;
}

inline double rsrp_dbm(const CellConfig& cell, const UeConfig& ue, const RadioEnvironment& env,
                       std::uint64_t epoch_key = 0) {
    return measure_link(cell, ue, env, epoch_key).rsrp_dbm;
}

inline double snr_db(const CellConfig& cell, const UeConfig& ue, const RadioEnvironment& env,
                     std::uint64_t epoch_key = 0) {
    return measure_link(cell, ue, env, epoch_key).snr_db;
}

// Shannon rate with an overhead derating and a spectral-efficiency cap,
// split evenly between the UEs sharing the carrier.
inline double link_capacity_mbps(double snr_db_value, double bandwidth_mhz, double dl_fraction,
                                 double overhead_factor, double se_cap_bps_hz, int n_sharing) {
    if (n_sharing < 1) throw std::domain_error("link_capacity_mbps: n_sharing must be >= 1");
    const double se = std::min(std::log2(1.0 + db_to_linear(snr_db_value)), se_cap_bps_hz);
    return bandwidth_mhz * dl_fraction * overhead_factor * se / static_cast<double>(n_sharing);
}

}  // namespace skycell

#pragma once

// Pathloss models: free space and the 3GPP TR 38.901 rural-macro (RMa)
// LoS/NLoS branches (Table 7.4.1-1), plus the lognormal shadow-fading hooks.
//
// RMa validity notes. The standard assumes hBS around 35 m and d2D between
// 10 m and 10 km. Aerial cells here run far above that (60-1000 m); this is
// a deliberate, documented extrapolation, and a free-space mode is available
// for air-to-ground LoS links. Below 10 m the horizontal distance is clamped
// (or rejected under strict_range); beyond 10 km the formula is extrapolated
// so that pathloss keeps increasing monotonically.

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "skycell/geometry.hpp"
#include "skycell/rng.hpp"
#include "skycell/terrain.hpp"

namespace skycell {

inline constexpr double kSpeedOfLightMps = 299792458.0;
inline constexpr double kRmaMinD2dM = 10.0;
inline constexpr double kRmaMaxD2dM = 10000.0;

enum class PathlossModel { fspl, rma };
enum class ShadowingMode { deterministic, lognormal };

struct RadioEnvironment {
    PathlossModel pathloss_model = PathlossModel::rma;
    ShadowingMode shadowing_mode = ShadowingMode::deterministic;
    double building_height_m = 5.0;   // h
    double street_width_m = 5.0;      // W
    double extra_shadowing_db = 0.0;  // flat extra loss (e.g. 6 dB in-vehicle)
    bool strict_range = false;        // out-of-validity distances throw instead of clamping
    std::uint64_t rng_seed = 0;       // shadow-fading stream
    std::shared_ptr<const TerrainGrid> terrain;  // absent -> every link has LoS
};

struct Pathloss {
    double loss_db = 0.0;
    double sigma_sf_db = 0.0;  // lognormal shadow-fading std dev of the branch
};

// Free-space pathloss, 20 log10(4 pi d f / c).
inline double fspl_db(double d_m, double fc_mhz) {
    if (!(d_m > 0.0) || !(fc_mhz > 0.0))
        throw std::domain_error("fspl_db: distance and frequency must be positive");
    return 20.0 * std::log10(4.0 * kPi * d_m * fc_mhz * 1e6 / kSpeedOfLightMps);
}

// Two-ray breakpoint distance, 2 pi hBS hUT fc / c.
inline double breakpoint_distance_m(const LinkGeometry& geom) {
    if (!(geom.h_bs_m > 0.0) || !(geom.h_ut_m > 0.0))
        throw std::domain_error("breakpoint_distance_m: heights must be positive");
    return 2.0 * kPi * geom.h_bs_m * geom.h_ut_m * geom.fc_mhz * 1e6 / kSpeedOfLightMps;
}

namespace detail {

inline void check_rma_inputs(const LinkGeometry& geom, const RadioEnvironment& env) {
    if (!(geom.fc_mhz > 0.0)) throw std::domain_error("rma: fc_mhz must be positive");
    if (!(geom.h_ut_m >= 1.0) || !(geom.h_bs_m > geom.h_ut_m))
        throw std::domain_error("rma: requires 1 m <= hUT < hBS");
    if (!(env.building_height_m >= 5.0) || !(env.building_height_m <= 50.0))
        throw std::domain_error("rma: building_height_m outside [5, 50]");
}

// Clamp-or-throw policy for the horizontal distance validity window.
inline double effective_d2d(double d2d_m, const RadioEnvironment& env) {
    if (env.strict_range && (d2d_m < kRmaMinD2dM || d2d_m > kRmaMaxD2dM))
        throw std::domain_error("rma: d2d outside validity range [10 m, 10 km] (strict)");
    return std::max(d2d_m, kRmaMinD2dM);  // upper end extrapolates
}

// RMa LoS PL1 as a function of the slant distance.
inline double rma_pl1(double d3d_m, double fc_ghz, double h_m) {
    const double h172 = std::pow(h_m, 1.72);
    return 20.0 * std::log10(40.0 * kPi * d3d_m * fc_ghz / 3.0) +
           std::min(0.03 * h172, 10.0) * std::log10(d3d_m) -
           std::min(0.044 * h172, 14.77) + 0.002 * std::log10(h_m) * d3d_m;
}

}  // namespace detail

// TR 38.901 RMa LoS: PL1 up to the breakpoint (sigma 4), then the 40 dB/decade
// continuation PL2 (sigma 6). PL1 at the breakpoint is evaluated at the slant
// distance of the breakpoint so the two branches join exactly.
inline Pathloss rma_los_pathloss_db(const LinkGeometry& geom, const RadioEnvironment& env) {
    detail::check_rma_inputs(geom, env);
    const double d2d = detail::effective_d2d(geom.d2d_m, env);
    const double dh = geom.h_bs_m - geom.h_ut_m;
    const double d3d = std::hypot(d2d, dh);
    const double fc_ghz = geom.fc_mhz / 1000.0;
    const double h = env.building_height_m;
    const double dbp = breakpoint_distance_m(geom);
    if (d2d <= dbp) return {detail::rma_pl1(d3d, fc_ghz, h), 4.0};
    const double d3d_bp = std::hypot(dbp, dh);
    return {detail::rma_pl1(d3d_bp, fc_ghz, h) + 40.0 * std::log10(d3d / d3d_bp), 6.0};
}

// TR 38.901 RMa NLoS: max(LoS, PL') with sigma 8.
inline Pathloss rma_nlos_pathloss_db(const LinkGeometry& geom, const RadioEnvironment& env) {
    detail::check_rma_inputs(geom, env);
    if (!(env.street_width_m >= 5.0) || !(env.street_width_m <= 50.0))
        throw std::domain_error("rma: street_width_m outside [5, 50]");
    const double d2d = detail::effective_d2d(geom.d2d_m, env);
    const double dh = geom.h_bs_m - geom.h_ut_m;
    const double d3d = std::hypot(d2d, dh);
    const double fc_ghz = geom.fc_mhz / 1000.0;
    const double h = env.building_height_m;
    const double w = env.street_width_m;
    const double hbs = geom.h_bs_m;
    const double hut = geom.h_ut_m;
    const double pl_nlos =
        161.04 - 7.1 * std::log10(w) + 7.5 * std::log10(h) -
        (24.37 - 3.7 * (h / hbs) * (h / hbs)) * std::log10(hbs) +
        (43.42 - 3.1 * std::log10(hbs)) * (std::log10(d3d) - 3.0) +
        20.0 * std::log10(fc_ghz) -
        (3.2 * std::pow(std::log10(11.75 * hut), 2.0) - 4.97);
    const double los = rma_los_pathloss_db(geom, env).loss_db;
    return {std::max(los, pl_nlos), 8.0};
}

// Mean pathloss + shadowing sigma for a link under the configured model.
// FSPL mode keeps the RMa sigma conventions (sigma describes the clutter,
// not the mean-loss formula); its NLoS is max(FSPL, RMa-NLoS') as well.
inline Pathloss pathloss_db(const LinkGeometry& geom, const RadioEnvironment& env, bool los) {
    if (env.pathloss_model == PathlossModel::rma)
        return los ? rma_los_pathloss_db(geom, env) : rma_nlos_pathloss_db(geom, env);
    if (!los) {
        Pathloss nlos = rma_nlos_pathloss_db(geom, env);
        nlos.loss_db = std::max(nlos.loss_db, fspl_db(geom.d3d_m, geom.fc_mhz));
        return nlos;
    }
    const double sigma = geom.d2d_m <= breakpoint_distance_m(geom) ? 4.0 : 6.0;
    return {fspl_db(geom.d3d_m, geom.fc_mhz), sigma};
}

// Shadow fading for one link, in dB of extra loss. Deterministic mode: only
// the flat extra term. Lognormal mode: one seeded draw per (cell, entity,
// epoch) key, stable across calls and call order.
inline double shadowing_db(const RadioEnvironment& env, double sigma_sf_db,
                           std::uint64_t cell_key, std::uint64_t entity_key,
                           std::uint64_t epoch_key = 0) {
    double s = env.extra_shadowing_db;
    if (env.shadowing_mode == ShadowingMode::lognormal)
        s += sigma_sf_db * keyed_gaussian(mix_seed(env.rng_seed, "shadow"),
                                          cell_key, entity_key, epoch_key);
    return s;
}

}  // namespace skycell

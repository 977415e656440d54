#pragma once

// Independent reference implementations used only by the tests. These are
// written from the formula definitions in long double, in a different style
// from the library, so agreement is meaningful.

#include <algorithm>
#include <cmath>

namespace refmodel {

inline constexpr long double kC = 299792458.0L;
inline constexpr long double kPiL = 3.14159265358979323846264338327950288L;

inline double fspl_db(double d_m, double fc_mhz) {
    const long double f_hz = static_cast<long double>(fc_mhz) * 1.0e6L;
    const long double ratio = 4.0L * kPiL * static_cast<long double>(d_m) * f_hz / kC;
    return static_cast<double>(20.0L * std::log10(ratio));
}

inline double breakpoint_m(double h_bs, double h_ut, double fc_mhz) {
    const long double f_hz = static_cast<long double>(fc_mhz) * 1.0e6L;
    return static_cast<double>(2.0L * kPiL * static_cast<long double>(h_bs) *
                               static_cast<long double>(h_ut) * f_hz / kC);
}

inline long double pl1(long double d3d, long double fc_ghz, long double h) {
    const long double h172 = std::pow(h, 1.72L);
    const long double t1 = 20.0L * std::log10(40.0L * kPiL * d3d * fc_ghz / 3.0L);
    const long double t2 = std::min(0.03L * h172, 10.0L) * std::log10(d3d);
    const long double t3 = -std::min(0.044L * h172, 14.77L);
    const long double t4 = 0.002L * std::log10(h) * d3d;
    return t1 + t2 + t3 + t4;
}

struct LossSigma {
    double loss_db;
    double sigma_db;
};

// Rural-macro line of sight; d2d below 10 m is clamped like the library's
// default policy, above 10 km the PL2 slope simply continues.
inline LossSigma rma_los(double d2d_in, double h_bs, double h_ut, double fc_mhz, double h) {
    const long double d2d = std::max(static_cast<long double>(d2d_in), 10.0L);
    const long double dh = static_cast<long double>(h_bs) - static_cast<long double>(h_ut);
    const long double d3d = std::sqrt(d2d * d2d + dh * dh);
    const long double fc_ghz = static_cast<long double>(fc_mhz) / 1000.0L;
    const long double dbp = static_cast<long double>(breakpoint_m(h_bs, h_ut, fc_mhz));
    if (d2d <= dbp) return {static_cast<double>(pl1(d3d, fc_ghz, h)), 4.0};
    const long double d3d_bp = std::sqrt(dbp * dbp + dh * dh);
    const long double pl2 = pl1(d3d_bp, fc_ghz, h) + 40.0L * std::log10(d3d / d3d_bp);
    return {static_cast<double>(pl2), 6.0};
}

inline LossSigma rma_nlos(double d2d_in, double h_bs, double h_ut, double fc_mhz, double h,
                          double w) {
    const long double d2d = std::max(static_cast<long double>(d2d_in), 10.0L);
    const long double dh = static_cast<long double>(h_bs) - static_cast<long double>(h_ut);
    const long double d3d = std::sqrt(d2d * d2d + dh * dh);
    const long double fc_ghz = static_cast<long double>(fc_mhz) / 1000.0L;
    const long double hb = static_cast<long double>(h);
    const long double hbs = static_cast<long double>(h_bs);
    const long double hut = static_cast<long double>(h_ut);
    const long double wl = static_cast<long double>(w);
    const long double nlos = 161.04L - 7.1L * std::log10(wl) + 7.5L * std::log10(hb) -
                             (24.37L - 3.7L * (hb / hbs) * (hb / hbs)) * std::log10(hbs) +
                             (43.42L - 3.1L * std::log10(hbs)) * (std::log10(d3d) - 3.0L) +
                             20.0L * std::log10(fc_ghz) -
                             (3.2L * std::pow(std::log10(11.75L * hut), 2.0L) - 4.97L);
    const double los = rma_los(d2d_in, h_bs, h_ut, fc_mhz, h).loss_db;
    return {std::max(los, static_cast<double>(nlos)), 8.0};
}

inline double eirp_per_re_dbm(double tx_dbm, double gain_dbi, double bw_mhz) {
    const long double n_sub = 60.0L * static_cast<long double>(bw_mhz);
    return static_cast<double>(static_cast<long double>(tx_dbm) - 10.0L * std::log10(n_sub) +
                               static_cast<long double>(gain_dbi));
}

inline double noise_floor_dbm(double bw_mhz, double nf_db) {
    return static_cast<double>(-174.0L +
                               10.0L * std::log10(static_cast<long double>(bw_mhz) * 1.0e6L) +
                               static_cast<long double>(nf_db));
}

inline double shannon_mbps(double snr_db, double bw_mhz, double dl_fraction, double overhead,
                           double se_cap, int n_share) {
    const long double snr_lin = std::pow(10.0L, static_cast<long double>(snr_db) / 10.0L);
    const long double se = std::min(std::log2(1.0L + snr_lin), static_cast<long double>(se_cap));
    return static_cast<double>(static_cast<long double>(bw_mhz) * dl_fraction * overhead * se /
                               n_share);
}

}  // namespace refmodel

#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <cmath>

#include "skycell/propagation.hpp"
#include "support/reference_models.hpp"

using namespace skycell;

namespace {

LinkGeometry make_geom(double d2d, double h_bs, double h_ut, double fc_mhz) {
    Position3D bs{0.0, 0.0, h_bs};
    Position3D ut{d2d, 0.0, h_ut};
    return LinkGeometry::between(bs, ut, fc_mhz);
}

}  // namespace

TEST_CASE("free-space pathloss: frozen value and scaling laws") {
    CHECK(fspl_db(100.0, 2650.0) == Catch::Approx(80.91270070061952).margin(1e-9));
    // +20 dB per decade of distance and of frequency
    CHECK(fspl_db(1000.0, 2650.0) - fspl_db(100.0, 2650.0) == Catch::Approx(20.0).margin(1e-9));
    CHECK(fspl_db(100.0, 26500.0) - fspl_db(100.0, 2650.0) == Catch::Approx(20.0).margin(1e-9));
    CHECK_THROWS_AS(fspl_db(0.0, 2650.0), std::domain_error);
    CHECK_THROWS_AS(fspl_db(100.0, -1.0), std::domain_error);
}

TEST_CASE("breakpoint distance: frozen values and arena bound") {
    CHECK(breakpoint_distance_m(make_geom(1000.0, 60.0, 1.5, 2650.0)) ==
          Catch::Approx(4998.59037735476).margin(1e-6));
    CHECK(breakpoint_distance_m(make_geom(1000.0, 35.0, 1.5, 2650.0)) ==
          Catch::Approx(2915.8443867902774).margin(1e-6));
    // 1000 m platform at 3300 MHz: breakpoint beyond a 10 km arena, so the
    // first LoS segment covers the whole square.
    CHECK(breakpoint_distance_m(make_geom(1.0, 1000.0, 1.5, 3300.0)) > 10000.0);
    CHECK_THROWS_AS(breakpoint_distance_m(make_geom(1.0, 0.0, 1.5, 2650.0)), std::domain_error);
}

TEST_CASE("rural-macro pathloss: frozen oracle values") {
    RadioEnvironment env;
    env.building_height_m = 5.0;
    env.street_width_m = 5.0;
    const LinkGeometry g = make_geom(1000.0, 35.0, 1.5, 2650.0);
    const Pathloss los = rma_los_pathloss_db(g, env);
    CHECK(los.loss_db == Catch::Approx(103.04320272236771).margin(1e-9));
    CHECK(los.sigma_sf_db == 4.0);
    const Pathloss nlos = rma_nlos_pathloss_db(g, env);
    CHECK(nlos.loss_db == Catch::Approx(132.28248860633207).margin(1e-9));
    CHECK(nlos.sigma_sf_db == 8.0);
}

TEST_CASE("rural-macro matches the independent oracle on 200 random draws") {
    RadioEnvironment env;
    Rng rng(20260815);
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < 200; ++i) {
        const double h_ut = rng.uniform(1.0, 10.0);
        const double h_bs = rng.uniform(h_ut + 1.0, 1200.0);
        const double d2d = rng.uniform(10.0, 10000.0);
        const double fc = rng.uniform(500.0, 7000.0);
        env.building_height_m = rng.uniform(5.0, 50.0);
        env.street_width_m = rng.uniform(5.0, 50.0);
        const LinkGeometry g = make_geom(d2d, h_bs, h_ut, fc);

        const Pathloss los = rma_los_pathloss_db(g, env);
        const refmodel::LossSigma rlos = refmodel::rma_los(d2d, h_bs, h_ut, fc,
                                                           env.building_height_m);
        REQUIRE(los.loss_db == Catch::Approx(rlos.loss_db).margin(1e-9));
        REQUIRE(los.sigma_sf_db == rlos.sigma_db);

        const Pathloss nlos = rma_nlos_pathloss_db(g, env);
        const refmodel::LossSigma rnlos = refmodel::rma_nlos(d2d, h_bs, h_ut, fc,
                                                             env.building_height_m,
                                                             env.street_width_m);
        REQUIRE(nlos.loss_db == Catch::Approx(rnlos.loss_db).margin(1e-9));
        REQUIRE(nlos.sigma_sf_db == rnlos.sigma_db);

        REQUIRE(fspl_db(g.d3d_m, fc) ==
                Catch::Approx(refmodel::fspl_db(g.d3d_m, fc)).margin(1e-9));
    }
    const auto elapsed = std::chrono::steady_clock::now() - t0;
    CHECK(std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count() < 1000);
}

TEST_CASE("LoS branches join continuously at the breakpoint") {
    RadioEnvironment env;
    Rng rng(55);
    for (int i = 0; i < 50; ++i) {
        const double h_ut = rng.uniform(1.0, 5.0);
        const double h_bs = rng.uniform(h_ut + 5.0, 150.0);
        const double fc = rng.uniform(700.0, 6000.0);
        env.building_height_m = rng.uniform(5.0, 50.0);
        const double dbp = breakpoint_distance_m(make_geom(1.0, h_bs, h_ut, fc));
        if (dbp <= 10.0 || dbp >= 1e7) continue;
        const double below = rma_los_pathloss_db(make_geom(dbp, h_bs, h_ut, fc), env).loss_db;
        const double above =
            rma_los_pathloss_db(make_geom(dbp * (1.0 + 1e-12), h_bs, h_ut, fc), env).loss_db;
        REQUIRE(std::abs(above - below) < 1e-9);
    }
}

TEST_CASE("pathloss increases monotonically with horizontal distance") {
    RadioEnvironment env;
    const double h_bs = 60.0, h_ut = 1.5, fc = 3600.0;
    double prev_los = -1.0, prev_nlos = -1.0;
    for (double d = 10.0; d <= 12000.0; d *= 1.07) {
        const LinkGeometry g = make_geom(d, h_bs, h_ut, fc);
        const double los = rma_los_pathloss_db(g, env).loss_db;
        const double nlos = rma_nlos_pathloss_db(g, env).loss_db;
        REQUIRE(los > prev_los);
        REQUIRE(nlos > prev_nlos);
        REQUIRE(nlos >= los);  // NLoS is max(LoS, PL') by construction
        prev_los = los;
        prev_nlos = nlos;
    }
}

TEST_CASE("distance validity: clamping by default, throwing in strict mode") {
    RadioEnvironment env;
    const double clamped = rma_los_pathloss_db(make_geom(3.0, 35.0, 1.5, 2000.0), env).loss_db;
    const double at_ten = rma_los_pathloss_db(make_geom(10.0, 35.0, 1.5, 2000.0), env).loss_db;
    CHECK(clamped == at_ten);
    env.strict_range = true;
    CHECK_THROWS_AS(rma_los_pathloss_db(make_geom(3.0, 35.0, 1.5, 2000.0), env),
                    std::domain_error);
    CHECK_THROWS_AS(rma_los_pathloss_db(make_geom(10001.0, 35.0, 1.5, 2000.0), env),
                    std::domain_error);
    CHECK_NOTHROW(rma_los_pathloss_db(make_geom(9999.0, 35.0, 1.5, 2000.0), env));
}

TEST_CASE("rural-macro input validation") {
    RadioEnvironment env;
    CHECK_THROWS_AS(rma_los_pathloss_db(make_geom(100.0, 35.0, 0.5, 2000.0), env),
                    std::domain_error);  // hUT < 1
    CHECK_THROWS_AS(rma_los_pathloss_db(make_geom(100.0, 1.0, 1.5, 2000.0), env),
                    std::domain_error);  // hBS <= hUT
    env.building_height_m = 60.0;
    CHECK_THROWS_AS(rma_los_pathloss_db(make_geom(100.0, 35.0, 1.5, 2000.0), env),
                    std::domain_error);
    env.building_height_m = 5.0;
    env.street_width_m = 2.0;
    CHECK_THROWS_AS(rma_nlos_pathloss_db(make_geom(100.0, 35.0, 1.5, 2000.0), env),
                    std::domain_error);
}

TEST_CASE("model dispatch: free-space LoS keeps sigma, NLoS dominates") {
    RadioEnvironment env;
    env.pathloss_model = PathlossModel::fspl;
    const LinkGeometry g = make_geom(100.0, 60.0, 1.5, 2650.0);
    const Pathloss los = pathloss_db(g, env, true);
    CHECK(los.loss_db == Catch::Approx(fspl_db(g.d3d_m, 2650.0)).margin(1e-12));
    CHECK(los.sigma_sf_db == 4.0);  // below breakpoint
    const Pathloss nlos = pathloss_db(g, env, false);
    CHECK(nlos.loss_db >= los.loss_db);
    CHECK(nlos.sigma_sf_db == 8.0);

    env.pathloss_model = PathlossModel::rma;
    const Pathloss rma = pathloss_db(g, env, true);
    CHECK(rma.loss_db == Catch::Approx(rma_los_pathloss_db(g, env).loss_db).margin(1e-12));
}

TEST_CASE("shadowing: deterministic extra term, keyed lognormal draws") {
    RadioEnvironment env;
    env.extra_shadowing_db = 6.0;
    CHECK(shadowing_db(env, 8.0, 1, 2, 3) == 6.0);
    env.shadowing_mode = ShadowingMode::lognormal;
    env.rng_seed = 99;
    const double draw = shadowing_db(env, 8.0, 1, 2, 3);
    CHECK(draw == shadowing_db(env, 8.0, 1, 2, 3));  // stable per key
    CHECK(draw != shadowing_db(env, 8.0, 1, 2, 4));  // epoch changes the draw
    // sigma scales the spread around the extra term
    double sum = 0.0, sum2 = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double s = shadowing_db(env, 8.0, 1, static_cast<std::uint64_t>(i), 0) - 6.0;
        sum += s;
        sum2 += s * s;
    }
    const double mean = sum / n;
    CHECK(std::abs(mean) < 0.2);
    CHECK(std::sqrt(sum2 / n - mean * mean) == Catch::Approx(8.0).margin(0.25));
}

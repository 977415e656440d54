#pragma once

// Positions and link geometry. Coordinates are meters in a local ENU frame:
// x east, y north, z above the reference ground plane.

#include <cmath>
#include <stdexcept>

namespace skycell {

struct Position3D {
    double x_m = 0.0;
    double y_m = 0.0;
    double z_m = 0.0;
};

inline double horizontal_distance_m(const Position3D& a, const Position3D& b) {
    return std::hypot(b.x_m - a.x_m, b.y_m - a.y_m);
}

inline double distance_3d_m(const Position3D& a, const Position3D& b) {
    return std::hypot(b.x_m - a.x_m, b.y_m - a.y_m, b.z_m - a.z_m);
}

// Quantities entering the pathloss formulas: horizontal and slant distance
// plus endpoint heights and the carrier.
struct LinkGeometry {
    double d2d_m = 0.0;
    double d3d_m = 0.0;
    double h_bs_m = 0.0;
    double h_ut_m = 0.0;
    double fc_mhz = 0.0;

    static LinkGeometry between(const Position3D& bs, const Position3D& ut, double fc_mhz) {
        if (!(fc_mhz > 0.0)) throw std::domain_error("LinkGeometry: fc_mhz must be positive");
        LinkGeometry g;
        g.d2d_m = horizontal_distance_m(bs, ut);
        g.h_bs_m = bs.z_m;
        g.h_ut_m = ut.z_m;
        g.d3d_m = std::hypot(g.d2d_m, bs.z_m - ut.z_m);
        g.fc_mhz = fc_mhz;
        return g;
    }
};

}  // namespace skycell

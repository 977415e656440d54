#pragma once

// Ground-level RSRP sampling on a regular grid, for coverage maps and
// covered-area estimation from a single transmitter.

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "skycell/link_budget.hpp"

namespace skycell {

struct BoundingBox {
    double x_min_m = 0.0;
    double y_min_m = 0.0;
    double x_max_m = 0.0;
    double y_max_m = 0.0;
};

struct CoverageGrid {
    BoundingBox bbox;
    double resolution_m = 0.0;
    double probe_height_m = 1.5;
    int nx = 0;
    int ny = 0;
    std::vector<double> rsrp_dbm;  // row-major, y outer / x inner

    double x_at(int ix) const { return bbox.x_min_m + resolution_m * ix; }
    double y_at(int iy) const { return bbox.y_min_m + resolution_m * iy; }
    double at(int ix, int iy) const { return rsrp_dbm.at(static_cast<std::size_t>(iy) * nx + ix); }

    double covered_fraction(double sensitivity_dbm) const {
        if (rsrp_dbm.empty()) return 0.0;
        std::size_t covered = 0;
        for (double v : rsrp_dbm) covered += v >= sensitivity_dbm ? 1 : 0;
        return static_cast<double>(covered) / static_cast<double>(rsrp_dbm.size());
    }
};

// Sample RSRP from `cell` on a grid over `bbox` with `resolution_m` spacing.
// Points land on x_min + i*res / y_min + j*res, inclusive of edges that fall
// exactly on the boundary.
inline CoverageGrid coverage_grid(const CellConfig& cell, const RadioEnvironment& env,
                                  const BoundingBox& bbox, double resolution_m,
                                  double probe_height_m = 1.5) {
    if (!(resolution_m > 0.0))
        throw std::domain_error("coverage_grid: resolution must be positive");
    if (!(bbox.x_max_m >= bbox.x_min_m) || !(bbox.y_max_m >= bbox.y_min_m))
        throw std::domain_error("coverage_grid: empty bounding box");
    CoverageGrid grid;
    grid.bbox = bbox;
    grid.resolution_m = resolution_m;
    grid.probe_height_m = probe_height_m;
    const double eps = resolution_m * 1e-9;
    grid.nx = static_cast<int>((bbox.x_max_m - bbox.x_min_m + eps) / resolution_m) + 1;
    grid.ny = static_cast<int>((bbox.y_max_m - bbox.y_min_m + eps) / resolution_m) + 1;
    grid.rsrp_dbm.reserve(static_cast<std::size_t>(grid.nx) * grid.ny);
    UeConfig probe;
    for (int iy = 0; iy < grid.ny; ++iy) {
        for (int ix = 0; ix < grid.nx; ++ix) {
            probe.id = iy * grid.nx + ix;
            probe.position = {grid.x_at(ix), grid.y_at(iy), probe_height_m};
            if (env.terrain) probe.position.z_m = env.terrain->elevation_m(probe.position.x_m,
                                                                           probe.position.y_m) +
                                                  probe_height_m;
            grid.rsrp_dbm.push_back(rsrp_dbm(cell, probe, env));
        }
    }
    return grid;
}

// CSV export: header `x_m,y_m,rsrp_dbm`, one row per point in grid order,
// all values with six decimals.
inline void write_coverage_csv(const CoverageGrid& grid, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_coverage_csv: cannot open " + path);
    out << "x_m,y_m,rsrp_dbm\n";
    char line[128];
    for (int iy = 0; iy < grid.ny; ++iy) {
        for (int ix = 0; ix < grid.nx; ++ix) {
            std::snprintf(line, sizeof line, "%.6f,%.6f,%.6f\n", grid.x_at(ix), grid.y_at(iy),
                          grid.at(ix, iy));
            out << line;
        }
    }
    if (!out.flush()) throw std::runtime_error("write_coverage_csv: write failed for " + path);
}

}  // namespace skycell

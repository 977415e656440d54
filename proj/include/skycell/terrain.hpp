#pragma once

// Uniform elevation raster with bilinear sampling, CSV import/export, and a
// segment line-of-sight test.
//
// CSV layout: a name header line `origin_x,origin_y,cell_size_m,ncols,nrows`,
// one line with those five values, then nrows lines of ncols elevations
// (row 0 at origin_y, rows advancing north).

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "skycell/geometry.hpp"

namespace skycell {

class TerrainGrid {
  public:
    TerrainGrid(double origin_x_m, double origin_y_m, double cell_size_m,
                int ncols, int nrows, std::vector<double> elevations)
        : origin_x_(origin_x_m), origin_y_(origin_y_m), cell_size_(cell_size_m),
          ncols_(ncols), nrows_(nrows), elev_(std::move(elevations)) {
        if (ncols_ <= 0 || nrows_ <= 0)
            throw std::domain_error("TerrainGrid: dimensions must be positive");
        if (!(cell_size_ > 0.0))
            throw std::domain_error("TerrainGrid: cell_size_m must be positive");
        if (elev_.size() != static_cast<std::size_t>(ncols_) * nrows_)
            throw std::domain_error("TerrainGrid: elevation count does not match dimensions");
    }

    double origin_x_m() const { return origin_x_; }
    double origin_y_m() const { return origin_y_; }
    double cell_size_m() const { return cell_size_; }
    int ncols() const { return ncols_; }
    int nrows() const { return nrows_; }

    double at(int col, int row) const { return elev_[static_cast<std::size_t>(row) * ncols_ + col]; }

    bool contains(double x_m, double y_m) const {
        return x_m >= origin_x_ && y_m >= origin_y_ &&
               x_m <= origin_x_ + (ncols_ - 1) * cell_size_ &&
               y_m <= origin_y_ + (nrows_ - 1) * cell_size_;
    }

    // Bilinear elevation at an arbitrary in-grid point.
    double elevation_m(double x_m, double y_m) const {
        if (!contains(x_m, y_m))
            throw std::domain_error("TerrainGrid: point outside raster");
        const double gx = (x_m - origin_x_) / cell_size_;
        const double gy = (y_m - origin_y_) / cell_size_;
        int c0 = static_cast<int>(std::floor(gx));
        int r0 = static_cast<int>(std::floor(gy));
        if (c0 >= ncols_ - 1) c0 = ncols_ - 2 >= 0 ? ncols_ - 2 : 0;
        if (r0 >= nrows_ - 1) r0 = nrows_ - 2 >= 0 ? nrows_ - 2 : 0;
        const int c1 = ncols_ > 1 ? c0 + 1 : c0;
        const int r1 = nrows_ > 1 ? r0 + 1 : r0;
        const double fx = ncols_ > 1 ? gx - c0 : 0.0;
        const double fy = nrows_ > 1 ? gy - r0 : 0.0;
        const double top = at(c0, r1) * (1.0 - fx) + at(c1, r1) * fx;
        const double bot = at(c0, r0) * (1.0 - fx) + at(c1, r0) * fx;
        return bot * (1.0 - fy) + top * fy;
    }

    static TerrainGrid load_csv(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("TerrainGrid: cannot open " + path);
        std::string line;
        if (!std::getline(in, line) || line.rfind("origin_x,origin_y,cell_size_m,ncols,nrows", 0) != 0)
            throw std::runtime_error("TerrainGrid: missing header in " + path);
        if (!std::getline(in, line))
            throw std::runtime_error("TerrainGrid: missing metadata row in " + path);
        double ox, oy, cs;
        int nc, nr;
        {
            std::istringstream ss(line);
            char comma;
            if (!(ss >> ox >> comma >> oy >> comma >> cs >> comma >> nc >> comma >> nr))
                throw std::runtime_error("TerrainGrid: bad metadata row in " + path);
        }
        std::vector<double> elev;
        elev.reserve(static_cast<std::size_t>(nc) * nr);
        for (int r = 0; r < nr; ++r) {
            if (!std::getline(in, line))
                throw std::runtime_error("TerrainGrid: truncated raster in " + path);
            std::istringstream ss(line);
            std::string tok;
            for (int c = 0; c < nc; ++c) {
                if (!std::getline(ss, tok, ','))
                    throw std::runtime_error("TerrainGrid: short row in " + path);
                elev.push_back(std::stod(tok));
            }
        }
        return TerrainGrid(ox, oy, cs, nc, nr, std::move(elev));
    }

  private:
    double origin_x_, origin_y_, cell_size_;
    int ncols_, nrows_;
    std::vector<double> elev_;
};

// True iff the straight segment a-b clears the terrain. The segment is
// sampled at no more than cell_size/2 spacing; it is blocked when a terrain
// sample strictly exceeds the segment height there. Endpoints sitting on the
// ground therefore do not block their own link. No terrain means free sight.
inline bool los_check(const TerrainGrid* terrain, const Position3D& a, const Position3D& b) {
    if (terrain == nullptr) return true;
    if (!terrain->contains(a.x_m, a.y_m) || !terrain->contains(b.x_m, b.y_m))
        throw std::domain_error("los_check: endpoint outside terrain raster");
    const double d2d = horizontal_distance_m(a, b);
    const int steps = std::max(1, static_cast<int>(std::ceil(d2d / (terrain->cell_size_m() / 2.0))));
    for (int i = 0; i <= steps; ++i) {
        const double t = static_cast<double>(i) / steps;
        const double x = a.x_m + t * (b.x_m - a.x_m);
        const double y = a.y_m + t * (b.y_m - a.y_m);
        const double z = a.z_m + t * (b.z_m - a.z_m);
        if (terrain->elevation_m(x, y) > z) return false;
    }
    return true;
}

}  // namespace skycell

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace mamimo {

/// Planar antenna coordinate in wavelengths.
struct Position {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(const Position& a, const Position& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

enum class ArrayMode { general, linear, planar, upa };

/// Axis-aligned rectangle [x_lo, x_hi] x [y_lo, y_hi].
struct Box {
    double x_lo = 0.0, x_hi = 0.0;
    double y_lo = 0.0, y_hi = 0.0;

    bool contains(const Position& p, double tol = 0.0) const {
        return p.x >= x_lo - tol && p.x <= x_hi + tol &&
               p.y >= y_lo - tol && p.y <= y_hi + tol;
    }
    Position clamp(const Position& p) const {
        return {std::clamp(p.x, x_lo, x_hi), std::clamp(p.y, y_lo, y_hi)};
    }
    double width() const { return x_hi - x_lo; }
    double height() const { return y_hi - y_lo; }
};

/// Feasible region for the antennas of one side of the link.
///
/// general: one shared box, all antennas move freely inside it subject to
///          pairwise minimum-distance constraints.
/// linear:  one horizontal segment per antenna, segments stacked with
///          vertical pitch D; x is the only free coordinate.
/// planar:  one box per antenna on a grid with gap D between boxes; both
///          coordinates move but pairs can never collide.
/// upa:     fixed grid, nothing moves.
struct Region {
    ArrayMode mode = ArrayMode::general;
    std::vector<Box> boxes;   // size 1 for general, size N otherwise

    const Box& box_for(std::size_t antenna) const {
        return boxes.size() == 1 ? boxes.front() : boxes.at(antenna);
    }
    bool contains(std::size_t antenna, const Position& p, double tol = 0.0) const {
        return box_for(antenna).contains(p, tol);
    }
    Position clamp(std::size_t antenna, const Position& p) const {
        return box_for(antenna).clamp(p);
    }
};

/// Grid shape used by planar / upa layouts: cols = ceil(sqrt(N)),
/// rows = however many are needed.  N=4 -> 2x2, N=6 -> 3x2.
inline std::pair<std::size_t, std::size_t> grid_shape(std::size_t n) {
    std::size_t cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
    if (cols == 0) cols = 1;
    std::size_t rows = (n + cols - 1) / cols;
    return {cols, rows};
}

/// Build the feasible region for `n` antennas.  `region_size` is the side
/// length X of each movable box and `min_distance` the pitch / gap D.  All
/// regions are centred on the origin.
Region make_region(ArrayMode mode, std::size_t n, double region_size, double min_distance);

/// Positions of one side of the link plus the region they live in.
struct AntennaLayout {
    std::vector<Position> positions;
    Region region;

    std::size_t size() const { return positions.size(); }

    /// Interleaved packing (x1, y1, x2, y2, ...) used by the solvers.
    Eigen::VectorXd packed() const;
    void set_packed(const Eigen::VectorXd& v);

    /// Smallest pairwise distance; +inf for fewer than two antennas.
    double min_pair_distance() const;
};

/// Default layout: antennas on a D-spaced grid centred in the region
/// (general mode), or at the centre of their private segment / box
/// (linear / planar), or on the fixed grid (upa).  Throws
/// std::invalid_argument when the grid cannot fit, e.g. 9 antennas with
/// D = 0.5 inside a 1x1 shared region.
AntennaLayout initialize_layout(const Region& region, std::size_t n, double min_distance);

/// Convenience: build the region via make_region, then place the default
/// layout inside it.
AntennaLayout initialize_layout(ArrayMode mode, std::size_t n, double region_size, double min_distance);

} // namespace mamimo

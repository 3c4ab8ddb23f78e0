#include "mamimo/geometry.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace mamimo {

Region make_region(ArrayMode mode, std::size_t n, double region_size, double min_distance) {
    if (n == 0) throw std::invalid_argument("make_region: need at least one antenna");
    if (region_size <= 0.0 && mode != ArrayMode::upa)
        throw std::invalid_argument("make_region: region_size must be positive");
    if (min_distance <= 0.0) throw std::invalid_argument("make_region: min_distance must be positive");

    // The UPA baseline is a fixed grid at pitch D: movement is disabled,
    // so the box size collapses to zero regardless of the configured X.
    const double X = mode == ArrayMode::upa ? 0.0 : region_size;
    const double D = min_distance;
    Region region;
    region.mode = mode;

    switch (mode) {
    case ArrayMode::general: {
        // Shared box sized like the bounding box of the planar grid, so the
        // general array searches at least the space the planar one has.
        auto [cols, rows] = grid_shape(n);
        const double w = static_cast<double>(cols) * X + static_cast<double>(cols - 1) * D;
        const double h = static_cast<double>(rows) * X + static_cast<double>(rows - 1) * D;
        region.boxes.push_back({-w / 2.0, w / 2.0, -h / 2.0, h / 2.0});
        break;
    }
    case ArrayMode::linear: {
        // One horizontal segment per antenna, stacked at pitch D and
        // centred vertically around zero.
        for (std::size_t i = 0; i < n; ++i) {
            const double y = (static_cast<double>(i) - static_cast<double>(n - 1) / 2.0) * D;
            region.boxes.push_back({-X / 2.0, X / 2.0, y, y});
        }
        break;
    }
    case ArrayMode::planar:
    case ArrayMode::upa: {
        // Grid of private boxes with gap D between neighbouring boxes.
        // upa degenerates each box to its centre point.
        auto [cols, rows] = grid_shape(n);
        const double w = static_cast<double>(cols) * X + static_cast<double>(cols - 1) * D;
        const double h = static_cast<double>(rows) * X + static_cast<double>(rows - 1) * D;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t c = i % cols;
            const std::size_t r = i / cols;
            const double x_lo = -w / 2.0 + static_cast<double>(c) * (X + D);
            const double y_lo = -h / 2.0 + static_cast<double>(r) * (X + D);
            Box b{x_lo, x_lo + X, y_lo, y_lo + X};
            if (mode == ArrayMode::upa) {
                const double cx = 0.5 * (b.x_lo + b.x_hi);
                const double cy = 0.5 * (b.y_lo + b.y_hi);
                b = {cx, cx, cy, cy};
            }
            region.boxes.push_back(b);
        }
        break;
    }
    }
    return region;
}

Eigen::VectorXd AntennaLayout::packed() const {
    Eigen::VectorXd v(2 * positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) {
        v(2 * i) = positions[i].x;
        v(2 * i + 1) = positions[i].y;
    }
    return v;
}

void AntennaLayout::set_packed(const Eigen::VectorXd& v) {
    if (v.size() != static_cast<Eigen::Index>(2 * positions.size()))
        throw std::invalid_argument("set_packed: vector length does not match layout");
    for (std::size_t i = 0; i < positions.size(); ++i) {
        positions[i].x = v(2 * i);
        positions[i].y = v(2 * i + 1);
    }
}

double AntennaLayout::min_pair_distance() const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < positions.size(); ++i)
        for (std::size_t j = i + 1; j < positions.size(); ++j)
            best = std::min(best, distance(positions[i], positions[j]));
    return best;
}

AntennaLayout initialize_layout(const Region& region, std::size_t n, double min_distance) {
    AntennaLayout layout;
    layout.region = region;
    layout.positions.resize(n);
    const ArrayMode mode = region.mode;

    if (mode == ArrayMode::general) {
        // D-spaced grid centred in the shared box.  The grid must fit with
        // room to spare on every axis, otherwise the pairwise constraints
        // leave no feasible interior to optimize over.
        auto [cols, rows] = grid_shape(n);
        if (layout.region.boxes.size() != 1)
            throw std::invalid_argument("initialize_layout: general region must be a single box");
        const Box& box = layout.region.boxes.front();
        const double span_x = static_cast<double>(cols - 1) * min_distance;
        const double span_y = static_cast<double>(rows - 1) * min_distance;
        // The grid must fit strictly: an exact fit (e.g. 3x3 at spacing 0.5
        // in a 1x1 box) leaves no interior for the distance constraints.
        if (n > 1 && (span_x >= box.width() - 1e-12 || span_y >= box.height() - 1e-12)) {
            throw std::invalid_argument(
                "initialize_layout: cannot place " + std::to_string(n) +
                " antennas at spacing " + std::to_string(min_distance) +
                " inside the shared region");
        }
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t c = i % cols;
            const std::size_t r = i / cols;
            layout.positions[i] = {static_cast<double>(c) * min_distance - span_x / 2.0,
                                   static_cast<double>(r) * min_distance - span_y / 2.0};
        }
    } else {
        // Private segments / boxes: start at the centre of each.
        if (layout.region.boxes.size() != n)
            throw std::invalid_argument("initialize_layout: region box count does not match antenna count");
        for (std::size_t i = 0; i < n; ++i) {
            const Box& b = layout.region.boxes[i];
            layout.positions[i] = {0.5 * (b.x_lo + b.x_hi), 0.5 * (b.y_lo + b.y_hi)};
        }
    }
    return layout;
}

AntennaLayout initialize_layout(ArrayMode mode, std::size_t n, double region_size, double min_distance) {
    return initialize_layout(make_region(mode, n, region_size, min_distance), n, min_distance);
}

} // namespace mamimo

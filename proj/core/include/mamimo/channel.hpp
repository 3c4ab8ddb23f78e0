#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "mamimo/geometry.hpp"

namespace mamimo {

using Complex = std::complex<double>;

/// One propagation path: complex gain plus departure/arrival angle pairs.
/// Angles are elevation theta and azimuth phi, both in [0, pi].
struct PathComponent {
    Complex gain{0.0, 0.0};
    double theta_t = 0.0, phi_t = 0.0;   // AoD
    double theta_r = 0.0, phi_r = 0.0;   // AoA
};

/// A sampled spreading function: one deterministic LOS spike plus the
/// diffuse cluster paths.  The LOS gain is c0 = sqrt(K/(K+1)); the
/// scattered gains are zero-mean complex Gaussian with total variance
/// 1/(K+1) split equally across paths.
struct PathSet {
    PathComponent los;
    std::vector<PathComponent> scattered;

    std::size_t total_paths() const { return 1 + scattered.size(); }
};

/// Angular cluster: center AoD/AoA plus a uniform spread (radians).
struct ClusterSpec {
    double theta_t = 0.0, phi_t = 0.0;
    double theta_r = 0.0, phi_r = 0.0;
    double spread = 0.1;
};

struct ScatteringConfig {
    double rician_k = 1.0;                  // K >= 0; K=0 is Rayleigh
    double los_theta_t = 0.0, los_phi_t = 0.0;
    double los_theta_r = 0.0, los_phi_r = 0.0;
    std::vector<ClusterSpec> clusters;
    std::size_t paths_per_cluster = 10;

    std::size_t scattered_path_count() const { return clusters.size() * paths_per_cluster; }
    void validate() const;                  // throws std::invalid_argument

    /// 4 clusters at distinct AoD/AoA pairs, spread 0.1 rad, 10 paths each,
    /// LOS at pi/4 on every angle.
    static ScatteringConfig defaults();
};

/// Deterministic cluster geometry: `count` clusters with distinct AoD/AoA
/// centers spread over the angle space (low-discrepancy placement inside
/// [0.15 pi, 0.85 pi]), all with the same angular spread.
std::vector<ClusterSpec> default_clusters(std::size_t count, double spread);

/// H together with the paths that generated it; the paths are kept so the
/// position gradient can be evaluated for the same realization.
struct ChannelRealization {
    Eigen::MatrixXcd H;        // M x N
    PathSet paths;
};

/// Signal-propagation distance difference (in wavelengths) of an antenna
/// at p relative to the reference origin, for direction (theta, phi):
/// x*sin(theta)*cos(phi) + y*cos(theta).
inline double propagation_delta(const Position& p, double theta, double phi) {
    return p.x * std::sin(theta) * std::cos(phi) + p.y * std::cos(theta);
}

/// Steering vector: k-th entry (1/sqrt(L)) * exp(-j*2*pi*delta_k).
/// Throws on an empty layout.
Eigen::VectorXcd steering_vector(const std::vector<Position>& positions, double theta, double phi);

/// Draw one spreading-function sample G: LOS spike plus cluster paths with
/// uniformly perturbed angles (clamped to [0, pi]) and i.i.d. complex
/// Gaussian gains.  Per path the draw order is fixed:
/// theta_t, phi_t, theta_r, phi_r, Re(gain), Im(gain).
PathSet sample_spreading(const ScatteringConfig& cfg, std::mt19937_64& rng);

/// H = c0 * a_R(los) a_T(los)^H + sum_p gain_p * a_R(p) a_T(p)^H.
ChannelRealization synthesize_channel(const PathSet& paths,
                                      const std::vector<Position>& t,
                                      const std::vector<Position>& r);

/// Frobenius norm squared of the deterministic (LOS) component alone;
/// equals K/(K+1) for every layout.
double los_power(const PathSet& paths);

} // namespace mamimo

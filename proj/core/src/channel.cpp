#include "mamimo/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mamimo {

namespace {
constexpr double kPi = std::numbers::pi;

double clamp_angle(double a) { return std::clamp(a, 0.0, kPi); }
} // namespace

void ScatteringConfig::validate() const {
    if (rician_k < 0.0) throw std::invalid_argument("ScatteringConfig: rician_k must be >= 0");
    if (clusters.empty()) throw std::invalid_argument("ScatteringConfig: need at least one cluster");
    if (paths_per_cluster == 0) throw std::invalid_argument("ScatteringConfig: paths_per_cluster must be >= 1");
    auto check_angle = [](double a, const char* what) {
        if (!(a >= 0.0 && a <= kPi))
            throw std::invalid_argument(std::string("ScatteringConfig: ") + what + " outside [0, pi]");
    };
    check_angle(los_theta_t, "los_theta_t");
    check_angle(los_phi_t, "los_phi_t");
    check_angle(los_theta_r, "los_theta_r");
    check_angle(los_phi_r, "los_phi_r");
    for (const auto& c : clusters) {
        check_angle(c.theta_t, "cluster theta_t");
        check_angle(c.phi_t, "cluster phi_t");
        check_angle(c.theta_r, "cluster theta_r");
        check_angle(c.phi_r, "cluster phi_r");
        if (c.spread < 0.0) throw std::invalid_argument("ScatteringConfig: cluster spread must be >= 0");
    }
}

std::vector<ClusterSpec> default_clusters(std::size_t count, double spread) {
    if (count == 0) throw std::invalid_argument("default_clusters: count must be >= 1");
    if (spread < 0.0) throw std::invalid_argument("default_clusters: spread must be >= 0");
    // Golden-ratio sequence keeps the centers distinct and well separated
    // for any count; the 0.15 pi margin keeps spreads <= 0.4 rad clear of
    // the [0, pi] clamp.
    constexpr double golden = 0.6180339887498949;
    auto angle = [](double u) { return kPi * (0.15 + 0.7 * (u - std::floor(u))); };
    std::vector<ClusterSpec> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double b = (static_cast<double>(i) + 1.0) * golden;
        out.push_back({angle(b), angle(b + 0.25), angle(b + 0.5), angle(b + 0.75), spread});
    }
    return out;
}

ScatteringConfig ScatteringConfig::defaults() {
    ScatteringConfig cfg;
    cfg.rician_k = 1.0;
    cfg.los_theta_t = kPi / 4.0;
    cfg.los_phi_t = kPi / 4.0;
    cfg.los_theta_r = kPi / 4.0;
    cfg.los_phi_r = kPi / 4.0;
    cfg.paths_per_cluster = 10;
    cfg.clusters = default_clusters(4, 0.1);
    return cfg;
}

Eigen::VectorXcd steering_vector(const std::vector<Position>& positions, double theta, double phi) {
    if (positions.empty()) throw std::invalid_argument("steering_vector: empty layout");
    const double scale = 1.0 / std::sqrt(static_cast<double>(positions.size()));
    Eigen::VectorXcd a(positions.size());
    for (std::size_t k = 0; k < positions.size(); ++k) {
        const double rho = propagation_delta(positions[k], theta, phi);
        a(static_cast<Eigen::Index>(k)) = std::polar(scale, -2.0 * kPi * rho);
    }
    return a;
}

PathSet sample_spreading(const ScatteringConfig& cfg, std::mt19937_64& rng) {
    cfg.validate();
    const double K = cfg.rician_k;

    PathSet ps;
    ps.los.gain = Complex(std::sqrt(K / (K + 1.0)), 0.0);
    ps.los.theta_t = cfg.los_theta_t;
    ps.los.phi_t = cfg.los_phi_t;
    ps.los.theta_r = cfg.los_theta_r;
    ps.los.phi_r = cfg.los_phi_r;

    const std::size_t total = cfg.scattered_path_count();
    // Equal split of the scattered power 1/(K+1) across paths; complex
    // Gaussian means each of Re/Im carries half the per-path variance.
    const double per_path_var = 1.0 / ((K + 1.0) * static_cast<double>(total));
    const double comp_std = std::sqrt(per_path_var / 2.0);

    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    ps.scattered.reserve(total);
    for (const auto& cluster : cfg.clusters) {
        for (std::size_t p = 0; p < cfg.paths_per_cluster; ++p) {
            PathComponent pc;
            pc.theta_t = clamp_angle(cluster.theta_t + cluster.spread * unit(rng));
            pc.phi_t = clamp_angle(cluster.phi_t + cluster.spread * unit(rng));
            pc.theta_r = clamp_angle(cluster.theta_r + cluster.spread * unit(rng));
            pc.phi_r = clamp_angle(cluster.phi_r + cluster.spread * unit(rng));
            const double re = comp_std * gauss(rng);
            const double im = comp_std * gauss(rng);
            pc.gain = Complex(re, im);
            ps.scattered.push_back(pc);
        }
    }
    return ps;
}

ChannelRealization synthesize_channel(const PathSet& paths,
                                      const std::vector<Position>& t,
                                      const std::vector<Position>& r) {
    if (t.empty() || r.empty())
        throw std::invalid_argument("synthesize_channel: need at least one antenna per side");

    const auto M = static_cast<Eigen::Index>(r.size());
    const auto N = static_cast<Eigen::Index>(t.size());

    ChannelRealization out;
    out.paths = paths;
    out.H = Eigen::MatrixXcd::Zero(M, N);

    auto add_path = [&](const PathComponent& pc) {
        const Eigen::VectorXcd a_r = steering_vector(r, pc.theta_r, pc.phi_r);
        const Eigen::VectorXcd a_t = steering_vector(t, pc.theta_t, pc.phi_t);
        out.H.noalias() += pc.gain * (a_r * a_t.adjoint());
    };
    add_path(paths.los);
    for (const auto& pc : paths.scattered) add_path(pc);
    return out;
}

double los_power(const PathSet& paths) {
    // c0 * a_R a_T^H with unit-norm steering vectors has Frobenius norm
    // exactly |c0|, independent of the layout.
    return std::norm(paths.los.gain);
}

} // namespace mamimo

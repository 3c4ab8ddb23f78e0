#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "mamimo/channel.hpp"
#include "mamimo/rng.hpp"

using namespace mamimo;

namespace {
constexpr double pi = std::numbers::pi;

std::vector<Position> random_layout(std::size_t n, std::mt19937_64& rng, double extent = 1.0) {
    std::uniform_real_distribution<double> u(-extent, extent);
    std::vector<Position> v(n);
    for (auto& p : v) p = {u(rng), u(rng)};
    return v;
}
} // namespace

TEST_CASE("propagation delta matches the geometric formula") {
    CHECK(propagation_delta({0.0, 0.0}, pi / 3, pi / 4) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(propagation_delta({0.5, 0.0}, pi / 2, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(propagation_delta({0.0, 0.5}, 0.0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
    // generic point, both terms alive
    const double expect = 0.3 * std::sin(1.1) * std::cos(0.7) + (-0.2) * std::cos(1.1);
    CHECK(propagation_delta({0.3, -0.2}, 1.1, 0.7) == doctest::Approx(expect).epsilon(1e-15));
}

TEST_CASE("steering vector entries carry unit magnitude over sqrt(L)") {
    SUBCASE("two colocated antennas give the constant vector") {
        const auto a = steering_vector({{0, 0}, {0, 0}}, 1.0, 0.5);
        REQUIRE(a.size() == 2);
        CHECK(std::abs(a(0) - Complex(1.0 / std::sqrt(2.0), 0.0)) < 1e-15);
        CHECK(std::abs(a(1) - Complex(1.0 / std::sqrt(2.0), 0.0)) < 1e-15);
    }
    SUBCASE("half-wavelength offset at broadside flips the sign") {
        const auto a = steering_vector({{0.5, 0.0}}, pi / 2, 0.0);
        CHECK(std::abs(a(0) - Complex(-1.0, 0.0)) < 1e-12);
    }
    SUBCASE("every entry of a random layout has magnitude 1/sqrt(L)") {
        auto rng = make_rng(3, 0);
        const auto pos = random_layout(4, rng);
        const auto a = steering_vector(pos, 0.9, 2.2);
        for (Eigen::Index k = 0; k < a.size(); ++k)
            CHECK(std::abs(a(k)) == doctest::Approx(0.5).epsilon(1e-14));
    }
    SUBCASE("empty layout is rejected") {
        CHECK_THROWS_AS(steering_vector({}, 0.0, 0.0), std::invalid_argument);
    }
}

TEST_CASE("sample_spreading produces one LOS spike plus the cluster paths") {
    auto cfg = ScatteringConfig::defaults();
    auto rng = make_rng(11, 0);
    const PathSet ps = sample_spreading(cfg, rng);

    CHECK(ps.scattered.size() == 40);   // 4 clusters x 10 paths
    CHECK(ps.total_paths() == 41);
    CHECK(ps.los.gain.real() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
    CHECK(ps.los.gain.imag() == 0.0);

    for (const auto& pc : ps.scattered) {
        CHECK(pc.theta_t >= 0.0);
        CHECK(pc.theta_t <= pi);
        CHECK(pc.phi_r >= 0.0);
        CHECK(pc.phi_r <= pi);
    }
}

TEST_CASE("scattered angles stay within the cluster spread") {
    auto cfg = ScatteringConfig::defaults();
    auto rng = make_rng(5, 0);
    const PathSet ps = sample_spreading(cfg, rng);
    for (std::size_t c = 0; c < cfg.clusters.size(); ++c) {
        for (std::size_t p = 0; p < cfg.paths_per_cluster; ++p) {
            const auto& pc = ps.scattered[c * cfg.paths_per_cluster + p];
            CHECK(std::abs(pc.theta_t - cfg.clusters[c].theta_t) <= cfg.clusters[c].spread + 1e-15);
            CHECK(std::abs(pc.phi_t - cfg.clusters[c].phi_t) <= cfg.clusters[c].spread + 1e-15);
            CHECK(std::abs(pc.theta_r - cfg.clusters[c].theta_r) <= cfg.clusters[c].spread + 1e-15);
            CHECK(std::abs(pc.phi_r - cfg.clusters[c].phi_r) <= cfg.clusters[c].spread + 1e-15);
        }
    }
}

TEST_CASE("huge Rician factor starves the scattered paths") {
    auto cfg = ScatteringConfig::defaults();
    cfg.rician_k = 1e6;
    auto rng = make_rng(17, 0);

    double mean_sq = 0.0;
    std::size_t count = 0;
    for (int draw = 0; draw < 100; ++draw) {
        const PathSet ps = sample_spreading(cfg, rng);
        for (const auto& pc : ps.scattered) {
            mean_sq += std::norm(pc.gain);
            ++count;
        }
    }
    mean_sq /= static_cast<double>(count);
    // per-path variance 1/((K+1) * 40) <= 1e-6 / 40; allow Monte-Carlo slack
    CHECK(mean_sq < 3.0 * 1e-6 / 40.0);
}

TEST_CASE("scattered gains are zero-mean: Monte-Carlo oracle") {
    auto cfg = ScatteringConfig::defaults();
    const double per_path_std = std::sqrt(1.0 / ((cfg.rician_k + 1.0) * 40.0));

    Complex sum{0.0, 0.0};
    std::size_t count = 0;
    for (std::uint64_t draw = 0; draw < 10000; ++draw) {
        auto rng = make_rng(23, 1, draw);
        const PathSet ps = sample_spreading(cfg, rng);
        for (const auto& pc : ps.scattered) {
            sum += pc.gain;
            ++count;
        }
    }
    const Complex mean = sum / static_cast<double>(count);
    CHECK(std::abs(mean) < 3.0 * per_path_std / 100.0);
}

TEST_CASE("synthesize_channel assembles the path outer products") {
    SUBCASE("single antennas at origins, LOS only") {
        ScatteringConfig cfg = ScatteringConfig::defaults();
        cfg.rician_k = 1e6;
        auto rng = make_rng(29, 0);
        PathSet ps = sample_spreading(cfg, rng);
        ps.scattered.clear();   // LOS component alone
        const auto ch = synthesize_channel(ps, {{0, 0}}, {{0, 0}});
        REQUIRE(ch.H.rows() == 1);
        REQUIRE(ch.H.cols() == 1);
        // steering scalars are exactly 1 at the origin, so H = c0 -> 1
        CHECK(std::abs(ch.H(0, 0) - Complex(1.0, 0.0)) < 1e-3);
    }
    SUBCASE("LOS Frobenius power is K/(K+1) for any layout") {
        for (double K : {0.0, 1.0, 10.0, 123.4}) {
            ScatteringConfig cfg = ScatteringConfig::defaults();
            cfg.rician_k = K;
            auto rng = make_rng(31, 0);
            PathSet ps = sample_spreading(cfg, rng);
            ps.scattered.clear();
            const auto t = random_layout(5, rng);
            const auto r = random_layout(3, rng);
            const auto ch = synthesize_channel(ps, t, r);
            CHECK(ch.H.squaredNorm() == doctest::Approx(K / (K + 1.0)).epsilon(1e-13));
            CHECK(los_power(ps) == doctest::Approx(K / (K + 1.0)).epsilon(1e-13));
        }
    }
    SUBCASE("scattered Frobenius power averages to 1/(K+1)") {
        ScatteringConfig cfg = ScatteringConfig::defaults();
        cfg.rician_k = 1.0;
        auto rng_layout = make_rng(37, 0);
        const auto t = random_layout(4, rng_layout);
        const auto r = random_layout(4, rng_layout);

        double acc = 0.0;
        const int draws = 2000;
        for (std::uint64_t i = 0; i < draws; ++i) {
            auto rng = make_rng(37, 1, i);
            PathSet ps = sample_spreading(cfg, rng);
            ps.los.gain = 0.0;   // keep the diffuse part only
            acc += synthesize_channel(ps, t, r).H.squaredNorm();
        }
        acc /= draws;
        CHECK(acc == doctest::Approx(0.5).epsilon(0.05));
    }
    SUBCASE("empty layouts are rejected") {
        ScatteringConfig cfg = ScatteringConfig::defaults();
        auto rng = make_rng(41, 0);
        const PathSet ps = sample_spreading(cfg, rng);
        CHECK_THROWS_AS(synthesize_channel(ps, {}, {{0, 0}}), std::invalid_argument);
        CHECK_THROWS_AS(synthesize_channel(ps, {{0, 0}}, {}), std::invalid_argument);
    }
}

TEST_CASE("translating the transmit array leaves the LOS singular values alone") {
    ScatteringConfig cfg = ScatteringConfig::defaults();
    cfg.rician_k = 2.0;
    auto rng = make_rng(43, 0);
    PathSet ps = sample_spreading(cfg, rng);
    ps.scattered.clear();

    auto t = random_layout(4, rng);
    const auto r = random_layout(4, rng);
    const Eigen::VectorXd sv0 =
        synthesize_channel(ps, t, r).H.jacobiSvd().singularValues();

    for (auto& p : t) {
        p.x += 0.37;
        p.y -= 1.21;
    }
    const Eigen::VectorXd sv1 =
        synthesize_channel(ps, t, r).H.jacobiSvd().singularValues();
    CHECK((sv0 - sv1).norm() < 1e-12);
}

TEST_CASE("scattering config validation rejects bad inputs") {
    auto cfg = ScatteringConfig::defaults();
    SUBCASE("negative K") {
        cfg.rician_k = -0.5;
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    }
    SUBCASE("no clusters") {
        cfg.clusters.clear();
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    }
    SUBCASE("zero paths per cluster") {
        cfg.paths_per_cluster = 0;
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    }
    SUBCASE("LOS angle outside [0, pi]") {
        cfg.los_theta_t = 3.5;
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    }
    SUBCASE("negative spread") {
        cfg.clusters[0].spread = -0.1;
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    }
}

TEST_CASE("default cluster geometry is distinct and respects the count") {
    const auto clusters = default_clusters(7, 0.05);
    REQUIRE(clusters.size() == 7);
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        CHECK(clusters[i].spread == 0.05);
        CHECK(clusters[i].theta_t > 0.1);
        CHECK(clusters[i].theta_t < pi - 0.1);
        for (std::size_t j = i + 1; j < clusters.size(); ++j) {
            const double sep = std::abs(clusters[i].theta_t - clusters[j].theta_t) +
                               std::abs(clusters[i].phi_t - clusters[j].phi_t);
            CHECK(sep > 1e-3);   // centers must not coincide
        }
    }
    CHECK_THROWS_AS(default_clusters(0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(default_clusters(3, -1.0), std::invalid_argument);
}

TEST_CASE("identical generator state reproduces the draw") {
    auto cfg = ScatteringConfig::defaults();
    auto rng_a = make_rng(99, 4, 7);
    auto rng_b = make_rng(99, 4, 7);
    const PathSet a = sample_spreading(cfg, rng_a);
    const PathSet b = sample_spreading(cfg, rng_b);
    REQUIRE(a.scattered.size() == b.scattered.size());
    for (std::size_t i = 0; i < a.scattered.size(); ++i) {
        CHECK(a.scattered[i].gain == b.scattered[i].gain);
        CHECK(a.scattered[i].theta_t == b.scattered[i].theta_t);
        CHECK(a.scattered[i].phi_r == b.scattered[i].phi_r);
    }
}

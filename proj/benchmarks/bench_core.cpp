// Microbenchmarks for the per-iteration hot path: channel synthesis, rate
// evaluation with gradients, the closed-form covariance update, and the two
// position subproblem solvers.  Run ./mamimo_bench --benchmark_filter=...

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "mamimo/channel.hpp"
#include "mamimo/rate.hpp"
#include "mamimo/rng.hpp"
#include "mamimo/solvers.hpp"
#include "mamimo/surrogate.hpp"

using namespace mamimo;

namespace {

struct Fixture {
    std::vector<Position> t, r;
    PathSet paths;
    Eigen::MatrixXcd Q;
    double sigma2 = 1.0;

    explicit Fixture(std::size_t n) {
        auto rng = make_rng(7, 0);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        t.resize(n);
        r.resize(n);
        for (auto& p : t) p = {u(rng), u(rng)};
        for (auto& p : r) p = {u(rng), u(rng)};
        paths = sample_spreading(ScatteringConfig::defaults(), rng);
        Q = Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(n),
                                       static_cast<Eigen::Index>(n)) *
            (10.0 / static_cast<double>(n));
    }
};

void BM_synthesize_channel(benchmark::State& state) {
    Fixture fx(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto ch = synthesize_channel(fx.paths, fx.t, fx.r);
        benchmark::DoNotOptimize(ch.H);
    }
}
BENCHMARK(BM_synthesize_channel)->Arg(2)->Arg(4)->Arg(6);

void BM_rate_with_gradients(benchmark::State& state) {
    Fixture fx(static_cast<std::size_t>(state.range(0)));
    const ChannelRealization ch = synthesize_channel(fx.paths, fx.t, fx.r);
    for (auto _ : state) {
        auto sample = evaluate_sample(ch, fx.t, fx.r, fx.Q, fx.sigma2);
        benchmark::DoNotOptimize(sample.value);
    }
}
BENCHMARK(BM_rate_with_gradients)->Arg(2)->Arg(4)->Arg(6);

void BM_solve_covariance(benchmark::State& state) {
    const Eigen::Index n = state.range(0);
    auto rng = make_rng(7, 1);
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::MatrixXcd A(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) A(i, j) = std::complex<double>(g(rng), g(rng));
    const Eigen::MatrixXcd B = ((A + A.adjoint()) / 2.0).eval();
    for (auto _ : state) {
        auto cov = solve_covariance(-1.0, B, 10.0);
        benchmark::DoNotOptimize(cov.Q);
    }
}
BENCHMARK(BM_solve_covariance)->Arg(2)->Arg(4)->Arg(6);

QuadraticSurrogate position_surrogate(std::size_t n) {
    QuadraticSurrogate surr;
    surr.a = -1.0;
    surr.b = Eigen::VectorXd(static_cast<Eigen::Index>(2 * n));
    auto rng = make_rng(7, 2);
    std::normal_distribution<double> g(0.0, 1.0);
    for (Eigen::Index i = 0; i < surr.b.size(); ++i) surr.b(i) = g(rng);
    return surr;
}

void BM_solve_positions_boxed(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const QuadraticSurrogate surr = position_surrogate(n);
    const Region region = make_region(ArrayMode::planar, n, 1.0, 0.5);
    for (auto _ : state) {
        auto x = solve_positions_boxed(surr, region);
        benchmark::DoNotOptimize(x);
    }
}
BENCHMARK(BM_solve_positions_boxed)->Arg(2)->Arg(4)->Arg(6);

void BM_solve_positions_general(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const double D = 0.5;
    const QuadraticSurrogate surr = position_surrogate(n);
    const Region region = make_region(ArrayMode::general, n, 1.0, D);

    std::vector<Position> anchors = initialize_layout(ArrayMode::general, n, 1.0, D).positions;
    for (auto& p : anchors) {
        p.x *= 1.3;
        p.y *= 1.3;
    }
    const auto cons = make_constraint_surrogates(anchors, -1.0);
    Eigen::VectorXd start(static_cast<Eigen::Index>(2 * n));
    for (std::size_t i = 0; i < n; ++i) {
        start(static_cast<Eigen::Index>(2 * i)) = anchors[i].x;
        start(static_cast<Eigen::Index>(2 * i + 1)) = anchors[i].y;
    }
    const BarrierSolverConfig cfg;
    for (auto _ : state) {
        auto x = solve_positions_general(surr, cons, region, D, cfg, start);
        benchmark::DoNotOptimize(x);
    }
}
BENCHMARK(BM_solve_positions_general)->Arg(2)->Arg(4)->Arg(6);

} // namespace

BENCHMARK_MAIN();

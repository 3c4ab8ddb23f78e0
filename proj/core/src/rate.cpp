#include "mamimo/rate.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mamimo {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kLn2 = std::numbers::ln2;

void require_hermitian(const Eigen::MatrixXcd& Q, double tol) {
    if (Q.rows() != Q.cols())
        throw std::invalid_argument("covariance must be square");
    const double scale = std::max(1.0, Q.norm());
    if ((Q - Q.adjoint()).norm() > tol * scale)
        throw std::invalid_argument("covariance must be Hermitian");
}

/// I + H Q H^H / sigma2, guaranteed Hermitian in exact arithmetic; the
/// explicit symmetrization keeps the Cholesky below well conditioned.
Eigen::MatrixXcd whitened_gram(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& Q, double sigma2) {
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(H.rows(), H.rows());
    A.noalias() += H * Q * H.adjoint() / sigma2;
    return 0.5 * (A + A.adjoint().eval());
}
} // namespace

void CovarianceMatrix::validate(double tol) const {
    require_hermitian(Q, tol);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Q, Eigen::EigenvaluesOnly);
    const double scale = std::max(1.0, Q.norm());
    if (es.eigenvalues().minCoeff() < -tol * scale)
        throw std::invalid_argument("covariance must be positive semidefinite");
    if (Q.trace().real() > power + tol)
        throw std::invalid_argument("covariance trace exceeds the power budget");
}

double achievable_rate(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& Q, double sigma2) {
    if (sigma2 <= 0.0) throw std::invalid_argument("achievable_rate: sigma2 must be positive");
    require_hermitian(Q, 1e-9);
    if (H.cols() != Q.rows())
        throw std::invalid_argument("achievable_rate: H and Q dimensions do not match");

    const Eigen::MatrixXcd A = whitened_gram(H, Q, sigma2);
    Eigen::LLT<Eigen::MatrixXcd> llt(A);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("achievable_rate: covariance is indefinite");

    double logdet = 0.0;
    const auto& L = llt.matrixLLT();
    for (Eigen::Index i = 0; i < L.rows(); ++i)
        logdet += 2.0 * std::log(L(i, i).real());
    // A >= I in the PSD order, so the true value is nonnegative; clip the
    // last-bit rounding noise.
    return std::max(0.0, logdet / kLn2);
}

Eigen::MatrixXcd grad_rate_covariance(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& Q, double sigma2) {
    if (sigma2 <= 0.0) throw std::invalid_argument("grad_rate_covariance: sigma2 must be positive");
    const Eigen::MatrixXcd A = whitened_gram(H, Q, sigma2);
    Eigen::LLT<Eigen::MatrixXcd> llt(A);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("grad_rate_covariance: covariance is indefinite");
    const Eigen::MatrixXcd WH = llt.solve(H);          // W H with W = A^{-1}
    Eigen::MatrixXcd G = H.adjoint() * WH / (sigma2 * kLn2);
    return 0.5 * (G + G.adjoint().eval());
}

namespace {

/// Shared implementation: given W = A^{-1} (as an LLT), accumulate the
/// position gradients path by path.  Writing C = Q H^H W / (sigma2 ln2),
/// the derivative of the rate with respect to a transmit coordinate is
///   d s / d x_{t,n} = -4 pi Im sum_p g_p s_x(p) (C a_R(p))_n conj(a_T(p))_n
/// with s_x = sin(theta_T) cos(phi_T) (and cos(theta_T) for y); receive
/// coordinates get the mirrored expression with flipped sign.
void accumulate_position_gradients(const ChannelRealization& realization,
                                   const std::vector<Position>& t,
                                   const std::vector<Position>& r,
                                   const Eigen::MatrixXcd& C,
                                   Eigen::VectorXd& grad_t, Eigen::VectorXd& grad_r) {
    const auto N = static_cast<Eigen::Index>(t.size());
    const auto M = static_cast<Eigen::Index>(r.size());
    grad_t = Eigen::VectorXd::Zero(2 * N);
    grad_r = Eigen::VectorXd::Zero(2 * M);

    auto add_path = [&](const PathComponent& pc) {
        const Eigen::VectorXcd a_t = steering_vector(t, pc.theta_t, pc.phi_t);
        const Eigen::VectorXcd a_r = steering_vector(r, pc.theta_r, pc.phi_r);
        const Eigen::VectorXcd Ca_r = C * a_r;                 // N-vector
        const Eigen::VectorXcd atH_C = C.adjoint() * a_t;      // M-vector: conj of a_t^H C

        const double sx_t = std::sin(pc.theta_t) * std::cos(pc.phi_t);
        const double sy_t = std::cos(pc.theta_t);
        const double sx_r = std::sin(pc.theta_r) * std::cos(pc.phi_r);
        const double sy_r = std::cos(pc.theta_r);

        for (Eigen::Index n = 0; n < N; ++n) {
            const Complex z = pc.gain * Ca_r(n) * std::conj(a_t(n));
            grad_t(2 * n) += -4.0 * kPi * sx_t * z.imag();
            grad_t(2 * n + 1) += -4.0 * kPi * sy_t * z.imag();
        }
        for (Eigen::Index m = 0; m < M; ++m) {
            // (a_t^H C)_m = conj(atH_C(m))
            const Complex z = pc.gain * a_r(m) * std::conj(atH_C(m));
            grad_r(2 * m) += 4.0 * kPi * sx_r * z.imag();
            grad_r(2 * m + 1) += 4.0 * kPi * sy_r * z.imag();
        }
    };
    add_path(realization.paths.los);
    for (const auto& pc : realization.paths.scattered) add_path(pc);
}

} // namespace

void grad_rate_positions(const ChannelRealization& realization,
                         const std::vector<Position>& t,
                         const std::vector<Position>& r,
                         const Eigen::MatrixXcd& Q, double sigma2,
                         Eigen::VectorXd& grad_t, Eigen::VectorXd& grad_r) {
    if (sigma2 <= 0.0) throw std::invalid_argument("grad_rate_positions: sigma2 must be positive");
    if (realization.H.rows() != static_cast<Eigen::Index>(r.size()) ||
        realization.H.cols() != static_cast<Eigen::Index>(t.size()))
        throw std::invalid_argument("grad_rate_positions: layout does not match the realization");

    const Eigen::MatrixXcd A = whitened_gram(realization.H, Q, sigma2);
    Eigen::LLT<Eigen::MatrixXcd> llt(A);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("grad_rate_positions: covariance is indefinite");
    const Eigen::MatrixXcd W_H = llt.solve(realization.H);     // W H
    const Eigen::MatrixXcd C = Q * W_H.adjoint() / (sigma2 * kLn2);  // Q H^H W
    accumulate_position_gradients(realization, t, r, C, grad_t, grad_r);
}

RateSample evaluate_sample(const ChannelRealization& realization,
                           const std::vector<Position>& t,
                           const std::vector<Position>& r,
                           const Eigen::MatrixXcd& Q, double sigma2) {
    if (sigma2 <= 0.0) throw std::invalid_argument("evaluate_sample: sigma2 must be positive");
    const Eigen::MatrixXcd& H = realization.H;

    const Eigen::MatrixXcd A = whitened_gram(H, Q, sigma2);
    Eigen::LLT<Eigen::MatrixXcd> llt(A);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("evaluate_sample: covariance is indefinite");

    RateSample sample;
    double logdet = 0.0;
    const auto& L = llt.matrixLLT();
    for (Eigen::Index i = 0; i < L.rows(); ++i)
        logdet += 2.0 * std::log(L(i, i).real());
    sample.value = std::max(0.0, logdet / kLn2);

    const Eigen::MatrixXcd W_H = llt.solve(H);
    Eigen::MatrixXcd gQ = H.adjoint() * W_H / (sigma2 * kLn2);
    sample.grad_Q = 0.5 * (gQ + gQ.adjoint().eval());

    const Eigen::MatrixXcd C = Q * W_H.adjoint() / (sigma2 * kLn2);
    accumulate_position_gradients(realization, t, r, C, sample.grad_t, sample.grad_r);
    return sample;
}

double average_rate(const std::vector<Position>& t,
                    const std::vector<Position>& r,
                    const Eigen::MatrixXcd& Q,
                    const ScatteringConfig& cfg,
                    std::size_t samples, double sigma2,
                    std::uint64_t seed, std::uint64_t stream) {
    return estimate_rate(t, r, Q, cfg, samples, sigma2, seed, stream).mean;
}

RateEstimate estimate_rate(const std::vector<Position>& t,
                           const std::vector<Position>& r,
                           const Eigen::MatrixXcd& Q,
                           const ScatteringConfig& cfg,
                           std::size_t samples, double sigma2,
                           std::uint64_t seed, std::uint64_t stream) {
    if (samples == 0) throw std::invalid_argument("estimate_rate: need at least one sample");
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        auto rng = make_rng(seed, stream, i);
        const PathSet ps = sample_spreading(cfg, rng);
        const ChannelRealization ch = synthesize_channel(ps, t, r);
        const double v = achievable_rate(ch.H, Q, sigma2);
        sum += v;
        sum_sq += v * v;
    }
    RateEstimate est;
    est.samples = samples;
    est.mean = sum / static_cast<double>(samples);
    if (samples > 1) {
        const double n = static_cast<double>(samples);
        const double var = std::max(0.0, (sum_sq - n * est.mean * est.mean) / (n - 1.0));
        est.stderr_mean = std::sqrt(var / n);
    }
    return est;
}

} // namespace mamimo

#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "mamimo/channel.hpp"
#include "mamimo/geometry.hpp"
#include "mamimo/rng.hpp"

namespace mamimo {

/// Transmit covariance with its power budget.  Invariants: Hermitian,
/// PSD, Tr(Q) <= P within a 1e-9 absolute slack.
struct CovarianceMatrix {
    Eigen::MatrixXcd Q;
    double power = 0.0;

    void validate(double tol = 1e-9) const;   // throws std::invalid_argument
};

/// Rate of one realization plus every gradient the optimizer consumes.
/// grad_t / grad_r are packed (x1, y1, x2, y2, ...).
struct RateSample {
    double value = 0.0;             // bits per channel use
    Eigen::VectorXd grad_t;         // 2N
    Eigen::VectorXd grad_r;         // 2M
    Eigen::MatrixXcd grad_Q;        // N x N Hermitian PSD
};

/// log2 det(I_M + H Q H^H / sigma2).  Throws when sigma2 <= 0 or Q is
/// visibly non-Hermitian / indefinite.
double achievable_rate(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& Q, double sigma2);

/// d rate / dQ = (1/(sigma2 ln2)) H^H (I + H Q H^H/sigma2)^{-1} H.
/// Hermitian PSD by construction.
Eigen::MatrixXcd grad_rate_covariance(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& Q, double sigma2);

/// Exact per-realization gradient with respect to every antenna
/// coordinate, computed by the chain rule through the steering phases.
/// Needs the PathSet retained inside the realization.
void grad_rate_positions(const ChannelRealization& realization,
                         const std::vector<Position>& t,
                         const std::vector<Position>& r,
                         const Eigen::MatrixXcd& Q, double sigma2,
                         Eigen::VectorXd& grad_t, Eigen::VectorXd& grad_r);

/// Rate + all three gradients for one realization in a single pass
/// (shares the inverse between the covariance and position gradients).
RateSample evaluate_sample(const ChannelRealization& realization,
                           const std::vector<Position>& t,
                           const std::vector<Position>& r,
                           const Eigen::MatrixXcd& Q, double sigma2);

/// Monte-Carlo estimate of the average rate over `samples` i.i.d.
/// spreading draws.  Sample i always uses the generator derived from
/// (seed, stream, i), so the estimate is independent of evaluation order.
double average_rate(const std::vector<Position>& t,
                    const std::vector<Position>& r,
                    const Eigen::MatrixXcd& Q,
                    const ScatteringConfig& cfg,
                    std::size_t samples, double sigma2,
                    std::uint64_t seed, std::uint64_t stream = kStreamEvaluation);

/// Same estimate but also returns the standard error of the mean.
struct RateEstimate {
    double mean = 0.0;
    double stderr_mean = 0.0;
    std::size_t samples = 0;
};
RateEstimate estimate_rate(const std::vector<Position>& t,
                           const std::vector<Position>& r,
                           const Eigen::MatrixXcd& Q,
                           const ScatteringConfig& cfg,
                           std::size_t samples, double sigma2,
                           std::uint64_t seed, std::uint64_t stream = kStreamEvaluation);

} // namespace mamimo

#pragma once

#include <cstdint>
#include <vector>

#include "mamimo/channel.hpp"
#include "mamimo/geometry.hpp"
#include "mamimo/rate.hpp"
#include "mamimo/solvers.hpp"
#include "mamimo/surrogate.hpp"

namespace mamimo {

/// Diminishing step sequences: rho^t = (1+t)^{-rho_exponent} weights the
/// surrogate recursion, gamma^t = gamma_scale*(1+t)^{-gamma_exponent}
/// blends the iterate.  The summability conditions (sum = inf, sum of
/// squares < inf, gamma/rho -> 0) require both exponents in (0.5, 1] with
/// gamma_exponent > rho_exponent.
struct StepSchedule {
    double rho_exponent = 0.7;
    double gamma_exponent = 0.9;
    double gamma_scale = 1.0;

    void validate() const;   // throws std::invalid_argument
};

struct StepSizes {
    double rho = 1.0;
    double gamma = 1.0;
};
StepSizes step_sizes(std::size_t t, const StepSchedule& sched);

/// One per-iteration diagnostic record.
struct TrajectoryPoint {
    std::size_t iteration = 0;
    double sampled_rate = 0.0;     // rate of this iteration's realization at the entering iterate
    double alpha = 0.0;            // feasibility slack; +inf when no pair constraints exist
    double rho = 0.0;
    double gamma = 0.0;
    bool objective_branch = true;  // false = feasibility-restoration step
    bool violation = false;        // blended iterate breaks a true distance constraint
    double step_norm = 0.0;        // ||blended update|| across (t, r, Q)
    // Smallest true pairwise distance over this iteration's subproblem
    // solutions t-bar / r-bar (+inf with fewer than two antennas): the
    // surrogate lower bound keeps it >= D on every objective-branch step.
    double candidate_min_spacing = 0.0;
    bool in_region = true;         // blended iterate inside its boxes (exact)
};

struct OptimizerConfig {
    ArrayMode mode = ArrayMode::general;
    std::size_t num_tx = 4;            // N
    std::size_t num_rx = 4;            // M
    double min_distance = 0.5;         // D, wavelengths
    double region_size = 1.0;          // X, wavelengths
    double power = 10.0;               // P (linear)
    double sigma2 = 1.0;
    std::size_t iterations = 2000;
    StepSchedule schedule;
    double tau_objective = -1.0;
    double tau_constraint = -1.0;
    ScatteringConfig scattering = ScatteringConfig::defaults();
    BarrierSolverConfig barrier;
    std::uint64_t seed = 1;
    std::size_t eval_samples = 500;    // final-rate Monte-Carlo size
    double early_stop_residual = 0.0;  // 0 disables the early stop
    std::size_t residual_window = 100;

    void validate() const;   // throws std::invalid_argument
};

struct OptimizationResult {
    AntennaLayout t_layout;            // deployable transmit positions
    AntennaLayout r_layout;            // deployable receive positions
    CovarianceMatrix Q;                // final blended covariance
    std::vector<TrajectoryPoint> trajectory;
    double final_rate = 0.0;           // independent Monte-Carlo estimate
    double final_rate_stderr = 0.0;
    std::size_t iterations_used = 0;
};

/// Full CSSCA run: per iteration draw one spreading sample, refresh the
/// three recursive surrogates, solve the feasibility problem (general
/// mode), branch into the objective or restoration subproblems, and blend.
/// The deployable layout is the last objective-branch candidate in
/// general mode (provably satisfying the true distance constraints) and
/// the final blended iterate otherwise.
OptimizationResult run_optimizer(const OptimizerConfig& cfg);

/// Mean blended-update norm over the last `last_k` records: an empirical
/// stationarity proxy.  Throws when fewer than last_k records exist.
double stationarity_residual(const std::vector<TrajectoryPoint>& trajectory, std::size_t last_k);

} // namespace mamimo

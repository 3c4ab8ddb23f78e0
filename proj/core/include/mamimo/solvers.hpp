#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mamimo/geometry.hpp"
#include "mamimo/rate.hpp"
#include "mamimo/surrogate.hpp"

namespace mamimo {

/// Knobs of the interior-point solver used for the general movement mode.
/// epsilon bounds the final objective sub-optimality (duality-gap bound
/// of the log barrier at the last centering weight).
struct BarrierSolverConfig {
    double epsilon = 1e-6;
    int max_newton_steps = 50;
    double initial_barrier_weight = 1.0;
    double barrier_decrease_factor = 0.2;

    void validate() const;   // throws std::invalid_argument
};

struct FeasibilityResult {
    Eigen::VectorXd positions;   // packed (x1, y1, ...)
    double alpha = 0.0;          // maximized common constraint slack
};

/// Water level u* for the covariance update: the unique u >= 0 at which
/// sum_i max(0, (eigs_i - u)) / (-2 a_Q) meets the budget P.  Requires the
/// u = 0 allocation to overshoot P (otherwise u* = 0 and the caller skips
/// the bisection).  |trace(u*) - P| <= 1e-9 * max(P, 1), and the returned
/// level never allocates more than P.
double bisection_water_level(const Eigen::VectorXd& eigs, double a_Q, double P);

/// Closed-form maximizer of a_Q*|Q|_F^2 + tr(B_Q Q) over {Q PSD,
/// tr(Q) <= P}: eigenvalue water-filling in the eigenbasis of B_Q.
CovarianceMatrix solve_covariance(double a_Q, const Eigen::MatrixXcd& B_Q, double P);

/// Maximize the position surrogate over the shared region subject to the
/// convexified pairwise-distance constraints (>= D^2), by a log-barrier
/// interior-point method started from `start` (packed).  The start must
/// satisfy every constraint strictly; otherwise std::runtime_error.
/// Without any pair constraint the exact boxed maximizer is returned.
Eigen::VectorXd solve_positions_general(const QuadraticSurrogate& surr,
                                        const std::vector<ConstraintSurrogate>& constraints,
                                        const Region& region, double D,
                                        const BarrierSolverConfig& cfg,
                                        const Eigen::VectorXd& start);

/// Maximize the common slack alpha with the constraints >= D^2 + alpha
/// over the region.  Always solvable; alpha < 0 signals surrogate
/// infeasibility.  With no pair constraints alpha = +infinity.
FeasibilityResult solve_feasibility(const std::vector<ConstraintSurrogate>& constraints,
                                    const Region& region, double D,
                                    const BarrierSolverConfig& cfg,
                                    const Eigen::VectorXd& start);

/// Linear / planar closed form: per-antenna box clamp of the
/// unconstrained maximizer -b/(2a).  The region must carry one box per
/// antenna; linear boxes pin the y coordinate.
Eigen::VectorXd solve_positions_boxed(const QuadraticSurrogate& surr, const Region& region);

} // namespace mamimo

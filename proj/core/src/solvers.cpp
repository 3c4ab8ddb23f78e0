#include "mamimo/solvers.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mamimo {

void BarrierSolverConfig::validate() const {
    if (!(epsilon > 0.0))
        throw std::invalid_argument("BarrierSolverConfig: epsilon must be positive");
    if (max_newton_steps < 1)
        throw std::invalid_argument("BarrierSolverConfig: max_newton_steps must be >= 1");
    if (!(initial_barrier_weight > 0.0))
        throw std::invalid_argument("BarrierSolverConfig: initial_barrier_weight must be positive");
    if (!(barrier_decrease_factor > 0.0 && barrier_decrease_factor < 1.0))
        throw std::invalid_argument("BarrierSolverConfig: barrier_decrease_factor must be in (0, 1)");
}

double bisection_water_level(const Eigen::VectorXd& eigs, double a_Q, double P) {
    if (!(a_Q < 0.0))
        throw std::invalid_argument("bisection_water_level: a_Q must be negative");
    if (P < 0.0)
        throw std::invalid_argument("bisection_water_level: P must be nonnegative");

    const double inv = 1.0 / (-2.0 * a_Q);
    auto allocated = [&](double u) {
        double tr = 0.0;
        for (Eigen::Index i = 0; i < eigs.size(); ++i)
            tr += std::max(0.0, (eigs(i) - u) * inv);
        return tr;
    };
    if (allocated(0.0) <= P)
        throw std::invalid_argument("bisection_water_level: the u = 0 allocation already fits the budget");

    // allocated(u) is continuous, non-increasing, and zero at u = max eig,
    // so the budget is crossed inside [0, max eig].  We keep the upper
    // bracket endpoint: its allocation never exceeds P.
    const double tol = 1e-9 * std::max(P, 1.0);
    double lo = 0.0, hi = eigs.maxCoeff();
    for (int it = 0; it < 200 && (hi - lo) > 0.0; ++it) {
        if (P - allocated(hi) <= tol) break;
        const double mid = 0.5 * (lo + hi);
        if (allocated(mid) > P)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

CovarianceMatrix solve_covariance(double a_Q, const Eigen::MatrixXcd& B_Q, double P) {
    if (!(a_Q < 0.0))
        throw std::invalid_argument("solve_covariance: a_Q must be negative");
    if (P < 0.0)
        throw std::invalid_argument("solve_covariance: P must be nonnegative");
    if (B_Q.rows() != B_Q.cols())
        throw std::invalid_argument("solve_covariance: B_Q must be square");
    if ((B_Q - B_Q.adjoint()).norm() > 1e-9 * std::max(1.0, B_Q.norm()))
        throw std::invalid_argument("solve_covariance: B_Q must be Hermitian");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (B_Q + B_Q.adjoint().eval()));
    if (es.info() != Eigen::Success)
        throw std::runtime_error("solve_covariance: eigendecomposition failed");
    const Eigen::VectorXd lam = es.eigenvalues();
    const Eigen::MatrixXcd U = es.eigenvectors();

    const double inv = 1.0 / (-2.0 * a_Q);
    auto levels = [&](double u) {
        return (lam.array() - u).max(0.0).matrix() * inv;
    };

    double u = 0.0;
    if (levels(0.0).sum() > P)
        u = bisection_water_level(lam, a_Q, P);
    const Eigen::VectorXd q = levels(u);

    CovarianceMatrix out;
    out.power = P;
    Eigen::MatrixXcd Q = U * q.asDiagonal() * U.adjoint();
    out.Q = 0.5 * (Q + Q.adjoint().eval());
    return out;
}

namespace {

// ---------------------------------------------------------------------------
// Log-barrier Newton machinery shared by the objective and feasibility
// variants of the general-mode position subproblem.
//
// Variables z = packed positions, optionally extended by the slack alpha
// as the last entry (feasibility variant).  All constraints are kept as
// barrier terms:
//   pair k:   g_k(x) - D^2 (- alpha)    > 0
//   box:      x_c - lo_c > 0,  hi_c - x_c > 0   per free coordinate
// ---------------------------------------------------------------------------

struct BarrierProblem {
    const std::vector<ConstraintSurrogate>* pairs = nullptr;
    double d2 = 0.0;                 // D^2
    const Box* box = nullptr;        // shared region box
    Eigen::Index n_coords = 0;       // 2 * antennas
    bool with_alpha = false;

    // Objective to *minimize*.  Objective variant: -(a|x|^2 + b'x);
    // feasibility variant: -alpha.
    double obj_a = 0.0;              // 0 for the feasibility variant
    Eigen::VectorXd obj_b;           // empty for the feasibility variant

    Eigen::Index dim() const { return n_coords + (with_alpha ? 1 : 0); }
    std::size_t constraint_count() const {
        return (pairs ? pairs->size() : 0) + 2 * static_cast<std::size_t>(n_coords);
    }

    double pair_slack(const ConstraintSurrogate& cs, const Eigen::VectorXd& z) const {
        double s = constraint_surrogate_value_packed(cs, z.head(n_coords)) - d2;
        if (with_alpha) s -= z(n_coords);
        return s;
    }

    // Smallest constraint slack at z; > 0 means strictly feasible.
    double min_slack(const Eigen::VectorXd& z) const {
        double m = std::numeric_limits<double>::infinity();
        if (pairs)
            for (const auto& cs : *pairs) m = std::min(m, pair_slack(cs, z));
        for (Eigen::Index c = 0; c < n_coords; ++c) {
            const bool x_axis = (c % 2 == 0);
            const double lo = x_axis ? box->x_lo : box->y_lo;
            const double hi = x_axis ? box->x_hi : box->y_hi;
            m = std::min({m, z(c) - lo, hi - z(c)});
        }
        return m;
    }

    double objective(const Eigen::VectorXd& z) const {
        if (with_alpha) return -z(n_coords);
        const auto x = z.head(n_coords);
        return -(obj_a * x.squaredNorm() + obj_b.dot(x));
    }

    // phi = objective - w * sum log slack; +inf outside the domain.
    double phi(const Eigen::VectorXd& z, double w) const {
        double val = objective(z);
        double logs = 0.0;
        if (pairs) {
            for (const auto& cs : *pairs) {
                const double s = pair_slack(cs, z);
                if (s <= 0.0) return std::numeric_limits<double>::infinity();
                logs += std::log(s);
            }
        }
        for (Eigen::Index c = 0; c < n_coords; ++c) {
            const bool x_axis = (c % 2 == 0);
            const double lo = x_axis ? box->x_lo : box->y_lo;
            const double hi = x_axis ? box->x_hi : box->y_hi;
            const double s1 = z(c) - lo, s2 = hi - z(c);
            if (s1 <= 0.0 || s2 <= 0.0) return std::numeric_limits<double>::infinity();
            logs += std::log(s1) + std::log(s2);
        }
        return val - w * logs;
    }

    void gradient_hessian(const Eigen::VectorXd& z, double w,
                          Eigen::VectorXd& grad, Eigen::MatrixXd& hess) const {
        const Eigen::Index d = dim();
        grad.setZero(d);
        hess.setZero(d, d);

        if (with_alpha) {
            grad(n_coords) = -1.0;
        } else {
            grad.head(n_coords) = -(2.0 * obj_a * z.head(n_coords) + obj_b);
            hess.topLeftCorner(n_coords, n_coords).diagonal().setConstant(-2.0 * obj_a);
        }

        Eigen::VectorXd gs(d);
        if (pairs) {
            for (const auto& cs : *pairs) {
                const double s = pair_slack(cs, z);
                const auto ii = static_cast<Eigen::Index>(2 * cs.i);
                const auto jj = static_cast<Eigen::Index>(2 * cs.j);
                const Eigen::Vector2d xi = z.segment<2>(ii);
                const Eigen::Vector2d xj = z.segment<2>(jj);
                const Eigen::Vector2d delta = cs.anchor_i - cs.anchor_j;

                gs.setZero();
                gs.segment<2>(ii) = 2.0 * cs.tau * (xi - cs.anchor_i) + 2.0 * delta;
                gs.segment<2>(jj) = 2.0 * cs.tau * (xj - cs.anchor_j) - 2.0 * delta;
                if (with_alpha) gs(n_coords) = -1.0;

                grad.noalias() += (-w / s) * gs;
                hess.noalias() += (w / (s * s)) * (gs * gs.transpose());
                // -(w/s) * Hessian(slack): the slack Hessian is 2 tau on
                // the four involved coordinates.
                const double diag = -(w / s) * 2.0 * cs.tau;
                hess(ii, ii) += diag;
                hess(ii + 1, ii + 1) += diag;
                hess(jj, jj) += diag;
                hess(jj + 1, jj + 1) += diag;
            }
        }
        for (Eigen::Index c = 0; c < n_coords; ++c) {
            const bool x_axis = (c % 2 == 0);
            const double lo = x_axis ? box->x_lo : box->y_lo;
            const double hi = x_axis ? box->x_hi : box->y_hi;
            const double s1 = z(c) - lo, s2 = hi - z(c);
            grad(c) += -w / s1 + w / s2;
            hess(c, c) += w / (s1 * s1) + w / (s2 * s2);
        }
    }
};

// Damped Newton descent on phi(., w) until the Newton decrement is
// negligible or the step budget runs out.  Returns the centered point.
Eigen::VectorXd newton_center(const BarrierProblem& prob, Eigen::VectorXd z, double w,
                              int max_steps) {
    Eigen::VectorXd grad;
    Eigen::MatrixXd hess;
    for (int it = 0; it < max_steps; ++it) {
        prob.gradient_hessian(z, w, grad, hess);

        Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
        Eigen::VectorXd step = -ldlt.solve(grad);
        if (ldlt.info() != Eigen::Success || !step.allFinite()) {
            // Barrier Hessians can get ill-conditioned when a slack is
            // tiny; retry with growing Tikhonov jitter.
            double jitter = 1e-12 * (1.0 + hess.diagonal().cwiseAbs().maxCoeff());
            for (int k = 0; k < 16; ++k, jitter *= 100.0) {
                Eigen::MatrixXd h = hess;
                h.diagonal().array() += jitter;
                ldlt.compute(h);
                step = -ldlt.solve(grad);
                if (ldlt.info() == Eigen::Success && step.allFinite()) break;
            }
            if (!step.allFinite()) break;
        }

        const double decrement = -grad.dot(step);   // lambda^2
        if (decrement <= 2e-11) break;

        // Backtrack first into the domain, then to Armijo decrease.
        const double phi0 = prob.phi(z, w);
        double tstep = 1.0;
        for (int k = 0; k < 60; ++k) {
            const Eigen::VectorXd cand = z + tstep * step;
            if (prob.phi(cand, w) <= phi0 - 0.25 * tstep * decrement) {
                z = cand;
                break;
            }
            tstep *= 0.5;
            if (k == 59) return z;   // no acceptable step: numerically stuck
        }
    }
    return z;
}

Eigen::VectorXd barrier_solve(const BarrierProblem& prob, Eigen::VectorXd z,
                              const BarrierSolverConfig& cfg) {
    const double m = static_cast<double>(prob.constraint_count());
    double w = cfg.initial_barrier_weight;
    while (true) {
        z = newton_center(prob, z, w, cfg.max_newton_steps);
        if (m * w <= cfg.epsilon) break;
        w *= cfg.barrier_decrease_factor;
    }
    return z;
}

const Box& shared_box(const Region& region) {
    if (region.mode != ArrayMode::general || region.boxes.size() != 1)
        throw std::invalid_argument("general-mode solver needs a single shared region box");
    return region.boxes.front();
}

// Pull coordinates lying on (or outside) the box walls strictly inside,
// so the box barrier terms are finite at the start.
Eigen::VectorXd interior_start(const Box& box, Eigen::VectorXd z, Eigen::Index n_coords) {
    const double mx = 1e-9 * std::max(1.0, box.width());
    const double my = 1e-9 * std::max(1.0, box.height());
    for (Eigen::Index c = 0; c < n_coords; ++c) {
        const bool x_axis = (c % 2 == 0);
        const double lo = x_axis ? box.x_lo : box.y_lo;
        const double hi = x_axis ? box.x_hi : box.y_hi;
        const double margin = std::min(x_axis ? mx : my, 0.25 * (hi - lo));
        z(c) = std::clamp(z(c), lo + margin, hi - margin);
    }
    return z;
}

Eigen::VectorXd clamp_into_boxes(const QuadraticSurrogate& surr, const Region& region) {
    if (!(surr.a < 0.0))
        throw std::invalid_argument("position solve: surrogate must be strongly concave (a < 0)");
    const Eigen::Index dim = surr.b.size();
    Eigen::VectorXd z = surr.peak();
    for (Eigen::Index c = 0; c < dim; ++c) {
        const Box& b = region.boxes.size() == 1
                           ? region.boxes.front()
                           : region.boxes.at(static_cast<std::size_t>(c / 2));
        const bool x_axis = (c % 2 == 0);
        z(c) = x_axis ? std::clamp(z(c), b.x_lo, b.x_hi) : std::clamp(z(c), b.y_lo, b.y_hi);
    }
    return z;
}

} // namespace

Eigen::VectorXd solve_positions_general(const QuadraticSurrogate& surr,
                                        const std::vector<ConstraintSurrogate>& constraints,
                                        const Region& region, double D,
                                        const BarrierSolverConfig& cfg,
                                        const Eigen::VectorXd& start) {
    cfg.validate();
    if (!(surr.a < 0.0))
        throw std::invalid_argument("solve_positions_general: surrogate must have a < 0");
    if (start.size() != surr.b.size())
        throw std::invalid_argument("solve_positions_general: start / surrogate size mismatch");

    // Separable exact solution when no pair constraint exists.
    if (constraints.empty()) return clamp_into_boxes(surr, region);

    const Box& box = shared_box(region);

    BarrierProblem prob;
    prob.pairs = &constraints;
    prob.d2 = D * D;
    prob.box = &box;
    prob.n_coords = start.size();
    prob.with_alpha = false;
    prob.obj_a = surr.a;
    prob.obj_b = surr.b;

    const Eigen::VectorXd z0 = interior_start(box, start, prob.n_coords);
    if (prob.min_slack(z0) <= 0.0)
        throw std::runtime_error("solve_positions_general: start point is not strictly feasible");

    return barrier_solve(prob, z0, cfg);
}

FeasibilityResult solve_feasibility(const std::vector<ConstraintSurrogate>& constraints,
                                    const Region& region, double D,
                                    const BarrierSolverConfig& cfg,
                                    const Eigen::VectorXd& start) {
    cfg.validate();
    const Box& box = shared_box(region);

    FeasibilityResult res;
    if (constraints.empty()) {
        // Nothing to separate: slack is unbounded.
        res.positions = interior_start(box, start, start.size());
        res.alpha = std::numeric_limits<double>::infinity();
        return res;
    }

    BarrierProblem prob;
    prob.pairs = &constraints;
    prob.d2 = D * D;
    prob.box = &box;
    prob.n_coords = start.size();
    prob.with_alpha = true;

    Eigen::VectorXd z(start.size() + 1);
    z.head(start.size()) = interior_start(box, start, start.size());

    // Start alpha one unit below the worst current slack so every barrier
    // term opens with slack >= 1.
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& cs : constraints)
        worst = std::min(worst, constraint_surrogate_value_packed(cs, z.head(start.size())) - D * D);
    z(start.size()) = worst - 1.0;

    z = barrier_solve(prob, z, cfg);

    res.positions = z.head(start.size());
    // Report the honest slack at the returned positions, not the interior
    // alpha variable (which sits slightly below it on the central path).
    double achieved = std::numeric_limits<double>::infinity();
    for (const auto& cs : constraints)
        achieved = std::min(achieved, constraint_surrogate_value_packed(cs, res.positions) - D * D);
    res.alpha = achieved;
    return res;
}

Eigen::VectorXd solve_positions_boxed(const QuadraticSurrogate& surr, const Region& region) {
    if (region.mode != ArrayMode::linear && region.mode != ArrayMode::planar)
        throw std::invalid_argument("solve_positions_boxed: region must be linear or planar");
    if (region.boxes.size() != static_cast<std::size_t>(surr.b.size() / 2))
        throw std::invalid_argument("solve_positions_boxed: region box count does not match surrogate");
    return clamp_into_boxes(surr, region);
}

} // namespace mamimo

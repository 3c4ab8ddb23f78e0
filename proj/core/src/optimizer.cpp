#include "mamimo/optimizer.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mamimo/rng.hpp"

namespace mamimo {

void StepSchedule::validate() const {
    auto in_range = [](double e) { return e > 0.5 && e <= 1.0; };
    if (!in_range(rho_exponent))
        throw std::invalid_argument("StepSchedule: rho_exponent must lie in (0.5, 1]");
    if (!in_range(gamma_exponent))
        throw std::invalid_argument("StepSchedule: gamma_exponent must lie in (0.5, 1]");
    if (!(gamma_exponent > rho_exponent))
        throw std::invalid_argument("StepSchedule: gamma_exponent must exceed rho_exponent (gamma/rho -> 0)");
    if (!(gamma_scale > 0.0 && gamma_scale <= 1.0))
        throw std::invalid_argument("StepSchedule: gamma_scale must lie in (0, 1]");
}

StepSizes step_sizes(std::size_t t, const StepSchedule& sched) {
    const double base = 1.0 + static_cast<double>(t);
    return {std::pow(base, -sched.rho_exponent),
            sched.gamma_scale * std::pow(base, -sched.gamma_exponent)};
}

void OptimizerConfig::validate() const {
    if (num_tx == 0 || num_rx == 0)
        throw std::invalid_argument("OptimizerConfig: antenna counts must be >= 1");
    if (min_distance < 0.5)
        throw std::invalid_argument("OptimizerConfig: min_distance must be >= 0.5 wavelengths "
                                    "(antenna coupling limit)");
    if (region_size <= 0.0 && mode != ArrayMode::upa)
        throw std::invalid_argument("OptimizerConfig: region_size must be positive");
    if (power < 0.0)
        throw std::invalid_argument("OptimizerConfig: power must be nonnegative");
    if (sigma2 <= 0.0)
        throw std::invalid_argument("OptimizerConfig: sigma2 must be positive");
    if (!(tau_objective < 0.0) || !(tau_constraint < 0.0))
        throw std::invalid_argument("OptimizerConfig: tau constants must be negative");
    if (eval_samples == 0)
        throw std::invalid_argument("OptimizerConfig: eval_samples must be >= 1");
    if (early_stop_residual < 0.0)
        throw std::invalid_argument("OptimizerConfig: early_stop_residual must be >= 0");
    if (residual_window == 0)
        throw std::invalid_argument("OptimizerConfig: residual_window must be >= 1");
    schedule.validate();
    barrier.validate();
    scattering.validate();
}

namespace {

Eigen::VectorXd to_packed(const std::vector<Position>& v) {
    Eigen::VectorXd p(2 * v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        p(2 * i) = v[i].x;
        p(2 * i + 1) = v[i].y;
    }
    return p;
}

std::vector<Position> from_packed(const Eigen::VectorXd& p) {
    std::vector<Position> v(static_cast<std::size_t>(p.size() / 2));
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = {p(2 * i), p(2 * i + 1)};
    return v;
}

double min_pair_distance(const Eigen::VectorXd& packed) {
    const std::size_t n = static_cast<std::size_t>(packed.size() / 2);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            best = std::min(best, (packed.segment<2>(2 * i) - packed.segment<2>(2 * j)).norm());
    return best;
}

void clamp_into_region(const Region& region, Eigen::VectorXd& packed) {
    const std::size_t n = static_cast<std::size_t>(packed.size() / 2);
    for (std::size_t i = 0; i < n; ++i) {
        const Position p = region.clamp(i, {packed(2 * i), packed(2 * i + 1)});
        packed(2 * i) = p.x;
        packed(2 * i + 1) = p.y;
    }
}

} // namespace

OptimizationResult run_optimizer(const OptimizerConfig& cfg) {
    cfg.validate();

    const std::size_t N = cfg.num_tx, M = cfg.num_rx;
    const double D = cfg.min_distance;
    const bool general = cfg.mode == ArrayMode::general;
    const bool movable = cfg.mode != ArrayMode::upa;

    // Initial state: grid/center layouts, uniform power split.
    AntennaLayout t_layout = initialize_layout(cfg.mode, N, cfg.region_size, D);
    AntennaLayout r_layout = initialize_layout(cfg.mode, M, cfg.region_size, D);
    Eigen::VectorXd t = to_packed(t_layout.positions);
    Eigen::VectorXd r = to_packed(r_layout.positions);
    Eigen::MatrixXcd Q = (cfg.power / static_cast<double>(N)) *
                         Eigen::MatrixXcd::Identity(N, N);

    QuadraticSurrogate f_t = QuadraticSurrogate::zero(t.size());
    QuadraticSurrogate f_r = QuadraticSurrogate::zero(r.size());
    MatrixQuadraticSurrogate f_Q = MatrixQuadraticSurrogate::zero(static_cast<Eigen::Index>(N));

    // Fallback deployable candidates for general mode: the blended iterate
    // may drift outside the non-convex true feasible set, and the last
    // objective-branch subproblem solution is always feasible by the
    // surrogate lower bound.  Start with the (feasible) initial grid.
    Eigen::VectorXd deploy_t = t, deploy_r = r;

    OptimizationResult result;
    result.trajectory.reserve(cfg.iterations);

    for (std::size_t it = 0; it < cfg.iterations; ++it) {
        const auto [rho, gamma] = step_sizes(it, cfg.schedule);

        // (1) one fresh spreading-function realization per iteration
        auto rng = make_rng(cfg.seed, kStreamIteration, it);
        const PathSet ps = sample_spreading(cfg.scattering, rng);
        const ChannelRealization ch =
            synthesize_channel(ps, from_packed(t), from_packed(r));

        // (2) rate and gradients at the entering iterate
        const RateSample sample = evaluate_sample(ch, from_packed(t), from_packed(r), Q, cfg.sigma2);

        // (3) recursive surrogate refresh
        f_Q = update_matrix_surrogate(f_Q, sample.grad_Q, Q, rho, cfg.tau_objective);
        if (movable) {
            f_t = update_quadratic_surrogate(f_t, sample.grad_t, t, rho, cfg.tau_objective);
            f_r = update_quadratic_surrogate(f_r, sample.grad_r, r, rho, cfg.tau_objective);
        }

        // (4) subproblem solves, with the feasibility branch in general mode
        Eigen::VectorXd t_bar = t, r_bar = r;
        Eigen::MatrixXcd Q_bar;
        double alpha = std::numeric_limits<double>::infinity();
        bool objective_branch = true;

        if (general) {
            const auto cs_t = make_constraint_surrogates(from_packed(t), cfg.tau_constraint);
            const auto cs_r = make_constraint_surrogates(from_packed(r), cfg.tau_constraint);
            const FeasibilityResult feas_t =
                solve_feasibility(cs_t, t_layout.region, D, cfg.barrier, t);
            const FeasibilityResult feas_r =
                solve_feasibility(cs_r, r_layout.region, D, cfg.barrier, r);
            alpha = std::min(feas_t.alpha, feas_r.alpha);

            if (alpha > 0.0) {
                t_bar = solve_positions_general(f_t, cs_t, t_layout.region, D, cfg.barrier,
                                                feas_t.positions);
                r_bar = solve_positions_general(f_r, cs_r, r_layout.region, D, cfg.barrier,
                                                feas_r.positions);
                Q_bar = solve_covariance(f_Q.a, f_Q.B, cfg.power).Q;
                deploy_t = t_bar;
                deploy_r = r_bar;
            } else {
                // Restoration step: move toward feasibility, freeze Q.
                t_bar = feas_t.positions;
                r_bar = feas_r.positions;
                Q_bar = Q;
                objective_branch = false;
            }
        } else {
            if (movable) {
                t_bar = solve_positions_boxed(f_t, t_layout.region);
                r_bar = solve_positions_boxed(f_r, r_layout.region);
            }
            Q_bar = solve_covariance(f_Q.a, f_Q.B, cfg.power).Q;
        }

        // (5) blend and re-enter the (convex) region; fixed arrays skip the
        // position update entirely so their coordinates stay bit-identical
        const Eigen::VectorXd t_next = movable ? ((1.0 - gamma) * t + gamma * t_bar).eval() : t;
        const Eigen::VectorXd r_next = movable ? ((1.0 - gamma) * r + gamma * r_bar).eval() : r;
        Eigen::MatrixXcd Q_next = (1.0 - gamma) * Q + gamma * Q_bar;
        Q_next = 0.5 * (Q_next + Q_next.adjoint().eval());

        TrajectoryPoint tp;
        tp.iteration = it;
        tp.sampled_rate = sample.value;
        tp.alpha = alpha;
        tp.rho = rho;
        tp.gamma = gamma;
        tp.objective_branch = objective_branch;
        tp.candidate_min_spacing = std::min(min_pair_distance(t_bar), min_pair_distance(r_bar));
        tp.step_norm = std::sqrt((t_next - t).squaredNorm() + (r_next - r).squaredNorm() +
                                 (Q_next - Q).squaredNorm());

        t = t_next;
        r = r_next;
        Q = std::move(Q_next);
        clamp_into_region(t_layout.region, t);
        clamp_into_region(r_layout.region, r);

        if (general) {
            tp.violation = min_pair_distance(t) < D - 1e-9 || min_pair_distance(r) < D - 1e-9;
        }
        tp.in_region = true;
        for (std::size_t i = 0; i < N && tp.in_region; ++i)
            tp.in_region = t_layout.region.contains(i, {t(2 * i), t(2 * i + 1)});
        for (std::size_t i = 0; i < M && tp.in_region; ++i)
            tp.in_region = r_layout.region.contains(i, {r(2 * i), r(2 * i + 1)});
        result.trajectory.push_back(tp);
        result.iterations_used = it + 1;

        if (cfg.early_stop_residual > 0.0 && result.trajectory.size() >= cfg.residual_window &&
            stationarity_residual(result.trajectory, cfg.residual_window) < cfg.early_stop_residual)
            break;
    }

    // Deployable state: the blended iterate is the convergent sequence, so
    // deploy it whenever it is genuinely feasible.  Box membership holds by
    // convexity (plus the re-entry clamp); in general mode the pairwise
    // spacing needs an explicit check, and the rare infeasible blend falls
    // back to the last objective-branch candidate, which the surrogate
    // lower bound keeps feasible.
    if (!general || (min_pair_distance(t) >= D && min_pair_distance(r) >= D)) {
        deploy_t = t;
        deploy_r = r;
    }
    t_layout.set_packed(deploy_t);
    r_layout.set_packed(deploy_r);
    result.t_layout = t_layout;
    result.r_layout = r_layout;
    result.Q = CovarianceMatrix{Q, cfg.power};

    const RateEstimate est =
        estimate_rate(result.t_layout.positions, result.r_layout.positions, Q, cfg.scattering,
                      cfg.eval_samples, cfg.sigma2, cfg.seed, kStreamEvaluation);
    result.final_rate = est.mean;
    result.final_rate_stderr = est.stderr_mean;
    return result;
}

double stationarity_residual(const std::vector<TrajectoryPoint>& trajectory, std::size_t last_k) {
    if (last_k == 0)
        throw std::invalid_argument("stationarity_residual: last_k must be >= 1");
    if (trajectory.size() < last_k)
        throw std::invalid_argument("stationarity_residual: not enough iterations recorded");
    double sum = 0.0;
    for (std::size_t i = trajectory.size() - last_k; i < trajectory.size(); ++i)
        sum += trajectory[i].step_norm;
    return sum / static_cast<double>(last_k);
}

} // namespace mamimo

#include "mamimo/surrogate.hpp"

#include <stdexcept>

namespace mamimo {

namespace {
void check_step(double rho, double tau) {
    if (!(rho > 0.0 && rho <= 1.0))
        throw std::invalid_argument("surrogate update: rho must be in (0, 1]");
    if (!(tau < 0.0))
        throw std::invalid_argument("surrogate update: tau must be negative");
}
} // namespace

QuadraticSurrogate update_quadratic_surrogate(const QuadraticSurrogate& prev,
                                              const Eigen::VectorXd& grad,
                                              const Eigen::VectorXd& x_t,
                                              double rho, double tau) {
    check_step(rho, tau);
    if (grad.size() != x_t.size())
        throw std::invalid_argument("surrogate update: grad / x_t size mismatch");
    if (prev.b.size() != 0 && prev.b.size() != x_t.size())
        throw std::invalid_argument("surrogate update: surrogate dimension changed");

    // grad'(x - x_t) + tau*|x - x_t|^2
    //   = tau*|x|^2 + (grad - 2 tau x_t)'x + (tau*|x_t|^2 - grad'x_t)
    QuadraticSurrogate next;
    const Eigen::VectorXd prev_b =
        prev.b.size() == 0 ? Eigen::VectorXd::Zero(x_t.size()).eval() : prev.b;
    next.a = (1.0 - rho) * prev.a + rho * tau;
    next.b = (1.0 - rho) * prev_b + rho * (grad - 2.0 * tau * x_t);
    next.c = (1.0 - rho) * prev.c + rho * (tau * x_t.squaredNorm() - grad.dot(x_t));
    return next;
}

MatrixQuadraticSurrogate update_matrix_surrogate(const MatrixQuadraticSurrogate& prev,
                                                 const Eigen::MatrixXcd& grad,
                                                 const Eigen::MatrixXcd& Q_t,
                                                 double rho, double tau) {
    check_step(rho, tau);
    if (grad.rows() != Q_t.rows() || grad.cols() != Q_t.cols())
        throw std::invalid_argument("surrogate update: grad / Q_t shape mismatch");

    // Re tr(G^H (Q - Q_t)) + tau*|Q - Q_t|_F^2 expanded as above with the
    // Frobenius inner product.
    MatrixQuadraticSurrogate next;
    const Eigen::MatrixXcd prev_B =
        prev.B.size() == 0 ? Eigen::MatrixXcd::Zero(Q_t.rows(), Q_t.cols()).eval() : prev.B;
    next.a = (1.0 - rho) * prev.a + rho * tau;
    next.B = (1.0 - rho) * prev_B + rho * (grad - 2.0 * tau * Q_t);
    next.c = (1.0 - rho) * prev.c +
             rho * (tau * Q_t.squaredNorm() - (grad.adjoint() * Q_t).trace().real());
    return next;
}

double constraint_surrogate_value(const ConstraintSurrogate& cs,
                                  const Eigen::Vector2d& t_i,
                                  const Eigen::Vector2d& t_j) {
    const Eigen::Vector2d delta = cs.anchor_i - cs.anchor_j;
    return cs.tau * ((t_i - cs.anchor_i).squaredNorm() + (t_j - cs.anchor_j).squaredNorm()) +
           2.0 * delta.dot(t_i - t_j) - delta.squaredNorm();
}

double constraint_surrogate_value_packed(const ConstraintSurrogate& cs,
                                         const Eigen::VectorXd& packed) {
    const Eigen::Vector2d t_i = packed.segment<2>(static_cast<Eigen::Index>(2 * cs.i));
    const Eigen::Vector2d t_j = packed.segment<2>(static_cast<Eigen::Index>(2 * cs.j));
    return constraint_surrogate_value(cs, t_i, t_j);
}

std::vector<ConstraintSurrogate> make_constraint_surrogates(const std::vector<Position>& anchors,
                                                            double tau) {
    if (!(tau < 0.0))
        throw std::invalid_argument("make_constraint_surrogates: tau must be negative");
    std::vector<ConstraintSurrogate> out;
    const std::size_t n = anchors.size();
    if (n < 2) return out;
    out.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            ConstraintSurrogate cs;
            cs.i = i;
            cs.j = j;
            cs.anchor_i = Eigen::Vector2d(anchors[i].x, anchors[i].y);
            cs.anchor_j = Eigen::Vector2d(anchors[j].x, anchors[j].y);
            cs.tau = tau;
            out.push_back(cs);
        }
    }
    return out;
}

} // namespace mamimo

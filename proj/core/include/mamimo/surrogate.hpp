#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "mamimo/geometry.hpp"

namespace mamimo {

/// Concave quadratic in a packed real vector: f(x) = a*|x|^2 + b'x + c.
/// Starts as the zero surrogate (a = b = c = 0); after the first update
/// a < 0 and stays negative (convex combinations of negative tau terms).
struct QuadraticSurrogate {
    double a = 0.0;
    Eigen::VectorXd b;
    double c = 0.0;

    static QuadraticSurrogate zero(Eigen::Index dim) {
        return {0.0, Eigen::VectorXd::Zero(dim), 0.0};
    }
    double value(const Eigen::VectorXd& x) const {
        return a * x.squaredNorm() + b.dot(x) + c;
    }
    /// Unconstrained maximizer -b/(2a); valid only once a < 0.
    Eigen::VectorXd peak() const { return b / (-2.0 * a); }
};

/// Matrix analog over Hermitian Q: f(Q) = a*|Q|_F^2 + Re tr(B^H Q) + c.
struct MatrixQuadraticSurrogate {
    double a = 0.0;
    Eigen::MatrixXcd B;
    double c = 0.0;

    static MatrixQuadraticSurrogate zero(Eigen::Index n) {
        return {0.0, Eigen::MatrixXcd::Zero(n, n), 0.0};
    }
    double value(const Eigen::MatrixXcd& Q) const {
        return a * Q.squaredNorm() + (B.adjoint() * Q).trace().real() + c;
    }
};

/// Concave minorant of the squared distance |t_i - t_j|^2, built at the
/// expansion points (t_i^t, t_j^t):
///   tau*(|t_i - t_i^t|^2 + |t_j - t_j^t|^2)
///   + 2 (t_i^t - t_j^t)'(t_i - t_j) - |t_i^t - t_j^t|^2.
/// Touches the true value at the expansion point; never exceeds it for
/// tau <= 0.
struct ConstraintSurrogate {
    std::size_t i = 0, j = 0;
    Eigen::Vector2d anchor_i = Eigen::Vector2d::Zero();
    Eigen::Vector2d anchor_j = Eigen::Vector2d::Zero();
    double tau = -1.0;
};

/// (1 - rho)*prev + rho*(grad'(x - x_t) + tau*|x - x_t|^2), expanded into
/// coefficient form.  Throws when rho is outside (0, 1] or tau >= 0.
QuadraticSurrogate update_quadratic_surrogate(const QuadraticSurrogate& prev,
                                              const Eigen::VectorXd& grad,
                                              const Eigen::VectorXd& x_t,
                                              double rho, double tau);

/// Matrix version with Frobenius inner products; B stays Hermitian when
/// grad and Q_t are Hermitian.
MatrixQuadraticSurrogate update_matrix_surrogate(const MatrixQuadraticSurrogate& prev,
                                                 const Eigen::MatrixXcd& grad,
                                                 const Eigen::MatrixXcd& Q_t,
                                                 double rho, double tau);

double constraint_surrogate_value(const ConstraintSurrogate& cs,
                                  const Eigen::Vector2d& t_i,
                                  const Eigen::Vector2d& t_j);

/// Value of cs on a packed (x1, y1, x2, y2, ...) position vector.
double constraint_surrogate_value_packed(const ConstraintSurrogate& cs,
                                         const Eigen::VectorXd& packed);

/// One surrogate per unordered antenna pair, anchored at the given
/// positions.  Empty for fewer than two antennas.
std::vector<ConstraintSurrogate> make_constraint_surrogates(const std::vector<Position>& anchors,
                                                            double tau);

} // namespace mamimo

#include "dgc/constraint.hpp"

#include <cmath>

namespace dgc {

Matrix ConstraintModel::hess_d(const Coord& x) const {
    constexpr double h = 1e-6;
    const Eigen::Index n = x.size();
    Matrix out(n, n);
    Coord xp = x;
    for (Eigen::Index j = 0; j < n; ++j) {
        xp[j] = x[j] + h;
        const Coord gp = grad_d(xp);
        xp[j] = x[j] - h;
        const Coord gm = grad_d(xp);
        xp[j] = x[j];
        out.col(j) = (gp - gm) / (2.0 * h);
    }
    return 0.5 * (out + out.transpose());
}

Coord ConstraintModel::value(const Coord& x, const Coord&) const {
    Coord v(1);
    v[0] = d(x);
    return v;
}

Matrix ConstraintModel::jacobian(const Coord& x) const { return grad_d(x).transpose(); }

Matrix ConstraintModel::weighted_hessian(const Coord& x, const Coord& multipliers) const {
    return multipliers[0] * hess_d(x);
}

Coord ConstraintModel::project(const Coord& x, const Coord&) const {
    Coord p = x;
    for (int it = 0; it < 50; ++it) {
        const double dv = d(p);
        if (std::abs(dv) <= 1e-15) break;
        const Coord g = grad_d(p);
        const double gg = g.squaredNorm();
        if (gg == 0.0) throw LinearAlgebraError("level-set projection: vanishing gradient");
        p -= (dv / gg) * g;
    }
    return p;
}

RigidGauge::RigidGauge(int nodes) : nodes_(nodes), jac_(Matrix::Zero(2, 2 * nodes)) {
    if (nodes < 1) throw PreconditionError("RigidGauge: need at least one node");
    for (int i = 0; i < nodes; ++i) {
        jac_(0, 2 * i) = 1.0 / nodes;
        jac_(1, 2 * i + 1) = 1.0 / nodes;
    }
}

RigidGauge::RigidGauge(int nodes, Coord rotation_reference) : RigidGauge(nodes) {
    if (rotation_reference.size() != 2 * nodes)
        throw PreconditionError("RigidGauge: rotation reference has wrong dimension");
    fix_rotation_ = true;
    const Eigen::Vector2d mean =
        rotation_reference.reshaped(2, nodes).rowwise().mean();
    Matrix jac(3, 2 * nodes);
    jac.topRows(2) = jac_;
    for (int i = 0; i < nodes; ++i) {
        const double rx = rotation_reference[2 * i] - mean.x();
        const double ry = rotation_reference[2 * i + 1] - mean.y();
        // r ^ v = rx vy - ry vx
        jac(2, 2 * i) = -ry / nodes;
        jac(2, 2 * i + 1) = rx / nodes;
    }
    jac_ = std::move(jac);
}

Coord RigidGauge::value(const Coord& x, const Coord& anchor) const { return jac_ * (x - anchor); }

Matrix RigidGauge::jacobian(const Coord&) const { return jac_; }

Matrix RigidGauge::weighted_hessian(const Coord& x, const Coord&) const {
    return Matrix::Zero(x.size(), x.size());
}

Coord RigidGauge::project(const Coord& x, const Coord& anchor) const {
    // Minimum-norm correction onto the affine set jac (x - anchor) = 0.
    const Matrix gram = jac_ * jac_.transpose();
    const Coord lambda = gram.ldlt().solve(value(x, anchor));
    return x - jac_.transpose() * lambda;
}

}  // namespace dgc

#include "dgc/models/sdf.hpp"

#include "dgc/models/flat.hpp"

#include <cmath>

namespace dgc {

UnitSphereSdf::UnitSphereSdf(Eigen::Index ambient_dim) : n_(ambient_dim) {
    if (ambient_dim < 2) throw PreconditionError("unit sphere needs ambient dimension >= 2");
}

double UnitSphereSdf::d(const Coord& x) const { return x.norm() - 1.0; }

Coord UnitSphereSdf::grad_d(const Coord& x) const {
    const double r = x.norm();
    if (r < 1e-12) throw DomainError("unit sphere SDF: gradient undefined at the center");
    return x / r;
}

Matrix UnitSphereSdf::hess_d(const Coord& x) const {
    const double r = x.norm();
    if (r < 1e-12) throw DomainError("unit sphere SDF: Hessian undefined at the center");
    const Coord u = x / r;
    return (Matrix::Identity(n_, n_) - u * u.transpose()) / r;
}

EllipsoidSdf::EllipsoidSdf(Coord semi_axes) : axes_(std::move(semi_axes)) {
    if (axes_.size() < 2 || (axes_.array() <= 0.0).any())
        throw PreconditionError("ellipsoid needs positive semi-axes");
}

// Closest point y_i = x_i a_i^2 / (a_i^2 + t) with t the root of
// f(t) = sum_i a_i^2 x_i^2 / (a_i^2 + t)^2 - 1 in (-min a_i^2, inf).
double EllipsoidSdf::multiplier(const Coord& x) const {
    const Coord a2 = axes_.array().square();
    const double lower = -a2.minCoeff();
    auto f = [&](double t) {
        return (a2.array() * x.array().square() / (a2.array() + t).square()).sum() - 1.0;
    };
    auto df = [&](double t) {
        return (-2.0 * a2.array() * x.array().square() / (a2.array() + t).cube()).sum();
    };
    double t = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double ft = f(t);
        if (std::abs(ft) < 1e-15) break;
        const double dft = df(t);
        double next = dft != 0.0 ? t - ft / dft : t;
        // Damping: stay strictly inside the admissible interval.
        if (!(next > lower)) next = 0.5 * (t + lower);
        if (std::abs(next - t) <= 1e-16 * (1.0 + std::abs(t))) {
            t = next;
            break;
        }
        t = next;
    }
    return t;
}

Coord EllipsoidSdf::closest_point(const Coord& x) const {
    if (x.size() != axes_.size()) throw DomainError("ellipsoid SDF: dimension mismatch");
    const double t = multiplier(x);
    const Coord a2 = axes_.array().square();
    return (x.array() * a2.array() / (a2.array() + t)).matrix();
}

double EllipsoidSdf::d(const Coord& x) const {
    const double t = multiplier(x);
    const Coord a2 = axes_.array().square();
    const Coord y = (x.array() * a2.array() / (a2.array() + t)).matrix();
    const double dist = (x - y).norm();
    return t >= 0.0 ? dist : -dist;
}

Coord EllipsoidSdf::grad_d(const Coord& x) const {
    const Coord y = closest_point(x);
    const Coord n = (y.array() / axes_.array().square()).matrix();
    const double len = n.norm();
    if (len < 1e-300) throw DomainError("ellipsoid SDF: degenerate normal");
    return n / len;
}

SpringModel sdf_spring_model(ConstraintModelPtr surface, Eigen::Index ambient_dim) {
    if (!surface) throw PreconditionError("sdf_spring_model: null surface");
    return SpringModel{flat_energy(ambient_dim), std::move(surface)};
}

}  // namespace dgc

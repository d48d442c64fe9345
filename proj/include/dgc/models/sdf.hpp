#pragma once

#include "dgc/constraint.hpp"

namespace dgc {

/// Unit sphere S^{n-1} in R^n: d(x) = |x| - 1. n = 2 gives the unit circle.
class UnitSphereSdf final : public ConstraintModel {
public:
    explicit UnitSphereSdf(Eigen::Index ambient_dim);

    double d(const Coord& x) const override;
    Coord grad_d(const Coord& x) const override;
    Matrix hess_d(const Coord& x) const override;

private:
    Eigen::Index n_;
};

/// Axis-aligned ellipsoid sum_i x_i^2 / a_i^2 = 1. The signed distance is
/// evaluated through the closest point, found by a damped Newton iteration on
/// the standard one-dimensional multiplier equation; the gradient is the unit
/// normal at that closest point.
class EllipsoidSdf final : public ConstraintModel {
public:
    explicit EllipsoidSdf(Coord semi_axes);

    double d(const Coord& x) const override;
    Coord grad_d(const Coord& x) const override;

    Coord closest_point(const Coord& x) const;

private:
    double multiplier(const Coord& x) const;

    Coord axes_;
};

struct SpringModel {
    EnergyPtr energy;
    ConstraintModelPtr constraint;

    Space space() const { return Space(energy, constraint); }
};

/// Spring energy W[x, x~] = |x~ - x|^2 in the ambient space, with the surface
/// as level-set constraint.
SpringModel sdf_spring_model(ConstraintModelPtr surface, Eigen::Index ambient_dim);

}  // namespace dgc

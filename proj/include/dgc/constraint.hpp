#pragma once

#include "dgc/energy_model.hpp"

#include <memory>

namespace dgc {

/// Per-point equality constraint c(x; anchor) = 0 with m rows, imposed on the
/// free points of a geodesic solve through Lagrange multipliers. The anchor is
/// the point's linear initial guess; level-set constraints ignore it, gauge
/// constraints pin an affine functional of x to its anchor value.
class PointConstraint {
public:
    virtual ~PointConstraint() = default;

    virtual Eigen::Index rows() const = 0;
    virtual Coord value(const Coord& x, const Coord& anchor) const = 0;
    /// m x d Jacobian of value() in x.
    virtual Matrix jacobian(const Coord& x) const = 0;
    /// sum_i multipliers_i * Hessian(c_i)(x), d x d.
    virtual Matrix weighted_hessian(const Coord& x, const Coord& multipliers) const = 0;
    /// Moves x onto the constraint set (nearest-point projection or shift).
    virtual Coord project(const Coord& x, const Coord& anchor) const = 0;
    /// Whether value() depends on the anchor (endpoint checks are skipped if so).
    virtual bool anchored() const = 0;
};

using ConstraintPtr = std::shared_ptr<const PointConstraint>;

/// Level-set description of an embedded hypersurface M = {d = 0}, with d a
/// (local) signed distance.
class ConstraintModel : public PointConstraint {
public:
    virtual double d(const Coord& x) const = 0;
    virtual Coord grad_d(const Coord& x) const = 0;
    /// Defaults to central differences of grad_d.
    virtual Matrix hess_d(const Coord& x) const;

    Eigen::Index rows() const final { return 1; }
    Coord value(const Coord& x, const Coord& anchor) const final;
    Matrix jacobian(const Coord& x) const final;
    Matrix weighted_hessian(const Coord& x, const Coord& multipliers) const final;
    /// Newton iteration x <- x - d(x) grad_d / |grad_d|^2.
    Coord project(const Coord& x, const Coord& anchor) const final;
    bool anchored() const final { return false; }
};

using ConstraintModelPtr = std::shared_ptr<const ConstraintModel>;

/// Rigid-motion gauge for translation-invariant energies on flattened planar
/// node arrays. Pins the node average of x to that of the anchor and, when a
/// rotation reference curve r is given, also the angular momentum
/// sum_i (r_i - mean r) ^ (x_i - anchor_i) to zero.
class RigidGauge final : public PointConstraint {
public:
    explicit RigidGauge(int nodes);
    RigidGauge(int nodes, Coord rotation_reference);

    Eigen::Index rows() const override { return fix_rotation_ ? 3 : 2; }
    Coord value(const Coord& x, const Coord& anchor) const override;
    Matrix jacobian(const Coord& x) const override;
    Matrix weighted_hessian(const Coord& x, const Coord& multipliers) const override;
    Coord project(const Coord& x, const Coord& anchor) const override;
    bool anchored() const override { return true; }

private:
    int nodes_;
    bool fix_rotation_ = false;
    Matrix jac_;
};

/// An energy together with an optional constraint on its points. All
/// geodesic-calculus operators act on a Space.
struct Space {
    EnergyPtr energy;
    ConstraintPtr constraint;

    Space() = default;
    Space(EnergyPtr e, ConstraintPtr c = nullptr) : energy(std::move(e)), constraint(std::move(c)) {}

    const EnergyModel& model() const { return *energy; }
    bool constrained() const { return static_cast<bool>(constraint); }
};

}  // namespace dgc

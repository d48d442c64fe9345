#pragma once

#include "dgc/types.hpp"

#include <memory>
#include <optional>

namespace dgc {

/// Deformation energy W[x, x~] approximating the squared Riemannian distance
/// to third order, together with its first and second partial derivatives.
///
/// Derivative conventions (d = dim()):
///   grad1 = dW/dx,  grad2 = dW/dx~
///   hess11(i,j) = d2W/dx_i dx_j
///   hess12(i,j) = d2W/dx_i dx~_j
///   hess21(i,j) = d2W/dx~_i dx_j   (= hess12^T)
///   hess22(i,j) = d2W/dx~_i dx~_j
///
/// Implementations are immutable; every member is safe to call concurrently.
class EnergyModel {
public:
    virtual ~EnergyModel() = default;

    virtual Eigen::Index dim() const = 0;
    virtual std::string name() const = 0;
    virtual bool symmetric() const = 0;
    virtual bool derivatives_analytic() const = 0;

    /// Throws DomainError if x is not admissible.
    virtual void check_admissible(const Coord& x) const;

    virtual double w(const Coord& x, const Coord& y) const = 0;
    virtual Coord grad1(const Coord& x, const Coord& y) const = 0;
    virtual Coord grad2(const Coord& x, const Coord& y) const = 0;
    virtual Matrix hess11(const Coord& x, const Coord& y) const = 0;
    virtual Matrix hess12(const Coord& x, const Coord& y) const = 0;
    virtual Matrix hess22(const Coord& x, const Coord& y) const = 0;
    virtual Matrix hess21(const Coord& x, const Coord& y) const { return hess12(x, y).transpose(); }

    /// Independently assembled metric g_x, when the model knows one. Used by
    /// the consistency checker as the reference for W_,22[x,x] = 2 g_x.
    virtual std::optional<Matrix> reference_metric(const Coord& /*x*/) const { return std::nullopt; }
};

using EnergyPtr = std::shared_ptr<const EnergyModel>;

/// g_x = 1/2 W_,22[x,x], symmetrized.
Matrix metric_from_energy(const EnergyModel& model, const Coord& x);

/// Throws EvaluationError naming the first non-finite entry.
void require_finite(const Matrix& m, const char* what);
void require_finite(const Coord& v, const char* what);

}  // namespace dgc

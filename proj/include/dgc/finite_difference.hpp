#pragma once

#include "dgc/energy_model.hpp"

#include <memory>
#include <string>

namespace dgc {

/// Central finite-difference scheme.
struct FdScheme {
    double step = 1e-5;  // gradients, and Hessians from gradients
    /// 2: three-point stencil; 4: five-point stencil. Rod Hessians reach
    /// |entries| ~ 1e4 at N = 64, where the O(h^2) truncation of the
    /// three-point stencil alone is ~1e-5.
    int order = 4;
    /// Step of the four-point stencil used when only W is available. Second
    /// differences of W lose about eps |W| / h^2 to round-off, so this is
    /// larger than `step`.
    double w_hessian_step = 1e-4;

    void validate() const;
};

/// A deformation energy that only knows W, and optionally its gradients.
/// fd_derivatives() turns it into a full EnergyModel.
class EnergyFunction {
public:
    virtual ~EnergyFunction() = default;

    virtual Eigen::Index dim() const = 0;
    virtual std::string name() const = 0;
    virtual bool symmetric() const = 0;
    virtual void check_admissible(const Coord& x) const;

    virtual double w(const Coord& x, const Coord& y) const = 0;

    virtual bool has_gradients() const { return false; }
    virtual Coord grad1(const Coord& x, const Coord& y) const;
    virtual Coord grad2(const Coord& x, const Coord& y) const;

    virtual std::optional<Matrix> reference_metric(const Coord& /*x*/) const { return std::nullopt; }
};

using EnergyFunctionPtr = std::shared_ptr<const EnergyFunction>;

/// Wraps `function` into an EnergyModel. Gradients are taken from the function
/// when it has them, otherwise by central differences of W. Hessian blocks are
/// central differences of the gradients (or a four-point stencil on W).
EnergyPtr fd_derivatives(EnergyFunctionPtr function, FdScheme scheme = {});

/// Exposes just W of a full model, for comparing analytic against FD routes.
EnergyFunctionPtr w_only(EnergyPtr model);

}  // namespace dgc

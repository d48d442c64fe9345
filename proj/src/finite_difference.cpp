#include "dgc/finite_difference.hpp"

#include <array>

namespace dgc {

void FdScheme::validate() const {
    if (!(step >= 1e-8 && step <= 1e-2))
        throw PreconditionError("finite-difference step must lie in [1e-8, 1e-2]");
    if (!(w_hessian_step >= 1e-8 && w_hessian_step <= 1e-2))
        throw PreconditionError("finite-difference w_hessian_step must lie in [1e-8, 1e-2]");
    if (order != 2 && order != 4) throw PreconditionError("finite-difference order must be 2 or 4");
}

void EnergyFunction::check_admissible(const Coord& x) const {
    if (x.size() != dim())
        throw DomainError(name() + ": expected dimension " + std::to_string(dim()) + ", got " +
                          std::to_string(x.size()));
    if (!x.allFinite()) throw DomainError(name() + ": non-finite coordinate");
}

Coord EnergyFunction::grad1(const Coord&, const Coord&) const {
    throw Error(name() + ": no analytic gradient");
}

Coord EnergyFunction::grad2(const Coord&, const Coord&) const {
    throw Error(name() + ": no analytic gradient");
}

namespace {

// Central difference of f(t) at t = 0, of the requested order.
template <class F>
auto central(F&& f, double h, int order) {
    if (order == 2) return ((f(h) - f(-h)) / (2.0 * h)).eval();
    return ((8.0 * (f(h) - f(-h)) - (f(2.0 * h) - f(-2.0 * h))) / (12.0 * h)).eval();
}

class FiniteDifferenceModel final : public EnergyModel {
public:
    FiniteDifferenceModel(EnergyFunctionPtr f, FdScheme scheme)
        : f_(std::move(f)), h_(scheme.step), hw_(scheme.w_hessian_step), order_(scheme.order) {
        scheme.validate();
    }

    Eigen::Index dim() const override { return f_->dim(); }
    std::string name() const override { return f_->name(); }
    bool symmetric() const override { return f_->symmetric(); }
    bool derivatives_analytic() const override { return false; }
    void check_admissible(const Coord& x) const override { f_->check_admissible(x); }
    std::optional<Matrix> reference_metric(const Coord& x) const override { return f_->reference_metric(x); }

    double w(const Coord& x, const Coord& y) const override { return f_->w(x, y); }

    Coord grad1(const Coord& x, const Coord& y) const override {
        Coord g = raw_grad1(x, y);
        require_finite(g, "grad1");
        return g;
    }

    Coord grad2(const Coord& x, const Coord& y) const override {
        Coord g = raw_grad2(x, y);
        require_finite(g, "grad2");
        return g;
    }

    Matrix hess11(const Coord& x, const Coord& y) const override { return checked(block(x, y, 0, 0), "hess11"); }
    Matrix hess12(const Coord& x, const Coord& y) const override { return checked(block(x, y, 0, 1), "hess12"); }
    Matrix hess22(const Coord& x, const Coord& y) const override { return checked(block(x, y, 1, 1), "hess22"); }

private:
    static Matrix checked(Matrix m, const char* what) {
        require_finite(m, what);
        return m;
    }

    Coord raw_grad1(const Coord& x, const Coord& y) const {
        if (f_->has_gradients()) return f_->grad1(x, y);
        Coord g(x.size());
        Coord xp = x;
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            g[i] = central(
                [&](double t) {
                    xp[i] = x[i] + t;
                    const double v = f_->w(xp, y);
                    xp[i] = x[i];
                    return Eigen::Matrix<double, 1, 1>(v);
                },
                h_, order_)(0);
        }
        return g;
    }

    Coord raw_grad2(const Coord& x, const Coord& y) const {
        if (f_->has_gradients()) return f_->grad2(x, y);
        Coord g(y.size());
        Coord yp = y;
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            g[i] = central(
                [&](double t) {
                    yp[i] = y[i] + t;
                    const double v = f_->w(x, yp);
                    yp[i] = y[i];
                    return Eigen::Matrix<double, 1, 1>(v);
                },
                h_, order_)(0);
        }
        return g;
    }

    // Hessian block d2W / d(arg a)_i d(arg b)_j, arguments numbered 0 (x) and 1 (y).
    Matrix block(const Coord& x, const Coord& y, int a, int b) const {
        const Eigen::Index d = x.size();
        Matrix out(d, d);
        std::array<Coord, 2> args{x, y};
        if (f_->has_gradients()) {
            // Column j: central difference of grad_a along coordinate j of argument b.
            auto grad = [&](const std::array<Coord, 2>& z) {
                return a == 0 ? f_->grad1(z[0], z[1]) : f_->grad2(z[0], z[1]);
            };
            for (Eigen::Index j = 0; j < d; ++j) {
                const double orig = args[b][j];
                out.col(j) = central(
                    [&](double t) {
                        args[b][j] = orig + t;
                        Coord g = grad(args);
                        args[b][j] = orig;
                        return g;
                    },
                    h_, order_);
            }
            if (a == b) out = 0.5 * (out + out.transpose()).eval();
            return out;
        }
        auto eval = [&](Eigen::Index i, double si, Eigen::Index j, double sj) {
            std::array<Coord, 2> z = args;
            z[a][i] += si * hw_;
            z[b][j] += sj * hw_;
            return f_->w(z[0], z[1]);
        };
        for (Eigen::Index i = 0; i < d; ++i) {
            const Eigen::Index j0 = a == b ? i : 0;
            for (Eigen::Index j = j0; j < d; ++j) {
                const double v = (eval(i, 1, j, 1) - eval(i, 1, j, -1) - eval(i, -1, j, 1) +
                                  eval(i, -1, j, -1)) /
                                 (4.0 * hw_ * hw_);
                out(i, j) = v;
                if (a == b) out(j, i) = v;
            }
        }
        return out;
    }

    EnergyFunctionPtr f_;
    double h_;
    double hw_;
    int order_;
};

class WOnlyView final : public EnergyFunction {
public:
    explicit WOnlyView(EnergyPtr m) : m_(std::move(m)) {}
    Eigen::Index dim() const override { return m_->dim(); }
    std::string name() const override { return m_->name() + " (W only)"; }
    bool symmetric() const override { return m_->symmetric(); }
    void check_admissible(const Coord& x) const override { m_->check_admissible(x); }
    double w(const Coord& x, const Coord& y) const override { return m_->w(x, y); }
    std::optional<Matrix> reference_metric(const Coord& x) const override { return m_->reference_metric(x); }

private:
    EnergyPtr m_;
};

}  // namespace

EnergyPtr fd_derivatives(EnergyFunctionPtr function, FdScheme scheme) {
    if (!function) throw PreconditionError("fd_derivatives: null energy function");
    return std::make_shared<FiniteDifferenceModel>(std::move(function), scheme);
}

EnergyFunctionPtr w_only(EnergyPtr model) { return std::make_shared<WOnlyView>(std::move(model)); }

}  // namespace dgc

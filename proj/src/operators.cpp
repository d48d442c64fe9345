#include "dgc/operators.hpp"

#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <ostream>
#include <string>

namespace dgc {

void OpConfig::validate() const {
    inner.validate();
    if (!(fixed_point_tol > 0.0)) throw PreconditionError("fixed_point_tol must be positive");
    if (max_fixed_point_iter < 1) throw PreconditionError("max_fixed_point_iter must be at least 1");
}

namespace {

// Dense Newton iteration for the small two-point problems. residual(z) and
// jacobian(z) describe F(z) = 0; stops at sup|F| <= tol.
Coord newton_dense(const std::function<Coord(const Coord&)>& residual,
                   const std::function<Matrix(const Coord&)>& jacobian, Coord z, const SolverConfig& cfg,
                   const std::string& what) {
    Coord f = residual(z);
    double res = f.cwiseAbs().maxCoeff();
    for (int it = 0; it < cfg.max_iter && res > cfg.newton_tol; ++it) {
        Eigen::FullPivLU<Matrix> lu(jacobian(z));
        if (!lu.isInvertible()) throw LinearAlgebraError(what + ": singular Jacobian");
        const Coord step = lu.solve(-f);
        if (cfg.damping == Damping::none) {
            z += step;
            f = residual(z);
        } else {
            const double phi0 = 0.5 * f.squaredNorm();
            double alpha = 1.0;
            bool accepted = false;
            for (int ls = 0; ls < 40 && !accepted; ++ls, alpha *= 0.5) {
                const Coord trial = z + alpha * step;
                Coord ft;
                try {
                    ft = residual(trial);
                } catch (const DomainError&) {
                    continue;
                }
                if (ft.allFinite() && 0.5 * ft.squaredNorm() <= (1.0 - 2e-4 * alpha) * phi0) {
                    z = trial;
                    f = std::move(ft);
                    accepted = true;
                }
            }
            if (!accepted) break;
        }
        if (!f.allFinite()) throw ConvergenceError(what + ": residual became non-finite", res);
        res = f.cwiseAbs().maxCoeff();
    }
    if (!(res <= cfg.newton_tol))
        throw ConvergenceError(what + ": Newton did not converge (residual " + std::to_string(res) + ")", res);
    return z;
}

Eigen::Index constraint_rows(const Space& space) {
    return space.constraint ? space.constraint->rows() : 0;
}

const ConstraintModel* level_set(const Space& space) {
    return dynamic_cast<const ConstraintModel*>(space.constraint.get());
}

void require_on_level_set(const Space& space, const Coord& x, const char* what) {
    if (const auto* ls = level_set(space); ls && std::abs(ls->d(x)) > 1e-8)
        throw PreconditionError(std::string(what) + " is not on the constraint level set");
}

// Solves W_,2[a, b] + W_,1[b, c] = J(b)^T mu, c(unknown) = 0 for either the
// last point c (forward, exp2) or the first point a (backward rung completion).
enum class Unknown { first, last };

Coord solve_three_point(const Coord& a, const Coord& b, const Coord& c, Unknown which, const Coord& anchor,
                        const Space& space, const SolverConfig& cfg, const std::string& what) {
    const EnergyModel& model = space.model();
    const Eigen::Index d = a.size();
    const Eigen::Index m = constraint_rows(space);
    const PointConstraint* constraint = space.constraint.get();
    const Matrix jb = m > 0 ? constraint->jacobian(b) : Matrix(0, d);

    auto point = [&](const Coord& z) -> Coord { return z.head(d); };
    auto residual = [&](const Coord& z) {
        const Coord u = point(z);
        const Coord& first = which == Unknown::first ? u : a;
        const Coord& last = which == Unknown::last ? u : c;
        Coord f(d + m);
        f.head(d) = model.grad2(first, b) + model.grad1(b, last);
        if (m > 0) {
            f.head(d) -= jb.transpose() * z.tail(m);
            f.tail(m) = constraint->value(u, anchor);
        }
        return f;
    };
    auto jacobian = [&](const Coord& z) {
        const Coord u = point(z);
        Matrix jac = Matrix::Zero(d + m, d + m);
        jac.topLeftCorner(d, d) = which == Unknown::last ? model.hess12(b, u) : model.hess21(u, b);
        if (m > 0) {
            jac.topRightCorner(d, m) = -jb.transpose();
            jac.bottomLeftCorner(m, d) = constraint->jacobian(u);
        }
        return jac;
    };

    Coord z = Coord::Zero(d + m);
    Coord guess = which == Unknown::last ? c : a;
    if (constraint) guess = constraint->project(guess, anchor);
    z.head(d) = guess;
    return point(newton_dense(residual, jacobian, z, cfg, what));
}

}  // namespace

Coord discrete_log(const Coord& xa, const Coord& xb, int steps, const Space& space, const OpConfig& cfg) {
    cfg.validate();
    if (steps < 1) throw PreconditionError("K must be at least 1");
    if (steps == 1) return xb - xa;
    const GeodesicResult r = solve_geodesic(xa, xb, steps, space, cfg.inner);
    if (!r.converged)
        throw ConvergenceError("discrete_log: geodesic solve failed (K=" + std::to_string(steps) +
                                   ", residual " + std::to_string(r.residual) + ")",
                               r.residual);
    return r.path[1] - r.path[0];
}

Coord log2(const Coord& x0, const Coord& x2, const Space& space, const OpConfig& cfg) {
    if ((x2 - x0).cwiseAbs().maxCoeff() == 0.0) return Coord::Zero(x0.size());
    return discrete_log(x0, x2, 2, space, cfg);
}

Coord exp2(const Coord& x, const Coord& zeta, const Space& space, const OpConfig& cfg) {
    cfg.validate();
    const EnergyModel& model = space.model();
    model.check_admissible(x);
    if (x.size() != zeta.size()) throw PreconditionError("exp2: dimension mismatch");
    const Coord x1 = x + zeta;
    require_on_level_set(space, x1, "exp2: x + zeta");
    if (zeta.cwiseAbs().maxCoeff() == 0.0) return x;
    const Coord anchor = x + 2.0 * zeta;

    if (cfg.method == Exp2Method::newton)
        return solve_three_point(x, x1, anchor, Unknown::last, anchor, space, cfg.inner, "exp2");

    // Fixed-point map T(x_2) = x_2 + zeta - log2(x, x_2).
    Coord x2 = space.constraint ? space.constraint->project(anchor, anchor) : anchor;
    double step = std::numeric_limits<double>::infinity();
    for (int it = 0; it < cfg.max_fixed_point_iter; ++it) {
        Coord next = x2 + zeta - log2(x, x2, space, cfg);
        if (space.constraint) next = space.constraint->project(next, anchor);
        step = (next - x2).norm();
        x2 = std::move(next);
        if (step < cfg.fixed_point_tol) return x2;
    }
    throw ConvergenceError("exp2: fixed-point iteration did not converge (last step " + std::to_string(step) + ")",
                           step);
}

Coord exp2_hypersurface(const Coord& x, const Coord& zeta, const ConstraintModel& surface, const OpConfig& cfg) {
    cfg.validate();
    const Coord x1 = x + zeta;
    if (std::abs(surface.d(x1)) > 1e-8) throw PreconditionError("exp2_hypersurface: x + zeta is off the surface");
    const Coord n = surface.grad_d(x1).normalized();
    const Coord base = x1 + zeta;
    double s = 0.0;
    double res = std::abs(surface.d(base));
    for (int it = 0; it < cfg.inner.max_iter && res > cfg.inner.newton_tol; ++it) {
        const Coord x2 = base - s * n;
        const double slope = -surface.grad_d(x2).dot(n);
        if (slope == 0.0) throw LinearAlgebraError("exp2_hypersurface: search line tangent to the surface");
        s -= surface.d(x2) / slope;
        res = std::abs(surface.d(base - s * n));
    }
    if (!(res <= cfg.inner.newton_tol))
        throw ConvergenceError("exp2_hypersurface: line search did not converge", res);
    return base - s * n;
}

DiscretePath discrete_exp_path(const Coord& x, const Coord& zeta, int k, const Space& space, const OpConfig& cfg) {
    if (k < 1) throw PreconditionError("discrete_exp_path needs k >= 1");
    std::vector<Coord> pts{x, x + zeta};
    for (int j = 2; j <= k; ++j) {
        const Coord& prev = pts[pts.size() - 2];
        const Coord& cur = pts.back();
        try {
            pts.push_back(exp2(prev, cur - prev, space, cfg));
        } catch (const ConvergenceError& e) {
            throw ConvergenceError("discrete_exp: step " + std::to_string(j) + ": " + e.what(), e.last_residual);
        } catch (const Error& e) {
            throw Error("discrete_exp: step " + std::to_string(j) + ": " + e.what());
        }
    }
    return DiscretePath(std::move(pts));
}

Coord discrete_exp(const Coord& x, const Coord& zeta, int k, const Space& space, const OpConfig& cfg) {
    if (k < 0) throw PreconditionError("discrete_exp needs k >= 0");
    if (k == 0) return x;
    if (k == 1) return x + zeta;
    // Only the two trailing points are needed.
    Coord prev = x;
    Coord cur = x + zeta;
    for (int j = 2; j <= k; ++j) {
        Coord next;
        try {
            next = exp2(prev, cur - prev, space, cfg);
        } catch (const ConvergenceError& e) {
            throw ConvergenceError("discrete_exp: step " + std::to_string(j) + ": " + e.what(), e.last_residual);
        } catch (const Error& e) {
            throw Error("discrete_exp: step " + std::to_string(j) + ": " + e.what());
        }
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

TransportStep transport_step(const Coord& x_prev, const Coord& x_next, const Coord& zeta_prev, const Space& space,
                             const OpConfig& cfg) {
    TransportStep step;
    step.x_p_prev = x_prev + zeta_prev;
    try {
        step.x_c = step.x_p_prev + log2(step.x_p_prev, x_next, space, cfg);
    } catch (const ConvergenceError& e) {
        throw ConvergenceError(std::string("rung-midpoint: ") + e.what(), e.last_residual);
    }
    try {
        step.x_p = exp2(x_prev, step.x_c - x_prev, space, cfg);
    } catch (const ConvergenceError& e) {
        throw ConvergenceError(std::string("rung-completion: ") + e.what(), e.last_residual);
    }
    step.zeta = step.x_p - x_next;
    return step;
}

TransportResult parallel_transport(const DiscretePath& path, const Coord& zeta0, const Space& space,
                                   const OpConfig& cfg) {
    TransportResult out;
    out.zeta = zeta0;
    for (int k = 1; k <= path.steps(); ++k) {
        try {
            TransportStep s = transport_step(path[k - 1], path[k], out.zeta, space, cfg);
            out.zeta = s.zeta;
            out.trace.push_back(std::move(s));
        } catch (const ConvergenceError& e) {
            throw ConvergenceError("transport step k=" + std::to_string(k) + ": " + e.what(), e.last_residual);
        }
    }
    return out;
}

Coord inverse_transport(const DiscretePath& path, const Coord& zetaK, const Space& space, const OpConfig& cfg) {
    cfg.validate();
    Coord zeta = zetaK;
    for (int k = path.steps(); k >= 1; --k) {
        const Coord& x_prev = path[k - 1];
        const Coord& x_next = path[k];
        try {
            // Second rung equation fixes the midpoint from x_prev and x_k + zeta_k.
            const Coord x_c = x_prev + log2(x_prev, x_next + zeta, space, cfg);
            // First rung equation: W_,2[x_prev + zeta_prev, x_c] + W_,1[x_c, x_k] = 0.
            const Coord guess = 2.0 * x_c - x_next;
            const Coord p = solve_three_point(guess, x_c, x_next, Unknown::first, guess, space, cfg.inner,
                                              "inverse rung");
            zeta = p - x_prev;
        } catch (const ConvergenceError& e) {
            throw ConvergenceError("inverse transport step k=" + std::to_string(k) + ": " + e.what(),
                                   e.last_residual);
        }
    }
    return zeta;
}

Coord discrete_connection(const Coord& x, const Coord& xi, const Coord& eta0, const Coord& eta1, const Space& space,
                          const OpConfig& cfg) {
    const DiscretePath rung({x, Coord(x + xi)});
    return inverse_transport(rung, eta1, space, cfg) - eta0;
}

void write_trace_csv(const TransportTrace& trace, std::ostream& out) {
    const Eigen::Index d = trace.empty() ? 0 : trace.front().zeta.size();
    out << "k";
    for (const char* name : {"x_c", "x_p", "zeta"})
        for (Eigen::Index i = 0; i < d; ++i) out << ',' << name << '_' << i;
    out << '\n' << std::setprecision(17);
    for (std::size_t k = 0; k < trace.size(); ++k) {
        out << k + 1;
        for (const Coord* v : {&trace[k].x_c, &trace[k].x_p, &trace[k].zeta})
            for (Eigen::Index i = 0; i < d; ++i) out << ',' << (*v)[i];
        out << '\n';
    }
}

}  // namespace dgc

#include "dgc/geodesic.hpp"

#include "dgc/block_tridiagonal.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace dgc {

void SolverConfig::validate() const {
    if (!(newton_tol > 0.0)) throw PreconditionError("newton_tol must be positive");
    if (max_iter < 1) throw PreconditionError("max_iter must be at least 1");
    if (init == Init::provided && !initial_path) throw PreconditionError("init=provided needs an initial path");
}

namespace {

double segment_w(const DiscretePath& path, const EnergyModel& model, int k) {
    try {
        return model.w(path[k - 1], path[k]);
    } catch (const DomainError& e) {
        throw DomainError("segment k=" + std::to_string(k) + ": " + e.what());
    }
}

}  // namespace

double discrete_energy(const DiscretePath& path, const EnergyModel& model) {
    const int K = path.steps();
    double sum = 0.0;
    for (int k = 1; k <= K; ++k) sum += segment_w(path, model, k);
    return K * sum;
}

double discrete_length(const DiscretePath& path, const EnergyModel& model) {
    double sum = 0.0;
    for (int k = 1; k <= path.steps(); ++k) {
        const double w = segment_w(path, model, k);
        if (w < 0.0)
            throw InvariantViolation(model.name() + ": negative W=" + std::to_string(w) + " on segment k=" +
                                     std::to_string(k));
        sum += std::sqrt(w);
    }
    return sum;
}

std::vector<Coord> el_residual(const DiscretePath& path, const EnergyModel& model) {
    const int K = path.steps();
    if (K < 2) throw PreconditionError("el_residual needs K >= 2");
    std::vector<Coord> r;
    r.reserve(static_cast<std::size_t>(K - 1));
    for (int k = 1; k < K; ++k) r.push_back(model.grad2(path[k - 1], path[k]) + model.grad1(path[k], path[k + 1]));
    return r;
}

double sup_norm(const std::vector<Coord>& residual) {
    double s = 0.0;
    for (const auto& v : residual)
        if (v.size() > 0) s = std::max(s, v.cwiseAbs().maxCoeff());
    return s;
}

namespace {

// Newton iteration on the (optionally constrained) Euler-Lagrange system of the
// interior points. Unknown block k (k = 1..K-1) is (x_k, lambda_k).
class GeodesicNewton {
public:
    GeodesicNewton(const Space& space, int steps, std::vector<Coord> anchors)
        : model_(space.model()),
          constraint_(space.constraint.get()),
          K_(steps),
          anchors_(std::move(anchors)),
          m_(constraint_ ? constraint_->rows() : 0) {}

    Eigen::Index multiplier_rows() const { return m_; }

    std::vector<Coord> residual(const DiscretePath& path, const std::vector<Coord>& lambda) const {
        std::vector<Coord> out(static_cast<std::size_t>(K_ - 1));
        for (int k = 1; k < K_; ++k) {
            const Coord r = model_.grad2(path[k - 1], path[k]) + model_.grad1(path[k], path[k + 1]);
            Coord f(r.size() + m_);
            f.head(r.size()) = r;
            if (m_ > 0) {
                const auto idx = static_cast<std::size_t>(k - 1);
                f.head(r.size()) -= constraint_->jacobian(path[k]).transpose() * lambda[idx];
                f.tail(m_) = constraint_->value(path[k], anchors_[idx]);
            }
            require_finite(f, "Euler-Lagrange residual");
            out[static_cast<std::size_t>(k - 1)] = std::move(f);
        }
        return out;
    }

    BlockTridiagonal jacobian(const DiscretePath& path, const std::vector<Coord>& lambda) const {
        const auto n = static_cast<std::size_t>(K_ - 1);
        const Eigen::Index d = path.dim();
        const Eigen::Index b = d + m_;
        BlockTridiagonal sys(n);
        for (std::size_t i = 0; i < n; ++i) {
            const int k = static_cast<int>(i) + 1;
            Matrix diag = Matrix::Zero(b, b);
            diag.topLeftCorner(d, d) = model_.hess22(path[k - 1], path[k]) + model_.hess11(path[k], path[k + 1]);
            if (m_ > 0) {
                const Matrix J = constraint_->jacobian(path[k]);
                diag.topLeftCorner(d, d) -= constraint_->weighted_hessian(path[k], lambda[i]);
                diag.topRightCorner(d, m_) = -J.transpose();
                diag.bottomLeftCorner(m_, d) = J;
            }
            sys.diag[i] = std::move(diag);
            if (i > 0) {
                sys.lower[i] = Matrix::Zero(b, b);
                sys.lower[i].topLeftCorner(d, d) = model_.hess21(path[k - 1], path[k]);
            }
            if (i + 1 < n) {
                sys.upper[i] = Matrix::Zero(b, b);
                sys.upper[i].topLeftCorner(d, d) = model_.hess12(path[k], path[k + 1]);
            }
        }
        return sys;
    }

private:
    const EnergyModel& model_;
    const PointConstraint* constraint_;
    int K_;
    std::vector<Coord> anchors_;
    Eigen::Index m_;
};

double merit(const std::vector<Coord>& f) {
    double s = 0.0;
    for (const auto& v : f) s += v.squaredNorm();
    return 0.5 * s;
}

}  // namespace

GeodesicResult solve_geodesic(const Coord& xa, const Coord& xb, int steps, const Space& space,
                              const SolverConfig& cfg) {
    cfg.validate();
    if (!space.energy) throw PreconditionError("solve_geodesic: no energy model");
    if (steps < 1) throw PreconditionError("K must be at least 1");
    const EnergyModel& model = space.model();
    model.check_admissible(xa);
    model.check_admissible(xb);

    const DiscretePath linear = DiscretePath::linear(xa, xb, steps);
    std::vector<Coord> anchors;
    for (int k = 1; k < steps; ++k) anchors.push_back(linear[k]);

    DiscretePath path = linear;
    if (cfg.init == Init::provided) {
        path = *cfg.initial_path;
        if (path.steps() != steps || path.dim() != xa.size())
            throw PreconditionError("initial path has the wrong shape");
        path[0] = xa;
        path[steps] = xb;
    } else if (space.constraint) {
        for (int k = 1; k < steps; ++k) path[k] = space.constraint->project(path[k], anchors[k - 1]);
    }

    GeodesicResult result;
    if (steps == 1) {
        result.path = path;
        result.energy = discrete_energy(path, model);
        result.length = discrete_length(path, model);
        result.converged = true;
        return result;
    }

    GeodesicNewton newton(space, steps, anchors);
    const Eigen::Index m = newton.multiplier_rows();
    std::vector<Coord> lambda(static_cast<std::size_t>(steps - 1), Coord::Zero(m));

    double res = 0.0;
    int it = 0;
    try {
        std::vector<Coord> f = newton.residual(path, lambda);
        res = sup_norm(f);
        const Eigen::Index d = xa.size();
        for (; it < cfg.max_iter && res > cfg.newton_tol; ++it) {
            const BlockTridiagonal jac = newton.jacobian(path, lambda);
            std::vector<Coord> rhs(f.size());
            for (std::size_t i = 0; i < f.size(); ++i) rhs[i] = -f[i];
            const std::vector<Coord> delta = solve_block_tridiagonal(jac, rhs);

            auto trial = [&](double alpha, DiscretePath& p, std::vector<Coord>& l) {
                p = path;
                l = lambda;
                for (std::size_t i = 0; i < delta.size(); ++i) {
                    const int k = static_cast<int>(i) + 1;
                    p[k] += alpha * delta[i].head(d);
                    if (m > 0) l[i] += alpha * delta[i].tail(m);
                }
            };

            DiscretePath next_path;
            std::vector<Coord> next_lambda;
            std::vector<Coord> next_f;
            if (cfg.damping == Damping::none) {
                trial(1.0, next_path, next_lambda);
                next_f = newton.residual(next_path, next_lambda);
            } else {
                constexpr double c1 = 1e-4;
                const double phi0 = merit(f);
                double alpha = 1.0;
                bool accepted = false;
                for (int ls = 0; ls < 40 && !accepted; ++ls, alpha *= 0.5) {
                    trial(alpha, next_path, next_lambda);
                    try {
                        next_f = newton.residual(next_path, next_lambda);
                    } catch (const DomainError&) {
                        continue;
                    } catch (const EvaluationError&) {
                        continue;
                    }
                    accepted = merit(next_f) <= (1.0 - 2.0 * c1 * alpha) * phi0;
                }
                if (!accepted) break;
            }
            path = std::move(next_path);
            lambda = std::move(next_lambda);
            f = std::move(next_f);
            res = sup_norm(f);
        }
    } catch (const DomainError&) {
        res = std::numeric_limits<double>::infinity();
    } catch (const EvaluationError&) {
        res = std::numeric_limits<double>::infinity();
    }

    result.path = path;
    result.residual = res;
    result.iterations = it;
    result.converged = std::isfinite(res) && res <= cfg.newton_tol;
    if (result.converged) {
        result.energy = discrete_energy(path, model);
        result.length = discrete_length(path, model);
    } else {
        try {
            result.energy = discrete_energy(path, model);
            result.length = discrete_length(path, model);
        } catch (const Error&) {
            result.energy = result.length = std::numeric_limits<double>::quiet_NaN();
        }
    }
    if (m > 0) {
        for (auto& l : lambda) result.multipliers.push_back(steps * l);
    }
    return result;
}

GeodesicResult solve_geodesic_constrained(const Coord& xa, const Coord& xb, int steps, EnergyPtr model,
                                          ConstraintModelPtr constraint, const SolverConfig& cfg) {
    if (!constraint) throw PreconditionError("solve_geodesic_constrained: no constraint");
    constexpr double on_surface = 1e-10;
    if (std::abs(constraint->d(xa)) > on_surface) throw PreconditionError("x_A is not on the constraint level set");
    if (std::abs(constraint->d(xb)) > on_surface) throw PreconditionError("x_B is not on the constraint level set");
    return solve_geodesic(xa, xb, steps, Space(std::move(model), std::move(constraint)), cfg);
}

void write_path_csv(const DiscretePath& path, std::ostream& out) {
    out << "k";
    for (Eigen::Index i = 0; i < path.dim(); ++i) out << ",x_" << i;
    out << '\n';
    out << std::setprecision(17);
    for (int k = 0; k <= path.steps(); ++k) {
        out << k;
        for (Eigen::Index i = 0; i < path.dim(); ++i) out << ',' << path[k][i];
        out << '\n';
    }
}

DiscretePath read_path_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw PreconditionError("empty path CSV");
    std::vector<Coord> pts;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw PreconditionError("malformed path CSV row: " + line);
        pts.push_back(parse_coord(line.substr(comma + 1)));
    }
    return DiscretePath(std::move(pts));
}

}  // namespace dgc

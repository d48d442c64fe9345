#pragma once

#include "dgc/constraint.hpp"
#include "dgc/energy_model.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace dgc {

enum class Damping { none, armijo };
enum class Init { linear, provided };

struct SolverConfig {
    double newton_tol = 1e-10;  // sup-norm of the Euler-Lagrange residual
    int max_iter = 50;
    Damping damping = Damping::none;
    Init init = Init::linear;
    std::optional<DiscretePath> initial_path;  // required for Init::provided

    void validate() const;
};

struct GeodesicResult {
    DiscretePath path;
    double energy = 0.0;
    double length = 0.0;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
    /// Lagrange multipliers of the interior points (k = 1..K-1), scaled to the
    /// discrete energy K * sum W. Empty for unconstrained solves.
    std::vector<Coord> multipliers;
};

/// E = K * sum_k W[x_{k-1}, x_k].
double discrete_energy(const DiscretePath& path, const EnergyModel& model);

/// L = sum_k sqrt(W[x_{k-1}, x_k]).
double discrete_length(const DiscretePath& path, const EnergyModel& model);

/// r_k = W_,2[x_{k-1}, x_k] + W_,1[x_k, x_{k+1}] for k = 1..K-1.
std::vector<Coord> el_residual(const DiscretePath& path, const EnergyModel& model);

/// Sup-norm over a residual list.
double sup_norm(const std::vector<Coord>& residual);

/// Newton solve of the discrete geodesic boundary-value problem with fixed
/// endpoints. Non-convergence is reported through `converged`, not thrown.
GeodesicResult solve_geodesic(const Coord& xa, const Coord& xb, int steps, const Space& space,
                              const SolverConfig& cfg = {});

/// Geodesic on the zero level set of `constraint`: the KKT system of
/// E - Lambda . D(X) is solved by Newton. Endpoints must satisfy |d| <= 1e-10.
GeodesicResult solve_geodesic_constrained(const Coord& xa, const Coord& xb, int steps, EnergyPtr model,
                                          ConstraintModelPtr constraint, const SolverConfig& cfg = {});

/// CSV with header `k,x_0,...,x_{d-1}` and one row per path point.
void write_path_csv(const DiscretePath& path, std::ostream& out);
DiscretePath read_path_csv(std::istream& in);

}  // namespace dgc

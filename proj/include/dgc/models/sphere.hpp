#pragma once

#include "dgc/energy_model.hpp"

namespace dgc {

// Unit sphere S^2 in the stereographic chart projected from the north pole
// onto the equatorial plane:
//   X(x) = (2 x_1, 2 x_2, |x|^2 - 1) / (1 + |x|^2),   x = (X_1, X_2) / (1 - X_3),
//   g_x(v, w) = 4 v.w / (1 + |x|^2)^2.

namespace sphere_chart {

Eigen::Vector3d embed(const Coord& x);
/// Throws DomainError within 1e-8 of the north pole.
Coord project(const Eigen::Vector3d& X);
/// 3 x 2 differential of embed().
Matrix embed_differential(const Coord& x);
/// 2 x 3 differential of project() at X.
Matrix project_differential(const Eigen::Vector3d& X);
/// 4 / (1 + |x|^2)^2.
double conformal_factor(const Coord& x);

}  // namespace sphere_chart

/// W[x, x~] = g_x(x~ - x, x~ - x) on the chart, analytic derivatives. Not symmetric.
EnergyPtr sphere_chart_energy();

/// Closed-form great-circle calculus on the unit sphere S^{n-1} in R^n.
/// Inputs must be unit vectors; antipodal pairs raise DomainError.
namespace great_circle {

double dist(const Coord& p, const Coord& q);
Coord geodesic(const Coord& p, const Coord& q, double t);
Coord log(const Coord& p, const Coord& q);
Coord exp(const Coord& p, const Coord& v);
/// Parallel transport of the tangent vector v at p to q along the minimizing arc.
Coord transport(const Coord& p, const Coord& q, const Coord& v);

}  // namespace great_circle

/// Analytic geodesic calculus in stereographic chart coordinates, obtained by
/// lifting to S^2, applying great-circle formulas and pulling back.
struct SphereChartOracle {
    static double dist(const Coord& xa, const Coord& xb);
    /// Constant-speed geodesic with x(0) = xa, x(1) = xb.
    static Coord geodesic(const Coord& xa, const Coord& xb, double t);
    static Coord log(const Coord& xa, const Coord& xb);
    static Coord exp(const Coord& x, const Coord& v);
    /// Parallel transport of w from xa to xb along the geodesic.
    static Coord transport(const Coord& xa, const Coord& xb, const Coord& w);
};

}  // namespace dgc

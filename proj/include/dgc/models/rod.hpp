#pragma once

#include "dgc/constraint.hpp"
#include "dgc/finite_difference.hpp"

#include <iosfwd>
#include <vector>

namespace dgc {

// Closed planar rods sampled at N nodes on the uniform periodic grid s_i = i/N,
// stored flattened as (x_0, y_0, ..., x_{N-1}, y_{N-1}).
//
// Discretization: x_s by central differences over 2/N, x_ss by the periodic
// second-difference stencil, integrals by the equal-weight periodic trapezoid
// rule. Curvature is kappa = (x_s ^ x_ss) / |x_s|^3, which is +1 on a
// counterclockwise unit circle.

enum class RodEnergyKind { simplified, full };

struct RodParams {
    int nodes = 64;
    double delta = 0.1;  // rod thickness
};

/// Validates N >= 8 and returns N = x.size() / 2.
int rod_node_count(const Coord& nodes);

/// Throws DomainError if a segment |x_{i+1} - x_i| or a central difference
/// |x_s| is shorter than 1e-12.
void check_rod_admissible(const Coord& nodes);

std::vector<double> rod_curvature(const Coord& nodes);

Coord circle_curve(int nodes, double radius, double cx = 0.0, double cy = 0.0, bool counterclockwise = true);
Coord ellipse_curve(int nodes, double a, double b);

/// Simplified (linearized bending) energy with analytic first derivatives and
/// Hessians by central differences of them; or the full tangential + bending
/// energy with all derivatives by finite differences of W.
EnergyPtr rod_energy(RodEnergyKind kind, RodParams params = {}, FdScheme scheme = {});

/// The W-only function behind rod_energy(), for quadrature/property tests.
EnergyFunctionPtr rod_energy_function(RodEnergyKind kind, RodParams params = {});

/// Gauge removing the rigid null space of the energy: translations for the
/// simplified model, translations and rotations (about `reference`) for the full one.
ConstraintPtr rod_gauge(RodEnergyKind kind, const Coord& reference);

/// Curve CSV: one `x,y` row per node, optional header.
Coord read_curve_csv(std::istream& in);
void write_curve_csv(const Coord& nodes, std::ostream& out);

}  // namespace dgc

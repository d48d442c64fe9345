#pragma once

#include "dgc/geodesic.hpp"

#include <iosfwd>
#include <vector>

namespace dgc {

enum class Exp2Method { newton, fixed_point };

struct OpConfig {
    SolverConfig inner;            // embedded two-point and K-point solves
    double fixed_point_tol = 1e-12;
    int max_fixed_point_iter = 500;
    Exp2Method method = Exp2Method::newton;

    void validate() const;
};

/// One rung of Schild's ladder.
struct TransportStep {
    Coord x_p_prev;  // x_{k-1} + zeta_{k-1}
    Coord x_c;       // rung midpoint
    Coord x_p;       // x_k + zeta_k
    Coord zeta;      // transported displacement at x_k
};

using TransportTrace = std::vector<TransportStep>;

struct TransportResult {
    Coord zeta;
    TransportTrace trace;
};

/// LOG^K_{x_A}(x_B) = x_1 - x_0 of the order-K discrete geodesic (the 1/K is
/// part of the operator). K = 1 gives x_B - x_A.
Coord discrete_log(const Coord& xa, const Coord& xb, int steps, const Space& space, const OpConfig& cfg = {});

/// zeta such that x_0 + zeta minimizes W[x_0, .] + W[., x_2] (on the constraint set).
Coord log2(const Coord& x0, const Coord& x2, const Space& space, const OpConfig& cfg = {});

/// x_2 solving W_,2[x, x+zeta] + W_,1[x+zeta, x_2] = 0 (plus constraint terms),
/// i.e. the inverse of log2 at x.
Coord exp2(const Coord& x, const Coord& zeta, const Space& space, const OpConfig& cfg = {});

/// exp2 for the spring energy on a level-set hypersurface as a one-dimensional
/// search along x + zeta + span{zeta, n}: x_2 = x + 2 zeta - s n(x + zeta), d(x_2) = 0.
Coord exp2_hypersurface(const Coord& x, const Coord& zeta, const ConstraintModel& surface,
                        const OpConfig& cfg = {});

/// EXP^k_x(zeta) by the two-step recursion.
Coord discrete_exp(const Coord& x, const Coord& zeta, int k, const Space& space, const OpConfig& cfg = {});

/// The whole shooting path (EXP^0, ..., EXP^k).
DiscretePath discrete_exp_path(const Coord& x, const Coord& zeta, int k, const Space& space,
                               const OpConfig& cfg = {});

TransportStep transport_step(const Coord& x_prev, const Coord& x_next, const Coord& zeta_prev, const Space& space,
                             const OpConfig& cfg = {});

/// Discrete parallel transport P_{x_K,...,x_0} zeta_0.
TransportResult parallel_transport(const DiscretePath& path, const Coord& zeta0, const Space& space,
                                   const OpConfig& cfg = {});

/// P^{-1}_{x_K,...,x_0} zeta_K: solves the same rung equations for zeta_{k-1}
/// given zeta_k, walking from x_K back to x_0.
Coord inverse_transport(const DiscretePath& path, const Coord& zetaK, const Space& space, const OpConfig& cfg = {});

/// nabla_xi(eta0, eta1) = P^{-1}_{x+xi, x} eta1 - eta0.
Coord discrete_connection(const Coord& x, const Coord& xi, const Coord& eta0, const Coord& eta1, const Space& space,
                          const OpConfig& cfg = {});

/// CSV with columns k, x_c_*, x_p_*, zeta_* (k = 1..K).
void write_trace_csv(const TransportTrace& trace, std::ostream& out);

}  // namespace dgc

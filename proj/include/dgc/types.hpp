#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace dgc {

/// Point or displacement in chart or ambient coordinates. Rods store their
/// nodes flattened as (x_0, y_0, x_1, y_1, ...).
using Coord = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Ordered (K+1)-tuple of points x_0, ..., x_K.
class DiscretePath {
public:
    DiscretePath() = default;
    explicit DiscretePath(std::vector<Coord> points);

    /// Linear interpolation between two points with K steps.
    static DiscretePath linear(const Coord& from, const Coord& to, int steps);

    int steps() const { return static_cast<int>(points_.size()) - 1; }
    Eigen::Index dim() const { return points_.empty() ? 0 : points_.front().size(); }

    const Coord& operator[](int k) const { return points_[static_cast<std::size_t>(k)]; }
    Coord& operator[](int k) { return points_[static_cast<std::size_t>(k)]; }

    const Coord& front() const { return points_.front(); }
    const Coord& back() const { return points_.back(); }

    const std::vector<Coord>& points() const { return points_; }

private:
    std::vector<Coord> points_;
};

// Error hierarchy. Every failure the library raises derives from dgc::Error.

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input outside the admissible set of a model (e.g. degenerate rod segment).
struct DomainError : Error {
    using Error::Error;
};

/// Non-finite value produced by a model evaluation.
struct EvaluationError : Error {
    using Error::Error;
};

/// Singular pivot in a Newton system.
struct LinearAlgebraError : Error {
    using Error::Error;
};

struct PreconditionError : Error {
    using Error::Error;
};

/// A model broke one of its own contracts (e.g. negative W).
struct InvariantViolation : Error {
    using Error::Error;
};

/// Iterative solve failed to reach its tolerance.
struct ConvergenceError : Error {
    ConvergenceError(const std::string& what, double residual)
        : Error(what), last_residual(residual) {}
    double last_residual;
};

bool all_finite(const Coord& v);

/// Max-abs entry, the matrix norm used for all tolerance checks.
double max_abs(const Matrix& m);

/// Parse "a,b,c" into a Coord.
Coord parse_coord(const std::string& text);

}  // namespace dgc

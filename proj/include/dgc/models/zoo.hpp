#pragma once

#include "dgc/constraint.hpp"
#include "dgc/models/rod.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace dgc {

/// Closed-form continuous calculus used as ground truth by the study harness.
class Oracle {
public:
    virtual ~Oracle() = default;
    virtual std::string description() const = 0;
    virtual Coord geodesic(const Coord& xa, const Coord& xb, double t) const = 0;
    virtual Coord log(const Coord& xa, const Coord& xb) const = 0;
    virtual Coord exp(const Coord& x, const Coord& v) const = 0;
    virtual Coord transport(const Coord& xa, const Coord& xb, const Coord& w) const = 0;
};

struct ModelOptions {
    RodParams rod{16, 0.1};
    FdScheme fd{};
    /// Rotation-gauge reference for rod-full; defaults to the model's x_A.
    std::optional<Coord> rod_reference;
};

/// A named backend with everything the harness needs.
struct ModelBundle {
    std::string name;
    Space space;
    std::shared_ptr<const Oracle> oracle;  // null: Richardson reference
    Coord xa, xb, w;                       // default study endpoints and transport seed
    double consistency_tol = 1e-6;
    std::function<Coord(std::mt19937_64&)> sample;  // random admissible point

    /// Turns a tangent vector at x into a displacement whose endpoint lies on
    /// the constraint set (identity for unconstrained spaces).
    Coord displacement(const Coord& x, const Coord& v) const;
};

/// flat | sphere-chart | sdf-sphere | sdf-circle | sdf-ellipsoid | rod-simplified | rod-full
ModelBundle make_model(const std::string& name, const ModelOptions& options = {});

const std::vector<std::string>& model_names();

}  // namespace dgc

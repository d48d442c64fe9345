#include "dgc/models/zoo.hpp"

#include "dgc/models/flat.hpp"
#include "dgc/models/sdf.hpp"
#include "dgc/models/sphere.hpp"

#include <cmath>
#include <numbers>

namespace dgc {

namespace {

class FlatOracle final : public Oracle {
public:
    std::string description() const override { return "closed-form straight lines"; }
    Coord geodesic(const Coord& xa, const Coord& xb, double t) const override { return (1.0 - t) * xa + t * xb; }
    Coord log(const Coord& xa, const Coord& xb) const override { return xb - xa; }
    Coord exp(const Coord& x, const Coord& v) const override { return x + v; }
    Coord transport(const Coord&, const Coord&, const Coord& w) const override { return w; }
};

class ChartOracle final : public Oracle {
public:
    std::string description() const override { return "analytic great circles in the stereographic chart"; }
    Coord geodesic(const Coord& xa, const Coord& xb, double t) const override {
        return SphereChartOracle::geodesic(xa, xb, t);
    }
    Coord log(const Coord& xa, const Coord& xb) const override { return SphereChartOracle::log(xa, xb); }
    Coord exp(const Coord& x, const Coord& v) const override { return SphereChartOracle::exp(x, v); }
    Coord transport(const Coord& xa, const Coord& xb, const Coord& w) const override {
        return SphereChartOracle::transport(xa, xb, w);
    }
};

class EmbeddedSphereOracle final : public Oracle {
public:
    std::string description() const override { return "analytic great circles in ambient coordinates"; }
    Coord geodesic(const Coord& xa, const Coord& xb, double t) const override {
        return great_circle::geodesic(xa, xb, t);
    }
    Coord log(const Coord& xa, const Coord& xb) const override { return great_circle::log(xa, xb); }
    Coord exp(const Coord& x, const Coord& v) const override { return great_circle::exp(x, v); }
    Coord transport(const Coord& xa, const Coord& xb, const Coord& w) const override {
        return great_circle::transport(xa, xb, w);
    }
};

Coord vec(std::initializer_list<double> v) {
    Coord c(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) c[i++] = x;
    return c;
}

Coord uniform_box(std::mt19937_64& rng, Eigen::Index d, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    Coord x(d);
    for (Eigen::Index i = 0; i < d; ++i) x[i] = u(rng);
    return x;
}

Coord unit_sphere_sample(std::mt19937_64& rng, Eigen::Index d) {
    std::normal_distribution<double> n(0.0, 1.0);
    Coord x(d);
    for (;;) {
        for (Eigen::Index i = 0; i < d; ++i) x[i] = n(rng);
        if (x.norm() > 1e-3) return x.normalized();
    }
}

// Circle of random radius and center with a few random low-frequency modes.
Coord rod_sample(std::mt19937_64& rng, int nodes) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double radius = 1.0 + 0.2 * u(rng);
    const double cx = 0.5 * u(rng);
    const double cy = 0.5 * u(rng);
    double amp[3][2];
    for (auto& mode : amp)
        for (double& a : mode) a = 0.04 * u(rng);
    Coord x(2 * nodes);
    for (int i = 0; i < nodes; ++i) {
        const double phi = 2.0 * std::numbers::pi * i / nodes;
        double r = radius;
        for (int m = 0; m < 3; ++m) r += amp[m][0] * std::cos((m + 2) * phi) + amp[m][1] * std::sin((m + 2) * phi);
        x[2 * i] = cx + r * std::cos(phi);
        x[2 * i + 1] = cy + r * std::sin(phi);
    }
    return x;
}

// Smooth displacement field used as the rod transport seed.
Coord rod_seed(int nodes) {
    Coord w(2 * nodes);
    for (int i = 0; i < nodes; ++i) {
        const double phi = 2.0 * std::numbers::pi * i / nodes;
        const double r = 0.05 * std::cos(2.0 * phi);
        w[2 * i] = r * std::cos(phi);
        w[2 * i + 1] = r * std::sin(phi);
    }
    return w;
}

}  // namespace

Coord ModelBundle::displacement(const Coord& x, const Coord& v) const {
    if (const auto* ls = dynamic_cast<const ConstraintModel*>(space.constraint.get()))
        return ls->project(x + v, x + v) - x;
    return v;
}

const std::vector<std::string>& model_names() {
    static const std::vector<std::string> names{"flat",          "sphere-chart",   "sdf-sphere", "sdf-circle",
                                                "sdf-ellipsoid", "rod-simplified", "rod-full"};
    return names;
}

ModelBundle make_model(const std::string& name, const ModelOptions& options) {
    ModelBundle b;
    b.name = name;
    const Coord chart_a = vec({0.5, 0.0});
    const Coord chart_b = vec({-0.5, 2.0});
    const Coord chart_w = vec({-0.4, 0.0});

    if (name == "flat") {
        b.space = Space(flat_energy(2));
        b.oracle = std::make_shared<FlatOracle>();
        b.xa = chart_a;
        b.xb = chart_b;
        b.w = chart_w;
        b.consistency_tol = 1e-10;
        b.sample = [](std::mt19937_64& rng) { return uniform_box(rng, 2, -5.0, 5.0); };
    } else if (name == "sphere-chart") {
        b.space = Space(sphere_chart_energy());
        b.oracle = std::make_shared<ChartOracle>();
        b.xa = chart_a;
        b.xb = chart_b;
        b.w = chart_w;
        b.consistency_tol = 1e-8;
        b.sample = [](std::mt19937_64& rng) { return uniform_box(rng, 2, -2.0, 2.0); };
    } else if (name == "sdf-sphere") {
        const auto model = sdf_spring_model(std::make_shared<UnitSphereSdf>(3), 3);
        b.space = model.space();
        b.oracle = std::make_shared<EmbeddedSphereOracle>();
        // The chart test pair lifted to S^2.
        b.xa = sphere_chart::embed(chart_a);
        b.xb = sphere_chart::embed(chart_b);
        b.w = sphere_chart::embed_differential(chart_a) * chart_w;
        b.consistency_tol = 1e-10;
        b.sample = [](std::mt19937_64& rng) { return unit_sphere_sample(rng, 3); };
    } else if (name == "sdf-circle") {
        const auto model = sdf_spring_model(std::make_shared<UnitSphereSdf>(2), 2);
        b.space = model.space();
        b.oracle = std::make_shared<EmbeddedSphereOracle>();
        b.xa = vec({1.0, 0.0});
        b.xb = vec({std::cos(2.0), std::sin(2.0)});
        b.w = vec({0.0, 0.4});
        b.consistency_tol = 1e-10;
        b.sample = [](std::mt19937_64& rng) { return unit_sphere_sample(rng, 2); };
    } else if (name == "sdf-ellipsoid") {
        auto surface = std::make_shared<EllipsoidSdf>(vec({1.2, 1.0, 0.8}));
        const auto model = sdf_spring_model(surface, 3);
        b.space = model.space();
        b.xa = surface->closest_point(vec({1.2, 0.1, 0.1}));
        b.xb = surface->closest_point(vec({0.1, 1.0, 0.4}));
        const Coord n = surface->grad_d(b.xa);
        const Coord t = vec({0.0, 0.0, 0.3});
        b.w = t - t.dot(n) * n;
        b.consistency_tol = 1e-10;
        b.sample = [surface](std::mt19937_64& rng) {
            return surface->closest_point(unit_sphere_sample(rng, 3).cwiseProduct(vec({1.2, 1.0, 0.8})));
        };
    } else if (name == "rod-simplified" || name == "rod-full") {
        const RodEnergyKind kind = name == "rod-full" ? RodEnergyKind::full : RodEnergyKind::simplified;
        const int n = options.rod.nodes;
        b.xa = circle_curve(n, 1.0);
        b.xb = ellipse_curve(n, 1.1, 0.9);
        b.w = rod_seed(n);
        b.space = Space(rod_energy(kind, options.rod, options.fd),
                        rod_gauge(kind, options.rod_reference.value_or(b.xa)));
        b.consistency_tol = 1e-4;
        b.sample = [n](std::mt19937_64& rng) { return rod_sample(rng, n); };
    } else {
        throw PreconditionError("unknown model '" + name + "'");
    }
    return b;
}

}  // namespace dgc

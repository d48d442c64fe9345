#include "dgc/models/flat.hpp"
#include "dgc/models/sdf.hpp"
#include "dgc/models/sphere.hpp"
#include "dgc/models/zoo.hpp"
#include "dgc/operators.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace dgc;

namespace {

Coord v2(double a, double b) {
    Coord c(2);
    c << a, b;
    return c;
}

Coord v3(double a, double b, double c) {
    Coord x(3);
    x << a, b, c;
    return x;
}

const Coord kXa = v2(0.5, 0.0);
const Coord kXb = v2(-0.5, 2.0);

Space chart() { return Space(sphere_chart_energy()); }
Space flat() { return Space(flat_energy(2)); }

double slope(const std::vector<double>& s, const std::vector<double>& e) {
    // Least-squares slope of log e against log s.
    double mx = 0, my = 0, sxy = 0, sxx = 0;
    const double n = static_cast<double>(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        mx += std::log(s[i]) / n;
        my += std::log(e[i]) / n;
    }
    for (std::size_t i = 0; i < s.size(); ++i) {
        sxy += (std::log(s[i]) - mx) * (std::log(e[i]) - my);
        sxx += (std::log(s[i]) - mx) * (std::log(s[i]) - mx);
    }
    return sxy / sxx;
}

// Test field and its Jacobian for the covariant-derivative check.
Coord eta(const Coord& x) { return v2(std::sin(x[1]) + 0.3, 0.5 * x[0] * x[0] - 0.2 * x[1]); }
Matrix d_eta(const Coord& x) {
    Matrix m(2, 2);
    m << 0.0, std::cos(x[1]), x[0], -0.2;
    return m;
}

// Levi-Civita derivative for the conformal chart metric e^{2 phi} Id with
// phi = log 2 - log(1 + |x|^2).
Coord covariant_derivative(const Coord& x, const Coord& theta) {
    const Coord grad_phi = -2.0 * x / (1.0 + x.squaredNorm());
    const Coord e = eta(x);
    return d_eta(x) * theta + theta.dot(grad_phi) * e + e.dot(grad_phi) * theta - theta.dot(e) * grad_phi;
}

}  // namespace

TEST_SUITE("geo-operators") {
    TEST_CASE("OpConfig validation") {
        OpConfig c;
        CHECK_NOTHROW(c.validate());
        c.fixed_point_tol = 0;
        CHECK_THROWS_AS(c.validate(), PreconditionError);
    }

    TEST_CASE("discrete_log examples") {
        CHECK((discrete_log(kXa, kXb, 1, chart()) - (kXb - kXa)).norm() == 0.0);
        CHECK((discrete_log(v2(0, 0), v2(1, 0), 4, flat()) - v2(0.25, 0)).norm() < 1e-14);
    }

    TEST_CASE("K LOG^K converges to the chart logarithm") {
        const Coord v = SphereChartOracle::log(kXa, kXb);
        double prev = 0.0;
        for (int K : {8, 16, 32, 64, 128}) {
            const double err = (K * discrete_log(kXa, kXb, K, chart()) - v).norm();
            if (prev > 0.0) CHECK(prev / err == doctest::Approx(2.0).epsilon(0.1));
            prev = err;
        }
    }

    TEST_CASE("log2 examples") {
        CHECK((log2(v2(0.2, 1), v2(1.4, -0.6), flat()) - v2(0.6, -0.8)).norm() < 1e-14);
        CHECK(log2(kXa, kXa, chart()).norm() == 0.0);
        const Coord x2 = kXa + v2(0.2, 0.1);
        const Coord z = log2(kXa, x2, chart());
        const auto& W = chart().model();
        CHECK((W.grad2(kXa, kXa + z) + W.grad1(kXa + z, x2)).norm() <= 1e-10);
    }

    TEST_CASE("log2 midpoint deviation is second order") {
        const Coord x0 = kXa;
        std::vector<double> gap, dev;
        for (int j = 0; j < 6; ++j) {
            const Coord x2 = x0 + std::pow(0.5, j) * (kXb - x0);
            gap.push_back((x2 - x0).norm());
            dev.push_back((x0 + log2(x0, x2, chart()) - 0.5 * (x0 + x2)).norm());
        }
        for (std::size_t i = 3; i < dev.size(); ++i) CHECK(dev[i - 1] / dev[i] == doctest::Approx(4.0).epsilon(0.1));
        CHECK(slope(gap, dev) == doctest::Approx(2.0).epsilon(0.15));
    }

    TEST_CASE("exp2 examples") {
        CHECK((exp2(v2(1, 2), v2(0.3, -0.1), flat()) - v2(1.6, 1.8)).norm() < 1e-14);
        CHECK((exp2(kXa, Coord::Zero(2), chart()) - kXa).norm() < 1e-14);
    }

    TEST_CASE("exp2 inverts log2 near x") {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(-0.3, 0.3);
        for (int i = 0; i < 20; ++i) {
            const Coord x2 = kXa + v2(u(rng), u(rng));
            CHECK((exp2(kXa, log2(kXa, x2, chart()), chart()) - x2).norm() <= 1e-9);
        }
    }

    TEST_CASE("exp2 deviation from x + 2 zeta is second order") {
        std::vector<double> size, dev;
        for (int j = 0; j < 6; ++j) {
            const Coord z = std::pow(0.5, j) * v2(0.2, 0.3);
            size.push_back(z.norm());
            dev.push_back((exp2(kXa, z, chart()) - (kXa + 2.0 * z)).norm());
        }
        for (std::size_t i = 0; i < dev.size(); ++i) CHECK(dev[i] / (size[i] * size[i]) < 5.0);
        CHECK(slope(size, dev) == doctest::Approx(2.0).epsilon(0.15));
    }

    TEST_CASE("exp2 Newton and fixed-point methods agree") {
        OpConfig fp;
        fp.method = Exp2Method::fixed_point;
        for (const Coord& z : {v2(0.1, 0.15), v2(-0.2, 0.05), v2(0.01, -0.02)})
            CHECK((exp2(kXa, z, chart()) - exp2(kXa, z, chart(), fp)).norm() <= 1e-9);

        const auto m = make_model("sdf-sphere");
        const Coord z = m.displacement(m.xa, v3(0, 0.2, 0.1) - v3(0, 0.2, 0.1).dot(m.xa) * m.xa);
        CHECK((exp2(m.xa, z, m.space) - exp2(m.xa, z, m.space, fp)).norm() <= 1e-9);
    }

    TEST_CASE("exp2 failure is reported") {
        OpConfig cfg;
        cfg.inner.max_iter = 2;
        CHECK_THROWS_AS(exp2(kXa, v2(3.0, 4.0), chart(), cfg), ConvergenceError);
    }

    TEST_CASE("hypersurface exp2 matches the generic solve") {
        for (const char* name : {"sdf-sphere", "sdf-ellipsoid", "sdf-circle"}) {
            const auto m = make_model(name);
            const auto& surf = dynamic_cast<const ConstraintModel&>(*m.space.constraint);
            const Coord n = surf.grad_d(m.xa);
            Coord t = m.w - m.w.dot(n) * n;
            const Coord z = m.displacement(m.xa, 0.5 * t);
            const Coord generic = exp2(m.xa, z, m.space);
            CHECK((generic - exp2_hypersurface(m.xa, z, surf)).norm() <= 1e-9);
            CHECK(std::abs(surf.d(generic)) <= 1e-9);
        }
    }

    TEST_CASE("sphere LOG2 optimality condition") {
        // zeta - (x2 - x0)/2 is normal at x0 + zeta.
        const auto m = make_model("sdf-sphere");
        const auto& surf = dynamic_cast<const ConstraintModel&>(*m.space.constraint);
        const Coord x2 = great_circle::exp(m.xa, 0.4 * great_circle::log(m.xa, m.xb));
        const Coord z = log2(m.xa, x2, m.space);
        const Coord r = z - 0.5 * (x2 - m.xa);
        const Coord n = surf.grad_d(m.xa + z);
        CHECK((r - r.dot(n) * n).norm() <= 1e-9);
        CHECK(std::abs(surf.d(m.xa + z)) <= 1e-12);
    }

    TEST_CASE("exp2 precondition: base point on the surface") {
        const auto m = make_model("sdf-sphere");
        CHECK_THROWS_AS(exp2(1.1 * m.xa, v3(0, 0.1, 0), m.space), PreconditionError);
    }

    TEST_CASE("discrete_exp examples") {
        CHECK((discrete_exp(v2(0, 0), v2(0.25, 0), 4, flat()) - v2(1, 0)).norm() < 1e-14);
        CHECK((discrete_exp(kXa, v2(0.1, 0.2), 1, chart()) - (kXa + v2(0.1, 0.2))).norm() == 0.0);
        CHECK((discrete_exp(kXa, v2(0.1, 0.2), 0, chart()) - kXa).norm() == 0.0);
        CHECK_THROWS_AS(discrete_exp(kXa, v2(0.1, 0.2), -1, chart()), PreconditionError);
    }

    TEST_CASE("EXP^K(v/K) converges to exp(v)") {
        const Coord v = SphereChartOracle::log(kXa, kXb);
        double prev = 0.0;
        for (int K : {16, 32, 64, 128}) {
            const double err = (discrete_exp(kXa, v / K, K, chart()) - kXb).norm();
            if (prev > 0.0) CHECK(prev / err == doctest::Approx(2.0).epsilon(0.15));
            prev = err;
        }
    }

    TEST_CASE("discrete_exp failure names the step") {
        OpConfig cfg;
        cfg.inner.max_iter = 3;
        try {
            (void)discrete_exp(kXa, v2(0.8, 1.5), 6, chart(), cfg);
            FAIL("expected failure");
        } catch (const Error& e) {
            CHECK(std::string(e.what()).find("step") != std::string::npos);
        }
    }

    TEST_CASE("inverse pair and shooting equivalence") {
        for (const char* name : {"sphere-chart", "sdf-sphere", "sdf-ellipsoid"}) {
            const auto m = make_model(name);
            const int K = 8;
            const auto g = solve_geodesic(m.xa, m.xb, K, m.space);
            REQUIRE(g.converged);
            const Coord log = discrete_log(m.xa, m.xb, K, m.space);
            const auto shot = discrete_exp_path(m.xa, log, K, m.space);
            for (int k = 0; k <= K; ++k) CHECK((shot[k] - g.path[k]).norm() <= 1e-9);
        }
    }

    TEST_CASE("transport_step examples and construction identities") {
        const auto flat_step = transport_step(v2(0, 0), v2(0.3, 0.4), v2(-0.1, 0.2), flat());
        CHECK((flat_step.zeta - v2(-0.1, 0.2)).norm() < 1e-14);
        const auto zero = transport_step(kXa, kXa + v2(0.1, 0.1), Coord::Zero(2), chart());
        CHECK(zero.zeta.norm() <= 1e-9);

        const Coord x0 = kXa, x1 = kXa + v2(0.1, 0.15), z = v2(-0.05, 0.02);
        const auto s = transport_step(x0, x1, z, chart());
        CHECK((s.x_p_prev - (x0 + z)).norm() == 0.0);
        CHECK((s.zeta - (s.x_p - x1)).norm() == 0.0);
        const auto& W = chart().model();
        CHECK((W.grad2(x0 + z, s.x_c) + W.grad1(s.x_c, x1)).norm() <= 1e-10);
        CHECK((W.grad2(x0, s.x_c) + W.grad1(s.x_c, s.x_p)).norm() <= 1e-10);
    }

    TEST_CASE("Schild's ladder preserves the metric norm to high order") {
        // Step and displacement shrink together; the g-norm drift falls at
        // least like step^3.
        std::vector<double> drift;
        for (double s : {0.1, 0.05, 0.025, 0.0125}) {
            const Coord x1 = kXa + s * v2(0.6, 0.8), z = s * v2(-0.3, 0.5);
            const auto st = transport_step(kXa, x1, z, chart());
            drift.push_back(std::abs(sphere_chart::conformal_factor(x1) * st.zeta.squaredNorm() -
                                     sphere_chart::conformal_factor(kXa) * z.squaredNorm()));
        }
        for (std::size_t i = 1; i < drift.size(); ++i) CHECK(drift[i - 1] / drift[i] >= 7.0);
    }

    TEST_CASE("parallel transport examples") {
        const auto path = DiscretePath({v2(0, 0), v2(0.3, 0.1), v2(0.5, 0.6), v2(1, 1)});
        const auto r = parallel_transport(path, v2(0.2, -0.1), flat());
        CHECK((r.zeta - v2(0.2, -0.1)).norm() < 1e-14);
        CHECK(r.trace.size() == 3);

        const Coord w = v2(-0.4, 0.0);
        const Coord ref = SphereChartOracle::transport(kXa, kXb, w);
        double prev = 0.0;
        for (int K : {16, 32, 64, 128}) {
            const auto g = solve_geodesic(kXa, kXb, K, chart());
            const double err = (K * parallel_transport(g.path, w / K, chart()).zeta - ref).norm();
            if (prev > 0.0) CHECK(prev / err == doctest::Approx(2.0).epsilon(0.2));
            prev = err;
        }
    }

    TEST_CASE("transporting x1 - x0 along a geodesic reproduces its steps") {
        const auto g = solve_geodesic(kXa, kXb, 16, chart());
        const auto r = parallel_transport(g.path, g.path[1] - g.path[0], chart());
        for (int k = 1; k < 16; ++k) CHECK((r.trace[k - 1].zeta - (g.path[k + 1] - g.path[k])).norm() <= 1e-9);
    }

    TEST_CASE("inverse transport") {
        SUBCASE("flat") {
            const auto path = DiscretePath({v2(0, 0), v2(0.3, 0.1), v2(1, 1)});
            CHECK((inverse_transport(path, v2(0.2, 0.3), flat()) - v2(0.2, 0.3)).norm() < 1e-14);
        }
        SUBCASE("symmetric W: reverse transport is the inverse") {
            const auto m = make_model("sdf-sphere");
            const auto g = solve_geodesic(m.xa, m.xb, 8, m.space);
            const Coord z = m.displacement(m.xa, m.w / 8);
            const Coord zk = parallel_transport(g.path, z, m.space).zeta;
            CHECK((inverse_transport(g.path, zk, m.space) - z).norm() <= 1e-9);
            std::vector<Coord> rev(g.path.points().rbegin(), g.path.points().rend());
            CHECK((parallel_transport(DiscretePath(rev), zk, m.space).zeta - z).norm() <= 1e-9);
        }
        SUBCASE("asymmetric W: exact inverse, reverse transport only approximately") {
            const auto g = solve_geodesic(kXa, kXb, 16, chart());
            const Coord z = v2(-0.4, 0) / 16;
            const Coord zk = parallel_transport(g.path, z, chart()).zeta;
            CHECK((inverse_transport(g.path, zk, chart()) - z).norm() <= 1e-9);
            // One rung: reverse-path round trip is off by O(step^2) |zeta|.
            std::vector<double> rel;
            for (double s : {0.1, 0.05, 0.025, 0.0125}) {
                const Coord x1 = kXa + s * v2(0.6, 0.8), zs = s * v2(-0.3, 0.5);
                const auto fwd = transport_step(kXa, x1, zs, chart());
                const auto back = transport_step(x1, kXa, fwd.zeta, chart());
                rel.push_back((back.zeta - zs).norm() / zs.norm());
            }
            CHECK(rel[0] > 1e-6);
            for (std::size_t i = 1; i < rel.size(); ++i)
                CHECK(rel[i - 1] / rel[i] == doctest::Approx(4.0).epsilon(0.15));
        }
    }

    TEST_CASE("discrete connection") {
        CHECK((discrete_connection(v2(1, 1), v2(0.2, 0.1), v2(0.1, 0), v2(0.3, -0.2), flat()) - v2(0.2, -0.2)).norm() <
              1e-14);

        // Vanishes along a discrete geodesic.
        const auto g = solve_geodesic(kXa, kXb, 16, chart());
        for (int k = 0; k + 2 <= 16; ++k) {
            const Coord d0 = g.path[k + 1] - g.path[k], d1 = g.path[k + 2] - g.path[k + 1];
            CHECK(discrete_connection(g.path[k], d0, d0, d1, chart()).norm() <= 1e-9);
        }
    }

    TEST_CASE("scaled discrete connection converges to the covariant derivative") {
        const Coord x = v2(0.3, -0.4), theta = v2(0.7, 0.2);
        const Coord exact = covariant_derivative(x, theta);
        std::vector<double> err;
        for (double tau : {0.1, 0.05, 0.025, 0.0125}) {
            const Coord c =
                discrete_connection(x, tau * theta, tau * eta(x), tau * eta(x + tau * theta), chart()) / (tau * tau);
            err.push_back((c - exact).norm());
        }
        CHECK(err.back() < 1e-3);
        for (std::size_t i = 1; i < err.size(); ++i) CHECK(err[i - 1] / err[i] == doctest::Approx(2.0).epsilon(0.1));
    }

    TEST_CASE("trace CSV layout") {
        const auto g = solve_geodesic(kXa, kXb, 3, chart());
        const auto r = parallel_transport(g.path, v2(0.01, 0.02), chart());
        std::stringstream ss;
        write_trace_csv(r.trace, ss);
        std::string header;
        std::getline(ss, header);
        CHECK(header == "k,x_c_0,x_c_1,x_p_0,x_p_1,zeta_0,zeta_1");
        int rows = 0;
        for (std::string line; std::getline(ss, line);) rows += !line.empty();
        CHECK(rows == 3);
    }

    TEST_CASE("flat-space exactness to 1e-12") {
        std::mt19937_64 rng(2);
        std::uniform_real_distribution<double> u(-3, 3);
        for (int i = 0; i < 10; ++i) {
            const Coord a = v2(u(rng), u(rng)), b = v2(u(rng), u(rng)), z = v2(u(rng), u(rng));
            CHECK((log2(a, b, flat()) - 0.5 * (b - a)).norm() <= 1e-12);
            CHECK((exp2(a, z, flat()) - (a + 2 * z)).norm() <= 1e-12);
            CHECK((discrete_exp(a, z, 5, flat()) - (a + 5 * z)).norm() <= 1e-12);
            CHECK((discrete_log(a, b, 3, flat()) - (b - a) / 3).norm() <= 1e-12);
        }
    }
}

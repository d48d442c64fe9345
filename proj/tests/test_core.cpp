#include "dgc/block_tridiagonal.hpp"
#include "dgc/consistency.hpp"
#include "dgc/finite_difference.hpp"
#include "dgc/models/flat.hpp"
#include "dgc/models/rod.hpp"
#include "dgc/models/sphere.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <random>

using namespace dgc;

namespace {

Coord v2(double a, double b) {
    Coord c(2);
    c << a, b;
    return c;
}

// W without analytic derivatives, to exercise the pure four-point FD route.
class BareFlat final : public EnergyFunction {
public:
    Eigen::Index dim() const override { return 2; }
    std::string name() const override { return "bare-flat"; }
    bool symmetric() const override { return true; }
    double w(const Coord& x, const Coord& y) const override { return (y - x).squaredNorm(); }
};

class NanEnergy final : public EnergyFunction {
public:
    Eigen::Index dim() const override { return 2; }
    std::string name() const override { return "nan"; }
    bool symmetric() const override { return true; }
    double w(const Coord&, const Coord&) const override { return std::numeric_limits<double>::quiet_NaN(); }
};

}  // namespace

TEST_SUITE("core-model") {
    TEST_CASE("DiscretePath validates shape") {
        CHECK_THROWS_AS(DiscretePath(std::vector<Coord>{v2(0, 0)}), PreconditionError);
        CHECK_THROWS_AS(DiscretePath(std::vector<Coord>{v2(0, 0), Coord::Zero(3)}), PreconditionError);
        const auto p = DiscretePath::linear(v2(0, 0), v2(1, 0), 4);
        CHECK(p.steps() == 4);
        CHECK(p.dim() == 2);
        CHECK(p[2].isApprox(v2(0.5, 0)));
    }

    TEST_CASE("parse_coord") {
        CHECK(parse_coord("0.5,-2").isApprox(v2(0.5, -2)));
        CHECK(parse_coord(" 1 , 2 ,3").size() == 3);
        CHECK_THROWS_AS(parse_coord("1,,2"), PreconditionError);
        CHECK_THROWS_AS(parse_coord("abc"), PreconditionError);
        CHECK_THROWS_AS(parse_coord(""), PreconditionError);
    }

    TEST_CASE("metric_from_energy examples") {
        CHECK(max_abs(metric_from_energy(*flat_energy(2), v2(3, -1)) - Matrix::Identity(2, 2)) < 1e-14);
        const auto sphere = sphere_chart_energy();
        CHECK(max_abs(metric_from_energy(*sphere, v2(0, 0)) - 4.0 * Matrix::Identity(2, 2)) < 1e-14);
        CHECK(max_abs(metric_from_energy(*sphere, v2(0.5, 0)) - 2.56 * Matrix::Identity(2, 2)) < 1e-14);
    }

    TEST_CASE("metric output is exactly symmetric and positive definite") {
        std::mt19937_64 rng(1);
        std::uniform_real_distribution<double> u(-2, 2);
        const auto sphere = sphere_chart_energy();
        for (int i = 0; i < 20; ++i) {
            const Matrix g = metric_from_energy(*sphere, v2(u(rng), u(rng)));
            CHECK((g - g.transpose()).cwiseAbs().maxCoeff() == 0.0);
            CHECK(g.llt().info() == Eigen::Success);
        }
    }

    TEST_CASE("rod metric is positive definite on the gauge-fixed subspace") {
        const int n = 16;
        const Coord x = circle_curve(n, 1.0);
        for (auto kind : {RodEnergyKind::simplified, RodEnergyKind::full}) {
            const auto model = rod_energy(kind, {n, 0.1});
            const Matrix g = metric_from_energy(*model, x);
            CHECK((g - g.transpose()).cwiseAbs().maxCoeff() == 0.0);
            // Orthonormal basis of the complement of the rigid modes.
            const auto gauge = rod_gauge(kind, x);
            const Matrix J = gauge->jacobian(x);
            Eigen::FullPivLU<Matrix> lu(J);
            const Matrix null = lu.kernel();
            const Matrix q = Eigen::HouseholderQR<Matrix>(null).householderQ() * Matrix::Identity(null.rows(), null.cols());
            const Eigen::SelfAdjointEigenSolver<Matrix> eig(q.transpose() * g * q);
            CHECK(eig.eigenvalues().minCoeff() > 0.0);
            // Without the gauge the rigid modes are null directions.
            const Eigen::SelfAdjointEigenSolver<Matrix> full(g);
            CHECK(full.eigenvalues()(0) < 1e-6 * full.eigenvalues().maxCoeff());
        }
    }

    TEST_CASE("FdScheme validation") {
        CHECK_NOTHROW((FdScheme{1e-5, 2}.validate()));
        CHECK_NOTHROW((FdScheme{1e-5, 4}.validate()));
        CHECK_THROWS_AS((FdScheme{1e-9, 2}.validate()), PreconditionError);
        CHECK_THROWS_AS((FdScheme{0.1, 2}.validate()), PreconditionError);
        CHECK_THROWS_AS((FdScheme{1e-5, 3}.validate()), PreconditionError);
        CHECK_THROWS_AS((FdScheme{1e-5, 2, 0.5}.validate()), PreconditionError);
    }

    TEST_CASE("fd_derivatives flat examples") {
        const auto fd = fd_derivatives(std::make_shared<BareFlat>());
        CHECK(!fd->derivatives_analytic());
        CHECK((fd->grad2(v2(0, 0), v2(1, 0)) - v2(2, 0)).norm() < 1e-8);
        CHECK(max_abs(fd->hess12(v2(0.3, -1), v2(2, 0.5)) + 2.0 * Matrix::Identity(2, 2)) < 1e-6);
        CHECK(max_abs(fd->hess11(v2(0.3, -1), v2(2, 0.5)) - 2.0 * Matrix::Identity(2, 2)) < 1e-6);
        CHECK(max_abs(fd->hess22(v2(0.3, -1), v2(2, 0.5)) - 2.0 * Matrix::Identity(2, 2)) < 1e-6);
    }

    TEST_CASE("fd_derivatives of the sphere chart match the analytic metric") {
        const auto analytic = sphere_chart_energy();
        const auto fd = fd_derivatives(w_only(analytic));
        for (const Coord& x : {v2(0.5, 0), v2(-0.3, 1.2), v2(0, 0)}) {
            const Matrix a = 2.0 * metric_from_energy(*analytic, x);
            const Matrix b = fd->hess22(x, x);
            CHECK(max_abs(a - b) <= 1e-5 * max_abs(a));
        }
    }

    TEST_CASE("fd_derivatives converge at second order") {
        // Halving h must reduce the discrepancy against analytic derivatives
        // by about four.
        const auto analytic = sphere_chart_energy();
        const Coord x = v2(0.4, -0.7), y = v2(0.9, 0.1);
        auto discrepancy = [&](double h) {
            const auto fd = fd_derivatives(w_only(analytic), FdScheme{h, 2});
            double e = (fd->grad1(x, y) - analytic->grad1(x, y)).cwiseAbs().maxCoeff();
            e = std::max(e, (fd->grad2(x, y) - analytic->grad2(x, y)).cwiseAbs().maxCoeff());
            return e;
        };
        const double ratio = discrepancy(2e-3) / discrepancy(1e-3);
        CHECK(ratio >= 3.5);
        CHECK(ratio <= 4.5);

        auto hess_discrepancy = [&](double h) {
            const auto fd = fd_derivatives(w_only(analytic), FdScheme{1e-5, 2, h});
            return max_abs(fd->hess12(x, y) - analytic->hess12(x, y));
        };
        const double hratio = hess_discrepancy(8e-3) / hess_discrepancy(4e-3);
        CHECK(hratio >= 3.5);
        CHECK(hratio <= 4.5);
    }

    TEST_CASE("fd_derivatives converge at fourth order with the five-point stencil") {
        const auto analytic = sphere_chart_energy();
        const Coord x = v2(0.4, -0.7), y = v2(0.9, 0.1);
        auto discrepancy = [&](double h) {
            const auto fd = fd_derivatives(w_only(analytic), FdScheme{h, 4});
            return (fd->grad1(x, y) - analytic->grad1(x, y)).cwiseAbs().maxCoeff();
        };
        const double ratio = discrepancy(1e-2) / discrepancy(5e-3);
        CHECK(ratio >= 14.0);
        CHECK(ratio <= 18.0);
    }

    TEST_CASE("non-finite derivatives are reported") {
        const auto fd = fd_derivatives(std::make_shared<NanEnergy>());
        CHECK_THROWS_AS(fd->grad1(v2(0, 0), v2(1, 0)), EvaluationError);
        CHECK_THROWS_AS(metric_from_energy(*fd, v2(0, 0)), EvaluationError);
        try {
            require_finite(v2(1, std::nan("")), "grad");
            FAIL("expected EvaluationError");
        } catch (const EvaluationError& e) {
            CHECK(std::string(e.what()).find("entry 1") != std::string::npos);
        }
    }

    TEST_CASE("check_consistency examples") {
        const auto flat = check_consistency(*flat_energy(2), v2(3, -1), 1e-10);
        CHECK(flat.passed());
        CHECK(flat.worst_residual() == 0.0);
        CHECK(check_consistency(*flat_energy(2), v2(3, -1), 1e-12).passed());
        CHECK(check_consistency(*sphere_chart_energy(), v2(0.5, 0), 1e-8).passed());
        const auto rod = check_consistency(*rod_energy(RodEnergyKind::simplified, {64, 0.1}), circle_curve(64, 1.0),
                                           1e-6);
        CHECK(rod.passed());
        CHECK(rod.entries.size() == 7);
    }

    TEST_CASE("check_consistency flags a broken energy") {
        // W = 2|y-x|^2 + 0.1 (y-x)_0: violates W_,1[x,x] = 0.
        class Broken final : public EnergyFunction {
        public:
            Eigen::Index dim() const override { return 2; }
            std::string name() const override { return "broken"; }
            bool symmetric() const override { return false; }
            double w(const Coord& x, const Coord& y) const override {
                return 2.0 * (y - x).squaredNorm() + 0.1 * (y - x)[0];
            }
        };
        const auto r = check_consistency(*fd_derivatives(std::make_shared<Broken>()), v2(0, 0), 1e-6);
        CHECK(!r.passed());
        CHECK(!r.entries[1].passed);
        CHECK(!r.entries[2].passed);
        CHECK(r.entries[0].passed);
    }

    TEST_CASE("block Thomas elimination matches a dense solve") {
        std::mt19937_64 rng(3);
        std::normal_distribution<double> n(0.0, 1.0);
        const std::size_t blocks = 6;
        const int d = 3;
        BlockTridiagonal sys(blocks);
        std::vector<Coord> rhs(blocks);
        auto rnd = [&](int r, int c) {
            Matrix m(r, c);
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < c; ++j) m(i, j) = n(rng);
            return m;
        };
        for (std::size_t k = 0; k < blocks; ++k) {
            sys.diag[k] = rnd(d, d) + 8.0 * Matrix::Identity(d, d);
            if (k > 0) sys.lower[k] = rnd(d, d);
            if (k + 1 < blocks) sys.upper[k] = rnd(d, d);
            rhs[k] = rnd(d, 1);
        }
        const auto x = solve_block_tridiagonal(sys, rhs);
        Coord b(blocks * d), xs(blocks * d);
        for (std::size_t k = 0; k < blocks; ++k) {
            b.segment(k * d, d) = rhs[k];
            xs.segment(k * d, d) = x[k];
        }
        CHECK((sys.dense() * xs - b).norm() < 1e-12);
    }

    TEST_CASE("singular pivot raises a linear-algebra error") {
        BlockTridiagonal sys(2);
        sys.diag[0] = Matrix::Zero(2, 2);
        sys.diag[1] = Matrix::Identity(2, 2);
        sys.upper[0] = Matrix::Identity(2, 2);
        sys.lower[1] = Matrix::Identity(2, 2);
        CHECK_THROWS_AS(solve_block_tridiagonal(sys, {v2(1, 1), v2(1, 1)}), LinearAlgebraError);
    }
}

#include "dgc/models/sphere.hpp"

#include <cmath>

namespace dgc {

namespace sphere_chart {

Eigen::Vector3d embed(const Coord& x) {
    const double r2 = x.squaredNorm();
    const double s = 1.0 + r2;
    return Eigen::Vector3d(2.0 * x[0] / s, 2.0 * x[1] / s, (r2 - 1.0) / s);
}

Coord project(const Eigen::Vector3d& X) {
    const double denom = 1.0 - X.z();
    if (std::abs(denom) < 1e-8) throw DomainError("sphere chart: point too close to the north pole");
    Coord x(2);
    x << X.x() / denom, X.y() / denom;
    return x;
}

Matrix embed_differential(const Coord& x) {
    const double s = 1.0 + x.squaredNorm();
    Matrix D(3, 2);
    for (int j = 0; j < 2; ++j) {
        for (int i = 0; i < 2; ++i) D(i, j) = (i == j ? 2.0 / s : 0.0) - 4.0 * x[i] * x[j] / (s * s);
        D(2, j) = 4.0 * x[j] / (s * s);
    }
    return D;
}

Matrix project_differential(const Eigen::Vector3d& X) {
    const double denom = 1.0 - X.z();
    if (std::abs(denom) < 1e-8) throw DomainError("sphere chart: point too close to the north pole");
    Matrix D = Matrix::Zero(2, 3);
    D(0, 0) = 1.0 / denom;
    D(1, 1) = 1.0 / denom;
    D(0, 2) = X.x() / (denom * denom);
    D(1, 2) = X.y() / (denom * denom);
    return D;
}

double conformal_factor(const Coord& x) {
    const double s = 1.0 + x.squaredNorm();
    return 4.0 / (s * s);
}

}  // namespace sphere_chart

namespace {

// W = c(x) |y - x|^2 with c(x) = 4 / (1 + |x|^2)^2.
class SphereChartEnergy final : public EnergyModel {
public:
    Eigen::Index dim() const override { return 2; }
    std::string name() const override { return "sphere-chart"; }
    bool symmetric() const override { return false; }
    bool derivatives_analytic() const override { return true; }

    double w(const Coord& x, const Coord& y) const override {
        return sphere_chart::conformal_factor(x) * (y - x).squaredNorm();
    }

    Coord grad1(const Coord& x, const Coord& y) const override {
        const Coord delta = y - x;
        return grad_c(x) * delta.squaredNorm() - 2.0 * sphere_chart::conformal_factor(x) * delta;
    }

    Coord grad2(const Coord& x, const Coord& y) const override {
        return 2.0 * sphere_chart::conformal_factor(x) * (y - x);
    }

    Matrix hess11(const Coord& x, const Coord& y) const override {
        const Coord delta = y - x;
        const Coord gc = grad_c(x);
        return hess_c(x) * delta.squaredNorm() - 2.0 * gc * delta.transpose() - 2.0 * delta * gc.transpose() +
               2.0 * sphere_chart::conformal_factor(x) * Matrix::Identity(2, 2);
    }

    Matrix hess12(const Coord& x, const Coord& y) const override {
        return 2.0 * grad_c(x) * (y - x).transpose() -
               2.0 * sphere_chart::conformal_factor(x) * Matrix::Identity(2, 2);
    }

    Matrix hess22(const Coord& x, const Coord&) const override {
        return 2.0 * sphere_chart::conformal_factor(x) * Matrix::Identity(2, 2);
    }

    // Pullback DX^T DX of the Euclidean metric through the embedding.
    std::optional<Matrix> reference_metric(const Coord& x) const override {
        const Matrix D = sphere_chart::embed_differential(x);
        return D.transpose() * D;
    }

private:
    static Coord grad_c(const Coord& x) {
        const double s = 1.0 + x.squaredNorm();
        return -16.0 * x / (s * s * s);
    }

    static Matrix hess_c(const Coord& x) {
        const double s = 1.0 + x.squaredNorm();
        return -16.0 / (s * s * s) * Matrix::Identity(2, 2) + 96.0 / (s * s * s * s) * x * x.transpose();
    }
};

// Unit vector e orthogonal to p in the plane of p and q, and the angle between them.
std::pair<Coord, double> arc_frame(const Coord& p, const Coord& q) {
    const double c = p.dot(q);
    Coord u = q - c * p;
    const double s = u.norm();
    const double theta = std::atan2(s, c);
    if (s < 1e-12) {
        if (c < 0.0) throw DomainError("great circle: antipodal points");
        return {Coord::Zero(p.size()), 0.0};
    }
    return {u / s, theta};
}

}  // namespace

EnergyPtr sphere_chart_energy() { return std::make_shared<SphereChartEnergy>(); }

namespace great_circle {

double dist(const Coord& p, const Coord& q) { return arc_frame(p, q).second; }

Coord geodesic(const Coord& p, const Coord& q, double t) {
    if (t == 0.0) return p;
    if (t == 1.0) return q;
    const auto [e, theta] = arc_frame(p, q);
    return std::cos(t * theta) * p + std::sin(t * theta) * e;
}

Coord log(const Coord& p, const Coord& q) {
    const auto [e, theta] = arc_frame(p, q);
    return theta * e;
}

Coord exp(const Coord& p, const Coord& v) {
    const double theta = v.norm();
    if (theta == 0.0) return p;
    return std::cos(theta) * p + std::sin(theta) * (v / theta);
}

Coord transport(const Coord& p, const Coord& q, const Coord& v) {
    const auto [e, theta] = arc_frame(p, q);
    if (theta == 0.0) return v;
    const double along = v.dot(e);
    const Coord rest = v - along * e - v.dot(p) * p;
    const Coord e_end = -std::sin(theta) * p + std::cos(theta) * e;
    return along * e_end + rest;
}

}  // namespace great_circle

double SphereChartOracle::dist(const Coord& xa, const Coord& xb) {
    return great_circle::dist(sphere_chart::embed(xa), sphere_chart::embed(xb));
}

Coord SphereChartOracle::geodesic(const Coord& xa, const Coord& xb, double t) {
    if (t == 0.0) return xa;
    if (t == 1.0) return xb;
    const Coord g = great_circle::geodesic(sphere_chart::embed(xa), sphere_chart::embed(xb), t);
    return sphere_chart::project(g);
}

Coord SphereChartOracle::log(const Coord& xa, const Coord& xb) {
    const Eigen::Vector3d P = sphere_chart::embed(xa);
    const Coord V = great_circle::log(P, sphere_chart::embed(xb));
    return sphere_chart::project_differential(P) * V;
}

Coord SphereChartOracle::exp(const Coord& x, const Coord& v) {
    const Eigen::Vector3d P = sphere_chart::embed(x);
    const Coord V = sphere_chart::embed_differential(x) * v;
    return sphere_chart::project(great_circle::exp(P, V));
}

Coord SphereChartOracle::transport(const Coord& xa, const Coord& xb, const Coord& w) {
    const Eigen::Vector3d P = sphere_chart::embed(xa);
    const Eigen::Vector3d Q = sphere_chart::embed(xb);
    const Coord W = great_circle::transport(P, Q, sphere_chart::embed_differential(xa) * w);
    return sphere_chart::project_differential(Q) * W;
}

}  // namespace dgc

#include "dgc/models/rod.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <iomanip>
#include <string>

namespace dgc {

namespace {

using Vec2 = Eigen::Vector2d;

constexpr double kMinLength = 1e-12;

int wrap(int i, int n) { return ((i % n) + n) % n; }

Vec2 node(const Coord& x, int i, int n) { return x.segment<2>(2 * wrap(i, n)); }

// x_s at node i: (x_{i+1} - x_{i-1}) / (2h), h = 1/n.
Vec2 first_diff(const Coord& x, int i, int n) { return (node(x, i + 1, n) - node(x, i - 1, n)) * (0.5 * n); }

// x_ss at node i: (x_{i+1} - 2 x_i + x_{i-1}) / h^2.
Vec2 second_diff(const Coord& x, int i, int n) {
    return (node(x, i + 1, n) - 2.0 * node(x, i, n) + node(x, i - 1, n)) * (double(n) * n);
}

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

// Adds the adjoint of the first-difference stencil applied to g at node i.
void scatter_first(Coord& out, const Vec2& g, int i, int n) {
    out.segment<2>(2 * wrap(i + 1, n)) += g * (0.5 * n);
    out.segment<2>(2 * wrap(i - 1, n)) -= g * (0.5 * n);
}

void scatter_second(Coord& out, const Vec2& g, int i, int n) {
    const double s = double(n) * n;
    out.segment<2>(2 * wrap(i + 1, n)) += g * s;
    out.segment<2>(2 * wrap(i, n)) -= 2.0 * g * s;
    out.segment<2>(2 * wrap(i - 1, n)) += g * s;
}

double curvature_at(const Vec2& p, const Vec2& e) {
    const double len = p.norm();
    return cross(p, e) / (len * len * len);
}

// Row vector (length 2n) of the linear map v -> t . v_s at node i.
Coord tangential_strain_row(const Vec2& t, int i, int n) {
    Coord row = Coord::Zero(2 * n);
    scatter_first(row, t, i, n);
    return row;
}

class RodEnergyBase : public EnergyFunction {
public:
    explicit RodEnergyBase(RodParams p) : n_(p.nodes), delta_(p.delta) {
        if (p.nodes < 8) throw PreconditionError("rod model needs N >= 8");
        if (!(p.delta > 0.0)) throw PreconditionError("rod thickness delta must be positive");
    }

    Eigen::Index dim() const override { return 2 * n_; }
    bool symmetric() const override { return false; }

    void check_admissible(const Coord& x) const override {
        EnergyFunction::check_admissible(x);
        check_rod_admissible(x);
    }

protected:
    double h() const { return 1.0 / n_; }

    // Tangential term delta/2 (1 - a/b)^2 sqrt(b), a = |q|^2, b = |p|^2.
    double tangential(const Vec2& p, const Vec2& q) const {
        const double b = p.squaredNorm();
        const double strain = 1.0 - q.squaredNorm() / b;
        return 0.5 * delta_ * strain * strain * std::sqrt(b);
    }

    void check_pair(const Coord& x, const Coord& y) const {
        check_admissible(x);
        check_admissible(y);
    }

    int n_;
    double delta_;
};

class SimplifiedRodEnergy final : public RodEnergyBase {
public:
    using RodEnergyBase::RodEnergyBase;

    std::string name() const override { return "rod-simplified"; }
    bool has_gradients() const override { return true; }

    double w(const Coord& x, const Coord& y) const override {
        check_pair(x, y);
        const double d3 = delta_ * delta_ * delta_;
        double sum = 0.0;
        for (int i = 0; i < n_; ++i) {
            const Vec2 p = first_diff(x, i, n_);
            const Vec2 q = first_diff(y, i, n_);
            const Vec2 de = second_diff(y, i, n_) - second_diff(x, i, n_);
            sum += tangential(p, q) + d3 * de.squaredNorm() * p.norm();
        }
        return h() * sum;
    }

    Coord grad1(const Coord& x, const Coord& y) const override {
        check_pair(x, y);
        const double d3 = delta_ * delta_ * delta_;
        Coord g = Coord::Zero(2 * n_);
        for (int i = 0; i < n_; ++i) {
            const Vec2 p = first_diff(x, i, n_);
            const Vec2 q = first_diff(y, i, n_);
            const Vec2 de = second_diff(y, i, n_) - second_diff(x, i, n_);
            const double b = p.squaredNorm();
            const double a = q.squaredNorm();
            const double sb = std::sqrt(b);
            const double strain = 1.0 - a / b;
            // d/db of the integrand.
            const double fb = 0.5 * delta_ * (2.0 * strain * (a / (b * b)) * sb + strain * strain / (2.0 * sb)) +
                              d3 * de.squaredNorm() / (2.0 * sb);
            scatter_first(g, h() * fb * 2.0 * p, i, n_);
            scatter_second(g, -h() * 2.0 * d3 * sb * de, i, n_);
        }
        return g;
    }

    Coord grad2(const Coord& x, const Coord& y) const override {
        check_pair(x, y);
        const double d3 = delta_ * delta_ * delta_;
        Coord g = Coord::Zero(2 * n_);
        for (int i = 0; i < n_; ++i) {
            const Vec2 p = first_diff(x, i, n_);
            const Vec2 q = first_diff(y, i, n_);
            const Vec2 de = second_diff(y, i, n_) - second_diff(x, i, n_);
            const double b = p.squaredNorm();
            const double sb = std::sqrt(b);
            const double strain = 1.0 - q.squaredNorm() / b;
            scatter_first(g, h() * (-2.0 * delta_ * strain / sb) * q, i, n_);
            scatter_second(g, h() * 2.0 * d3 * sb * de, i, n_);
        }
        return g;
    }

    // g(v,v) = sum_i h [2 delta (t_i . v_s)^2 / |x_s| + delta^3 |v_ss|^2 |x_s|].
    std::optional<Matrix> reference_metric(const Coord& x) const override {
        check_admissible(x);
        const double d3 = delta_ * delta_ * delta_;
        Matrix g = Matrix::Zero(2 * n_, 2 * n_);
        for (int i = 0; i < n_; ++i) {
            const Vec2 p = first_diff(x, i, n_);
            const double len = p.norm();
            const Coord r = tangential_strain_row(p / len, i, n_);
            g += (h() * 2.0 * delta_ / len) * r * r.transpose();
            for (int c = 0; c < 2; ++c) {
                Vec2 unit = Vec2::Zero();
                unit[c] = 1.0;
                Coord s = Coord::Zero(2 * n_);
                scatter_second(s, unit, i, n_);
                g += (h() * d3 * len) * s * s.transpose();
            }
        }
        return g;
    }
};

class FullRodEnergy final : public RodEnergyBase {
public:
    using RodEnergyBase::RodEnergyBase;

    std::string name() const override { return "rod-full"; }

    double w(const Coord& x, const Coord& y) const override {
        check_pair(x, y);
        const double d3 = delta_ * delta_ * delta_;
        double sum = 0.0;
        for (int i = 0; i < n_; ++i) {
            const Vec2 p = first_diff(x, i, n_);
            const Vec2 q = first_diff(y, i, n_);
            const double dk = curvature_at(q, second_diff(y, i, n_)) - curvature_at(p, second_diff(x, i, n_));
            sum += tangential(p, q) + d3 * dk * dk * p.norm();
        }
        return h() * sum;
    }

    // g(v,v) = sum_i h [2 delta W''(1) (t_i . v_s)^2 / |x_s| + delta^3 (dkappa_i(v))^2 |x_s|],
    // W''(1) = 1, with dkappa the analytic linearization of the discrete curvature.
    std::optional<Matrix> reference_metric(const Coord& x) const override {
        check_admissible(x);
        const double d3 = delta_ * delta_ * delta_;
        Matrix g = Matrix::Zero(2 * n_, 2 * n_);
        for (int i = 0; i < n_; ++i) {
            const Vec2 p = first_diff(x, i, n_);
            const Vec2 e = second_diff(x, i, n_);
            const double len = p.norm();
            const Coord r = tangential_strain_row(p / len, i, n_);
            g += (h() * 2.0 * delta_ / len) * r * r.transpose();

            const double l3 = len * len * len;
            const Vec2 dk_dp = Vec2(e.y(), -e.x()) / l3 - 3.0 * cross(p, e) * p / (l3 * len * len);
            const Vec2 dk_de = Vec2(-p.y(), p.x()) / l3;
            Coord k = Coord::Zero(2 * n_);
            scatter_first(k, dk_dp, i, n_);
            scatter_second(k, dk_de, i, n_);
            g += (h() * d3 * len) * k * k.transpose();
        }
        return g;
    }
};

}  // namespace

int rod_node_count(const Coord& nodes) {
    if (nodes.size() % 2 != 0) throw DomainError("rod: odd number of coordinates");
    const int n = static_cast<int>(nodes.size() / 2);
    if (n < 8) throw DomainError("rod: need at least 8 nodes");
    return n;
}

void check_rod_admissible(const Coord& x) {
    const int n = rod_node_count(x);
    if (!x.allFinite()) throw DomainError("rod: non-finite node");
    for (int i = 0; i < n; ++i) {
        if ((node(x, i + 1, n) - node(x, i, n)).norm() < kMinLength)
            throw DomainError("rod: degenerate segment at node " + std::to_string(i));
        if (first_diff(x, i, n).norm() < kMinLength)
            throw DomainError("rod: vanishing tangent at node " + std::to_string(i));
    }
}

std::vector<double> rod_curvature(const Coord& x) {
    check_rod_admissible(x);
    const int n = rod_node_count(x);
    std::vector<double> kappa(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) kappa[static_cast<std::size_t>(i)] = curvature_at(first_diff(x, i, n), second_diff(x, i, n));
    return kappa;
}

Coord circle_curve(int nodes, double radius, double cx, double cy, bool counterclockwise) {
    Coord x(2 * nodes);
    const double sign = counterclockwise ? 1.0 : -1.0;
    for (int i = 0; i < nodes; ++i) {
        const double phi = sign * 2.0 * std::numbers::pi * i / nodes;
        x[2 * i] = cx + radius * std::cos(phi);
        x[2 * i + 1] = cy + radius * std::sin(phi);
    }
    return x;
}

Coord ellipse_curve(int nodes, double a, double b) {
    Coord x(2 * nodes);
    for (int i = 0; i < nodes; ++i) {
        const double phi = 2.0 * std::numbers::pi * i / nodes;
        x[2 * i] = a * std::cos(phi);
        x[2 * i + 1] = b * std::sin(phi);
    }
    return x;
}

EnergyFunctionPtr rod_energy_function(RodEnergyKind kind, RodParams params) {
    if (kind == RodEnergyKind::simplified) return std::make_shared<SimplifiedRodEnergy>(params);
    return std::make_shared<FullRodEnergy>(params);
}

EnergyPtr rod_energy(RodEnergyKind kind, RodParams params, FdScheme scheme) {
    return fd_derivatives(rod_energy_function(kind, params), scheme);
}

ConstraintPtr rod_gauge(RodEnergyKind kind, const Coord& reference) {
    const int n = rod_node_count(reference);
    if (kind == RodEnergyKind::simplified) return std::make_shared<RigidGauge>(n);
    return std::make_shared<RigidGauge>(n, reference);
}

Coord read_curve_csv(std::istream& in) {
    std::vector<double> vals;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        Coord row;
        try {
            row = parse_coord(line);
        } catch (const PreconditionError&) {
            if (first) {
                first = false;
                continue;  // header
            }
            throw PreconditionError("malformed curve CSV row: " + line);
        }
        first = false;
        if (row.size() != 2) throw PreconditionError("curve CSV rows must have two columns: " + line);
        vals.push_back(row[0]);
        vals.push_back(row[1]);
    }
    Coord x = Eigen::Map<Coord>(vals.data(), static_cast<Eigen::Index>(vals.size()));
    rod_node_count(x);
    return x;
}

void write_curve_csv(const Coord& nodes, std::ostream& out) {
    out << "x,y\n" << std::setprecision(17);
    for (Eigen::Index i = 0; i + 1 < nodes.size(); i += 2) out << nodes[i] << ',' << nodes[i + 1] << '\n';
}

}  // namespace dgc

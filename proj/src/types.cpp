#include "dgc/types.hpp"
#include "dgc/energy_model.hpp"

#include <cmath>
#include <sstream>

namespace dgc {

DiscretePath::DiscretePath(std::vector<Coord> points) : points_(std::move(points)) {
    if (points_.size() < 2) throw PreconditionError("a discrete path needs at least two points");
    const auto d = points_.front().size();
    if (d < 1) throw PreconditionError("coordinate dimension must be at least 1");
    for (const auto& p : points_)
        if (p.size() != d) throw PreconditionError("all path points must share one dimension");
}

DiscretePath DiscretePath::linear(const Coord& from, const Coord& to, int steps) {
    if (steps < 1) throw PreconditionError("K must be at least 1");
    if (from.size() != to.size()) throw PreconditionError("endpoint dimensions differ");
    std::vector<Coord> pts;
    pts.reserve(static_cast<std::size_t>(steps) + 1);
    for (int k = 0; k <= steps; ++k) {
        const double s = static_cast<double>(k) / steps;
        pts.push_back((1.0 - s) * from + s * to);
    }
    pts.front() = from;
    pts.back() = to;
    return DiscretePath(std::move(pts));
}

bool all_finite(const Coord& v) { return v.allFinite(); }

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Coord parse_coord(const std::string& text) {
    std::vector<double> vals;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw PreconditionError("cannot parse coordinate entry '" + item + "'");
        }
        if (item.find_first_not_of(" \t", used) != std::string::npos)
            throw PreconditionError("trailing characters in coordinate entry '" + item + "'");
        vals.push_back(v);
    }
    if (vals.empty()) throw PreconditionError("empty coordinate");
    return Eigen::Map<Coord>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

void EnergyModel::check_admissible(const Coord& x) const {
    if (x.size() != dim())
        throw DomainError(name() + ": expected dimension " + std::to_string(dim()) + ", got " +
                          std::to_string(x.size()));
    if (!x.allFinite()) throw DomainError(name() + ": non-finite coordinate");
}

void require_finite(const Matrix& m, const char* what) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (!std::isfinite(m(i, j)))
                throw EvaluationError(std::string(what) + ": non-finite entry (" + std::to_string(i) +
                                      "," + std::to_string(j) + ")");
}

void require_finite(const Coord& v, const char* what) {
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (!std::isfinite(v[i]))
            throw EvaluationError(std::string(what) + ": non-finite entry " + std::to_string(i));
}

Matrix metric_from_energy(const EnergyModel& model, const Coord& x) {
    model.check_admissible(x);
    Matrix h = model.hess22(x, x);
    require_finite(h, "W_,22[x,x]");
    return 0.25 * (h + h.transpose());
}

}  // namespace dgc

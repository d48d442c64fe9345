#include "dgc/consistency.hpp"

#include <algorithm>
#include <cmath>

namespace dgc {

bool ConsistencyReport::passed() const {
    return std::all_of(entries.begin(), entries.end(), [](const Entry& e) { return e.passed; });
}

double ConsistencyReport::worst_residual() const {
    double worst = 0.0;
    for (const auto& e : entries) worst = std::max(worst, e.residual);
    return worst;
}

ConsistencyReport check_consistency(const EnergyModel& model, const Coord& x, double tol) {
    model.check_admissible(x);

    const Matrix h11 = model.hess11(x, x);
    const Matrix h12 = model.hess12(x, x);
    const Matrix h21 = model.hess21(x, x);
    const Matrix h22 = model.hess22(x, x);
    require_finite(h11, "W_,11[x,x]");
    require_finite(h12, "W_,12[x,x]");
    require_finite(h21, "W_,21[x,x]");
    require_finite(h22, "W_,22[x,x]");

    const Matrix g = model.reference_metric(x).value_or(metric_from_energy(model, x));

    ConsistencyReport r;
    r.tol = tol;
    r.entries[0] = {"W[x,x] = 0", std::abs(model.w(x, x)), false};
    r.entries[1] = {"W_,1[x,x] = 0", model.grad1(x, x).norm(), false};
    r.entries[2] = {"W_,2[x,x] = 0", model.grad2(x, x).norm(), false};
    r.entries[3] = {"W_,22[x,x] = 2 g_x", max_abs(h22 - 2.0 * g), false};
    r.entries[4] = {"W_,11[x,x] = W_,22[x,x]", max_abs(h11 - h22), false};
    r.entries[5] = {"W_,12[x,x] = -W_,22[x,x]", max_abs(h12 + h22), false};
    r.entries[6] = {"W_,21[x,x] = -W_,22[x,x]", max_abs(h21 + h22), false};
    for (auto& e : r.entries) e.passed = std::isfinite(e.residual) && e.residual <= tol;
    return r;
}

}  // namespace dgc

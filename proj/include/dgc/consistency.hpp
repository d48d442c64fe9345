#pragma once

#include "dgc/energy_model.hpp"

#include <array>
#include <string>

namespace dgc {

/// Outcome of checking the consistency identities of W at a diagonal point (x, x).
struct ConsistencyReport {
    struct Entry {
        std::string identity;
        double residual = 0.0;
        bool passed = false;
    };

    // |W|, |W_,1|, |W_,2|, W_,22 vs 2g, W_,11 vs W_,22, W_,12 vs -W_,22, W_,21 vs -W_,22
    std::array<Entry, 7> entries;
    double tol = 0.0;

    bool passed() const;
    double worst_residual() const;
};

/// Checks W[x,x] = 0, W_,1[x,x] = W_,2[x,x] = 0, W_,22[x,x] = 2 g_x and
/// W_,11 = -W_,12 = -W_,21 = W_,22 at (x, x). Vector norms are Euclidean,
/// matrix norms max-abs. g_x is the model's reference metric when it has one,
/// otherwise the symmetrized 1/2 W_,22.
ConsistencyReport check_consistency(const EnergyModel& model, const Coord& x, double tol);

}  // namespace dgc

#pragma once

#include "dgc/types.hpp"

#include <vector>

namespace dgc {

/// Block-tridiagonal system with n square diagonal blocks. lower[k] couples row
/// k to unknown k-1 (lower[0] unused), upper[k] couples row k to unknown k+1
/// (upper[n-1] unused).
struct BlockTridiagonal {
    std::vector<Matrix> lower;
    std::vector<Matrix> diag;
    std::vector<Matrix> upper;

    explicit BlockTridiagonal(std::size_t n = 0) : lower(n), diag(n), upper(n) {}
    std::size_t size() const { return diag.size(); }

    /// Dense matrix, for tests.
    Matrix dense() const;
};

/// Block Thomas elimination. Throws LinearAlgebraError on a singular pivot.
std::vector<Coord> solve_block_tridiagonal(const BlockTridiagonal& system, const std::vector<Coord>& rhs);

}  // namespace dgc

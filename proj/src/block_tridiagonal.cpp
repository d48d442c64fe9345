#include "dgc/block_tridiagonal.hpp"

#include <string>

namespace dgc {

Matrix BlockTridiagonal::dense() const {
    std::vector<Eigen::Index> offset(size() + 1, 0);
    for (std::size_t k = 0; k < size(); ++k) offset[k + 1] = offset[k] + diag[k].rows();
    Matrix out = Matrix::Zero(offset.back(), offset.back());
    for (std::size_t k = 0; k < size(); ++k) {
        const auto r = offset[k];
        out.block(r, r, diag[k].rows(), diag[k].cols()) = diag[k];
        if (k > 0) out.block(r, offset[k - 1], lower[k].rows(), lower[k].cols()) = lower[k];
        if (k + 1 < size()) out.block(r, offset[k + 1], upper[k].rows(), upper[k].cols()) = upper[k];
    }
    return out;
}

std::vector<Coord> solve_block_tridiagonal(const BlockTridiagonal& sys, const std::vector<Coord>& rhs) {
    const std::size_t n = sys.size();
    if (rhs.size() != n) throw PreconditionError("block system and right-hand side sizes differ");
    if (n == 0) return {};

    std::vector<Matrix> c(n);  // eliminated super-diagonal
    std::vector<Coord> y(n);

    auto factor = [&](const Matrix& m, std::size_t k) {
        Eigen::FullPivLU<Matrix> lu(m);
        if (!lu.isInvertible())
            throw LinearAlgebraError("singular pivot block at row " + std::to_string(k));
        return lu;
    };

    {
        auto lu = factor(sys.diag[0], 0);
        if (n > 1) c[0] = lu.solve(sys.upper[0]);
        y[0] = lu.solve(rhs[0]);
    }
    for (std::size_t k = 1; k < n; ++k) {
        const Matrix pivot = sys.diag[k] - sys.lower[k] * c[k - 1];
        auto lu = factor(pivot, k);
        if (k + 1 < n) c[k] = lu.solve(sys.upper[k]);
        y[k] = lu.solve(rhs[k] - sys.lower[k] * y[k - 1]);
    }
    for (std::size_t k = n - 1; k-- > 0;) y[k] -= c[k] * y[k + 1];
    for (const auto& v : y)
        if (!v.allFinite()) throw LinearAlgebraError("non-finite solution of block system");
    return y;
}

}  // namespace dgc

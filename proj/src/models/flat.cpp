#include "dgc/models/flat.hpp"

namespace dgc {

namespace {

class FlatEnergy final : public EnergyModel {
public:
    explicit FlatEnergy(Eigen::Index dim) : dim_(dim) {
        if (dim < 1) throw PreconditionError("flat energy: dimension must be at least 1");
    }

    Eigen::Index dim() const override { return dim_; }
    std::string name() const override { return "flat"; }
    bool symmetric() const override { return true; }
    bool derivatives_analytic() const override { return true; }

    double w(const Coord& x, const Coord& y) const override { return (y - x).squaredNorm(); }
    Coord grad1(const Coord& x, const Coord& y) const override { return 2.0 * (x - y); }
    Coord grad2(const Coord& x, const Coord& y) const override { return 2.0 * (y - x); }
    Matrix hess11(const Coord&, const Coord&) const override { return 2.0 * Matrix::Identity(dim_, dim_); }
    Matrix hess12(const Coord&, const Coord&) const override { return -2.0 * Matrix::Identity(dim_, dim_); }
    Matrix hess22(const Coord&, const Coord&) const override { return 2.0 * Matrix::Identity(dim_, dim_); }

    std::optional<Matrix> reference_metric(const Coord&) const override { return Matrix::Identity(dim_, dim_); }

private:
    Eigen::Index dim_;
};

}  // namespace

EnergyPtr flat_energy(Eigen::Index dim) { return std::make_shared<FlatEnergy>(dim); }

}  // namespace dgc

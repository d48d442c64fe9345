#pragma once

#include "dgc/energy_model.hpp"

namespace dgc {

/// W[x, x~] = |x~ - x|^2 on R^dim, analytic derivatives. Also the spring
/// energy of embedded hypersurfaces.
EnergyPtr flat_energy(Eigen::Index dim = 2);

}  // namespace dgc

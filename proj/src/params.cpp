#include "slm/params.hpp"

#include <cmath>
#include <utility>

#include "slm/errors.hpp"

namespace slm {

ModelParams::ModelParams(double m, Kernel aplus, Kernel aminus, double eps)
    : mortality(m), dispersal(std::move(aplus)), competition(std::move(aminus)), epsilon(eps) {
  require(m >= 0.0 && std::isfinite(m), ErrorKind::invalid_parameter, "mortality must be nonnegative");
  require(eps >= 0.0 && eps <= 1.0, ErrorKind::invalid_parameter, "epsilon must lie in [0, 1]");
  require(dispersal.grid() == competition.grid(), ErrorKind::incompatible_grids,
          "dispersal and competition kernels must share one grid");
}

}  // namespace slm

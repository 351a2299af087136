#include "slm/errors.hpp"

namespace slm {

std::string_view category_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_parameter: return "invalid-parameter";
    case ErrorKind::incompatible_grids: return "incompatible-grids";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::invalid_interval: return "invalid-interval";
    case ErrorKind::no_interior_maximum: return "no-interior-maximum";
    case ErrorKind::undefined_q: return "undefined-q";
    case ErrorKind::blow_up: return "blow-up";
    case ErrorKind::instability: return "instability";
    case ErrorKind::closure_singularity: return "closure-singularity";
    case ErrorKind::horizon_violation: return "horizon-violation";
    case ErrorKind::config: return "config";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

BlowUpError::BlowUpError(double time, std::size_t population)
    : Error(ErrorKind::blow_up, "population cap " + std::to_string(population) +
                                    " exceeded at t=" + std::to_string(time)),
      time_(time),
      population_(population) {}

InstabilityError::InstabilityError(double time, std::size_t cell, double value)
    : Error(ErrorKind::instability, "negative value " + std::to_string(value) + " in cell " +
                                        std::to_string(cell) + " at t=" + std::to_string(time)),
      time_(time),
      cell_(cell) {}

}  // namespace slm

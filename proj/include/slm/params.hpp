#pragma once

#include "slm/kernel.hpp"

namespace slm {

/// Mortality m, dispersal a+, competition a- and the Vlasov scale epsilon.
///
/// The particle simulator and the correlation hierarchy weight competition by epsilon;
/// the kinetic equation is the epsilon -> 0 limit of the renormalized system and uses the
/// competition kernel as is.
struct ModelParams {
  double mortality = 0.0;
  Kernel dispersal;
  Kernel competition;
  double epsilon = 1.0;

  ModelParams(double m, Kernel aplus, Kernel aminus, double eps = 1.0);

  /// Discrete mass of epsilon * a-.
  double effective_competition_mass() const { return epsilon * competition.mass(); }
};

}  // namespace slm

#pragma once

#include <span>
#include <vector>

#include "slm/field.hpp"
#include "slm/params.hpp"

namespace slm {

/// Coefficients of the homogeneous dynamics du/dt = (<a+> - m) u - <a-> u^2.
struct BernoulliParams {
  double mortality = 0.0;
  double aplus_mass = 0.0;
  double aminus_mass = 0.0;

  /// Uses the discrete kernel masses so grid equilibria are exact.
  static BernoulliParams from(const ModelParams& params);
};

/// Carrying capacity (<a+> - m) / <a->. May be <= 0.
double bernoulli_q(const BernoulliParams& p);

/// Closed-form solution of the homogeneous dynamics for any sign of <a+> - m.
double bernoulli_solution(double u0, double t, const BernoulliParams& p);

/// -m f - f (a- * f) + (a+ * f), cellwise.
Field kinetic_rhs(const Field& f, const ModelParams& params);

/// Largest dt admitted by the stability guard 0.1 / (m + <a-> max rho + <a+>).
double kinetic_dt_limit(const ModelParams& params, double max_density);

struct KineticTrajectory {
  std::vector<double> times;
  std::vector<Field> fields;
};

/// Classical RK4 with fixed step not exceeding dt; each interval between snapshot times is
/// split into equal steps so snapshots are hit exactly. Round-off negatives above
/// -1e-12 max|rho| are clipped to 0, anything lower raises InstabilityError.
KineticTrajectory solve_kinetic(const Field& rho0, const ModelParams& params, double horizon, double dt,
                                std::span<const double> snapshot_times);

/// Validates snapshot times (sorted, within [0, horizon]); empty input yields {horizon}.
std::vector<double> resolve_snapshot_times(std::span<const double> snapshot_times, double horizon);

}  // namespace slm

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "slm/field.hpp"
#include "slm/hierarchy.hpp"
#include "slm/params.hpp"

namespace slm {

enum class ScalingMode { microsim, hierarchy };

const char* scaling_mode_name(ScalingMode mode);
ScalingMode parse_scaling_mode(const std::string& name);

/// Weak-interaction scaling: competition weighted by eps (composing with the current epsilon),
/// initial intensity eps^-1 rho0. Dispersal and mortality are untouched.
std::pair<ModelParams, Field> scaled_params(const ModelParams& params, const Field& rho0, double eps);

struct ScalingOptions {
  std::vector<double> eps_list{1.0, 0.5, 0.25, 0.1};
  double horizon = 1.0;
  std::vector<double> snapshot_times;  // empty = {horizon}
  double dt = 0.01;
  /// Upper scale index; defaults to -log sup rho0, the largest one whose space holds rho0.
  std::optional<double> alpha_up;
  /// Lower scale index; defaults to the horizon-optimal value.
  std::optional<double> alpha_low;
  ClosureRule closure = ClosureRule::mean_field;
  std::size_t runs = 0;  // 0 = default_runs per eps
  std::uint64_t master_seed = 1;
  unsigned jobs = 0;
  std::size_t max_population = 1'000'000;
};

struct ScalingPoint {
  double t;
  double estimate;    // spatial mean of the rescaled density (or of k1)
  double se;          // Monte Carlo standard error of `estimate`, 0 in hierarchy mode
  double reference;   // spatial mean of the kinetic density
  double cell_error;  // max over cells |rescaled density - rho_t|
};

struct ScalingEntry {
  double eps = 1.0;
  /// Hierarchy: sup over t of cell_error. Microsim: sup over t of |estimate - reference|.
  double sup_error = 0.0;
  double mc_se = 0.0;   // largest se over the snapshots
  double order2_error = 0.0;  // hierarchy only: sup |k2 - rho_t (x) rho_t|
  std::size_t runs = 0;
  std::vector<ScalingPoint> trajectory;
};

struct ScalingReport {
  ScalingMode mode = ScalingMode::hierarchy;
  double alpha_up = 0.0;
  double alpha_low = 0.0;
  double t_star = 0.0;
  double horizon = 0.0;
  std::vector<ScalingEntry> entries;

  std::vector<double> epsilons() const;
  std::vector<double> errors() const;
};

/// Runs per eps so that the spatial-mean density SE stays below 5% of mean rho0,
/// assuming Poisson fluctuations: R > 400 eps / (mean rho0 L^d), at least 16.
std::size_t default_runs(const Field& rho0, double eps);

/// Distance of the rescaled observations from solve_kinetic for each eps. Raises
/// horizon_violation when horizon >= T*.
ScalingReport vlasov_error(const Field& rho0, const ModelParams& params, ScalingMode mode,
                           const ScalingOptions& options);

}  // namespace slm

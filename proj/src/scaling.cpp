#include "slm/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "slm/errors.hpp"
#include "slm/kinetic.hpp"
#include "slm/microsim.hpp"
#include "slm/stats.hpp"
#include "slm/theory.hpp"

namespace slm {

const char* scaling_mode_name(ScalingMode mode) { return mode == ScalingMode::microsim ? "microsim" : "hierarchy"; }

ScalingMode parse_scaling_mode(const std::string& name) {
  if (name == "microsim") return ScalingMode::microsim;
  if (name == "hierarchy") return ScalingMode::hierarchy;
  fail(ErrorKind::invalid_parameter, "unknown scaling mode '" + name + "' (expected microsim or hierarchy)");
}

std::pair<ModelParams, Field> scaled_params(const ModelParams& params, const Field& rho0, double eps) {
  require(eps > 0.0 && eps <= 1.0, ErrorKind::invalid_parameter,
          "scaling eps must lie in (0, 1], got " + std::to_string(eps));
  ModelParams scaled = params;
  scaled.epsilon = params.epsilon * eps;
  Field intensity = rho0;
  for (double& v : intensity.values) v /= eps;
  return {std::move(scaled), std::move(intensity)};
}

std::vector<double> ScalingReport::epsilons() const {
  std::vector<double> out;
  for (const auto& e : entries) out.push_back(e.eps);
  return out;
}

std::vector<double> ScalingReport::errors() const {
  std::vector<double> out;
  for (const auto& e : entries) out.push_back(e.sup_error);
  return out;
}

std::size_t default_runs(const Field& rho0, double eps) {
  const double mass = rho0.mean() * rho0.grid.torus().volume();
  require(mass > 0.0, ErrorKind::invalid_parameter, "initial density has zero mass");
  return std::max<std::size_t>(16, static_cast<std::size_t>(std::floor(400.0 * eps / mass)) + 1);
}

namespace {

double max_cell_error(const Field& a, const Field& b, double scale = 1.0) {
  double err = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) err = std::max(err, std::abs(scale * a[c] - b[c]));
  return err;
}

ScalingEntry hierarchy_entry(const Field& rho0, const ModelParams& params, double eps, const ScalingOptions& options,
                             const KineticTrajectory& reference) {
  ModelParams scaled = scaled_params(params, rho0, eps).first;
  const HierarchyTrajectory traj = solve_hierarchy(TruncatedState::product(rho0), options.closure, scaled,
                                                   options.horizon, options.dt, reference.times);
  ScalingEntry entry;
  entry.eps = eps;
  for (std::size_t s = 0; s < traj.times.size(); ++s) {
    const Field& rho = reference.fields[s];
    const double cell = max_cell_error(traj.k1[s], rho);
    entry.trajectory.push_back({traj.times[s], traj.k1[s].mean(), 0.0, rho.mean(), cell});
    entry.sup_error = std::max(entry.sup_error, cell);
    const Field2 product = Field2::product(rho, rho);
    for (std::size_t i = 0; i < product.values.size(); ++i)
      entry.order2_error = std::max(entry.order2_error, std::abs(traj.k2[s].values[i] - product.values[i]));
  }
  return entry;
}

ScalingEntry microsim_entry(const Field& rho0, const ModelParams& params, double eps, const ScalingOptions& options,
                            const KineticTrajectory& reference) {
  auto [scaled, intensity] = scaled_params(params, rho0, eps);
  const double volume = rho0.grid.torus().volume();
  require(intensity.max() * volume <= static_cast<double>(options.max_population) / 4.0, ErrorKind::invalid_parameter,
          "eps = " + std::to_string(eps) + " puts the initial population above a quarter of the population cap");

  auto competition = std::make_shared<const Kernel>(scaled.competition);
  EnsembleOptions ens;
  ens.runs = options.runs ? options.runs : default_runs(rho0, eps);
  ens.master_seed = derive_seed(options.master_seed, static_cast<std::uint64_t>(std::llround(1e9 / eps)));
  ens.jobs = options.jobs;
  ens.run.max_population = options.max_population;
  const auto results = run_ensemble([&](Rng& rng) { return init_poisson_field(rho0, 1.0 / eps, competition, rng); },
                                    scaled, options.horizon, reference.times, ens);

  ScalingEntry entry;
  entry.eps = eps;
  entry.runs = ens.runs;
  std::vector<double> density(ens.runs);
  for (std::size_t s = 0; s < reference.times.size(); ++s) {
    EnsembleSnapshot snap{rho0.grid.torus(), reference.times[s], {}};
    snap.runs.reserve(ens.runs);
    for (std::size_t r = 0; r < ens.runs; ++r) {
      snap.runs.push_back(results[r].snapshots[s].points);
      density[r] = eps * static_cast<double>(snap.runs.back().size()) / volume;
    }
    const MeanSe m = mean_se(density);
    const Field& rho = reference.fields[s];
    const DensityEstimate cells = density_estimate(snap, rho0.grid, options.jobs);
    const double cell = max_cell_error(cells.mean, rho, eps);
    entry.trajectory.push_back({reference.times[s], m.mean, m.se, rho.mean(), cell});
    entry.sup_error = std::max(entry.sup_error, std::abs(m.mean - rho.mean()));
    entry.mc_se = std::max(entry.mc_se, m.se);
  }
  return entry;
}

}  // namespace

ScalingReport vlasov_error(const Field& rho0, const ModelParams& params, ScalingMode mode,
                           const ScalingOptions& options) {
  require(!options.eps_list.empty(), ErrorKind::invalid_parameter, "eps list is empty");
  for (std::size_t k = 0; k < options.eps_list.size(); ++k) {
    const double e = options.eps_list[k];
    require(e > 0.0 && e <= 1.0, ErrorKind::invalid_parameter, "eps values must lie in (0, 1]");
    if (k > 0)
      require(e < options.eps_list[k - 1], ErrorKind::invalid_parameter, "eps list must be strictly decreasing");
  }
  require(rho0.max() > 0.0, ErrorKind::invalid_parameter, "initial density is identically zero");

  ScalingReport report;
  report.mode = mode;
  report.horizon = options.horizon;
  report.alpha_up = options.alpha_up.value_or(-std::log(rho0.max()));
  const double aplus = params.dispersal.mass();
  const double aminus = params.competition.mass();
  if (options.alpha_low) {
    report.alpha_low = *options.alpha_low;
    report.t_star = horizon_T(report.alpha_low, report.alpha_up, aplus, aminus);
  } else if (aminus > 0.0) {
    const AlphaOptimum opt = optimize_alpha(report.alpha_up, aplus, aminus);
    report.alpha_low = opt.alpha_low;
    report.t_star = opt.t_max;
  } else {
    report.alpha_low = -HUGE_VAL;
    report.t_star = HUGE_VAL;
  }
  require(options.horizon < report.t_star, ErrorKind::horizon_violation,
          "horizon " + std::to_string(options.horizon) + " is not below T* = " + std::to_string(report.t_star));

  const KineticTrajectory reference = solve_kinetic(rho0, params, options.horizon, options.dt, options.snapshot_times);
  for (double eps : options.eps_list)
    report.entries.push_back(mode == ScalingMode::hierarchy ? hierarchy_entry(rho0, params, eps, options, reference)
                                                            : microsim_entry(rho0, params, eps, options, reference));
  return report;
}

}  // namespace slm

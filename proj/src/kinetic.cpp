#include "slm/kinetic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "slm/errors.hpp"

namespace slm {

BernoulliParams BernoulliParams::from(const ModelParams& params) {
  return {params.mortality, params.dispersal.mass(), params.competition.mass()};
}

double bernoulli_q(const BernoulliParams& p) {
  require(p.aminus_mass > 0.0, ErrorKind::undefined_q, "carrying capacity needs <a-> > 0");
  return (p.aplus_mass - p.mortality) / p.aminus_mass;
}

double bernoulli_solution(double u0, double t, const BernoulliParams& p) {
  require(u0 >= 0.0 && t >= 0.0, ErrorKind::invalid_parameter, "bernoulli_solution needs u0 >= 0, t >= 0");
  const double lambda = p.aplus_mass - p.mortality;
  const double b = p.aminus_mass;
  if (u0 == 0.0) return 0.0;
  const double lt = lambda * t;
  if (lt > 500.0) {
    // growth branch far past the transient: u0 q / (u0 + (q - u0) e^{-lambda t})
    const double q = lambda / b;
    return u0 * q / (u0 + (q - u0) * std::exp(-lt));
  }
  // u0 e^{lt} / (1 + b u0 (e^{lt} - 1)/lambda) covers lambda > 0, = 0 and < 0 without
  // cancellation; at lambda = 0 it is u0 / (1 + b u0 t).
  const double phi = lambda == 0.0 ? t : std::expm1(lt) / lambda;
  return u0 * std::exp(lt) / (1.0 + b * u0 * phi);
}

namespace {

class KineticSystem {
 public:
  explicit KineticSystem(const ModelParams& params)
      : m_(params.mortality), plus_(params.dispersal), minus_(params.competition) {}

  void rhs(const std::vector<double>& f, std::vector<double>& out) {
    plus_.apply(f, birth_);
    minus_.apply(f, compete_);
    out.resize(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = -m_ * f[i] - f[i] * compete_[i] + birth_[i];
  }

 private:
  double m_;
  Stencil plus_;
  Stencil minus_;
  std::vector<double> birth_;
  std::vector<double> compete_;
};

}  // namespace

Field kinetic_rhs(const Field& f, const ModelParams& params) {
  require(f.grid == params.dispersal.grid(), ErrorKind::incompatible_grids,
          "density and kernels live on different grids");
  Field out(f.grid);
  KineticSystem(params).rhs(f.values, out.values);
  return out;
}

double kinetic_dt_limit(const ModelParams& params, double max_density) {
  const double rate =
      params.mortality + params.competition.mass() * std::max(0.0, max_density) + params.dispersal.mass();
  return rate > 0.0 ? 0.1 / rate : HUGE_VAL;
}

std::vector<double> resolve_snapshot_times(std::span<const double> snapshot_times, double horizon) {
  require(horizon >= 0.0, ErrorKind::invalid_parameter, "horizon must be nonnegative");
  if (snapshot_times.empty()) return {horizon};
  std::vector<double> times(snapshot_times.begin(), snapshot_times.end());
  for (std::size_t i = 0; i < times.size(); ++i) {
    require(times[i] >= 0.0 && times[i] <= horizon, ErrorKind::invalid_parameter,
            "snapshot time " + std::to_string(times[i]) + " outside [0, horizon]");
    if (i > 0) require(times[i] >= times[i - 1], ErrorKind::invalid_parameter, "snapshot times must be sorted");
  }
  return times;
}

KineticTrajectory solve_kinetic(const Field& rho0, const ModelParams& params, double horizon, double dt,
                                std::span<const double> snapshot_times) {
  require(rho0.grid == params.dispersal.grid(), ErrorKind::incompatible_grids,
          "initial density and kernels live on different grids");
  require(dt > 0.0, ErrorKind::invalid_parameter, "dt must be positive");
  require(rho0.min() >= 0.0, ErrorKind::invalid_parameter, "initial density must be nonnegative");
  const auto targets = resolve_snapshot_times(snapshot_times, horizon);

  KineticSystem system(params);
  const std::size_t n = rho0.size();
  std::vector<double> y = rho0.values;
  std::vector<double> k1, k2, k3, k4, tmp(n);
  KineticTrajectory traj;
  double t = 0.0;

  for (double target : targets) {
    const double span = target - t;
    const auto steps = span > 0.0 ? static_cast<long>(std::ceil(span / dt - 1e-9)) : 0L;
    const double step = steps > 0 ? span / static_cast<double>(steps) : 0.0;
    for (long s = 0; s < steps; ++s) {
      const double ymax = *std::max_element(y.begin(), y.end());
      require(step <= kinetic_dt_limit(params, ymax) * (1.0 + 1e-12), ErrorKind::invalid_parameter,
              "dt " + std::to_string(step) + " exceeds the stability guard " +
                  std::to_string(kinetic_dt_limit(params, ymax)));
      system.rhs(y, k1);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * step * k1[i];
      system.rhs(tmp, k2);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * step * k2[i];
      system.rhs(tmp, k3);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + step * k3[i];
      system.rhs(tmp, k4);
      for (std::size_t i = 0; i < n; ++i) y[i] += step * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) / 6.0;

      const double now = t + static_cast<double>(s + 1) * step;
      const double scale = *std::max_element(y.begin(), y.end());
      for (std::size_t i = 0; i < n; ++i) {
        if (y[i] >= 0.0) continue;
        if (y[i] < -1e-12 * std::max(scale, 0.0)) throw InstabilityError(now, i, y[i]);
        y[i] = 0.0;
      }
    }
    t = target;
    traj.times.push_back(target);
    traj.fields.emplace_back(rho0.grid, y);
  }
  return traj;
}

}  // namespace slm

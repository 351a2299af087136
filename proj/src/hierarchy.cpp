#include "slm/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "slm/errors.hpp"
#include "slm/kinetic.hpp"

namespace slm {

TruncatedState TruncatedState::product(const Field& rho) { return {rho, Field2::product(rho, rho)}; }

double TruncatedState::witness() const {
  double sup2 = 0.0;
  for (double v : k2.values) sup2 = std::max(sup2, v);
  return std::max(k1.max(), std::sqrt(sup2));
}

const char* closure_name(ClosureRule rule) { return rule == ClosureRule::mean_field ? "mean-field" : "kirkwood"; }

ClosureRule parse_closure(const std::string& name) {
  if (name == "mean-field") return ClosureRule::mean_field;
  if (name == "kirkwood") return ClosureRule::kirkwood;
  fail(ErrorKind::invalid_parameter, "unknown closure '" + name + "' (expected mean-field or kirkwood)");
}

Closure::Closure(ClosureRule rule, const TruncatedState& state, double kirkwood_floor)
    : rule_(rule), n_(state.k1.size()), k1_(state.k1.values.data()), k2_(state.k2.values.data()) {
  require(state.k2.values.size() == n_ * n_, ErrorKind::incompatible_grids, "k1 and k2 sizes disagree");
  if (rule == ClosureRule::kirkwood) {
    const double lowest = state.k1.min();
    require(lowest >= kirkwood_floor && lowest > 0.0, ErrorKind::closure_singularity,
            "kirkwood closure: k1 = " + std::to_string(lowest) + " below floor " + std::to_string(kirkwood_floor));
  }
}

Closure closure(ClosureRule rule, const TruncatedState& state, double kirkwood_floor) {
  return Closure(rule, state, kirkwood_floor);
}

namespace {

void check_grids(const TruncatedState& state, const ModelParams& params) {
  const Grid& g = params.dispersal.grid();
  require(state.k1.grid == g && state.k2.grid == g, ErrorKind::incompatible_grids,
          "hierarchy state and kernels live on different grids");
}

class HierarchySystem {
 public:
  explicit HierarchySystem(const ModelParams& params)
      : m_(params.mortality),
        eps_(params.epsilon),
        n_(params.dispersal.grid().size()),
        plus_(params.dispersal),
        minus_(params.competition),
        plus_pair_(n_ * n_),
        minus_pair_(n_ * n_) {
    const Grid& g = params.dispersal.grid();
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) {
        const std::size_t o = g.offset_index(i, j);
        plus_pair_[i * n_ + j] = params.dispersal.table_at(o);
        minus_pair_[i * n_ + j] = params.competition.table_at(o);
      }
  }

  void rhs1(const TruncatedState& s, std::vector<double>& out) {
    const auto& k1 = s.k1.values;
    const auto& k2 = s.k2.values;
    plus_.apply(k1, birth_);
    out.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      double compete = 0.0;
      for (std::size_t t = 0; t < minus_.terms(); ++t) compete += minus_.weight(t) * k2[i * n_ + minus_.neighbor(t, i)];
      out[i] = -m_ * k1[i] - compete + birth_[i];
    }
  }

  void rhs2(const TruncatedState& s, const Closure& k3, std::vector<double>& out) {
    const auto& k1 = s.k1.values;
    const auto& k2 = s.k2.values;
    out.resize(n_ * n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i; j < n_; ++j) {
        const std::size_t ij = i * n_ + j;
        double disperse = 0.0;
        for (std::size_t t = 0; t < plus_.terms(); ++t)
          disperse += plus_.weight(t) * (k2[plus_.neighbor(t, i) * n_ + j] + k2[i * n_ + plus_.neighbor(t, j)]);
        double compete = 0.0;
        for (std::size_t t = 0; t < minus_.terms(); ++t)
          compete += minus_.weight(t) * (k3(i, j, minus_.neighbor(t, i)) + k3(i, j, minus_.neighbor(t, j)));
        const double interaction = -2.0 * minus_pair_[ij] * k2[ij] + plus_pair_[ij] * (k1[i] + k1[j]);
        const double v = -2.0 * m_ * k2[ij] - compete + disperse + eps_ * interaction;
        out[ij] = v;
        out[j * n_ + i] = v;
      }
  }

 private:
  double m_;
  double eps_;
  std::size_t n_;
  Stencil plus_;
  Stencil minus_;
  std::vector<double> plus_pair_;
  std::vector<double> minus_pair_;
  std::vector<double> birth_;
};

double resolve_floor(const TruncatedState& state, double floor) { return floor < 0.0 ? 1e-8 * state.k1.max() : floor; }

void check_symmetric(const Field2& k2) {
  const double scale = k2.max_abs();
  require(k2.max_asymmetry() <= 1e-12 * scale, ErrorKind::invalid_parameter, "k2 is not symmetric");
}

}  // namespace

Field rhs_k1(const TruncatedState& state, const ModelParams& params) {
  check_grids(state, params);
  Field out(state.k1.grid);
  HierarchySystem(params).rhs1(state, out.values);
  return out;
}

Field2 rhs_k2(const TruncatedState& state, ClosureRule rule, const ModelParams& params, double kirkwood_floor) {
  check_grids(state, params);
  check_symmetric(state.k2);
  const Closure k3(rule, state, resolve_floor(state, kirkwood_floor));
  Field2 out(state.k2.grid);
  HierarchySystem(params).rhs2(state, k3, out.values);
  return out;
}

double hierarchy_dt_limit(const ModelParams& params, const TruncatedState& state) {
  const double rate = 2.0 * params.mortality + 2.0 * params.competition.mass() * state.witness() +
                      2.0 * params.dispersal.mass() + 2.0 * params.epsilon * params.competition.sup();
  return rate > 0.0 ? 0.1 / rate : HUGE_VAL;
}

HierarchyTrajectory solve_hierarchy(const TruncatedState& state0, ClosureRule rule, const ModelParams& params,
                                    double horizon, double dt, std::span<const double> snapshot_times,
                                    const HierarchyOptions& options) {
  check_grids(state0, params);
  check_symmetric(state0.k2);
  require(dt > 0.0, ErrorKind::invalid_parameter, "dt must be positive");
  require(state0.k1.min() >= 0.0 && *std::min_element(state0.k2.values.begin(), state0.k2.values.end()) >= 0.0,
          ErrorKind::invalid_parameter, "initial correlation functions must be nonnegative");
  const auto targets = resolve_snapshot_times(snapshot_times, horizon);
  const double floor = options.kirkwood_floor_factor * state0.k1.max();

  HierarchySystem system(params);
  const std::size_t n = state0.k1.size();
  TruncatedState y = state0;
  TruncatedState tmp = state0;
  std::vector<double> a1[4], a2[4];

  const auto eval = [&](const TruncatedState& s, int stage) {
    system.rhs1(s, a1[stage]);
    system.rhs2(s, Closure(rule, s, floor), a2[stage]);
  };
  const auto combine = [&](double step, int stage) {
    for (std::size_t i = 0; i < n; ++i) tmp.k1.values[i] = y.k1.values[i] + step * a1[stage][i];
    for (std::size_t i = 0; i < n * n; ++i) tmp.k2.values[i] = y.k2.values[i] + step * a2[stage][i];
  };
  const auto clip = [](std::vector<double>& v, double now) {
    const double scale = *std::max_element(v.begin(), v.end());
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] >= 0.0) continue;
      if (v[i] < -1e-12 * std::max(scale, 0.0)) throw InstabilityError(now, i, v[i]);
      v[i] = 0.0;
    }
  };

  HierarchyTrajectory traj;
  double t = 0.0;
  for (double target : targets) {
    const double span = target - t;
    const auto steps = span > 0.0 ? static_cast<long>(std::ceil(span / dt - 1e-9)) : 0L;
    const double step = steps > 0 ? span / static_cast<double>(steps) : 0.0;
    for (long s = 0; s < steps; ++s) {
      const double limit = hierarchy_dt_limit(params, y);
      require(step <= limit * (1.0 + 1e-12), ErrorKind::invalid_parameter,
              "dt " + std::to_string(step) + " exceeds the hierarchy stability guard " + std::to_string(limit));
      eval(y, 0);
      combine(0.5 * step, 0);
      eval(tmp, 1);
      combine(0.5 * step, 1);
      eval(tmp, 2);
      combine(step, 2);
      eval(tmp, 3);
      for (std::size_t i = 0; i < n; ++i)
        y.k1.values[i] += step * (a1[0][i] + 2.0 * a1[1][i] + 2.0 * a1[2][i] + a1[3][i]) / 6.0;
      for (std::size_t i = 0; i < n * n; ++i)
        y.k2.values[i] += step * (a2[0][i] + 2.0 * a2[1][i] + 2.0 * a2[2][i] + a2[3][i]) / 6.0;

      const double now = t + static_cast<double>(s + 1) * step;
      clip(y.k1.values, now);
      clip(y.k2.values, now);
      const double scale = y.k2.max_abs();
      const double drift = y.k2.symmetrize();
      if (scale > 0.0) traj.max_symmetry_drift = std::max(traj.max_symmetry_drift, drift / scale);
    }
    t = target;
    traj.times.push_back(target);
    traj.k1.push_back(y.k1);
    if (options.keep_k2) traj.k2.push_back(y.k2);
  }
  return traj;
}

double k2_slice(const Field2& k2, double r) {
  const Grid& g = k2.grid;
  const int shift = static_cast<int>(std::lround(r / g.spacing()));
  const std::size_t n = g.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    Index3 idx = g.unravel(i);
    idx[0] += shift;
    acc += k2.at(i, g.ravel(idx));
  }
  return acc / static_cast<double>(n);
}

}  // namespace slm

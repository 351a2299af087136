#include "slm/microsim.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "slm/errors.hpp"
#include "slm/kinetic.hpp"
#include "slm/parallel.hpp"

namespace slm {

// ---------------------------------------------------------------------------------------------
// CellList

CellList::CellList(const Torus& torus, double cutoff) : torus_(torus) {
  if (!(cutoff > 0.0)) return;
  active_ = true;
  const int cap = torus.dim == 1 ? 4096 : (torus.dim == 2 ? 256 : 64);
  per_axis_ = std::clamp(static_cast<int>(std::floor(torus.side / cutoff)), 1, cap);
  std::size_t total = 1;
  for (int k = 0; k < torus.dim; ++k) total *= static_cast<std::size_t>(per_axis_);
  members_.assign(total, {});
  neighbors_.assign(total, {});

  const auto unravel = [&](std::size_t c) {
    Index3 idx{0, 0, 0};
    for (int k = 0; k < torus.dim; ++k) {
      idx[k] = static_cast<int>(c % static_cast<std::size_t>(per_axis_));
      c /= static_cast<std::size_t>(per_axis_);
    }
    return idx;
  };
  const auto ravel = [&](Index3 idx) {
    std::size_t c = 0;
    for (int k = torus.dim - 1; k >= 0; --k) {
      const int v = ((idx[k] % per_axis_) + per_axis_) % per_axis_;
      c = c * static_cast<std::size_t>(per_axis_) + static_cast<std::size_t>(v);
    }
    return c;
  };
  const int reach = per_axis_ >= 3 ? 1 : per_axis_ - 1;
  for (std::size_t c = 0; c < total; ++c) {
    const Index3 base = unravel(c);
    auto& list = neighbors_[c];
    Index3 d{0, 0, 0};
    const int rz = torus.dim >= 3 ? reach : 0;
    const int ry = torus.dim >= 2 ? reach : 0;
    for (d[2] = -rz; d[2] <= rz; ++d[2])
      for (d[1] = -ry; d[1] <= ry; ++d[1])
        for (d[0] = -reach; d[0] <= reach; ++d[0]) {
          Index3 idx = base;
          for (int k = 0; k < torus.dim; ++k) idx[k] += d[k];
          list.push_back(ravel(idx));
        }
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
}

std::size_t CellList::cell_of(const Point& p) const {
  const double width = torus_.side / per_axis_;
  std::size_t c = 0;
  for (int k = torus_.dim - 1; k >= 0; --k) {
    const int v = std::clamp(static_cast<int>(p[k] / width), 0, per_axis_ - 1);
    c = c * static_cast<std::size_t>(per_axis_) + static_cast<std::size_t>(v);
  }
  return c;
}

void CellList::insert(std::size_t id, const Point& p) {
  if (!active_) return;
  if (home_.size() <= id) {
    home_.resize(id + 1);
    slot_.resize(id + 1);
  }
  const std::size_t c = cell_of(p);
  home_[id] = c;
  slot_[id] = members_[c].size();
  members_[c].push_back(static_cast<std::uint32_t>(id));
}

void CellList::erase(std::size_t id) {
  if (!active_) return;
  auto& list = members_[home_[id]];
  const std::size_t s = slot_[id];
  const std::uint32_t moved = list.back();
  list[s] = moved;
  slot_[moved] = s;
  list.pop_back();
}

void CellList::relabel(std::size_t from, std::size_t to) {
  if (!active_) return;
  home_[to] = home_[from];
  slot_[to] = slot_[from];
  members_[home_[to]][slot_[to]] = static_cast<std::uint32_t>(to);
}

// ---------------------------------------------------------------------------------------------
// SumTree

void SumTree::resize(std::size_t n) {
  if (n > capacity_) {
    std::size_t cap = 1;
    while (cap < n) cap *= 2;
    std::vector<double> nodes(2 * cap, 0.0);
    for (std::size_t i = 0; i < size_; ++i) nodes[cap + i] = nodes_[capacity_ + i];
    for (std::size_t i = cap - 1; i >= 1; --i) nodes[i] = nodes[2 * i] + nodes[2 * i + 1];
    nodes_ = std::move(nodes);
    capacity_ = cap;
  }
  for (std::size_t i = n; i < size_; ++i) set(i, 0.0);
  size_ = n;
}

void SumTree::set(std::size_t i, double w) {
  std::size_t node = capacity_ + i;
  nodes_[node] = w;
  for (node /= 2; node >= 1; node /= 2) nodes_[node] = nodes_[2 * node] + nodes_[2 * node + 1];
}

std::size_t SumTree::find(double target) const {
  std::size_t node = 1;
  while (node < capacity_) {
    const double left = nodes_[2 * node];
    if (target < left) {
      node = 2 * node;
    } else {
      target -= left;
      node = 2 * node + 1;
    }
  }
  std::size_t i = node - capacity_;
  // round-off can land on a zero-weight or out-of-range leaf; step back to a live one
  if (i >= size_ || nodes_[capacity_ + i] <= 0.0) {
    i = std::min(i, size_ - 1);
    while (i > 0 && nodes_[capacity_ + i] <= 0.0) --i;
  }
  return i;
}

// ---------------------------------------------------------------------------------------------
// Configuration

Configuration::Configuration(const Torus& torus, std::shared_ptr<const Kernel> competition)
    : torus_(torus), competition_(std::move(competition)), cells_(torus, competition_->radius()) {
  require(competition_->dim() == torus.dim && competition_->grid().side() == torus.side,
          ErrorKind::incompatible_grids, "competition kernel does not live on this torus");
}

Configuration::Configuration(const Torus& torus, std::shared_ptr<const Kernel> competition,
                             std::span<const Point> points)
    : Configuration(torus, std::move(competition)) {
  for (const Point& p : points) {
    require(torus_.contains(p), ErrorKind::invalid_parameter, "configuration point outside [0, L)^d");
    add(p);
  }
}

std::size_t Configuration::sample_competitive(double u) const { return tree_.find(u * tree_.total()); }

std::size_t Configuration::add(const Point& p) {
  const std::size_t id = points_.size();
  double rate = 0.0;
  cells_.for_each_near(p, [&](std::size_t j) {
    const double a = competition_->value(torus_.displacement(p, points_[j]));
    if (a == 0.0) return;
    rate += a;
    rates_[j] += a;
    tree_.set(j, rates_[j]);
  });
  points_.push_back(p);
  rates_.push_back(rate);
  cells_.insert(id, p);
  tree_.resize(id + 1);
  tree_.set(id, rate);
  return id;
}

void Configuration::remove(std::size_t i) {
  const Point p = points_[i];
  cells_.for_each_near(p, [&](std::size_t j) {
    if (j == i) return;
    const double a = competition_->value(torus_.displacement(p, points_[j]));
    if (a == 0.0) return;
    rates_[j] = std::max(0.0, rates_[j] - a);
    tree_.set(j, rates_[j]);
  });
  const std::size_t last = points_.size() - 1;
  cells_.erase(i);
  if (i != last) {
    points_[i] = points_[last];
    rates_[i] = rates_[last];
    cells_.relabel(last, i);
    tree_.set(i, rates_[i]);
  }
  points_.pop_back();
  rates_.pop_back();
  tree_.resize(last);
}

std::vector<double> Configuration::recompute_rates() const {
  std::vector<double> rates(points_.size(), 0.0);
  if (competition_->is_zero()) return rates;
  if (points_.size() > 5000) {
    // brute force is quadratic; large populations go through the spatial hash instead
    for (std::size_t i = 0; i < points_.size(); ++i)
      cells_.for_each_near(points_[i], [&](std::size_t j) {
        if (j != i) rates[i] += competition_->value(torus_.displacement(points_[i], points_[j]));
      });
    return rates;
  }
  for (std::size_t i = 0; i < points_.size(); ++i)
    for (std::size_t j = i + 1; j < points_.size(); ++j) {
      const double a = competition_->value(torus_.displacement(points_[i], points_[j]));
      rates[i] += a;
      rates[j] += a;
    }
  return rates;
}

double Configuration::audit() {
  const auto fresh = recompute_rates();
  double drift = 0.0;
  for (std::size_t i = 0; i < fresh.size(); ++i) {
    drift = std::max(drift, std::abs(rates_[i] - fresh[i]) / (1.0 + fresh[i]));
    rates_[i] = fresh[i];
    tree_.set(i, fresh[i]);
  }
  return drift;
}

Configuration init_poisson(double intensity, const Torus& torus, std::shared_ptr<const Kernel> competition,
                           Rng& rng) {
  require(intensity >= 0.0, ErrorKind::invalid_parameter, "Poisson intensity must be nonnegative");
  Configuration config(torus, std::move(competition));
  const std::uint64_t n = rng.poisson(intensity * torus.volume());
  for (std::uint64_t k = 0; k < n; ++k) {
    Point p{};
    for (int d = 0; d < torus.dim; ++d) p[d] = torus.side * rng.uniform();
    config.add(torus.wrap(p));
  }
  return config;
}

Configuration init_poisson(double intensity, const Torus& torus, std::shared_ptr<const Kernel> competition,
                           std::uint64_t seed) {
  Rng rng(seed);
  return init_poisson(intensity, torus, std::move(competition), rng);
}

Configuration init_poisson_field(const Field& density, double scale, std::shared_ptr<const Kernel> competition,
                                 Rng& rng) {
  require(scale >= 0.0 && density.min() >= 0.0, ErrorKind::invalid_parameter,
          "Poisson field intensity must be nonnegative");
  const Grid& grid = density.grid;
  const Torus torus = grid.torus();
  Configuration config(torus, std::move(competition));
  const double h = grid.spacing();
  for (std::size_t c = 0; c < grid.size(); ++c) {
    const std::uint64_t n = rng.poisson(scale * density[c] * grid.cell_volume());
    const Index3 idx = grid.unravel(c);
    for (std::uint64_t k = 0; k < n; ++k) {
      Point p{};
      for (int d = 0; d < grid.dim(); ++d) p[d] = (idx[d] + rng.uniform()) * h;
      config.add(torus.wrap(p));
    }
  }
  return config;
}

TotalRates total_rates(const Configuration& config, const ModelParams& params) {
  const auto n = static_cast<double>(config.size());
  return {n * params.dispersal.continuous_mass(),
          params.mortality * n + params.epsilon * config.competition_total()};
}

// ---------------------------------------------------------------------------------------------
// DisplacementSampler

DisplacementSampler::DisplacementSampler(const Kernel& dispersal) : kernel_(&dispersal) {
  if (dispersal.shape() == KernelShape::tabulated) {
    double acc = 0.0;
    for (const auto& s : dispersal.support()) {
      acc += s.value;
      cdf_.push_back(acc);
    }
  }
}

Point DisplacementSampler::sample(Rng& rng) {
  const Kernel& k = *kernel_;
  const int dim = k.dim();
  Point x{};
  switch (k.shape()) {
    case KernelShape::zero: fail(ErrorKind::precondition, "cannot sample offspring from a zero dispersal kernel");
    case KernelShape::indicator: {
      const double r = k.radius();
      for (;;) {
        double n2 = 0.0;
        for (int d = 0; d < dim; ++d) {
          x[d] = rng.uniform(-r, r);
          n2 += x[d] * x[d];
        }
        ++proposed_;
        if (n2 <= r * r) break;
      }
      break;
    }
    case KernelShape::gaussian: {
      const double c = k.radius();
      for (;;) {
        double n2 = 0.0;
        for (int d = 0; d < dim; ++d) {
          x[d] = rng.normal(k.sigma());
          n2 += x[d] * x[d];
        }
        ++proposed_;
        if (n2 <= c * c) break;
      }
      break;
    }
    case KernelShape::tabulated: {
      const double u = rng.uniform() * cdf_.back();
      auto s = static_cast<std::size_t>(std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
      s = std::min(s, cdf_.size() - 1);
      const auto& cell = k.support()[s];
      const double h = k.grid().spacing();
      for (int d = 0; d < dim; ++d) x[d] = (cell.offset[d] + rng.uniform() - 0.5) * h;
      ++proposed_;
      break;
    }
  }
  ++accepted_;
  return x;
}

double DisplacementSampler::acceptance_rate() const {
  return proposed_ == 0 ? 1.0 : static_cast<double>(accepted_) / static_cast<double>(proposed_);
}

// ---------------------------------------------------------------------------------------------
// Simulator

Simulator::Simulator(const ModelParams& params, RunOptions options)
    : params_(params), options_(std::move(options)), sampler_(params_.dispersal) {}

Simulator::Rates Simulator::rates(const Configuration& config) const {
  const auto n = static_cast<double>(config.size());
  Rates r{n * params_.dispersal.continuous_mass(), params_.mortality * n,
          params_.epsilon * config.competition_total()};
  r.total = r.birth + r.natural + r.competitive;
  return r;
}

Event Simulator::apply(Configuration& config, Rng& rng, const Rates& r, double time) {
  Event ev{};
  ev.time = time;
  const double u = rng.uniform() * r.total;
  if (u < r.birth) {
    const std::size_t parent = rng.index(config.size());
    const Point shift = sampler_.sample(rng);
    Point child = config.points()[parent];
    for (int d = 0; d < config.torus().dim; ++d) child[d] += shift[d];
    child = config.torus().wrap(child);
    config.add(child);
    ev.kind = EventKind::birth;
    ev.position = child;
    ev.parent = parent;
  } else {
    std::size_t victim = 0;
    if (u < r.birth + r.natural || r.competitive <= 0.0) {
      victim = rng.index(config.size());
      ev.kind = EventKind::death_natural;
    } else {
      victim = config.sample_competitive(rng.uniform());
      ev.kind = EventKind::death_competition;
    }
    ev.position = config.points()[victim];
    config.remove(victim);
  }
  return ev;
}

std::optional<Event> Simulator::step(Configuration& config, Rng& rng, double now) {
  const Rates r = rates(config);
  if (!(r.total > 0.0)) return std::nullopt;
  const double time = now + rng.exponential(r.total);
  return apply(config, rng, r, time);
}

RunResult Simulator::run(Configuration config, double horizon, std::span<const double> snapshot_times, Rng& rng) {
  require(config.competition().grid() == params_.competition.grid() &&
              config.competition().mass() == params_.competition.mass(),
          ErrorKind::invalid_parameter, "configuration caches were built for a different competition kernel");
  const auto targets = resolve_snapshot_times(snapshot_times, horizon);
  RunResult result;
  std::size_t next = 0;
  double t = 0.0;
  std::size_t events = 0;
  const auto record_until = [&](double limit) {
    while (next < targets.size() && targets[next] < limit) {
      result.snapshots.push_back({targets[next], config.points()});
      ++next;
    }
  };

  for (;;) {
    const Rates r = rates(config);
    if (!(r.total > 0.0)) {
      if (result.absorbed_at < 0.0) result.absorbed_at = t;
      break;
    }
    const double t_next = t + rng.exponential(r.total);
    record_until(t_next);
    if (t_next > horizon) break;
    const Event ev = apply(config, rng, r, t_next);
    t = t_next;
    ++events;
    switch (ev.kind) {
      case EventKind::birth: ++result.births; break;
      case EventKind::death_natural: ++result.natural_deaths; break;
      case EventKind::death_competition: ++result.competitive_deaths; break;
    }
    if (options_.on_event) options_.on_event(ev);
    if (config.size() > options_.max_population) throw BlowUpError(t, options_.max_population);
    if (options_.audit_interval > 0 && events % options_.audit_interval == 0) {
      result.max_audit_drift = std::max(result.max_audit_drift, config.audit());
      ++result.audits;
    }
  }
  record_until(HUGE_VAL);
  result.acceptance_rate = sampler_.acceptance_rate();
  return result;
}

RunResult run(const Configuration& config0, const ModelParams& params, double horizon,
              std::span<const double> snapshot_times, std::uint64_t seed, RunOptions options) {
  Simulator sim(params, std::move(options));
  Rng rng(seed);
  return sim.run(config0, horizon, snapshot_times, rng);
}

std::vector<RunResult> run_ensemble(const ConfigurationFactory& init, const ModelParams& params, double horizon,
                                    std::span<const double> snapshot_times, const EnsembleOptions& options) {
  std::vector<RunResult> results(options.runs);
  parallel_for(options.runs, options.jobs, [&](std::size_t idx) {
    RunOptions run_opts = options.run;
    if (options.event_sink) run_opts.on_event = options.event_sink(idx);
    Simulator sim(params, std::move(run_opts));
    Rng rng(derive_seed(options.master_seed, idx));
    Configuration config = init(rng);
    results[idx] = sim.run(std::move(config), horizon, snapshot_times, rng);
  });
  return results;
}

}  // namespace slm

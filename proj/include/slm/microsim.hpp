#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "slm/field.hpp"
#include "slm/grid.hpp"
#include "slm/kernel.hpp"
#include "slm/params.hpp"
#include "slm/rng.hpp"

namespace slm {

/// Spatial hash on the torus with cell side >= cutoff. With fewer than three cells along an
/// axis every cell on that axis is a neighbour, so minimum-image search stays complete.
class CellList {
 public:
  CellList() = default;
  CellList(const Torus& torus, double cutoff);

  void insert(std::size_t id, const Point& p);
  void erase(std::size_t id);
  /// The particle stored under `from` is now known as `to` (after a swap-remove).
  void relabel(std::size_t from, std::size_t to);

  template <class F>
  void for_each_near(const Point& p, F&& f) const {
    if (!active_) return;
    for (std::size_t c : neighbors_[cell_of(p)])
      for (std::uint32_t id : members_[c]) f(static_cast<std::size_t>(id));
  }

 private:
  std::size_t cell_of(const Point& p) const;

  bool active_ = false;
  Torus torus_;
  int per_axis_ = 1;
  std::vector<std::vector<std::uint32_t>> members_;
  std::vector<std::vector<std::size_t>> neighbors_;
  std::vector<std::size_t> home_;  // particle -> cell
  std::vector<std::size_t> slot_;  // particle -> position in members_[cell]
};

/// Complete binary tree of nonnegative weights supporting O(log n) update and
/// proportional sampling. Internal nodes are recomputed from children, so sums never drift.
class SumTree {
 public:
  void resize(std::size_t n);
  std::size_t size() const { return size_; }
  void set(std::size_t i, double w);
  double get(std::size_t i) const { return nodes_[capacity_ + i]; }
  double total() const { return nodes_.empty() ? 0.0 : nodes_[1]; }
  /// Index i with prefix(i) <= target < prefix(i + 1), target in [0, total).
  std::size_t find(double target) const;

 private:
  std::size_t size_ = 0;
  std::size_t capacity_ = 0;
  std::vector<double> nodes_;
};

/// Finite point configuration on the torus with cached competition rates
/// c_i = sum_{j != i} a-(x_i - x_j) (unscaled by epsilon).
class Configuration {
 public:
  Configuration(const Torus& torus, std::shared_ptr<const Kernel> competition);
  Configuration(const Torus& torus, std::shared_ptr<const Kernel> competition, std::span<const Point> points);

  const Torus& torus() const { return torus_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const std::vector<Point>& points() const { return points_; }
  const Kernel& competition() const { return *competition_; }

  double competition_rate(std::size_t i) const { return rates_[i]; }
  /// Sum of c_i.
  double competition_total() const { return tree_.total(); }
  /// Particle index drawn with probability c_i / sum c.
  std::size_t sample_competitive(double u) const;

  std::size_t add(const Point& p);
  /// Swap-remove: the last particle takes index i.
  void remove(std::size_t i);

  std::vector<double> recompute_rates() const;
  /// Max over i of |cached - recomputed| / (1 + recomputed); resynchronizes the caches.
  double audit();

 private:
  Torus torus_;
  std::shared_ptr<const Kernel> competition_;
  std::vector<Point> points_;
  std::vector<double> rates_;
  CellList cells_;
  SumTree tree_;
};

Configuration init_poisson(double intensity, const Torus& torus, std::shared_ptr<const Kernel> competition,
                           Rng& rng);
Configuration init_poisson(double intensity, const Torus& torus, std::shared_ptr<const Kernel> competition,
                           std::uint64_t seed);
/// Inhomogeneous Poisson field with intensity `density` (per-cell constant, scaled by `scale`).
Configuration init_poisson_field(const Field& density, double scale, std::shared_ptr<const Kernel> competition,
                                 Rng& rng);

struct TotalRates {
  double birth;
  double death;
};

/// birth = N <a+>, death = m N + epsilon sum_i c_i (continuous masses).
TotalRates total_rates(const Configuration& config, const ModelParams& params);

enum class EventKind { birth, death_natural, death_competition };

struct Event {
  EventKind kind;
  Point position;
  double time;
  std::optional<std::size_t> parent;
};

/// Draws offspring displacements with density a+ / <a+>.
class DisplacementSampler {
 public:
  explicit DisplacementSampler(const Kernel& dispersal);
  Point sample(Rng& rng);
  /// Accepted / proposed over the sampler's lifetime (1 for inverse-CDF sampling).
  double acceptance_rate() const;

 private:
  const Kernel* kernel_;
  std::vector<double> cdf_;
  std::size_t proposed_ = 0;
  std::size_t accepted_ = 0;
};

struct RunOptions {
  std::size_t max_population = 1'000'000;
  std::size_t audit_interval = 10'000;
  std::function<void(const Event&)> on_event;
};

struct Snapshot {
  double t;
  std::vector<Point> points;
};

struct RunResult {
  std::vector<Snapshot> snapshots;
  std::size_t births = 0;
  std::size_t natural_deaths = 0;
  std::size_t competitive_deaths = 0;
  std::size_t audits = 0;
  double max_audit_drift = 0.0;
  double acceptance_rate = 1.0;
  double absorbed_at = -1.0;  // time the population hit zero, or -1
};

/// Exact jump-chain simulation of the birth/death/competition process.
class Simulator {
 public:
  Simulator(const ModelParams& params, RunOptions options = {});
  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  /// Advance by one event from time `now`; nullopt when the configuration is absorbed (R = 0).
  std::optional<Event> step(Configuration& config, Rng& rng, double now);

  /// Snapshots at the requested times (sorted, <= horizon). Throws BlowUpError past the cap.
  RunResult run(Configuration config, double horizon, std::span<const double> snapshot_times, Rng& rng);

  const ModelParams& params() const { return params_; }
  double acceptance_rate() const { return sampler_.acceptance_rate(); }

 private:
  struct Rates {
    double birth;
    double natural;
    double competitive;
    double total = 0.0;
  };
  Rates rates(const Configuration& config) const;
  Event apply(Configuration& config, Rng& rng, const Rates& r, double time);

  ModelParams params_;
  RunOptions options_;
  DisplacementSampler sampler_;
};

/// Convenience wrapper: one run seeded directly.
RunResult run(const Configuration& config0, const ModelParams& params, double horizon,
              std::span<const double> snapshot_times, std::uint64_t seed, RunOptions options = {});

struct EnsembleOptions {
  std::size_t runs = 1;
  std::uint64_t master_seed = 1;
  unsigned jobs = 0;  // 0 = hardware concurrency
  RunOptions run;
  /// Optional per-run event sink; called from the worker executing that run.
  std::function<std::function<void(const Event&)>(std::size_t run)> event_sink;
};

using ConfigurationFactory = std::function<Configuration(Rng&)>;

/// Independent runs with seeds derive_seed(master, run_index); results ordered by run index.
/// The first failure by run index is rethrown after all workers finish.
std::vector<RunResult> run_ensemble(const ConfigurationFactory& init, const ModelParams& params, double horizon,
                                    std::span<const double> snapshot_times, const EnsembleOptions& options);

}  // namespace slm

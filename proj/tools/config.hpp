#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "slm/field.hpp"
#include "slm/grid.hpp"
#include "slm/hierarchy.hpp"
#include "slm/kernel.hpp"
#include "slm/params.hpp"
#include "slm/scaling.hpp"

namespace slm::cli {

struct KernelSpec {
  std::string shape = "indicator";  // indicator | gaussian | tabulated | zero
  std::optional<double> height;
  std::optional<double> mass;  // alternative to height for indicator kernels
  double radius = 0.5;
  double sigma = 0.2;
  double cutoff = 1.0;
  std::filesystem::path file;  // tabulated: CSV (offset, value)
};

struct InitialSpec {
  std::string type = "constant";  // constant | table
  double value = 0.1;
  std::filesystem::path file;  // table: one value per cell, optional "cell,value" columns
};

/// Fully resolved run configuration. Built only through parse_config, which validates every
/// constraint and materializes the grid objects.
struct RunConfig {
  int dim = 1;
  double side = 10.0;
  double spacing = 0.05;
  KernelSpec dispersal;
  KernelSpec competition;
  double mortality = 0.2;
  double epsilon = 1.0;
  InitialSpec initial;
  double horizon = 1.0;
  double dt = 0.01;
  std::vector<double> snapshots;
  std::size_t runs = 1;
  std::uint64_t seed = 1;
  std::size_t max_population = 1'000'000;
  std::size_t audit_interval = 10'000;
  bool event_log = false;
  std::optional<double> alpha_up;
  std::optional<double> alpha_low;
  ClosureRule closure = ClosureRule::mean_field;
  std::optional<double> hierarchy_epsilon;
  std::vector<double> slice_offsets{0.0};
  double kirkwood_floor = 1e-8;
  ScalingMode scaling_mode = ScalingMode::hierarchy;
  std::vector<double> eps_list{1.0, 0.5, 0.25, 0.1};
  std::size_t scaling_runs = 0;
  std::size_t bins = 24;
  std::optional<double> rmax;
  std::optional<double> witness;

  Grid grid;
  std::optional<Kernel> aplus;
  std::optional<Kernel> aminus;
  Field rho0;

  ModelParams params() const { return ModelParams(mortality, *aplus, *aminus, epsilon); }
  /// Snapshot times with the empty default resolved to {horizon}.
  std::vector<double> snapshot_times() const;
  /// Canonical INI text with every key, suitable for parse_config_text.
  std::string resolved_text() const;
};

RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir);

/// Shortest round-trip decimal form.
std::string format_double(double v);

}  // namespace slm::cli

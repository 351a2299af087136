#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "slm/field.hpp"
#include "slm/grid.hpp"

namespace slm {

/// Particle positions of every run at one common time.
struct EnsembleSnapshot {
  Torus torus;
  double t = 0.0;
  std::vector<std::vector<Point>> runs;
};

struct DensityEstimate {
  Field mean;
  Field se;  // across-run standard error
  std::size_t runs = 0;
};

/// Per-cell count / (h^d runs). Requires at least two runs.
DensityEstimate density_estimate(const EnsembleSnapshot& ensemble, const Grid& grid, unsigned jobs = 0);

struct PairBin {
  double lo;
  double hi;
  double g;
  double se;
  double k2;     // g * intensity^2
  double k2_se;

  double mid() const { return 0.5 * (lo + hi); }
};

/// Uniform bin edges on (0, min(L/2, 4 max_radius)).
std::vector<double> default_bin_edges(double side, double max_radius, std::size_t bins = 24);

/// Radial pair correlation under homogeneity. Ordered pairs at minimum-image distance in
/// [lo, hi) are normalized by intensity^2 L^d |shell| with the intensity mean N / L^d
/// taken over the ensemble; standard errors are leave-one-run-out jackknife.
std::vector<PairBin> pair_correlation(const EnsembleSnapshot& ensemble, std::span<const double> edges,
                                      unsigned jobs = 0);

struct CorrelationEstimate {
  DensityEstimate k1_hat;
  std::vector<PairBin> pair_g;
  double intensity = 0.0;
  double intensity_se = 0.0;
  std::size_t runs = 0;
  double t = 0.0;
};

CorrelationEstimate estimate_correlations(const EnsembleSnapshot& ensemble, const Grid& grid,
                                          std::span<const double> edges, unsigned jobs = 0);

struct SubPoissonReport {
  double C = 0.0;
  /// max(sup k1_hat, sqrt(sup k2_hat)) over the point estimates.
  double minimal_C = 0.0;
  std::vector<std::size_t> flagged_cells;  // k1_hat - 3 se > C
  std::vector<std::size_t> flagged_bins;   // k2_hat - 3 se > C^2

  bool passes() const { return flagged_cells.empty() && flagged_bins.empty(); }
};

SubPoissonReport subpoisson_diagnostic(const CorrelationEstimate& estimate, double C);

/// Sample mean and standard error of the mean.
struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};
MeanSe mean_se(std::span<const double> xs);

}  // namespace slm

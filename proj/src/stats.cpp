#include "slm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "slm/errors.hpp"
#include "slm/microsim.hpp"
#include "slm/parallel.hpp"

namespace slm {

MeanSe mean_se(std::span<const double> xs) {
  MeanSe out;
  if (xs.empty()) return out;
  double sum = 0.0;
  for (double x : xs) sum += x;
  out.mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) return out;
  double ss = 0.0;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  out.se = std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
  return out;
}

namespace {

void check_ensemble(const EnsembleSnapshot& ensemble) {
  require(!ensemble.runs.empty(), ErrorKind::precondition, "empty ensemble");
  require(ensemble.runs.size() >= 2, ErrorKind::precondition, "standard errors need at least two runs");
}

// Ordered pair counts per bin for one configuration.
std::vector<double> pair_counts(const std::vector<Point>& points, const Torus& torus, std::span<const double> edges) {
  const std::size_t bins = edges.size() - 1;
  std::vector<double> counts(bins, 0.0);
  const double rmax = edges.back();
  const double rmin = edges.front();
  const auto tally = [&](const Point& a, const Point& b) {
    const double r = std::sqrt(torus.distance2(a, b));
    if (r < rmin || r >= rmax) return;
    const auto it = std::upper_bound(edges.begin(), edges.end(), r);
    counts[static_cast<std::size_t>(it - edges.begin()) - 1] += 2.0;
  };
  const std::size_t n = points.size();
  if (n < 2) return counts;
  if (n <= 256 || rmax >= torus.side / 3.0) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) tally(points[i], points[j]);
    return counts;
  }
  CellList cells(torus, rmax);
  for (std::size_t i = 0; i < n; ++i) cells.insert(i, points[i]);
  for (std::size_t i = 0; i < n; ++i)
    cells.for_each_near(points[i], [&](std::size_t j) {
      if (j > i) tally(points[i], points[j]);
    });
  return counts;
}

}  // namespace

DensityEstimate density_estimate(const EnsembleSnapshot& ensemble, const Grid& grid, unsigned jobs) {
  check_ensemble(ensemble);
  require(grid.torus() == ensemble.torus, ErrorKind::incompatible_grids, "grid and ensemble live on different tori");
  const std::size_t runs = ensemble.runs.size();
  const std::size_t cells = grid.size();
  const double inv_volume = 1.0 / grid.cell_volume();
  std::vector<std::vector<double>> density(runs);
  parallel_for(runs, jobs, [&](std::size_t r) {
    density[r].assign(cells, 0.0);
    for (const Point& p : ensemble.runs[r]) density[r][grid.locate(p)] += inv_volume;
  });

  DensityEstimate out{Field(grid), Field(grid), runs};
  std::vector<double> column(runs);
  for (std::size_t c = 0; c < cells; ++c) {
    for (std::size_t r = 0; r < runs; ++r) column[r] = density[r][c];
    const MeanSe m = mean_se(column);
    out.mean[c] = m.mean;
    out.se[c] = m.se;
  }
  return out;
}

std::vector<double> default_bin_edges(double side, double max_radius, std::size_t bins) {
  require(bins >= 1, ErrorKind::invalid_parameter, "need at least one bin");
  double rmax = 0.5 * side;
  if (max_radius > 0.0) rmax = std::min(rmax, 4.0 * max_radius);
  std::vector<double> edges(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b) edges[b] = rmax * static_cast<double>(b) / static_cast<double>(bins);
  return edges;
}

std::vector<PairBin> pair_correlation(const EnsembleSnapshot& ensemble, std::span<const double> edges, unsigned jobs) {
  check_ensemble(ensemble);
  require(edges.size() >= 2, ErrorKind::invalid_parameter, "need at least two bin edges");
  require(edges.front() >= 0.0, ErrorKind::invalid_parameter, "bin edges must be nonnegative");
  for (std::size_t b = 1; b < edges.size(); ++b)
    require(edges[b] > edges[b - 1], ErrorKind::invalid_parameter, "bin edges must increase strictly");
  const Torus& torus = ensemble.torus;
  require(edges.back() <= 0.5 * torus.side * (1.0 + 1e-12), ErrorKind::invalid_parameter,
          "bin edge " + std::to_string(edges.back()) + " beyond L/2 = " + std::to_string(0.5 * torus.side));

  const std::size_t runs = ensemble.runs.size();
  const std::size_t bins = edges.size() - 1;
  std::vector<std::vector<double>> counts(runs);
  parallel_for(runs, jobs, [&](std::size_t r) { counts[r] = pair_counts(ensemble.runs[r], torus, edges); });

  const double volume = torus.volume();
  std::vector<double> shell(bins);
  for (std::size_t b = 0; b < bins; ++b)
    shell[b] = ball_volume(torus.dim, edges[b + 1]) - ball_volume(torus.dim, edges[b]);

  double total_n = 0.0;
  for (const auto& run : ensemble.runs) total_n += static_cast<double>(run.size());
  std::vector<double> total_pairs(bins, 0.0);
  for (const auto& c : counts)
    for (std::size_t b = 0; b < bins; ++b) total_pairs[b] += c[b];

  // g over a subset with `n` particles, `pairs` ordered pairs and `k` runs
  const auto g_of = [&](double pairs, double n, double k, std::size_t b) {
    const double intensity = n / (k * volume);
    return pairs / k / (intensity * intensity * volume * shell[b]);
  };
  const double rr = static_cast<double>(runs);
  for (std::size_t r = 0; r < runs; ++r)
    require(total_n - static_cast<double>(ensemble.runs[r].size()) > 0.0, ErrorKind::precondition,
            "pair correlation undefined: fewer than two runs contain particles");

  std::vector<PairBin> out(bins);
  std::vector<double> scaled(runs);
  std::vector<double> leave_out(runs);
  for (std::size_t b = 0; b < bins; ++b) {
    PairBin& bin = out[b];
    bin.lo = edges[b];
    bin.hi = edges[b + 1];
    bin.g = g_of(total_pairs[b], total_n, rr, b);
    double mean_lo = 0.0;
    for (std::size_t r = 0; r < runs; ++r) {
      leave_out[r] = g_of(total_pairs[b] - counts[r][b], total_n - static_cast<double>(ensemble.runs[r].size()),
                          rr - 1.0, b);
      mean_lo += leave_out[r];
      scaled[r] = counts[r][b] / (volume * shell[b]);
    }
    mean_lo /= rr;
    double ss = 0.0;
    for (double v : leave_out) ss += (v - mean_lo) * (v - mean_lo);
    bin.se = std::sqrt((rr - 1.0) / rr * ss);
    const MeanSe k2 = mean_se(scaled);
    bin.k2 = k2.mean;
    bin.k2_se = k2.se;
  }
  return out;
}

CorrelationEstimate estimate_correlations(const EnsembleSnapshot& ensemble, const Grid& grid,
                                          std::span<const double> edges, unsigned jobs) {
  CorrelationEstimate out;
  out.k1_hat = density_estimate(ensemble, grid, jobs);
  out.pair_g = pair_correlation(ensemble, edges, jobs);
  std::vector<double> intensities;
  intensities.reserve(ensemble.runs.size());
  for (const auto& run : ensemble.runs) intensities.push_back(static_cast<double>(run.size()) / ensemble.torus.volume());
  const MeanSe m = mean_se(intensities);
  out.intensity = m.mean;
  out.intensity_se = m.se;
  out.runs = ensemble.runs.size();
  out.t = ensemble.t;
  return out;
}

SubPoissonReport subpoisson_diagnostic(const CorrelationEstimate& estimate, double C) {
  require(C > 0.0, ErrorKind::invalid_parameter, "C must be positive");
  SubPoissonReport report;
  report.C = C;
  const Field& k1 = estimate.k1_hat.mean;
  const Field& se = estimate.k1_hat.se;
  double sup1 = 0.0;
  for (std::size_t c = 0; c < k1.size(); ++c) {
    sup1 = std::max(sup1, k1[c]);
    if (k1[c] - 3.0 * se[c] > C) report.flagged_cells.push_back(c);
  }
  double sup2 = 0.0;
  for (std::size_t b = 0; b < estimate.pair_g.size(); ++b) {
    const PairBin& bin = estimate.pair_g[b];
    sup2 = std::max(sup2, bin.k2);
    if (bin.k2 - 3.0 * bin.k2_se > C * C) report.flagged_bins.push_back(b);
  }
  report.minimal_C = std::max(sup1, std::sqrt(sup2));
  return report;
}

}  // namespace slm

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "helpers.hpp"
#include "slm/errors.hpp"
#include "slm/microsim.hpp"
#include "slm/stats.hpp"

using namespace slm;

namespace {

const Grid kGrid = testing::line(10.0, 20);

EnsembleSnapshot poisson_ensemble(double kappa, std::size_t runs, std::uint64_t seed, const Grid& g = kGrid) {
  const auto comp = std::make_shared<const Kernel>(Kernel::zero(g));
  EnsembleSnapshot e{g.torus(), 0.0, {}};
  for (std::size_t r = 0; r < runs; ++r) e.runs.push_back(init_poisson(kappa, g.torus(), comp, derive_seed(seed, r)).points());
  return e;
}

}  // namespace

TEST_CASE("mean_se") {
  const std::vector<double> xs{1.0, 2.0, 3.0, 4.0};
  const MeanSe m = mean_se(xs);
  CHECK(m.mean == doctest::Approx(2.5));
  CHECK(m.se == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
}

TEST_CASE("density of a Poisson ensemble is flat at the intensity") {
  const double kappa = 4.0;
  const auto e = poisson_ensemble(kappa, 400, 1);
  const DensityEstimate d = density_estimate(e, kGrid);
  CHECK(d.runs == 400);
  for (std::size_t c = 0; c < kGrid.size(); ++c) CHECK(std::abs(d.mean[c] - kappa) <= 3.5 * d.se[c]);
}

TEST_CASE("density of a deterministic point") {
  EnsembleSnapshot e{kGrid.torus(), 0.0, {}};
  for (int r = 0; r < 5; ++r) e.runs.push_back({{3.2, 0, 0}});
  const DensityEstimate d = density_estimate(e, kGrid);
  const std::size_t j = kGrid.locate({3.2, 0, 0});
  for (std::size_t c = 0; c < kGrid.size(); ++c) {
    CHECK(d.mean[c] == doctest::Approx(c == j ? 1.0 / kGrid.cell_volume() : 0.0));
    CHECK(d.se[c] == 0.0);
  }
}

TEST_CASE("estimators need at least two runs") {
  EnsembleSnapshot e{kGrid.torus(), 0.0, {}};
  try {
    density_estimate(e, kGrid);
    FAIL("expected an error");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::precondition);
  }
  e.runs.push_back({{1.0, 0, 0}});
  CHECK_THROWS_AS(density_estimate(e, kGrid), Error);
}

TEST_CASE("doubling the runs halves the squared standard error") {
  double se2_small = 0.0, se2_large = 0.0;
  const int reps = 50;
  for (int rep = 0; rep < reps; ++rep) {
    se2_small += std::pow(density_estimate(poisson_ensemble(2.0, 40, 100 + rep), kGrid).se[3], 2);
    se2_large += std::pow(density_estimate(poisson_ensemble(2.0, 80, 900 + rep), kGrid).se[3], 2);
  }
  CHECK(se2_small / se2_large == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("pair correlation of a Poisson ensemble is flat at one") {
  const auto e = poisson_ensemble(5.0, 300, 2);
  const auto edges = default_bin_edges(10.0, 0.5, 24);
  CHECK(edges.size() == 25);
  CHECK(edges.back() == doctest::Approx(2.0));
  const auto bins = pair_correlation(e, edges);
  int outside = 0;
  for (const auto& b : bins) {
    CHECK(b.se > 0.0);
    if (std::abs(b.g - 1.0) > 3.0 * b.se) ++outside;
  }
  CHECK(outside <= 1);
}

TEST_CASE("pair correlation in two dimensions") {
  const Grid g(2, 6.0, 12);
  const auto e = poisson_ensemble(3.0, 200, 3, g);
  const auto bins = pair_correlation(e, default_bin_edges(6.0, 0.6, 8));
  for (const auto& b : bins) CHECK(std::abs(b.g - 1.0) <= 3.5 * b.se);
}

TEST_CASE("fixed pair distance lands in one bin") {
  EnsembleSnapshot e{kGrid.torus(), 0.0, {}};
  for (int r = 0; r < 4; ++r) e.runs.push_back({{1.0 + r, 0, 0}, {1.0 + r + 0.73, 0, 0}});
  const auto edges = default_bin_edges(10.0, 0.25, 10);
  const auto bins = pair_correlation(e, edges);
  for (const auto& b : bins) {
    if (b.lo <= 0.73 && 0.73 < b.hi) CHECK(b.g > 0.0);
    else CHECK(b.g == 0.0);
  }
}

TEST_CASE("minimum-image distances across the seam") {
  EnsembleSnapshot e{kGrid.torus(), 0.0, {}};
  for (int r = 0; r < 3; ++r) e.runs.push_back({{0.1, 0, 0}, {9.8, 0, 0}});
  const std::vector<double> edges{0.0, 0.2, 0.4, 0.6};
  const auto bins = pair_correlation(e, edges);
  CHECK(bins[1].g > 0.0);
  CHECK(bins[0].g == 0.0);
  CHECK(bins[2].g == 0.0);
}

TEST_CASE("bins beyond half the side are rejected") {
  const auto e = poisson_ensemble(1.0, 4, 1);
  const std::vector<double> edges{0.0, 3.0, 6.0};
  CHECK_THROWS_AS(pair_correlation(e, edges), Error);
}

TEST_CASE("pair correlation is invariant under relabeling and translation") {
  auto e = poisson_ensemble(3.0, 30, 5);
  const auto edges = default_bin_edges(10.0, 0.5, 12);
  const auto base = pair_correlation(e, edges);

  EnsembleSnapshot reversed = e;
  std::reverse(reversed.runs.begin(), reversed.runs.end());
  const auto r = pair_correlation(reversed, edges);

  EnsembleSnapshot moved = e;
  for (auto& run : moved.runs)
    for (auto& p : run) p = moved.torus.wrap({p[0] + 3.3, 0, 0});
  const auto t = pair_correlation(moved, edges);
  for (std::size_t b = 0; b < base.size(); ++b) {
    CHECK(r[b].g == doctest::Approx(base[b].g).epsilon(1e-12));
    CHECK(r[b].se == doctest::Approx(base[b].se).epsilon(1e-9));
    CHECK(t[b].g == doctest::Approx(base[b].g).epsilon(1e-12));
  }
}

TEST_CASE("subpoisson diagnostic") {
  const double kappa = 4.0;
  const auto e = poisson_ensemble(kappa, 200, 6);
  const auto est = estimate_correlations(e, kGrid, default_bin_edges(10.0, 0.5, 12));
  CHECK(est.runs == 200);
  CHECK(std::abs(est.intensity - kappa) <= 3 * est.intensity_se);

  const SubPoissonReport ok = subpoisson_diagnostic(est, 1.1 * kappa);
  CHECK(ok.passes());
  CHECK(ok.minimal_C > 0.9 * kappa);

  CorrelationEstimate spiked = est;
  spiked.k1_hat.mean[7] = 2.0 * 1.1 * kappa;
  spiked.k1_hat.se[7] = 0.01;
  const SubPoissonReport bad = subpoisson_diagnostic(spiked, 1.1 * kappa);
  REQUIRE(bad.flagged_cells.size() == 1);
  CHECK(bad.flagged_cells[0] == 7);
  CHECK(bad.flagged_bins.empty());

  CHECK_THROWS_AS(subpoisson_diagnostic(est, 0.0), Error);
}

TEST_CASE("minimal C never decreases when a denser run is added") {
  auto e = poisson_ensemble(2.0, 20, 8);
  const auto edges = default_bin_edges(10.0, 0.5, 12);
  double previous = subpoisson_diagnostic(estimate_correlations(e, kGrid, edges), 1.0).minimal_C;
  for (int k = 0; k < 5; ++k) {
    // the union of all runs dominates every run cellwise and pairwise
    std::vector<Point> dense;
    for (const auto& run : e.runs) dense.insert(dense.end(), run.begin(), run.end());
    e.runs.push_back(dense);
    const double c = subpoisson_diagnostic(estimate_correlations(e, kGrid, edges), 1.0).minimal_C;
    CHECK(c >= previous);
    previous = c;
  }
}

TEST_CASE("estimators are unbiased on synthetic Poisson data") {
  const double kappa = 3.0;
  const auto edges = default_bin_edges(10.0, 0.5, 6);
  std::vector<double> k1_means, k1_ses;
  std::vector<std::vector<double>> g(6);
  std::vector<std::vector<double>> g_se(6);
  for (int rep = 0; rep < 100; ++rep) {
    const auto e = poisson_ensemble(kappa, 20, 5000 + rep);
    const auto est = estimate_correlations(e, kGrid, edges);
    k1_means.push_back(est.k1_hat.mean.mean());
    k1_ses.push_back(est.intensity_se);
    for (std::size_t b = 0; b < 6; ++b) {
      g[b].push_back(est.pair_g[b].g);
      g_se[b].push_back(est.pair_g[b].se);
    }
  }
  const auto combined = [](const std::vector<double>& ses) {
    double s = 0.0;
    for (double v : ses) s += v * v;
    return std::sqrt(s) / static_cast<double>(ses.size());
  };
  CHECK(std::abs(mean_se(k1_means).mean - kappa) <= 3.0 * combined(k1_ses));
  for (std::size_t b = 0; b < 6; ++b) CHECK(std::abs(mean_se(g[b]).mean - 1.0) <= 3.0 * combined(g_se[b]));
}

#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "slm/field.hpp"
#include "slm/grid.hpp"
#include "slm/kernel.hpp"
#include "slm/params.hpp"

namespace testing {

inline slm::Grid line(double side, int cells) { return slm::Grid(1, side, cells); }

inline slm::Field constant(const slm::Grid& g, double c) { return slm::Field(g, c); }

// Indicator kernel on g with the given continuous mass.
inline slm::Kernel unit_indicator(const slm::Grid& g, double radius, double mass = 1.0) {
  return slm::Kernel::indicator(mass / slm::ball_volume(g.dim(), radius), radius, g);
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Direct O(N^2) circular convolution straight from the definition.
inline std::vector<double> naive_convolution(const slm::Kernel& k, const slm::Field& f) {
  const slm::Grid& g = f.grid;
  std::vector<double> out(g.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) out[i] += g.cell_volume() * k.table_at(g.offset_index(i, j)) * f[j];
  return out;
}

// Logistic oracle written independently of the library: u' = lambda u - b u^2.
inline double logistic(double u0, double t, double lambda, double b) {
  if (u0 == 0.0) return 0.0;
  if (lambda == 0.0) return u0 / (1.0 + b * u0 * t);
  const double q = lambda / b;
  return q / (1.0 + (q / u0 - 1.0) * std::exp(-lambda * t));
}

}  // namespace testing

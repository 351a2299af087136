#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "slm/grid.hpp"
#include "slm/kernel.hpp"

namespace slm {

/// Density sampled per cell of a periodic grid.
struct Field {
  Grid grid;
  std::vector<double> values;

  Field() = default;
  explicit Field(const Grid& g, double fill = 0.0) : grid(g), values(g.size(), fill) {}
  Field(const Grid& g, std::vector<double> v);

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
  double min() const;
  double max() const;
  double mean() const;
};

/// Pair function k2(x_i, x_j), row-major over cell pairs.
struct Field2 {
  Grid grid;
  std::vector<double> values;

  Field2() = default;
  explicit Field2(const Grid& g, double fill = 0.0) : grid(g), values(g.size() * g.size(), fill) {}
  static Field2 product(const Field& a, const Field& b);

  std::size_t cells() const { return grid.size(); }
  double at(std::size_t i, std::size_t j) const { return values[i * grid.size() + j]; }
  double& at(std::size_t i, std::size_t j) { return values[i * grid.size() + j]; }
  double max_abs() const;
  double max_asymmetry() const;
  /// Replaces each entry by the mean of (i, j) and (j, i); returns the largest correction.
  double symmetrize();
};

/// Precomputed periodic neighbours for direct convolution against one kernel:
/// (a * f)(x_i) = sum_s weight[s] f[neighbor(s, i)], weight = h^d a(offset_s).
class Stencil {
 public:
  Stencil() = default;
  explicit Stencil(const Kernel& kernel);

  std::size_t terms() const { return weights_.size(); }
  double weight(std::size_t s) const { return weights_[s]; }
  std::size_t neighbor(std::size_t s, std::size_t i) const { return neighbors_[s * cells_ + i]; }
  void apply(const std::vector<double>& f, std::vector<double>& out) const;

 private:
  std::size_t cells_ = 0;
  std::vector<double> weights_;
  std::vector<std::uint32_t> neighbors_;
};

/// Circular midpoint-quadrature convolution on the grid.
Field convolve_periodic(const Kernel& kernel, const Field& f);

}  // namespace slm

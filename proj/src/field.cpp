#include "slm/field.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "slm/errors.hpp"

namespace slm {

Field::Field(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
  require(values.size() == grid.size(), ErrorKind::invalid_parameter, "field size does not match its grid");
}

double Field::min() const { return *std::min_element(values.begin(), values.end()); }
double Field::max() const { return *std::max_element(values.begin(), values.end()); }
double Field::mean() const {
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

Field2 Field2::product(const Field& a, const Field& b) {
  require(a.grid == b.grid, ErrorKind::incompatible_grids, "product of fields on different grids");
  Field2 out(a.grid);
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out.values[i * n + j] = a[i] * b[j];
  return out;
}

double Field2::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double Field2::max_asymmetry() const {
  const std::size_t n = cells();
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) m = std::max(m, std::abs(at(i, j) - at(j, i)));
  return m;
}

double Field2::symmetrize() {
  const std::size_t n = cells();
  double drift = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (at(i, j) + at(j, i));
      drift = std::max(drift, std::abs(at(i, j) - avg));
      at(i, j) = avg;
      at(j, i) = avg;
    }
  return drift;
}

Stencil::Stencil(const Kernel& kernel) : cells_(kernel.grid().size()) {
  const Grid& grid = kernel.grid();
  const double vol = grid.cell_volume();
  for (const auto& s : kernel.support()) weights_.push_back(vol * s.value);
  neighbors_.resize(weights_.size() * cells_);
  std::size_t s = 0;
  for (const auto& cell : kernel.support()) {
    for (std::size_t i = 0; i < cells_; ++i)
      neighbors_[s * cells_ + i] = static_cast<std::uint32_t>(grid.shifted(i, cell.offset));
    ++s;
  }
}

void Stencil::apply(const std::vector<double>& f, std::vector<double>& out) const {
  out.assign(cells_, 0.0);
  for (std::size_t i = 0; i < cells_; ++i) {
    double acc = 0.0;
    for (std::size_t s = 0; s < weights_.size(); ++s) acc += weights_[s] * f[neighbors_[s * cells_ + i]];
    out[i] = acc;
  }
}

Field convolve_periodic(const Kernel& kernel, const Field& f) {
  require(kernel.grid() == f.grid, ErrorKind::incompatible_grids, "kernel and field live on different grids");
  Field out(f.grid);
  Stencil(kernel).apply(f.values, out.values);
  return out;
}

}  // namespace slm

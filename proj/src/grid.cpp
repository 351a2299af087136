#include "slm/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "slm/errors.hpp"

namespace slm {

double Torus::volume() const { return std::pow(side, dim); }

Point Torus::displacement(const Point& a, const Point& b) const {
  Point d{};
  for (int k = 0; k < dim; ++k) {
    double v = a[k] - b[k];
    v -= side * std::round(v / side);
    d[k] = v;
  }
  return d;
}

double Torus::distance2(const Point& a, const Point& b) const {
  const Point d = displacement(a, b);
  double s = 0.0;
  for (int k = 0; k < dim; ++k) s += d[k] * d[k];
  return s;
}

Point Torus::wrap(Point p) const {
  for (int k = 0; k < dim; ++k) {
    double v = std::fmod(p[k], side);
    if (v < 0.0) v += side;
    // fmod of a tiny negative number can round up to exactly `side`
    if (v >= side) v = 0.0;
    p[k] = v;
  }
  return p;
}

bool Torus::contains(const Point& p) const {
  for (int k = 0; k < dim; ++k)
    if (!(p[k] >= 0.0 && p[k] < side)) return false;
  return true;
}

Grid::Grid(int dim, double side, int cells) : dim_(dim), cells_(cells), side_(side) {
  require(dim >= 1 && dim <= 3, ErrorKind::invalid_parameter, "grid dimension must be 1, 2 or 3");
  require(side > 0.0 && std::isfinite(side), ErrorKind::invalid_parameter, "torus side must be positive");
  require(cells >= 1, ErrorKind::invalid_parameter, "grid needs at least one cell per side");
  size_ = 1;
  for (int k = 0; k < dim; ++k) size_ *= static_cast<std::size_t>(cells);
}

Grid Grid::from_spacing(int dim, double side, double spacing) {
  require(spacing > 0.0, ErrorKind::invalid_parameter, "grid spacing must be positive");
  const double ratio = side / spacing;
  const double cells = std::round(ratio);
  require(cells >= 1.0 && std::abs(ratio - cells) <= 1e-9 * ratio, ErrorKind::invalid_parameter,
          "grid spacing " + std::to_string(spacing) + " does not divide torus side " + std::to_string(side));
  return Grid(dim, side, static_cast<int>(cells));
}

double Grid::cell_volume() const { return std::pow(spacing(), dim_); }

Index3 Grid::unravel(std::size_t linear) const {
  Index3 idx{0, 0, 0};
  for (int k = 0; k < dim_; ++k) {
    idx[k] = static_cast<int>(linear % static_cast<std::size_t>(cells_));
    linear /= static_cast<std::size_t>(cells_);
  }
  return idx;
}

std::size_t Grid::ravel(const Index3& idx) const {
  std::size_t linear = 0;
  for (int k = dim_ - 1; k >= 0; --k) {
    int c = idx[k] % cells_;
    if (c < 0) c += cells_;
    linear = linear * static_cast<std::size_t>(cells_) + static_cast<std::size_t>(c);
  }
  return linear;
}

Point Grid::center(std::size_t linear) const {
  const Index3 idx = unravel(linear);
  const double h = spacing();
  Point p{};
  for (int k = 0; k < dim_; ++k) p[k] = (idx[k] + 0.5) * h;
  return p;
}

std::size_t Grid::locate(const Point& p) const {
  const double h = spacing();
  Index3 idx{0, 0, 0};
  for (int k = 0; k < dim_; ++k) {
    int c = static_cast<int>(std::floor(p[k] / h));
    idx[k] = std::clamp(c, 0, cells_ - 1);
  }
  return ravel(idx);
}

int Grid::signed_offset(int component) const {
  int c = component % cells_;
  if (c < 0) c += cells_;
  // [-n/2, n/2): for even n the antipodal offset is reported as -n/2
  if (2 * c >= cells_) c -= cells_;
  return c;
}

std::size_t Grid::offset_index(std::size_t i, std::size_t j) const {
  const Index3 a = unravel(i);
  const Index3 b = unravel(j);
  Index3 d{0, 0, 0};
  for (int k = 0; k < dim_; ++k) d[k] = a[k] - b[k];
  return ravel(d);
}

std::size_t Grid::shifted(std::size_t i, const Index3& offset) const {
  Index3 a = unravel(i);
  for (int k = 0; k < dim_; ++k) a[k] -= offset[k];
  return ravel(a);
}

Point Grid::offset_vector(std::size_t offset) const {
  const Index3 o = unravel(offset);
  const double h = spacing();
  Point p{};
  for (int k = 0; k < dim_; ++k) p[k] = signed_offset(o[k]) * h;
  return p;
}

double ball_volume(int dim, double radius) {
  switch (dim) {
    case 1: return 2.0 * radius;
    case 2: return std::numbers::pi * radius * radius;
    case 3: return 4.0 / 3.0 * std::numbers::pi * radius * radius * radius;
    default: fail(ErrorKind::invalid_parameter, "ball volume only for d = 1, 2, 3");
  }
}

}  // namespace slm

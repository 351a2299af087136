#include "slm/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "slm/errors.hpp"

namespace slm {

namespace {

double norm2(const Point& p, int dim) {
  double s = 0.0;
  for (int k = 0; k < dim; ++k) s += p[k] * p[k];
  return s;
}

// Fraction of the offset cell centered at c that lies inside the ball of radius r.
double ball_cell_fraction(const Point& c, double h, double r, int dim) {
  if (dim == 1) {
    if (c[0] - 0.5 * h >= -r && c[0] + 0.5 * h <= r) return 1.0;
    const double lo = std::max(c[0] - 0.5 * h, -r);
    const double hi = std::min(c[0] + 0.5 * h, r);
    return std::max(0.0, hi - lo) / h;
  }
  double near = 0.0;
  double far = 0.0;
  for (int k = 0; k < dim; ++k) {
    const double a = std::abs(c[k]);
    near += std::pow(std::max(0.0, a - 0.5 * h), 2);
    far += std::pow(a + 0.5 * h, 2);
  }
  const double r2 = r * r;
  if (far <= r2) return 1.0;
  if (near > r2) return 0.0;
  const int sub = dim == 2 ? 64 : 16;
  std::size_t inside = 0;
  std::size_t total = 0;
  Index3 s{0, 0, 0};
  const int nz = dim == 3 ? sub : 1;
  for (s[2] = 0; s[2] < nz; ++s[2])
    for (s[1] = 0; s[1] < sub; ++s[1])
      for (s[0] = 0; s[0] < sub; ++s[0]) {
        Point p{};
        for (int k = 0; k < dim; ++k) p[k] = c[k] - 0.5 * h + (s[k] + 0.5) * h / sub;
        if (norm2(p, dim) <= r2) ++inside;
        ++total;
      }
  return static_cast<double>(inside) / static_cast<double>(total);
}

std::size_t negated_offset(const Grid& grid, std::size_t offset) {
  Index3 o = grid.unravel(offset);
  for (int k = 0; k < grid.dim(); ++k) o[k] = -o[k];
  return grid.ravel(o);
}

void check_positive(double v, const char* what) {
  require(v > 0.0 && std::isfinite(v), ErrorKind::invalid_parameter,
          std::string(what) + " must be positive, got " + std::to_string(v));
}

void check_radius_fits(double radius, const Grid& grid) {
  require(radius < 0.5 * grid.side(), ErrorKind::invalid_parameter,
          "kernel support radius " + std::to_string(radius) + " must be below half the torus side " +
              std::to_string(0.5 * grid.side()));
}

}  // namespace

void Kernel::finalize() {
  const double vol = grid_.cell_volume();
  const int n = grid_.cells_per_side();
  support_.clear();
  mass_ = 0.0;
  sup_ = 0.0;
  for (std::size_t o = 0; o < table_.size(); ++o) {
    const double v = table_[o];
    require(v >= 0.0 && std::isfinite(v), ErrorKind::invalid_parameter, "kernel values must be nonnegative");
    require(v == table_[negated_offset(grid_, o)], ErrorKind::invalid_parameter,
            "kernel table is not even at offset index " + std::to_string(o));
    if (v == 0.0) continue;
    const Index3 raw = grid_.unravel(o);
    Index3 off{0, 0, 0};
    for (int k = 0; k < grid_.dim(); ++k) {
      off[k] = grid_.signed_offset(raw[k]);
      require(n == 1 || !(n % 2 == 0 && off[k] == -n / 2), ErrorKind::invalid_parameter,
              "kernel support reaches the antipodal offset; it must stay within half the torus side");
    }
    support_.push_back(SupportCell{off, o, v});
    mass_ += v;
    sup_ = std::max(sup_, v);
  }
  mass_ *= vol;
}

Kernel Kernel::indicator(double height, double radius, const Grid& grid) {
  check_positive(height, "indicator height");
  check_positive(radius, "indicator radius");
  check_radius_fits(radius, grid);
  Kernel k(KernelShape::indicator, grid);
  k.height_ = height;
  k.radius_ = radius;
  k.continuous_mass_ = height * ball_volume(grid.dim(), radius);
  k.table_.assign(grid.size(), 0.0);
  const double h = grid.spacing();
  for (std::size_t o = 0; o < grid.size(); ++o)
    k.table_[o] = height * ball_cell_fraction(grid.offset_vector(o), h, radius, grid.dim());
  k.finalize();
  return k;
}

Kernel Kernel::gaussian(double sigma, double cutoff, std::optional<double> height, const Grid& grid) {
  check_positive(sigma, "gaussian sigma");
  check_positive(cutoff, "gaussian cutoff");
  check_radius_fits(cutoff, grid);
  require(grid.dim() <= 2, ErrorKind::invalid_parameter, "gaussian kernels are supported for d <= 2 only");
  const double ratio2 = cutoff * cutoff / (2.0 * sigma * sigma);
  const double unit_mass =
      grid.dim() == 1 ? sigma * std::sqrt(2.0 * std::numbers::pi) * std::erf(cutoff / (sigma * std::sqrt(2.0)))
                      : 2.0 * std::numbers::pi * sigma * sigma * (-std::expm1(-ratio2));
  Kernel k(KernelShape::gaussian, grid);
  k.height_ = height ? *height : 1.0 / unit_mass;
  check_positive(k.height_, "gaussian height");
  k.sigma_ = sigma;
  k.radius_ = cutoff;
  k.continuous_mass_ = k.height_ * unit_mass;
  k.table_.assign(grid.size(), 0.0);
  for (std::size_t o = 0; o < grid.size(); ++o) {
    const double r2 = norm2(grid.offset_vector(o), grid.dim());
    if (r2 <= cutoff * cutoff) k.table_[o] = k.height_ * std::exp(-r2 / (2.0 * sigma * sigma));
  }
  k.finalize();
  return k;
}

Kernel Kernel::radial_profile(std::span<const double> radii, std::span<const double> values, const Grid& grid) {
  require(radii.size() == values.size() && !radii.empty(), ErrorKind::invalid_parameter,
          "radial profile needs matching, nonempty offset and value columns");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    require(radii[i] >= 0.0, ErrorKind::invalid_parameter, "radial profile offsets must be nonnegative");
    require(values[i] >= 0.0, ErrorKind::invalid_parameter, "radial profile values must be nonnegative");
    if (i > 0)
      require(radii[i] > radii[i - 1], ErrorKind::invalid_parameter,
              "radial profile offsets must be strictly increasing");
  }
  std::vector<double> table(grid.size(), 0.0);
  for (std::size_t o = 0; o < grid.size(); ++o) {
    const double r = std::sqrt(norm2(grid.offset_vector(o), grid.dim()));
    if (r > radii.back()) continue;
    if (r <= radii.front()) {
      table[o] = values.front();
      continue;
    }
    const auto it = std::upper_bound(radii.begin(), radii.end(), r);
    const std::size_t hi = static_cast<std::size_t>(it - radii.begin());
    const std::size_t lo = hi - 1;
    if (hi == radii.size()) {
      table[o] = values.back();
      continue;
    }
    const double w = (r - radii[lo]) / (radii[hi] - radii[lo]);
    table[o] = (1.0 - w) * values[lo] + w * values[hi];
  }
  return from_table(grid, std::move(table));
}

Kernel Kernel::from_table(const Grid& grid, std::vector<double> table) {
  require(table.size() == grid.size(), ErrorKind::invalid_parameter, "kernel table size does not match the grid");
  Kernel k(KernelShape::tabulated, grid);
  k.table_ = std::move(table);
  k.finalize();
  const double h = grid.spacing();
  double extent = 0.0;
  for (const auto& s : k.support_) {
    k.height_ = std::max(k.height_, s.value);
    extent = std::max(extent, std::sqrt(norm2(grid.offset_vector(s.index), grid.dim())));
  }
  k.radius_ = k.support_.empty() ? 0.0 : extent + 0.5 * h * std::sqrt(static_cast<double>(grid.dim()));
  k.continuous_mass_ = k.mass_;
  return k;
}

Kernel Kernel::zero(const Grid& grid) {
  Kernel k(KernelShape::zero, grid);
  k.table_.assign(grid.size(), 0.0);
  k.finalize();
  return k;
}

double Kernel::value(const Point& displacement) const {
  const int dim = grid_.dim();
  switch (shape_) {
    case KernelShape::zero: return 0.0;
    case KernelShape::indicator: return norm2(displacement, dim) <= radius_ * radius_ ? height_ : 0.0;
    case KernelShape::gaussian: {
      const double r2 = norm2(displacement, dim);
      return r2 <= radius_ * radius_ ? height_ * std::exp(-r2 / (2.0 * sigma_ * sigma_)) : 0.0;
    }
    case KernelShape::tabulated: {
      const double h = grid_.spacing();
      Index3 idx{0, 0, 0};
      for (int k = 0; k < dim; ++k) idx[k] = static_cast<int>(std::lround(displacement[k] / h));
      return table_[grid_.ravel(idx)];
    }
  }
  return 0.0;
}

Kernel Kernel::scaled(double factor) const {
  require(factor >= 0.0 && std::isfinite(factor), ErrorKind::invalid_parameter,
          "kernel scale factor must be nonnegative");
  Kernel k = *this;
  for (double& v : k.table_) v *= factor;
  k.height_ *= factor;
  k.continuous_mass_ *= factor;
  k.finalize();
  if (k.support_.empty()) k.shape_ = KernelShape::zero;
  return k;
}

Kernel make_indicator_kernel(double height, double radius, const Grid& grid) {
  return Kernel::indicator(height, radius, grid);
}

KernelMoments kernel_moments(const Kernel& k) {
  double mass = 0.0;
  double sup = 0.0;
  for (double v : k.table()) {
    mass += v;
    sup = std::max(sup, v);
  }
  return {mass * k.grid().cell_volume(), sup};
}

std::optional<double> domination_theta(const Kernel& aplus, const Kernel& aminus) {
  require(aplus.grid() == aminus.grid(), ErrorKind::incompatible_grids,
          "domination_theta needs both kernels on the same grid");
  const auto plus = aplus.table();
  const auto minus = aminus.table();
  double theta = 0.0;
  for (std::size_t o = 0; o < plus.size(); ++o) {
    if (plus[o] == 0.0) continue;
    if (minus[o] == 0.0) return std::nullopt;
    theta = std::max(theta, plus[o] / minus[o]);
  }
  // The quotient can round below the true ratio; nudge until every product covers a+.
  for (std::size_t o = 0; o < plus.size(); ++o) {
    if (plus[o] == 0.0) continue;
    while (theta * minus[o] < plus[o]) theta = std::nextafter(theta, HUGE_VAL);
  }
  return theta;
}

bool check_homogenization(const Kernel& aplus, const Kernel& aminus, double mortality) {
  require(aplus.grid() == aminus.grid(), ErrorKind::incompatible_grids,
          "check_homogenization needs both kernels on the same grid");
  const double mp = aplus.mass();
  const double mm = aminus.mass();
  require(mm > 0.0 && mp > mortality, ErrorKind::precondition,
          "homogenization check needs q = (<a+> - m)/<a-> > 0");
  const double factor = 1.0 - mortality / mp;
  const auto plus = aplus.table();
  const auto minus = aminus.table();
  for (std::size_t o = 0; o < plus.size(); ++o) {
    const double lhs = plus[o] / mp;
    const double rhs = factor * minus[o] / mm;
    // relative slack absorbs round-off when a+ is an exact multiple of a-
    if (lhs < rhs - 1e-12 * std::max(lhs, rhs)) return false;
  }
  return true;
}

bool indicator_homogenization_closed_form(double aplus_mass, double mortality, double r, double R, int dim) {
  require(R >= r && r > 0.0, ErrorKind::invalid_parameter, "closed form needs R >= r > 0");
  return 1.0 - mortality / aplus_mass <= std::pow(r / R, dim);
}

}  // namespace slm

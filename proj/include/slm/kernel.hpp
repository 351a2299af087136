#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "slm/grid.hpp"

namespace slm {

enum class KernelShape { indicator, gaussian, tabulated, zero };

/// One nonzero entry of a tabulated kernel.
struct SupportCell {
  Index3 offset;      // signed offset in cells
  std::size_t index;  // linear offset index into the table
  double value;
};

/// A nonnegative even kernel a(x) on the torus, tabulated on the solver grid.
///
/// `value()` evaluates the continuous function used by the particle simulator; the table holds
/// what the grid solvers see. Indicator kernels are tabulated as cell averages, so in d = 1 the
/// discrete mass equals the analytic mass exactly. Gaussian kernels are sampled at offset centers.
/// Tabulated kernels are piecewise constant on offset cells, so both views coincide.
///
/// Immutable after construction.
class Kernel {
 public:
  static Kernel indicator(double height, double radius, const Grid& grid);
  /// Gaussian exp(-|x|^2 / 2 sigma^2) truncated at `cutoff`. Without a height the kernel is
  /// normalized to unit continuous mass. d <= 2 only.
  static Kernel gaussian(double sigma, double cutoff, std::optional<double> height, const Grid& grid);
  /// Radial profile (r_k, v_k), linearly interpolated and sampled at the offset centers.
  static Kernel radial_profile(std::span<const double> radii, std::span<const double> values,
                               const Grid& grid);
  /// Raw table indexed by linear offset index. Must be even and nonnegative.
  static Kernel from_table(const Grid& grid, std::vector<double> table);
  static Kernel zero(const Grid& grid);

  KernelShape shape() const { return shape_; }
  const Grid& grid() const { return grid_; }
  int dim() const { return grid_.dim(); }
  double height() const { return height_; }
  /// Support radius of the continuous kernel (cutoff for gaussian shapes).
  double radius() const { return radius_; }
  double sigma() const { return sigma_; }

  /// Midpoint quadrature of the table.
  double mass() const { return mass_; }
  /// Max of the table.
  double sup() const { return sup_; }
  /// Exact integral of the continuous kernel.
  double continuous_mass() const { return continuous_mass_; }
  bool is_zero() const { return support_.empty(); }

  double value(const Point& displacement) const;
  std::span<const double> table() const { return table_; }
  double table_at(std::size_t offset_index) const { return table_[offset_index]; }
  std::span<const SupportCell> support() const { return support_; }

  Kernel scaled(double factor) const;

 private:
  Kernel(KernelShape shape, const Grid& grid) : shape_(shape), grid_(grid) {}
  void finalize();

  KernelShape shape_;
  Grid grid_;
  double height_ = 0.0;
  double radius_ = 0.0;
  double sigma_ = 0.0;
  double mass_ = 0.0;
  double sup_ = 0.0;
  double continuous_mass_ = 0.0;
  std::vector<double> table_;
  std::vector<SupportCell> support_;
};

Kernel make_indicator_kernel(double height, double radius, const Grid& grid);

struct KernelMoments {
  double mass;
  double sup;
};

/// Recomputes mass and sup from the table.
KernelMoments kernel_moments(const Kernel& k);

/// Smallest theta with aplus <= theta * aminus at every grid offset, or nullopt when aplus
/// is positive somewhere aminus vanishes. Grid sup, not essential sup.
std::optional<double> domination_theta(const Kernel& aplus, const Kernel& aminus);

/// Gridwise test of aplus/<aplus> >= (1 - m/<aplus>) aminus/<aminus>.
bool check_homogenization(const Kernel& aplus, const Kernel& aminus, double mortality);

/// Closed-form criterion for two indicator kernels with R >= r: 1 - m/<a+> <= (r/R)^d.
bool indicator_homogenization_closed_form(double aplus_mass, double mortality, double r, double R, int dim);

}  // namespace slm

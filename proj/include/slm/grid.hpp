#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace slm {

/// Position on the torus; only the first `dim` components are meaningful.
using Point = std::array<double, 3>;
using Index3 = std::array<int, 3>;

/// The d-torus [0, L)^d.
struct Torus {
  int dim = 1;
  double side = 1.0;

  double volume() const;
  /// Minimum-image displacement a - b.
  Point displacement(const Point& a, const Point& b) const;
  double distance2(const Point& a, const Point& b) const;
  Point wrap(Point p) const;
  bool contains(const Point& p) const;

  friend bool operator==(const Torus&, const Torus&) = default;
};

/// Uniform periodic lattice with `cells` cells per axis. Cell centers sit at (i + 1/2) h.
/// Offsets between centers are integer multiples of h; the offset table of a kernel uses
/// the same linear indexing as the cells, with each axis component taken mod `cells`.
class Grid {
 public:
  Grid() = default;
  Grid(int dim, double side, int cells);
  /// Builds the grid from a spacing; h must divide L.
  static Grid from_spacing(int dim, double side, double spacing);

  int dim() const { return dim_; }
  int cells_per_side() const { return cells_; }
  double side() const { return side_; }
  double spacing() const { return side_ / cells_; }
  double cell_volume() const;
  std::size_t size() const { return size_; }
  Torus torus() const { return Torus{dim_, side_}; }

  Index3 unravel(std::size_t linear) const;
  std::size_t ravel(const Index3& idx) const;
  Point center(std::size_t linear) const;
  /// Cell containing a point of the torus.
  std::size_t locate(const Point& p) const;

  /// Minimum-image integer offset component in [-n/2, n/2).
  int signed_offset(int component) const;
  /// Linear offset index of (i - j) taken mod n per axis.
  std::size_t offset_index(std::size_t i, std::size_t j) const;
  /// Linear index of cell i shifted by -offset (periodic).
  std::size_t shifted(std::size_t i, const Index3& offset) const;
  /// Physical minimum-image displacement represented by an offset index.
  Point offset_vector(std::size_t offset) const;

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.dim_ == b.dim_ && a.cells_ == b.cells_ && a.side_ == b.side_;
  }

 private:
  int dim_ = 1;
  int cells_ = 1;
  double side_ = 1.0;
  std::size_t size_ = 1;
};

/// Volume of the d-ball of the given radius.
double ball_volume(int dim, double radius);

}  // namespace slm

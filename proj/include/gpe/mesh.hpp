#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace gpe {

using Index = std::ptrdiff_t;

/// Point in the plane; 1D meshes leave y at zero.
struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

/// Structured simplicial mesh of an interval (dim 1) or a rectangle (dim 2).
///
/// Nodes are ordered lexicographically with x fastest. In 2D every grid cell
/// is split along its lower-left to upper-right diagonal into two
/// counter-clockwise triangles. Immutable after construction.
class Mesh {
 public:
  int dim() const { return dim_; }
  Index num_nodes() const { return static_cast<Index>(nodes_.size()); }
  Index num_elements() const { return static_cast<Index>(cells_.size()) / nodes_per_element(); }
  int nodes_per_element() const { return dim_ + 1; }

  const Point& node(Index i) const { return nodes_[static_cast<std::size_t>(i)]; }
  const std::vector<Point>& nodes() const { return nodes_; }

  std::span<const Index> element(Index e) const {
    return {cells_.data() + e * nodes_per_element(), static_cast<std::size_t>(nodes_per_element())};
  }

  /// Sorted indices of nodes on the domain boundary.
  const std::vector<Index>& boundary_nodes() const { return boundary_; }

  /// Maximum element diameter.
  double h() const { return h_; }

  /// Measure (length or area) of element e.
  double element_measure(Index e) const;

  /// Number of elements along x (and y in 2D).
  Index cells_x() const { return nx_; }
  Index cells_y() const { return ny_; }

  Interval x_range() const { return xr_; }
  Interval y_range() const { return yr_; }

  /// 64-bit FNV-1a hash over coordinates and connectivity.
  std::uint64_t fingerprint() const;

  friend Mesh build_interval_mesh(double a, double b, Index n_elems);
  friend Mesh build_rect_mesh(Interval x_range, Interval y_range, Index nx, Index ny);

 private:
  int dim_ = 1;
  std::vector<Point> nodes_;
  std::vector<Index> cells_;
  std::vector<Index> boundary_;
  double h_ = 0.0;
  Index nx_ = 0;
  Index ny_ = 0;
  Interval xr_{};
  Interval yr_{};
};

Mesh build_interval_mesh(double a, double b, Index n_elems);
Mesh build_rect_mesh(Interval x_range, Interval y_range, Index nx, Index ny);

/// true exactly at boundary node indices.
std::vector<bool> boundary_mask(const Mesh& mesh);

/// Debug dump: writes <stem>_nodes.csv and <stem>_elements.csv.
void write_mesh_csv(const Mesh& mesh, const std::string& stem);

}  // namespace gpe

#include "gpe/mesh.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace gpe {

Mesh build_interval_mesh(double a, double b, Index n_elems) {
  if (!(a < b)) throw std::invalid_argument("build_interval_mesh: require a < b");
  if (n_elems < 1) throw std::invalid_argument("build_interval_mesh: require n_elems >= 1");

  Mesh mesh;
  mesh.dim_ = 1;
  mesh.nx_ = n_elems;
  mesh.xr_ = {a, b};
  mesh.nodes_.resize(static_cast<std::size_t>(n_elems + 1));
  const double h = (b - a) / static_cast<double>(n_elems);
  for (Index i = 0; i <= n_elems; ++i) {
    // the last node hits b exactly
    const double x = (i == n_elems) ? b : a + static_cast<double>(i) * h;
    mesh.nodes_[static_cast<std::size_t>(i)] = {x, 0.0};
  }
  mesh.cells_.reserve(static_cast<std::size_t>(2 * n_elems));
  for (Index e = 0; e < n_elems; ++e) {
    mesh.cells_.push_back(e);
    mesh.cells_.push_back(e + 1);
  }
  mesh.boundary_ = {0, n_elems};
  mesh.h_ = h;
  return mesh;
}

Mesh build_rect_mesh(Interval x_range, Interval y_range, Index nx, Index ny) {
  if (!(x_range.lo < x_range.hi) || !(y_range.lo < y_range.hi))
    throw std::invalid_argument("build_rect_mesh: degenerate range");
  if (nx < 1 || ny < 1) throw std::invalid_argument("build_rect_mesh: require nx, ny >= 1");

  Mesh mesh;
  mesh.dim_ = 2;
  mesh.nx_ = nx;
  mesh.ny_ = ny;
  mesh.xr_ = x_range;
  mesh.yr_ = y_range;
  const double hx = x_range.length() / static_cast<double>(nx);
  const double hy = y_range.length() / static_cast<double>(ny);
  const Index row = nx + 1;
  mesh.nodes_.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  for (Index j = 0; j <= ny; ++j) {
    const double y = (j == ny) ? y_range.hi : y_range.lo + static_cast<double>(j) * hy;
    for (Index i = 0; i <= nx; ++i) {
      const double x = (i == nx) ? x_range.hi : x_range.lo + static_cast<double>(i) * hx;
      mesh.nodes_.push_back({x, y});
      if (i == 0 || j == 0 || i == nx || j == ny) mesh.boundary_.push_back(j * row + i);
    }
  }
  mesh.cells_.reserve(static_cast<std::size_t>(6 * nx * ny));
  for (Index j = 0; j < ny; ++j) {
    for (Index i = 0; i < nx; ++i) {
      const Index n00 = j * row + i;
      const Index n10 = n00 + 1;
      const Index n01 = n00 + row;
      const Index n11 = n01 + 1;
      mesh.cells_.insert(mesh.cells_.end(), {n00, n10, n11});
      mesh.cells_.insert(mesh.cells_.end(), {n00, n11, n01});
    }
  }
  mesh.h_ = std::hypot(hx, hy);
  return mesh;
}

double Mesh::element_measure(Index e) const {
  const auto v = element(e);
  if (dim_ == 1) return std::abs(node(v[1]).x - node(v[0]).x);
  const Point& p0 = node(v[0]);
  const Point& p1 = node(v[1]);
  const Point& p2 = node(v[2]);
  return 0.5 * std::abs((p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y));
}

std::uint64_t Mesh::fingerprint() const {
  std::uint64_t hash = 1469598103934665603ULL;
  auto mix = [&hash](const void* data, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t k = 0; k < n; ++k) {
      hash ^= bytes[k];
      hash *= 1099511628211ULL;
    }
  };
  mix(&dim_, sizeof dim_);
  for (const Point& p : nodes_) {
    mix(&p.x, sizeof p.x);
    mix(&p.y, sizeof p.y);
  }
  for (Index c : cells_) mix(&c, sizeof c);
  return hash;
}

std::vector<bool> boundary_mask(const Mesh& mesh) {
  std::vector<bool> mask(static_cast<std::size_t>(mesh.num_nodes()), false);
  for (Index i : mesh.boundary_nodes()) mask[static_cast<std::size_t>(i)] = true;
  return mask;
}

void write_mesh_csv(const Mesh& mesh, const std::string& stem) {
  std::ofstream nodes(stem + "_nodes.csv");
  nodes << std::setprecision(17) << "index,x,y\n";
  for (Index i = 0; i < mesh.num_nodes(); ++i)
    nodes << i << ',' << mesh.node(i).x << ',' << mesh.node(i).y << '\n';
  std::ofstream elems(stem + "_elements.csv");
  elems << (mesh.dim() == 1 ? "index,n0,n1\n" : "index,n0,n1,n2\n");
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    elems << e;
    for (Index v : mesh.element(e)) elems << ',' << v;
    elems << '\n';
  }
}

}  // namespace gpe

#pragma once

#include <vector>

namespace gpe {

/// Quadrature rule on a reference simplex, in barycentric-free form:
/// 1D points are on [0,1], 2D points on the triangle (0,0),(1,0),(0,1).
/// Weights sum to the reference measure (1 in 1D, 1/2 in 2D).
struct QuadRule {
  int dim = 1;
  std::vector<double> xi;
  std::vector<double> eta;  // empty in 1D
  std::vector<double> weights;

  int size() const { return static_cast<int>(weights.size()); }
};

/// 3-point Gauss-Legendre, exact to degree 5.
const QuadRule& gauss3_interval();

/// 6-point symmetric rule on triangles, exact to degree 4.
const QuadRule& dunavant6_triangle();

const QuadRule& default_rule(int dim);

}  // namespace gpe

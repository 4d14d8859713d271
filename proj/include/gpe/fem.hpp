#pragma once

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include "gpe/mesh.hpp"
#include "gpe/quadrature.hpp"
#include "gpe/sparse.hpp"

namespace gpe {

/// Real samples at every (element, quadrature point) pair of a FemSpace.
class WeightField {
 public:
  WeightField() = default;
  WeightField(Index num_elements, int points_per_element, double fill = 0.0)
      : n_elems_(num_elements),
        n_q_(points_per_element),
        values_(static_cast<std::size_t>(num_elements * points_per_element), fill) {}

  Index num_elements() const { return n_elems_; }
  int points_per_element() const { return n_q_; }
  Index size() const { return static_cast<Index>(values_.size()); }

  double& operator()(Index e, int q) { return values_[static_cast<std::size_t>(e * n_q_ + q)]; }
  double operator()(Index e, int q) const { return values_[static_cast<std::size_t>(e * n_q_ + q)]; }

  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

 private:
  Index n_elems_ = 0;
  int n_q_ = 0;
  std::vector<double> values_;
};

/// Densities on the quadrature layout; the relaxation variable lives here.
using QuadDensity = WeightField;

using ScalarFunction = std::function<double(const Point&)>;
using ComplexFunction = std::function<Complex(const Point&)>;

/// P1 Lagrange space on a mesh with precomputed quadrature geometry and the
/// element-to-matrix-slot map shared by every assembled operator.
class FemSpace {
 public:
  explicit FemSpace(Mesh mesh);

  const Mesh& mesh() const { return mesh_; }
  const QuadRule& rule() const { return *rule_; }
  Index num_nodes() const { return mesh_.num_nodes(); }
  Index num_elements() const { return mesh_.num_elements(); }
  int nodes_per_element() const { return mesh_.nodes_per_element(); }
  int points_per_element() const { return rule_->size(); }
  const std::vector<bool>& boundary() const { return boundary_; }

  const std::shared_ptr<const SparsityPattern>& pattern() const { return pattern_; }
  /// Interleaved (Re, Im) pattern of size 2m used by Newton Jacobians.
  const std::shared_ptr<const SparsityPattern>& block_pattern() const { return block_pattern_; }

  const Point& quad_point(Index e, int q) const { return qpoints_[static_cast<std::size_t>(e * points_per_element() + q)]; }
  double quad_weight(Index e, int q) const { return qweights_[static_cast<std::size_t>(e * points_per_element() + q)]; }
  /// Reference basis value of local node a at quadrature point q.
  double basis(int q, int a) const { return basis_[static_cast<std::size_t>(q * nodes_per_element() + a)]; }
  /// Constant gradient of local basis function a on element e.
  const std::array<double, 2>& gradient(Index e, int a) const {
    return grads_[static_cast<std::size_t>(e * nodes_per_element() + a)];
  }
  /// Value-array index of the (a, b) local pair of element e in pattern().
  Index slot(Index e, int a, int b) const {
    const int npe = nodes_per_element();
    return slots_[static_cast<std::size_t>((e * npe + a) * npe + b)];
  }

  WeightField sample(const ScalarFunction& f) const;
  WeightField constant(double c) const { return WeightField(num_elements(), points_per_element(), c); }

  /// Values of the P1 function with coefficients u at all quadrature points.
  std::vector<Complex> evaluate(const ComplexVector& u) const;
  /// Gradients (d/dx, d/dy) of the P1 function, one per element.
  std::vector<std::array<Complex, 2>> element_gradients(const ComplexVector& u) const;

 private:
  Mesh mesh_;
  const QuadRule* rule_;
  std::vector<bool> boundary_;
  std::shared_ptr<const SparsityPattern> pattern_;
  std::shared_ptr<const SparsityPattern> block_pattern_;
  std::vector<Point> qpoints_;
  std::vector<double> qweights_;
  std::vector<double> basis_;
  std::vector<std::array<double, 2>> grads_;
  std::vector<Index> slots_;
};

RealMatrix assemble_mass(const FemSpace& space);
RealMatrix assemble_stiffness(const FemSpace& space);
RealMatrix assemble_weighted_mass(const FemSpace& space, const WeightField& w);

/// |u_h|^2 sampled at the quadrature points; exact for P1 u_h.
QuadDensity sample_density(const FemSpace& space, const ComplexVector& u);

/// Hermitian matrix of L = -i (x d_y - y d_x). The real first-order form is
/// antisymmetrized before the factor -i is applied, so <Lu,u> is real.
ComplexMatrix assemble_angular_momentum(const FemSpace& space);

/// Coefficients f(node_i); boundary coefficients are set to zero when requested.
ComplexVector interpolate_nodal(const Mesh& mesh, const ComplexFunction& f, bool zero_boundary = true);

enum class NonlinearForm { ImplicitMidpoint, CrankNicolson };

/// Linear operators of one time step: mass M and H = c A + M_V.
struct StepMatrices {
  const RealMatrix* mass = nullptr;
  const RealMatrix* hamiltonian = nullptr;
};

/// F(w) = i M (w - u_old)/tau - (H + beta N(u_old, w)) (w + u_old)/2, with the
/// scheme's nonlinear weighting N; boundary rows return w itself.
ComplexVector assemble_nonlinear_residual(const FemSpace& space, const StepMatrices& ops, NonlinearForm form,
                                          const ComplexVector& u_old, const ComplexVector& u_new, double beta,
                                          double tau);

/// Real 2m x 2m Jacobian of (Re F, Im F) with respect to (Re w, Im w) in
/// interleaved ordering: unknown 2i is Re w_i, 2i+1 is Im w_i.
RealMatrix assemble_newton_jacobian(const FemSpace& space, const StepMatrices& ops, NonlinearForm form,
                                    const ComplexVector& u_old, const ComplexVector& u_new, double beta, double tau);

RealVector to_interleaved(const ComplexVector& z);
ComplexVector from_interleaved(const RealVector& x);

}  // namespace gpe

#include "gpe/fem.hpp"

#include <cmath>
#include <stdexcept>

namespace gpe {

namespace {

std::shared_ptr<const SparsityPattern> interleave(const SparsityPattern& p) {
  const Index n = p.size();
  std::vector<int> offsets(static_cast<std::size_t>(2 * n + 1), 0);
  std::vector<int> cols;
  cols.reserve(static_cast<std::size_t>(4 * p.nnz()));
  const auto& po = p.row_offsets();
  const auto& pc = p.cols();
  for (Index i = 0; i < n; ++i) {
    for (int r = 0; r < 2; ++r) {
      for (int k = po[static_cast<std::size_t>(i)]; k < po[static_cast<std::size_t>(i) + 1]; ++k) {
        cols.push_back(2 * pc[static_cast<std::size_t>(k)]);
        cols.push_back(2 * pc[static_cast<std::size_t>(k)] + 1);
      }
      offsets[static_cast<std::size_t>(2 * i + r + 1)] = static_cast<int>(cols.size());
    }
  }
  return std::make_shared<const SparsityPattern>(2 * n, std::move(offsets), std::move(cols));
}

// Position of the (2i + r, 2j + s) entry in the interleaved pattern, given the
// scalar slot k of (i, j).
inline std::size_t block_slot(const SparsityPattern& scalar, Index i, Index k, int r, int s) {
  const auto& po = scalar.row_offsets();
  const Index begin = po[static_cast<std::size_t>(i)];
  const Index len = po[static_cast<std::size_t>(i) + 1] - begin;
  return static_cast<std::size_t>(4 * begin + r * 2 * len + 2 * (k - begin) + s);
}

}  // namespace

FemSpace::FemSpace(Mesh mesh) : mesh_(std::move(mesh)), rule_(&default_rule(mesh_.dim())) {
  boundary_ = boundary_mask(mesh_);
  const Index ne = mesh_.num_elements();
  const int npe = nodes_per_element();
  const int nq = rule_->size();

  basis_.resize(static_cast<std::size_t>(nq * npe));
  for (int q = 0; q < nq; ++q) {
    const double xi = rule_->xi[static_cast<std::size_t>(q)];
    if (mesh_.dim() == 1) {
      basis_[static_cast<std::size_t>(q * npe)] = 1.0 - xi;
      basis_[static_cast<std::size_t>(q * npe + 1)] = xi;
    } else {
      const double eta = rule_->eta[static_cast<std::size_t>(q)];
      basis_[static_cast<std::size_t>(q * npe)] = 1.0 - xi - eta;
      basis_[static_cast<std::size_t>(q * npe + 1)] = xi;
      basis_[static_cast<std::size_t>(q * npe + 2)] = eta;
    }
  }

  qpoints_.resize(static_cast<std::size_t>(ne * nq));
  qweights_.resize(static_cast<std::size_t>(ne * nq));
  grads_.resize(static_cast<std::size_t>(ne * npe));
  std::vector<std::pair<int, int>> entries;
  entries.reserve(static_cast<std::size_t>(ne * npe * npe));
  for (Index e = 0; e < ne; ++e) {
    const auto v = mesh_.element(e);
    const Point& p0 = mesh_.node(v[0]);
    const Point& p1 = mesh_.node(v[1]);
    if (mesh_.dim() == 1) {
      const double len = p1.x - p0.x;
      grads_[static_cast<std::size_t>(e * 2)] = {-1.0 / len, 0.0};
      grads_[static_cast<std::size_t>(e * 2 + 1)] = {1.0 / len, 0.0};
      for (int q = 0; q < nq; ++q) {
        const double xi = rule_->xi[static_cast<std::size_t>(q)];
        qpoints_[static_cast<std::size_t>(e * nq + q)] = {p0.x + xi * len, 0.0};
        qweights_[static_cast<std::size_t>(e * nq + q)] = rule_->weights[static_cast<std::size_t>(q)] * std::abs(len);
      }
    } else {
      const Point& p2 = mesh_.node(v[2]);
      const double j11 = p1.x - p0.x, j12 = p2.x - p0.x;
      const double j21 = p1.y - p0.y, j22 = p2.y - p0.y;
      const double det = j11 * j22 - j12 * j21;
      // reference gradients: (-1,-1), (1,0), (0,1); physical = J^{-T} ref
      auto phys = [&](double gx, double gy) -> std::array<double, 2> {
        return {(j22 * gx - j21 * gy) / det, (-j12 * gx + j11 * gy) / det};
      };
      grads_[static_cast<std::size_t>(e * 3)] = phys(-1.0, -1.0);
      grads_[static_cast<std::size_t>(e * 3 + 1)] = phys(1.0, 0.0);
      grads_[static_cast<std::size_t>(e * 3 + 2)] = phys(0.0, 1.0);
      for (int q = 0; q < nq; ++q) {
        const double xi = rule_->xi[static_cast<std::size_t>(q)];
        const double eta = rule_->eta[static_cast<std::size_t>(q)];
        qpoints_[static_cast<std::size_t>(e * nq + q)] = {p0.x + j11 * xi + j12 * eta, p0.y + j21 * xi + j22 * eta};
        qweights_[static_cast<std::size_t>(e * nq + q)] = rule_->weights[static_cast<std::size_t>(q)] * std::abs(det);
      }
    }
    for (int a = 0; a < npe; ++a)
      for (int b = 0; b < npe; ++b) entries.emplace_back(static_cast<int>(v[a]), static_cast<int>(v[b]));
  }
  pattern_ = SparsityPattern::from_entries(num_nodes(), std::move(entries));
  block_pattern_ = interleave(*pattern_);

  slots_.resize(static_cast<std::size_t>(ne * npe * npe));
  for (Index e = 0; e < ne; ++e) {
    const auto v = mesh_.element(e);
    for (int a = 0; a < npe; ++a)
      for (int b = 0; b < npe; ++b)
        slots_[static_cast<std::size_t>((e * npe + a) * npe + b)] = pattern_->find(v[a], v[b]);
  }
}

WeightField FemSpace::sample(const ScalarFunction& f) const {
  WeightField w(num_elements(), points_per_element());
  for (Index e = 0; e < num_elements(); ++e)
    for (int q = 0; q < points_per_element(); ++q) w(e, q) = f(quad_point(e, q));
  return w;
}

std::vector<Complex> FemSpace::evaluate(const ComplexVector& u) const {
  if (u.size() != num_nodes()) throw std::invalid_argument("FemSpace::evaluate: dimension mismatch");
  const int nq = points_per_element();
  const int npe = nodes_per_element();
  std::vector<Complex> out(static_cast<std::size_t>(num_elements() * nq));
  for (Index e = 0; e < num_elements(); ++e) {
    const auto v = mesh_.element(e);
    for (int q = 0; q < nq; ++q) {
      Complex s(0.0);
      for (int a = 0; a < npe; ++a) s += basis(q, a) * u(v[a]);
      out[static_cast<std::size_t>(e * nq + q)] = s;
    }
  }
  return out;
}

std::vector<std::array<Complex, 2>> FemSpace::element_gradients(const ComplexVector& u) const {
  if (u.size() != num_nodes()) throw std::invalid_argument("FemSpace::element_gradients: dimension mismatch");
  std::vector<std::array<Complex, 2>> out(static_cast<std::size_t>(num_elements()));
  for (Index e = 0; e < num_elements(); ++e) {
    const auto v = mesh_.element(e);
    std::array<Complex, 2> g{Complex(0.0), Complex(0.0)};
    for (int a = 0; a < nodes_per_element(); ++a) {
      g[0] += gradient(e, a)[0] * u(v[a]);
      g[1] += gradient(e, a)[1] * u(v[a]);
    }
    out[static_cast<std::size_t>(e)] = g;
  }
  return out;
}

RealMatrix assemble_mass(const FemSpace& space) { return assemble_weighted_mass(space, space.constant(1.0)); }

RealMatrix assemble_stiffness(const FemSpace& space) {
  RealMatrix a(space.pattern());
  auto vals = a.values();
  const int npe = space.nodes_per_element();
  for (Index e = 0; e < space.num_elements(); ++e) {
    const double measure = space.mesh().element_measure(e);
    for (int i = 0; i < npe; ++i)
      for (int j = 0; j < npe; ++j) {
        const auto& gi = space.gradient(e, i);
        const auto& gj = space.gradient(e, j);
        vals[static_cast<std::size_t>(space.slot(e, i, j))] += measure * (gi[0] * gj[0] + gi[1] * gj[1]);
      }
  }
  return a;
}

RealMatrix assemble_weighted_mass(const FemSpace& space, const WeightField& w) {
  if (w.num_elements() != space.num_elements() || w.points_per_element() != space.points_per_element())
    throw std::invalid_argument("assemble_weighted_mass: weight field does not match the quadrature layout");
  RealMatrix m(space.pattern());
  auto vals = m.values();
  const int npe = space.nodes_per_element();
  const int nq = space.points_per_element();
  for (Index e = 0; e < space.num_elements(); ++e) {
    for (int q = 0; q < nq; ++q) {
      const double wq = space.quad_weight(e, q) * w(e, q);
      for (int i = 0; i < npe; ++i) {
        const double wi = wq * space.basis(q, i);
        for (int j = 0; j < npe; ++j) vals[static_cast<std::size_t>(space.slot(e, i, j))] += wi * space.basis(q, j);
      }
    }
  }
  return m;
}

QuadDensity sample_density(const FemSpace& space, const ComplexVector& u) {
  const auto uq = space.evaluate(u);
  QuadDensity rho(space.num_elements(), space.points_per_element());
  for (std::size_t k = 0; k < uq.size(); ++k) rho.values()[k] = std::norm(uq[k]);
  return rho;
}

ComplexMatrix assemble_angular_momentum(const FemSpace& space) {
  if (space.mesh().dim() != 2) throw std::invalid_argument("assemble_angular_momentum: requires a 2D mesh");
  RealMatrix d(space.pattern());
  auto vals = d.values();
  for (Index e = 0; e < space.num_elements(); ++e) {
    for (int q = 0; q < space.points_per_element(); ++q) {
      const Point& p = space.quad_point(e, q);
      const double wq = space.quad_weight(e, q);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          const auto& gj = space.gradient(e, j);
          vals[static_cast<std::size_t>(space.slot(e, i, j))] +=
              wq * (p.x * gj[1] - p.y * gj[0]) * space.basis(q, i);
        }
    }
  }
  // the pattern is symmetric, so the transpose shares it
  std::vector<Complex> out(vals.size());
  const auto& offs = d.pattern().row_offsets();
  const auto& cols = d.pattern().cols();
  for (Index i = 0; i < d.size(); ++i)
    for (int k = offs[static_cast<std::size_t>(i)]; k < offs[static_cast<std::size_t>(i) + 1]; ++k) {
      const int j = cols[static_cast<std::size_t>(k)];
      const double anti = 0.5 * (vals[static_cast<std::size_t>(k)] - d.coeff(j, i));
      out[static_cast<std::size_t>(k)] = Complex(0.0, -anti);
    }
  return ComplexMatrix(space.pattern(), std::move(out));
}

ComplexVector interpolate_nodal(const Mesh& mesh, const ComplexFunction& f, bool zero_boundary) {
  ComplexVector u(mesh.num_nodes());
  for (Index i = 0; i < mesh.num_nodes(); ++i) u(i) = f(mesh.node(i));
  if (zero_boundary)
    for (Index i : mesh.boundary_nodes()) u(i) = 0.0;
  return u;
}

namespace {

struct NonlinearPoint {
  Complex value;   // G(w) at the point
  Complex d_re;    // dG / d Re w
  Complex d_im;    // dG / d Im w
};

inline NonlinearPoint nonlinearity(NonlinearForm form, Complex w, Complex u_old) {
  const Complex m = 0.5 * (w + u_old);
  if (form == NonlinearForm::ImplicitMidpoint) {
    const double m2 = std::norm(m);
    return {m2 * m, m.real() * m + 0.5 * m2, m.imag() * m + Complex(0.0, 0.5 * m2)};
  }
  const double rho = 0.5 * (std::norm(w) + std::norm(u_old));
  return {rho * m, w.real() * m + 0.5 * rho, w.imag() * m + Complex(0.0, 0.5 * rho)};
}

void check_step_inputs(const FemSpace& space, const StepMatrices& ops, const ComplexVector& u_old,
                       const ComplexVector& u_new) {
  const Index m = space.num_nodes();
  if (!ops.mass || !ops.hamiltonian) throw std::invalid_argument("step matrices not set");
  if (u_old.size() != m || u_new.size() != m || ops.mass->size() != m || ops.hamiltonian->size() != m)
    throw std::invalid_argument("nonlinear step: dimension mismatch");
}

}  // namespace

ComplexVector assemble_nonlinear_residual(const FemSpace& space, const StepMatrices& ops, NonlinearForm form,
                                          const ComplexVector& u_old, const ComplexVector& u_new, double beta,
                                          double tau) {
  check_step_inputs(space, ops, u_old, u_new);
  const Complex i_tau(0.0, 1.0 / tau);
  ComplexVector f = i_tau * matvec(*ops.mass, u_new - u_old) - 0.5 * matvec(*ops.hamiltonian, u_new + u_old);
  if (beta != 0.0) {
    const auto wq = space.evaluate(u_new);
    const auto oq = space.evaluate(u_old);
    const int nq = space.points_per_element();
    const int npe = space.nodes_per_element();
    for (Index e = 0; e < space.num_elements(); ++e) {
      const auto v = space.mesh().element(e);
      for (int q = 0; q < nq; ++q) {
        const std::size_t k = static_cast<std::size_t>(e * nq + q);
        const Complex g = beta * space.quad_weight(e, q) * nonlinearity(form, wq[k], oq[k]).value;
        for (int a = 0; a < npe; ++a) f(v[a]) -= g * space.basis(q, a);
      }
    }
  }
  for (Index i : space.mesh().boundary_nodes()) f(i) = u_new(i);
  return f;
}

RealMatrix assemble_newton_jacobian(const FemSpace& space, const StepMatrices& ops, NonlinearForm form,
                                    const ComplexVector& u_old, const ComplexVector& u_new, double beta,
                                    double tau) {
  check_step_inputs(space, ops, u_old, u_new);
  const SparsityPattern& sp = *space.pattern();
  RealMatrix jac(space.block_pattern());
  auto jv = jac.values();
  const auto mv = ops.mass->values();
  const auto hv = ops.hamiltonian->values();
  if (ops.mass->pattern_ptr() != space.pattern() || ops.hamiltonian->pattern_ptr() != space.pattern())
    throw std::invalid_argument("assemble_newton_jacobian: operators must use the space's pattern");
  const auto& po = sp.row_offsets();
  for (Index i = 0; i < sp.size(); ++i)
    for (int k = po[static_cast<std::size_t>(i)]; k < po[static_cast<std::size_t>(i) + 1]; ++k) {
      const double mt = mv[static_cast<std::size_t>(k)] / tau;
      const double hh = 0.5 * hv[static_cast<std::size_t>(k)];
      jv[block_slot(sp, i, k, 0, 0)] = -hh;
      jv[block_slot(sp, i, k, 0, 1)] = -mt;
      jv[block_slot(sp, i, k, 1, 0)] = mt;
      jv[block_slot(sp, i, k, 1, 1)] = -hh;
    }
  if (beta != 0.0) {
    const auto wq = space.evaluate(u_new);
    const auto oq = space.evaluate(u_old);
    const int nq = space.points_per_element();
    const int npe = space.nodes_per_element();
    for (Index e = 0; e < space.num_elements(); ++e) {
      const auto v = space.mesh().element(e);
      for (int q = 0; q < nq; ++q) {
        const std::size_t kq = static_cast<std::size_t>(e * nq + q);
        const NonlinearPoint np = nonlinearity(form, wq[kq], oq[kq]);
        const double s = -beta * space.quad_weight(e, q);
        for (int a = 0; a < npe; ++a) {
          const double sa = s * space.basis(q, a);
          for (int b = 0; b < npe; ++b) {
            const double c = sa * space.basis(q, b);
            const Index k = space.slot(e, a, b);
            const Index row = v[a];
            jv[block_slot(sp, row, k, 0, 0)] += c * np.d_re.real();
            jv[block_slot(sp, row, k, 0, 1)] += c * np.d_im.real();
            jv[block_slot(sp, row, k, 1, 0)] += c * np.d_re.imag();
            jv[block_slot(sp, row, k, 1, 1)] += c * np.d_im.imag();
          }
        }
      }
    }
  }
  std::vector<bool> mask(static_cast<std::size_t>(2 * space.num_nodes()), false);
  for (Index i : space.mesh().boundary_nodes()) {
    mask[static_cast<std::size_t>(2 * i)] = true;
    mask[static_cast<std::size_t>(2 * i + 1)] = true;
  }
  jac.apply_dirichlet(mask);
  return jac;
}

RealVector to_interleaved(const ComplexVector& z) {
  RealVector x(2 * z.size());
  for (Index i = 0; i < z.size(); ++i) {
    x(2 * i) = z(i).real();
    x(2 * i + 1) = z(i).imag();
  }
  return x;
}

ComplexVector from_interleaved(const RealVector& x) {
  ComplexVector z(x.size() / 2);
  for (Index i = 0; i < z.size(); ++i) z(i) = Complex(x(2 * i), x(2 * i + 1));
  return z;
}

}  // namespace gpe

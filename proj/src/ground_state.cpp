#include <algorithm>
#include <cmath>

#include "gpe/problems.hpp"

namespace gpe {

double ground_state_energy(const FemSpace& space, const RealMatrix& stiffness, const RealMatrix& potential_mass,
                           const ComplexMatrix* angular, const ComplexVector& u, double beta, double omega,
                           double kinetic) {
  double e = energy(stiffness, potential_mass, space, u, beta, kinetic);
  if (angular && omega != 0.0) e -= omega * form(*angular, u).real();
  return e;
}

namespace {

ComplexVector default_guess(const FemSpace& space, double omega) {
  const Mesh& mesh = space.mesh();
  const double cx = 0.5 * (mesh.x_range().lo + mesh.x_range().hi);
  const double cy = mesh.dim() == 2 ? 0.5 * (mesh.y_range().lo + mesh.y_range().hi) : 0.0;
  return interpolate_nodal(mesh, [&](const Point& p) {
    const double dx = p.x - cx, dy = p.y - cy;
    const double g = std::exp(-0.5 * (dx * dx + dy * dy));
    if (omega == 0.0) return Complex(g);
    return Complex(g) + Complex(dx, dy) * g;
  });
}

void normalize(const RealMatrix& m, ComplexVector& u) {
  const double n = std::sqrt(mass(m, u));
  if (!(n > 0.0)) throw GroundStateError("ground state iterate vanished", 0.0);
  u /= n;
}

}  // namespace

GroundStateResult ground_state(const FemSpace& space, const WeightField& potential, double beta, double omega,
                               double kinetic, const GroundStateOptions& opts, const ComplexVector* initial_guess) {
  if (omega != 0.0 && space.mesh().dim() != 2)
    throw std::invalid_argument("ground_state: rotation requires a 2D mesh");
  if (!(opts.tau > 0.0) || !(opts.tol > 0.0) || opts.max_iterations < 1)
    throw std::invalid_argument("ground_state: invalid options");

  const RealMatrix m = assemble_mass(space);
  const RealMatrix a = assemble_stiffness(space);
  const RealMatrix mv = assemble_weighted_mass(space, potential);
  std::optional<ComplexMatrix> lmat;
  if (omega != 0.0) lmat = assemble_angular_momentum(space);
  const ComplexMatrix* lptr = lmat ? &*lmat : nullptr;

  // fixed part M/tau + c A + M_V - omega L
  std::vector<Complex> base(static_cast<std::size_t>(m.nnz()));
  {
    const auto mvv = m.values(), av = a.values(), pv = mv.values();
    for (std::size_t k = 0; k < base.size(); ++k) base[k] = mvv[k] / opts.tau + kinetic * av[k] + pv[k];
    if (lptr) {
      const auto lv = lptr->values();
      for (std::size_t k = 0; k < base.size(); ++k) base[k] -= omega * lv[k];
    }
  }
  const auto& boundary = space.boundary();

  GroundStateResult res;
  ComplexVector u = initial_guess ? *initial_guess : default_guess(space, omega);
  if (u.size() != space.num_nodes()) throw std::invalid_argument("ground_state: initial guess size mismatch");
  for (Index i : space.mesh().boundary_nodes()) u(i) = 0.0;
  normalize(m, u);

  const int stages = (beta >= opts.continuation_threshold && opts.continuation_stages > 1) ? opts.continuation_stages : 1;
  for (int stage = 1; stage <= stages; ++stage) {
    const double b = beta * stage / stages;
    const double tol = stage == stages ? opts.tol : std::max(opts.tol, 1e-5);
    LinearSolver<Complex> lin(opts.solver);
    bool factored = false;
    res.energy_history.push_back(ground_state_energy(space, a, mv, lptr, u, b, omega, kinetic));
    double delta = 0.0;
    bool converged = false;
    while (res.iterations < opts.max_iterations) {
      if (b != 0.0 || !factored) {
        ComplexMatrix s(space.pattern(), base);
        if (b != 0.0) {
          const RealMatrix w = assemble_weighted_mass(space, sample_density(space, u));
          auto sv = s.values();
          const auto wv = w.values();
          for (std::size_t k = 0; k < sv.size(); ++k) sv[k] += b * wv[k];
        }
        s.apply_dirichlet(boundary);
        lin.factorize(s);
        factored = true;
      }
      ComplexVector rhs = matvec(m, u) / opts.tau;
      for (Index i : space.mesh().boundary_nodes()) rhs(i) = 0.0;
      ComplexVector next = lin.solve(rhs);
      normalize(m, next);
      const ComplexVector diff = next - u;
      delta = std::sqrt(std::max(0.0, mass(m, diff))) / opts.tau;
      u = std::move(next);
      ++res.iterations;
      res.energy_history.push_back(ground_state_energy(space, a, mv, lptr, u, b, omega, kinetic));
      if (!std::isfinite(delta)) throw GroundStateError("ground state iteration produced non-finite values", delta);
      if (delta <= tol) {
        converged = true;
        break;
      }
    }
    res.residual = delta;
    if (!converged)
      throw GroundStateError("ground state iteration did not converge within " +
                                 std::to_string(opts.max_iterations) + " iterations",
                             delta);
  }

  const double quartic = quartic_integral(space, u);
  double num = kinetic * real_form(a, u) + real_form(mv, u) + beta * quartic;
  if (lptr) num -= omega * form(*lptr, u).real();
  res.eigenvalue = num / mass(m, u);
  res.state = std::move(u);
  return res;
}

}  // namespace gpe

#include "gpe/observables.hpp"

#include <cmath>
#include <stdexcept>

namespace gpe {

double mass(const RealMatrix& mass_matrix, const ComplexVector& u) { return real_form(mass_matrix, u); }

double quartic_integral(const FemSpace& space, const ComplexVector& u) {
  const auto uq = space.evaluate(u);
  const int nq = space.points_per_element();
  double s = 0.0;
  for (Index e = 0; e < space.num_elements(); ++e)
    for (int q = 0; q < nq; ++q) {
      const double r = std::norm(uq[static_cast<std::size_t>(e * nq + q)]);
      s += space.quad_weight(e, q) * r * r;
    }
  return s;
}

double energy(const RealMatrix& stiffness, const RealMatrix& potential_mass, const FemSpace& space,
              const ComplexVector& u, double beta, double kinetic) {
  double e = kinetic * real_form(stiffness, u) + real_form(potential_mass, u);
  if (beta != 0.0) e += 0.5 * beta * quartic_integral(space, u);
  return e;
}

double re_pseudo_energy(const RealMatrix& stiffness, const RealMatrix& potential_mass, const FemSpace& space,
                        const ComplexVector& u, const QuadDensity& rho_plus, const QuadDensity& rho_minus,
                        double beta, double kinetic) {
  if (rho_plus.size() != rho_minus.size() || rho_plus.num_elements() != space.num_elements() ||
      rho_plus.points_per_element() != space.points_per_element())
    throw std::invalid_argument("re_pseudo_energy: density layout mismatch");
  double mixed = 0.0;
  for (Index e = 0; e < space.num_elements(); ++e)
    for (int q = 0; q < space.points_per_element(); ++q)
      mixed += space.quad_weight(e, q) * rho_plus(e, q) * rho_minus(e, q);
  return kinetic * real_form(stiffness, u) + real_form(potential_mass, u) + 0.5 * beta * mixed;
}

ErrorNorms error_norms(const FemSpace& space, const ComplexVector& u_num, const ExactField& exact) {
  const auto uq = space.evaluate(u_num);
  const auto grads = space.element_gradients(u_num);
  const int nq = space.points_per_element();
  double l2 = 0.0, semi = 0.0, l1 = 0.0;
  for (Index e = 0; e < space.num_elements(); ++e) {
    const auto& gh = grads[static_cast<std::size_t>(e)];
    for (int q = 0; q < nq; ++q) {
      const Point& p = space.quad_point(e, q);
      const double w = space.quad_weight(e, q);
      const Complex uh = uq[static_cast<std::size_t>(e * nq + q)];
      const Complex ue = exact.value(p);
      l2 += w * std::norm(uh - ue);
      l1 += w * std::abs(std::norm(uh) - std::norm(ue));
      if (exact.gradient) {
        const auto ge = exact.gradient(p);
        semi += w * (std::norm(gh[0] - ge[0]) + std::norm(gh[1] - ge[1]));
      }
    }
  }
  return {std::sqrt(l2), std::sqrt(l2 + semi), l1};
}

ErrorNorms error_norms(const FemSpace& space, const ComplexVector& u_num, const ComplexVector& u_ref) {
  if (u_num.size() != space.num_nodes() || u_ref.size() != space.num_nodes())
    throw std::invalid_argument("error_norms: reference lives on a different mesh");
  const ComplexVector diff = u_num - u_ref;
  const auto dq = space.evaluate(diff);
  const auto nq_vals = space.evaluate(u_num);
  const auto rq = space.evaluate(u_ref);
  const auto grads = space.element_gradients(diff);
  const int nq = space.points_per_element();
  double l2 = 0.0, semi = 0.0, l1 = 0.0;
  for (Index e = 0; e < space.num_elements(); ++e) {
    const auto& g = grads[static_cast<std::size_t>(e)];
    const double gg = std::norm(g[0]) + std::norm(g[1]);
    for (int q = 0; q < nq; ++q) {
      const std::size_t k = static_cast<std::size_t>(e * nq + q);
      const double w = space.quad_weight(e, q);
      l2 += w * std::norm(dq[k]);
      semi += w * gg;
      l1 += w * std::abs(std::norm(nq_vals[k]) - std::norm(rq[k]));
    }
  }
  return {std::sqrt(l2), std::sqrt(l2 + semi), l1};
}

std::vector<std::optional<double>> eoc(const std::vector<double>& errors, const std::vector<double>& taus) {
  if (errors.size() != taus.size() || errors.size() < 2)
    throw std::invalid_argument("eoc: need matching sequences of length >= 2");
  for (std::size_t k = 0; k + 1 < taus.size(); ++k)
    if (!(taus[k + 1] < taus[k])) throw std::invalid_argument("eoc: step sizes must be strictly decreasing");
  std::vector<std::optional<double>> rates;
  for (std::size_t k = 0; k + 1 < errors.size(); ++k) {
    const double a = errors[k], b = errors[k + 1];
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
      rates.emplace_back(std::nullopt);
      continue;
    }
    rates.emplace_back(std::log(a / b) / std::log(taus[k] / taus[k + 1]));
  }
  return rates;
}

}  // namespace gpe

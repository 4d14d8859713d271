#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "gpe/fem.hpp"

namespace gpe {

/// Pointwise field with gradient, e.g. an exact solution frozen at one time.
struct ExactField {
  std::function<Complex(const Point&)> value;
  std::function<std::array<Complex, 2>(const Point&)> gradient;
};

struct ErrorNorms {
  double l2 = 0.0;
  double h1 = 0.0;          // full norm, L2 part included
  double l1_density = 0.0;  // || |u|^2 - |u_ref|^2 ||_{L1}
};

struct ObservableSample {
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  std::optional<double> pseudo_energy;
  std::optional<ErrorNorms> errors;
  double wall_seconds = 0.0;
  bool blow_up = false;
};

/// Re <M u, u>.
double mass(const RealMatrix& mass_matrix, const ComplexVector& u);

/// Integral of |u_h|^4 by quadrature (exact for P1).
double quartic_integral(const FemSpace& space, const ComplexVector& u);

/// c <A u,u> + <M_V u,u> + beta/2 int |u_h|^4.
double energy(const RealMatrix& stiffness, const RealMatrix& potential_mass, const FemSpace& space,
              const ComplexVector& u, double beta, double kinetic);

/// Relaxation invariant: c <A u,u> + <M_V u,u> + beta/2 int rho_plus rho_minus.
double re_pseudo_energy(const RealMatrix& stiffness, const RealMatrix& potential_mass, const FemSpace& space,
                        const ComplexVector& u, const QuadDensity& rho_plus, const QuadDensity& rho_minus,
                        double beta, double kinetic);

ErrorNorms error_norms(const FemSpace& space, const ComplexVector& u_num, const ExactField& exact);
ErrorNorms error_norms(const FemSpace& space, const ComplexVector& u_num, const ComplexVector& u_ref);

/// Empirical orders log(e_k/e_{k+1}) / log(tau_k/tau_{k+1}); nullopt where
/// an error is zero or non-finite.
std::vector<std::optional<double>> eoc(const std::vector<double>& errors, const std::vector<double>& taus);

}  // namespace gpe

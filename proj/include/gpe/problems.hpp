#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gpe/fem.hpp"
#include "gpe/linear_solver.hpp"
#include "gpe/observables.hpp"

namespace gpe {

Complex exact_single_soliton(double x, double t);
Complex exact_single_soliton_dx(double x, double t);
Complex exact_two_soliton(double x, double t);
Complex exact_two_soliton_dx(double x, double t);

/// Closed-form potential selected by name. Known names and parameters:
///   zero
///   quadratic   ax, ay          ax x^2 + ay y^2
///   lattice1d   gamma           (gamma x)^2 + 500 sin^2(pi x / 4)
///   lattice2d   gamma_x, gamma_y
///   mott        harmonic, lattice
struct PotentialSpec {
  std::string name = "zero";
  std::map<std::string, double> params;

  double param(const std::string& key) const;
  ScalarFunction function() const;
};

ScalarFunction potential_catalog(const std::string& name, const std::map<std::string, double>& params = {});

enum class InitialKind { ClosedForm, GroundState };

struct GroundStateSpec {
  PotentialSpec potential;
  double beta = 0.0;
  double omega = 0.0;
  double gf_tau = 0.01;
};

struct ProblemSpec {
  std::string name;
  int dim = 1;
  Interval x_range;
  Interval y_range;          // unused in 1D
  double beta = 0.0;
  double kinetic = 1.0;      // coefficient c of -c Laplace
  PotentialSpec potential;   // potential of the dynamics
  InitialKind initial = InitialKind::ClosedForm;
  std::optional<GroundStateSpec> ground;
  double final_time = 1.0;
  std::optional<std::string> exact;  // "single_soliton" or "two_soliton"
  double h_paper = 0.0;      // element length (1D) or cell side (2D)
  double h_desk = 0.0;
  double tau_paper = 0.0;
  std::optional<Interval> desk_range;  // reduced domain of the desk profile, if any

  /// Elements per direction for a target size h.
  Index cells_for(double h, const Interval& range) const;
  Mesh build_mesh(double h, bool desk_domain = false) const;
};

const std::vector<ProblemSpec>& problem_catalog();
const ProblemSpec& find_problem(const std::string& name);

/// Exact solution frozen at time t; throws if the problem has none.
ExactField exact_field(const ProblemSpec& problem, double t);

struct GroundStateOptions {
  double tau = 0.01;
  double tol = 1e-7;
  int max_iterations = 100000;
  int continuation_stages = 5;
  double continuation_threshold = 1000.0;
  SolverOptions solver;
};

struct GroundStateResult {
  ComplexVector state;
  double eigenvalue = 0.0;
  double residual = 0.0;
  int iterations = 0;
  std::vector<double> energy_history;
};

class GroundStateError : public std::runtime_error {
 public:
  GroundStateError(const std::string& what, double residual) : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Normalized gradient flow for the lowest state of
/// -c Laplace + V + beta |u|^2 - omega L with homogeneous Dirichlet data.
GroundStateResult ground_state(const FemSpace& space, const WeightField& potential, double beta, double omega,
                               double kinetic = 0.5, const GroundStateOptions& opts = {},
                               const ComplexVector* initial_guess = nullptr);

/// Gradient-flow energy c<Au,u> + <M_V u,u> + beta/2 int |u|^4 - omega <Lu,u>.
double ground_state_energy(const FemSpace& space, const RealMatrix& stiffness, const RealMatrix& potential_mass,
                           const ComplexMatrix* angular, const ComplexVector& u, double beta, double omega,
                           double kinetic);

/// Initial datum of a catalogued problem on the given space.
ComplexVector initial_state(const ProblemSpec& problem, const FemSpace& space, const GroundStateOptions& opts = {},
                            GroundStateResult* ground_report = nullptr);

/// Count of interior mesh cells around which the phase winds by a nonzero
/// multiple of 2 pi, restricted to points where |u| is below the threshold
/// relative to max |u|.
int count_vortices(const Mesh& mesh, const ComplexVector& u, double relative_threshold = 0.3);

}  // namespace gpe

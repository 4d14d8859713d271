#pragma once

#include <optional>
#include <string>

#include "gpe/fem.hpp"
#include "gpe/linear_solver.hpp"
#include "gpe/newton.hpp"

namespace gpe {

enum class SchemeId { IM, CN, RE, LCN, TwoStep };

std::string to_string(SchemeId id);
SchemeId parse_scheme(const std::string& name);
bool is_nonlinear(SchemeId id);

/// Assembled operators of one discretized problem: M, A, M_V and
/// H = c A + M_V, all with homogeneous Dirichlet conditions left to the
/// individual solves.
struct Operators {
  const FemSpace* space = nullptr;
  RealMatrix mass;
  RealMatrix stiffness;
  RealMatrix potential;
  RealMatrix hamiltonian;
  WeightField potential_samples;
  double kinetic = 1.0;

  static Operators build(const FemSpace& space, const WeightField& potential_samples, double kinetic);

  StepMatrices step_matrices() const { return {&mass, &hamiltonian}; }
};

struct StepperState {
  ComplexVector u;
  std::optional<QuadDensity> rho_prev;    // RE: rho^{n-1/2}
  std::optional<ComplexVector> u_prev;    // LCN, TwoStep: u^{n-1}
  bool started = false;                   // LCN, TwoStep: startup done
  Index step = 0;
  double t = 0.0;
};

struct StepStats {
  Index steps = 0;
  Index newton_iterations = 0;
  int max_newton_iterations = 0;
  Index linear_solves = 0;
  double linear_seconds = 0.0;
};

enum class ReInit { Simple, HalfStep };

// ---------------------------------------------------------------------------
// Building blocks shared by the linear schemes.

/// Solves (i/tau) M (x - u_from) = 1/2 (H + beta W(density)) (x + u_from) for x.
ComplexVector linear_cn_solve(const Operators& ops, const QuadDensity* density, double beta, double tau,
                              const ComplexVector& u_from, const SolverOptions& solver = {},
                              StepStats* stats = nullptr);

// ---------------------------------------------------------------------------
// One-step maps.

StepperState step_im(const StepperState& state, double tau, double beta, const Operators& ops,
                     const NewtonOptions& newton = {}, StepStats* stats = nullptr,
                     const SolverOptions& solver = {});
StepperState step_cn(const StepperState& state, double tau, double beta, const Operators& ops,
                     const NewtonOptions& newton = {}, StepStats* stats = nullptr,
                     const SolverOptions& solver = {});

StepperState re_initialize(const ComplexVector& u0, ReInit mode, double tau, double beta, const Operators& ops,
                           const SolverOptions& solver = {});
/// The solution w of the half-step initialization, exposed for testing.
ComplexVector re_halfstep_state(const ComplexVector& u0, double tau, double beta, const Operators& ops,
                                const SolverOptions& solver = {});
StepperState step_re(const StepperState& state, double tau, double beta, const Operators& ops,
                     StepStats* stats = nullptr, const SolverOptions& solver = {});
/// rho^{n+1/2} = 2 |u^n|^2 - rho^{n-1/2}, pointwise at quadrature points.
QuadDensity re_next_density(const FemSpace& space, const StepperState& state);

/// Intermediate value for the first linearized Crank-Nicolson step.
ComplexVector lcn_intermediate(const ComplexVector& u0, double tau, double beta, const Operators& ops,
                               const SolverOptions& solver = {});
StepperState lcn_startup(const ComplexVector& u0, double tau, double beta, const Operators& ops,
                         StepStats* stats = nullptr, const SolverOptions& solver = {});
StepperState step_lcn(const StepperState& state, double tau, double beta, const Operators& ops,
                      StepStats* stats = nullptr, const SolverOptions& solver = {});

StepperState twostep_startup(const ComplexVector& u0, double tau, double beta, const Operators& ops,
                             StepStats* stats = nullptr, const SolverOptions& solver = {});
StepperState step_twostep(const StepperState& state, double tau, double beta, const Operators& ops,
                          StepStats* stats = nullptr, const SolverOptions& solver = {});

// ---------------------------------------------------------------------------

struct StepperConfig {
  NewtonOptions newton;
  SolverOptions solver;
  ReInit re_init = ReInit::Simple;
};

/// Uniform driver over the five schemes. The first advance() of the
/// multistep schemes runs their startup procedure.
class Stepper {
 public:
  Stepper(SchemeId scheme, const Operators& ops, double tau, double beta, StepperConfig config = {});

  void initialize(const ComplexVector& u0);
  void advance();

  SchemeId scheme() const { return scheme_; }
  const StepperState& state() const { return state_; }
  const StepStats& stats() const { return stats_; }

  /// Relaxation invariant at the current step (RE only).
  std::optional<double> pseudo_energy() const;

 private:
  SchemeId scheme_;
  const Operators* ops_;
  double tau_;
  double beta_;
  StepperConfig config_;
  StepperState state_;
  StepStats stats_;
};

}  // namespace gpe

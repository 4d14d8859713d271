#include "gpe/steppers.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <stdexcept>

#include "gpe/observables.hpp"

namespace gpe {

std::string to_string(SchemeId id) {
  switch (id) {
    case SchemeId::IM: return "IM";
    case SchemeId::CN: return "CN";
    case SchemeId::RE: return "RE";
    case SchemeId::LCN: return "LCN";
    case SchemeId::TwoStep: return "TWOSTEP";
  }
  return "?";
}

SchemeId parse_scheme(const std::string& name) {
  std::string s;
  for (char c : name) s.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  if (s == "IM") return SchemeId::IM;
  if (s == "CN") return SchemeId::CN;
  if (s == "RE") return SchemeId::RE;
  if (s == "LCN") return SchemeId::LCN;
  if (s == "TWOSTEP" || s == "TWO-STEP" || s == "TWO_STEP") return SchemeId::TwoStep;
  throw std::invalid_argument("unknown scheme '" + name + "'");
}

bool is_nonlinear(SchemeId id) { return id == SchemeId::IM || id == SchemeId::CN; }

Operators Operators::build(const FemSpace& space, const WeightField& potential_samples, double kinetic) {
  Operators ops;
  ops.space = &space;
  ops.kinetic = kinetic;
  ops.potential_samples = potential_samples;
  ops.mass = assemble_mass(space);
  ops.stiffness = assemble_stiffness(space);
  ops.potential = assemble_weighted_mass(space, potential_samples);
  ops.hamiltonian = RealMatrix(space.pattern());
  auto h = ops.hamiltonian.values();
  const auto a = ops.stiffness.values();
  const auto v = ops.potential.values();
  for (std::size_t k = 0; k < h.size(); ++k) h[k] = kinetic * a[k] + v[k];
  return ops;
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void check_state(const Operators& ops, const ComplexVector& u) {
  if (!ops.space) throw std::invalid_argument("operators not built");
  if (u.size() != ops.space->num_nodes()) throw std::invalid_argument("state does not match the mesh");
}

// K = H + beta W(density) on the space pattern, as raw values.
std::vector<double> interaction_values(const Operators& ops, const QuadDensity* density, double beta) {
  const auto h = ops.hamiltonian.values();
  std::vector<double> k(h.begin(), h.end());
  if (density && beta != 0.0) {
    const RealMatrix w = assemble_weighted_mass(*ops.space, *density);
    const auto wv = w.values();
    for (std::size_t i = 0; i < k.size(); ++i) k[i] += beta * wv[i];
  }
  return k;
}

// Solves (a M + b K) x = rhs with homogeneous Dirichlet rows.
ComplexVector solve_shifted(const Operators& ops, const std::vector<double>& k, Complex a, Complex b,
                            ComplexVector rhs, const SolverOptions& solver, StepStats* stats) {
  const auto start = std::chrono::steady_clock::now();
  ComplexMatrix s(ops.space->pattern());
  auto sv = s.values();
  const auto mv = ops.mass.values();
  for (std::size_t i = 0; i < sv.size(); ++i) sv[i] = a * mv[i] + b * k[i];
  s.apply_dirichlet(ops.space->boundary());
  for (Index i : ops.space->mesh().boundary_nodes()) rhs(i) = 0.0;
  LinearSolver<Complex> lin(solver);
  lin.factorize(s);
  ComplexVector x = lin.solve(rhs);
  if (stats) {
    ++stats->linear_solves;
    stats->linear_seconds += seconds_since(start);
  }
  return x;
}

ComplexVector apply_values(const Operators& ops, const std::vector<double>& k, const ComplexVector& u) {
  RealMatrix km(ops.space->pattern(), k);
  return matvec(km, u);
}

StepperState advance_state(const StepperState& state, ComplexVector u, double tau) {
  StepperState next;
  next.u = std::move(u);
  next.step = state.step + 1;
  next.t = state.t + tau;
  return next;
}

StepperState nonlinear_step(NonlinearForm form, const StepperState& state, double tau, double beta,
                            const Operators& ops, const NewtonOptions& newton, StepStats* stats,
                            const SolverOptions& solver) {
  check_state(ops, state.u);
  if (!(tau > 0.0)) throw std::invalid_argument("time step must be positive");
  const FemSpace& space = *ops.space;
  const StepMatrices mats = ops.step_matrices();
  const ComplexVector& u_old = state.u;
  auto residual = [&](const RealVector& x) {
    return to_interleaved(assemble_nonlinear_residual(space, mats, form, u_old, from_interleaved(x), beta, tau));
  };
  auto jacobian = [&](const RealVector& x) {
    return assemble_newton_jacobian(space, mats, form, u_old, from_interleaved(x), beta, tau);
  };
  const double scale = matvec(ops.mass, u_old).norm() / tau;
  LinearSolver<double> lin(solver);
  const NewtonResult res = newton_solve(residual, jacobian, to_interleaved(u_old), newton, scale, &lin);
  if (stats) {
    stats->newton_iterations += res.iterations;
    stats->max_newton_iterations = std::max(stats->max_newton_iterations, res.iterations);
    stats->linear_solves += res.iterations;
    stats->linear_seconds += res.linear_seconds;
    ++stats->steps;
  }
  return advance_state(state, from_interleaved(res.x), tau);
}

}  // namespace

ComplexVector linear_cn_solve(const Operators& ops, const QuadDensity* density, double beta, double tau,
                              const ComplexVector& u_from, const SolverOptions& solver, StepStats* stats) {
  check_state(ops, u_from);
  if (!(tau > 0.0)) throw std::invalid_argument("time step must be positive");
  const auto k = interaction_values(ops, density, beta);
  const Complex it(0.0, 1.0 / tau);
  const ComplexVector rhs = it * matvec(ops.mass, u_from) + 0.5 * apply_values(ops, k, u_from);
  return solve_shifted(ops, k, it, -0.5, rhs, solver, stats);
}

StepperState step_im(const StepperState& state, double tau, double beta, const Operators& ops,
                     const NewtonOptions& newton, StepStats* stats, const SolverOptions& solver) {
  return nonlinear_step(NonlinearForm::ImplicitMidpoint, state, tau, beta, ops, newton, stats, solver);
}

StepperState step_cn(const StepperState& state, double tau, double beta, const Operators& ops,
                     const NewtonOptions& newton, StepStats* stats, const SolverOptions& solver) {
  return nonlinear_step(NonlinearForm::CrankNicolson, state, tau, beta, ops, newton, stats, solver);
}

ComplexVector re_halfstep_state(const ComplexVector& u0, double tau, double beta, const Operators& ops,
                                const SolverOptions& solver) {
  check_state(ops, u0);
  const QuadDensity rho0 = sample_density(*ops.space, u0);
  const auto k = interaction_values(ops, &rho0, beta);
  const Complex it(0.0, 1.0 / tau);
  // i (u0 - w)/tau = K (u0 + w)  <=>  (i/tau M + K) w = i/tau M u0 - K u0
  const ComplexVector rhs = it * matvec(ops.mass, u0) - apply_values(ops, k, u0);
  return solve_shifted(ops, k, it, 1.0, rhs, solver, nullptr);
}

StepperState re_initialize(const ComplexVector& u0, ReInit mode, double tau, double beta, const Operators& ops,
                           const SolverOptions& solver) {
  check_state(ops, u0);
  StepperState s;
  s.u = u0;
  if (mode == ReInit::Simple)
    s.rho_prev = sample_density(*ops.space, u0);
  else
    s.rho_prev = sample_density(*ops.space, re_halfstep_state(u0, tau, beta, ops, solver));
  return s;
}

QuadDensity re_next_density(const FemSpace& space, const StepperState& state) {
  if (!state.rho_prev) throw std::invalid_argument("relaxation state carries no density");
  QuadDensity next = sample_density(space, state.u);
  const auto& prev = state.rho_prev->values();
  if (prev.size() != next.values().size()) throw std::invalid_argument("relaxation density layout mismatch");
  for (std::size_t k = 0; k < prev.size(); ++k) next.values()[k] = 2.0 * next.values()[k] - prev[k];
  return next;
}

StepperState step_re(const StepperState& state, double tau, double beta, const Operators& ops, StepStats* stats,
                     const SolverOptions& solver) {
  check_state(ops, state.u);
  QuadDensity rho = re_next_density(*ops.space, state);
  StepperState next = advance_state(state, linear_cn_solve(ops, &rho, beta, tau, state.u, solver, stats), tau);
  next.rho_prev = std::move(rho);
  if (stats) ++stats->steps;
  return next;
}

ComplexVector lcn_intermediate(const ComplexVector& u0, double tau, double beta, const Operators& ops,
                               const SolverOptions& solver) {
  check_state(ops, u0);
  const QuadDensity rho0 = sample_density(*ops.space, u0);
  const auto k = interaction_values(ops, &rho0, beta);
  const Complex it2(0.0, 2.0 / tau);
  // i (w - u0)/(tau/2) = K w
  return solve_shifted(ops, k, it2, -1.0, it2 * matvec(ops.mass, u0), solver, nullptr);
}

StepperState lcn_startup(const ComplexVector& u0, double tau, double beta, const Operators& ops, StepStats* stats,
                         const SolverOptions& solver) {
  const ComplexVector hat = lcn_intermediate(u0, tau, beta, ops, solver);
  const QuadDensity rho = sample_density(*ops.space, hat);
  StepperState start;
  start.u = u0;
  StepperState next = advance_state(start, linear_cn_solve(ops, &rho, beta, tau, u0, solver, stats), tau);
  next.u_prev = u0;
  next.started = true;
  if (stats) ++stats->steps;
  return next;
}

StepperState step_lcn(const StepperState& state, double tau, double beta, const Operators& ops, StepStats* stats,
                      const SolverOptions& solver) {
  check_state(ops, state.u);
  if (!state.u_prev) throw std::invalid_argument("linearized Crank-Nicolson state carries no history");
  const ComplexVector hat = 1.5 * state.u - 0.5 * *state.u_prev;
  const QuadDensity rho = sample_density(*ops.space, hat);
  StepperState next = advance_state(state, linear_cn_solve(ops, &rho, beta, tau, state.u, solver, stats), tau);
  next.u_prev = state.u;
  next.started = true;
  if (stats) ++stats->steps;
  return next;
}

StepperState twostep_startup(const ComplexVector& u0, double tau, double beta, const Operators& ops,
                             StepStats* stats, const SolverOptions& solver) {
  check_state(ops, u0);
  const QuadDensity rho0 = sample_density(*ops.space, u0);
  const ComplexVector half = linear_cn_solve(ops, &rho0, beta, 0.5 * tau, u0, solver, stats);
  const QuadDensity rho_half = sample_density(*ops.space, half);
  StepperState start;
  start.u = u0;
  StepperState next = advance_state(start, linear_cn_solve(ops, &rho_half, beta, tau, u0, solver, stats), tau);
  next.u_prev = u0;
  next.started = true;
  if (stats) ++stats->steps;
  return next;
}

StepperState step_twostep(const StepperState& state, double tau, double beta, const Operators& ops,
                          StepStats* stats, const SolverOptions& solver) {
  check_state(ops, state.u);
  if (!state.u_prev) throw std::invalid_argument("two-step state carries no history");
  const QuadDensity rho = sample_density(*ops.space, state.u);
  StepperState next =
      advance_state(state, linear_cn_solve(ops, &rho, beta, 2.0 * tau, *state.u_prev, solver, stats), tau);
  next.u_prev = state.u;
  next.started = true;
  if (stats) ++stats->steps;
  return next;
}

Stepper::Stepper(SchemeId scheme, const Operators& ops, double tau, double beta, StepperConfig config)
    : scheme_(scheme), ops_(&ops), tau_(tau), beta_(beta), config_(config) {
  if (!(tau > 0.0)) throw std::invalid_argument("time step must be positive");
}

void Stepper::initialize(const ComplexVector& u0) {
  check_state(*ops_, u0);
  if (scheme_ == SchemeId::RE) {
    state_ = re_initialize(u0, config_.re_init, tau_, beta_, *ops_, config_.solver);
  } else {
    state_ = StepperState{};
    state_.u = u0;
  }
  stats_ = StepStats{};
}

void Stepper::advance() {
  switch (scheme_) {
    case SchemeId::IM:
      state_ = step_im(state_, tau_, beta_, *ops_, config_.newton, &stats_, config_.solver);
      break;
    case SchemeId::CN:
      state_ = step_cn(state_, tau_, beta_, *ops_, config_.newton, &stats_, config_.solver);
      break;
    case SchemeId::RE:
      state_ = step_re(state_, tau_, beta_, *ops_, &stats_, config_.solver);
      break;
    case SchemeId::LCN:
      state_ = state_.started ? step_lcn(state_, tau_, beta_, *ops_, &stats_, config_.solver)
                              : lcn_startup(state_.u, tau_, beta_, *ops_, &stats_, config_.solver);
      break;
    case SchemeId::TwoStep:
      state_ = state_.started ? step_twostep(state_, tau_, beta_, *ops_, &stats_, config_.solver)
                              : twostep_startup(state_.u, tau_, beta_, *ops_, &stats_, config_.solver);
      break;
  }
}

std::optional<double> Stepper::pseudo_energy() const {
  if (scheme_ != SchemeId::RE || !state_.rho_prev) return std::nullopt;
  const QuadDensity plus = re_next_density(*ops_->space, state_);
  return re_pseudo_energy(ops_->stiffness, ops_->potential, *ops_->space, state_.u, plus, *state_.rho_prev, beta_,
                          ops_->kinetic);
}

}  // namespace gpe

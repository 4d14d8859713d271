#include "gpe/evolution.hpp"

#include <chrono>
#include <cmath>

namespace gpe {

Discretization discretize(const ProblemSpec& problem, double h, bool desk_domain, const GroundStateOptions& gs,
                          const ComplexVector* u0) {
  Discretization d;
  d.problem = &problem;
  d.space = std::make_unique<FemSpace>(problem.build_mesh(h, desk_domain));
  d.ops = std::make_unique<Operators>(
      Operators::build(*d.space, d.space->sample(problem.potential.function()), problem.kinetic));
  if (u0) {
    if (u0->size() != d.space->num_nodes()) throw std::invalid_argument("initial state does not match the mesh");
    d.u0 = *u0;
  } else {
    GroundStateResult g;
    d.u0 = initial_state(problem, *d.space, gs, &g);
    if (problem.initial == InitialKind::GroundState) d.ground = std::move(g);
  }
  return d;
}

ExactAt exact_solution(const ProblemSpec& problem) {
  if (!problem.exact) return {};
  return [&problem](double t) { return exact_field(problem, t); };
}

namespace {

using Clock = std::chrono::steady_clock;

ObservableSample observe(const Operators& ops, const Stepper& stepper, double beta, const EvolutionOptions& opt,
                         bool final_sample, double wall) {
  const StepperState& s = stepper.state();
  ObservableSample o;
  o.t = s.t;
  o.mass = mass(ops.mass, s.u);
  o.energy = energy(ops.stiffness, ops.potential, *ops.space, s.u, beta, ops.kinetic);
  o.pseudo_energy = stepper.pseudo_energy();
  o.wall_seconds = wall;
  if (opt.exact && (opt.errors_every_sample || final_sample)) o.errors = error_norms(*ops.space, s.u, opt.exact(s.t));
  return o;
}

}  // namespace

RunReport run_evolution(const Operators& ops, const ComplexVector& u0, SchemeId scheme, double tau, Index n_steps,
                        double beta, const EvolutionOptions& options) {
  if (n_steps < 0) throw std::invalid_argument("run_evolution: negative step count");
  if (options.reference && options.reference->size() != u0.size())
    throw std::invalid_argument("run_evolution: reference lives on a different mesh");
  const auto run_start = Clock::now();
  RunReport rep;
  rep.scheme = scheme;
  rep.tau = tau;
  rep.n_steps = n_steps;

  Stepper stepper(scheme, ops, tau, beta, options.stepper);
  double stepping = 0.0;
  {
    const auto t0 = Clock::now();
    stepper.initialize(u0);
    stepping += std::chrono::duration<double>(Clock::now() - t0).count();
  }

  auto record = [&](bool final_sample) {
    ObservableSample o = observe(ops, stepper, beta, options, final_sample, stepping);
    const double e0 = rep.samples.empty() ? o.energy : rep.samples.front().energy;
    const bool nan = !std::isfinite(o.energy) || !std::isfinite(o.mass);
    if (nan || std::abs(o.energy) > options.blowup_factor * std::abs(e0)) {
      o.blow_up = true;
      if (!rep.blow_up_time) rep.blow_up_time = o.t;
    }
    if (options.energy_threshold && !rep.crossing_time && o.energy > *options.energy_threshold)
      rep.crossing_time = o.t;
    if (options.observer) options.observer(o, stepper.state());
    rep.samples.push_back(std::move(o));
    return !nan;
  };

  bool alive = record(n_steps == 0);
  const Index stride = options.observer_stride;
  for (Index n = 1; n <= n_steps && alive && !(options.stop_at_threshold && rep.crossing_time); ++n) {
    const auto t0 = Clock::now();
    try {
      stepper.advance();
    } catch (const std::exception& e) {
      if (!options.capture_failures) throw;
      rep.failed = true;
      rep.failure = e.what();
      stepping += std::chrono::duration<double>(Clock::now() - t0).count();
      break;
    }
    stepping += std::chrono::duration<double>(Clock::now() - t0).count();
    rep.steps_completed = n;
    const bool last = n == n_steps;
    if (last || (stride > 0 && n % stride == 0)) {
      alive = record(last);
    } else if (options.energy_threshold && !rep.crossing_time) {
      // threshold crossings are resolved at every step
      const double e = energy(ops.stiffness, ops.potential, *ops.space, stepper.state().u, beta, ops.kinetic);
      if (e > *options.energy_threshold) rep.crossing_time = stepper.state().t;
      alive = std::isfinite(e);
    }
    if (!alive && !rep.blow_up_time) rep.blow_up_time = stepper.state().t;
  }
  if (!alive && !rep.failed) {
    rep.failed = true;
    rep.failure = "solution became non-finite";
  }

  rep.final_state = stepper.state().u;
  rep.stats = stepper.stats();
  rep.stepping_seconds = stepping;
  if (!rep.failed && rep.steps_completed == n_steps) {
    if (options.reference)
      rep.final_errors = error_norms(*ops.space, rep.final_state, *options.reference);
    else if (!rep.samples.empty() && rep.samples.back().errors)
      rep.final_errors = rep.samples.back().errors;
  }
  rep.total_seconds = std::chrono::duration<double>(Clock::now() - run_start).count();
  return rep;
}

}  // namespace gpe

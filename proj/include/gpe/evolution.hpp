#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gpe/observables.hpp"
#include "gpe/problems.hpp"
#include "gpe/steppers.hpp"

namespace gpe {

/// Mesh, space, operators and initial datum of one problem at one resolution.
/// Heap-held so the operators' back pointer to the space stays valid.
struct Discretization {
  const ProblemSpec* problem = nullptr;
  std::unique_ptr<FemSpace> space;
  std::unique_ptr<Operators> ops;
  ComplexVector u0;
  std::optional<GroundStateResult> ground;
};

/// Builds the discretization with target mesh size h. When u0 is given it
/// replaces the catalogued initial datum (e.g. a cached ground state).
Discretization discretize(const ProblemSpec& problem, double h, bool desk_domain = false,
                          const GroundStateOptions& gs = {}, const ComplexVector* u0 = nullptr);

using ExactAt = std::function<ExactField(double t)>;

struct EvolutionOptions {
  StepperConfig stepper;
  Index observer_stride = 1;        // 0 records only the first and last sample
  bool errors_every_sample = true;  // errors against the exact solution at each sample
  ExactAt exact;                    // optional closed-form solution
  const ComplexVector* reference = nullptr;  // discrete reference at the final time
  double blowup_factor = 1e6;
  std::optional<double> energy_threshold;  // first time with E > threshold
  bool stop_at_threshold = false;
  bool capture_failures = true;     // record stepper exceptions instead of rethrowing
  std::function<void(const ObservableSample&, const StepperState&)> observer;
};

struct RunReport {
  SchemeId scheme = SchemeId::CN;
  double tau = 0.0;
  Index n_steps = 0;
  Index steps_completed = 0;
  std::vector<ObservableSample> samples;
  ComplexVector final_state;
  std::optional<ErrorNorms> final_errors;
  std::optional<double> blow_up_time;
  std::optional<double> crossing_time;
  StepStats stats;
  double stepping_seconds = 0.0;
  double total_seconds = 0.0;
  bool failed = false;
  std::string failure;
};

RunReport run_evolution(const Operators& ops, const ComplexVector& u0, SchemeId scheme, double tau, Index n_steps,
                        double beta, const EvolutionOptions& options = {});

/// Closed-form solution of a catalogued problem, or an empty function.
ExactAt exact_solution(const ProblemSpec& problem);

}  // namespace gpe

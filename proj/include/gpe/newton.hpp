#pragma once

#include <functional>
#include <stdexcept>
#include <string>

#include "gpe/linear_solver.hpp"

namespace gpe {

struct NewtonOptions {
  double rtol = 1e-11;
  double atol = 1e-14;
  int max_iterations = 30;
  bool damping = false;
};

struct NewtonResult {
  RealVector x;
  int iterations = 0;
  double residual_norm = 0.0;
  double linear_seconds = 0.0;
};

class NewtonError : public std::runtime_error {
 public:
  NewtonError(const std::string& what, double residual, int iterations)
      : std::runtime_error(what), residual_(residual), iterations_(iterations) {}
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

using ResidualFn = std::function<RealVector(const RealVector&)>;
using JacobianFn = std::function<RealMatrix(const RealVector&)>;

/// Newton iteration on F(x) = 0, stopping once ||F|| <= max(rtol * scale, atol).
/// An initial guess that already satisfies the test is returned after zero
/// iterations. Throws NewtonError on NaN residuals or when max_iterations is
/// exhausted.
NewtonResult newton_solve(const ResidualFn& residual, const JacobianFn& jacobian, RealVector initial_guess,
                          const NewtonOptions& opts, double residual_scale = 1.0,
                          LinearSolver<double>* solver = nullptr);

}  // namespace gpe

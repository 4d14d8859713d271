#include "gpe/newton.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace gpe {

NewtonResult newton_solve(const ResidualFn& residual, const JacobianFn& jacobian, RealVector initial_guess,
                          const NewtonOptions& opts, double residual_scale, LinearSolver<double>* solver) {
  if (!(opts.rtol > 0.0) || !(opts.atol > 0.0) || opts.max_iterations < 1)
    throw std::invalid_argument("newton_solve: tolerances must be positive and max_iterations >= 1");
  LinearSolver<double> local;
  LinearSolver<double>& lin = solver ? *solver : local;

  NewtonResult res;
  res.x = std::move(initial_guess);
  RealVector f = residual(res.x);
  res.residual_norm = f.norm();
  const double target = std::max(opts.rtol * residual_scale, opts.atol);
  while (true) {
    if (!std::isfinite(res.residual_norm))
      throw NewtonError("Newton residual is not finite", res.residual_norm, res.iterations);
    if (res.residual_norm <= target) return res;
    if (res.iterations >= opts.max_iterations)
      throw NewtonError("Newton iteration did not converge in " + std::to_string(opts.max_iterations) +
                            " iterations (residual " + std::to_string(res.residual_norm) + ")",
                        res.residual_norm, res.iterations);
    const auto start = std::chrono::steady_clock::now();
    lin.factorize(jacobian(res.x));
    const RealVector dx = lin.solve(-f);
    res.linear_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    ++res.iterations;

    double step = 1.0;
    RealVector trial = res.x + dx;
    RealVector ft = residual(trial);
    if (opts.damping) {
      for (int k = 0; k < 10 && !(ft.norm() < res.residual_norm); ++k) {
        step *= 0.5;
        trial = res.x + step * dx;
        ft = residual(trial);
      }
    }
    res.x = std::move(trial);
    f = std::move(ft);
    res.residual_norm = f.norm();
  }
}

}  // namespace gpe

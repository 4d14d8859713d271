#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include "gpe/sparse.hpp"

namespace gpe {

enum class SolveMethod { Auto, Direct, Iterative };

struct SolverOptions {
  SolveMethod method = SolveMethod::Auto;
  double direct_tol = 1e-12;     // refinement target for direct solves
  double iterative_tol = 1e-10;
  Index max_iterations = 0;      // 0 means 10 * n
  int refinement_steps = 2;
  Index band_limit = 32;         // banded LU when the bandwidth is at most this
};

struct LinearSolveReport {
  std::string method;  // "banded", "sparse_lu" or "bicgstab"
  Index iterations = 0;
  double relative_residual = 0.0;
  double seconds = 0.0;
};

/// Hard solver failure: singular factorization or Krylov non-convergence.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual) : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Factor-once, solve-many wrapper. Factorizations are immutable once
/// built, and `solve` may be called concurrently.
template <class T>
class LinearSolver {
 public:
  using Vector = Eigen::Matrix<T, Eigen::Dynamic, 1>;

  explicit LinearSolver(SolverOptions opts = {});
  ~LinearSolver();
  LinearSolver(LinearSolver&&) noexcept;
  LinearSolver& operator=(LinearSolver&&) noexcept;

  void factorize(const SparseMatrix<T>& a);
  Vector solve(const Vector& b, LinearSolveReport* report = nullptr) const;

  const SolverOptions& options() const { return opts_; }

 private:
  struct Impl;
  SolverOptions opts_;
  std::unique_ptr<Impl> impl_;
};

template <class T>
std::pair<typename LinearSolver<T>::Vector, LinearSolveReport> solve(
    const SparseMatrix<T>& a, const typename LinearSolver<T>::Vector& b, const SolverOptions& opts = {});

}  // namespace gpe

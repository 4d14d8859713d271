#include "gpe/linear_solver.hpp"

#include <chrono>
#include <complex>
#include <optional>

#define lapack_complex_double std::complex<double>
#define lapack_complex_float std::complex<float>
#include <lapacke.h>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>

namespace gpe {

namespace {

lapack_int gbtrf(lapack_int n, lapack_int kl, lapack_int ku, double* ab, lapack_int ldab, lapack_int* ipiv) {
  return LAPACKE_dgbtrf(LAPACK_COL_MAJOR, n, n, kl, ku, ab, ldab, ipiv);
}
lapack_int gbtrf(lapack_int n, lapack_int kl, lapack_int ku, Complex* ab, lapack_int ldab, lapack_int* ipiv) {
  return LAPACKE_zgbtrf(LAPACK_COL_MAJOR, n, n, kl, ku, ab, ldab, ipiv);
}
lapack_int gbtrs(lapack_int n, lapack_int kl, lapack_int ku, const double* ab, lapack_int ldab,
                 const lapack_int* ipiv, double* b) {
  return LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', n, kl, ku, 1, ab, ldab, ipiv, b, n);
}
lapack_int gbtrs(lapack_int n, lapack_int kl, lapack_int ku, const Complex* ab, lapack_int ldab,
                 const lapack_int* ipiv, Complex* b) {
  return LAPACKE_zgbtrs(LAPACK_COL_MAJOR, 'N', n, kl, ku, 1, ab, ldab, ipiv, b, n);
}

template <class T>
double relative_residual(const SparseMatrix<T>& a, const Eigen::Matrix<T, Eigen::Dynamic, 1>& x,
                         const Eigen::Matrix<T, Eigen::Dynamic, 1>& b) {
  const double nb = b.norm();
  const double nr = (b - matvec(a, x)).norm();
  return nb > 0.0 ? nr / nb : nr;
}

}  // namespace

template <class T>
struct LinearSolver<T>::Impl {
  using ColMatrix = Eigen::SparseMatrix<T, Eigen::ColMajor, int>;
  using RowMatrix = Eigen::SparseMatrix<T, Eigen::RowMajor, int>;

  SparseMatrix<T> matrix;
  std::string method;

  // banded LU
  lapack_int kl = 0;
  lapack_int ldab = 0;
  std::vector<T> band;
  std::vector<lapack_int> pivots;

  // general sparse LU; the symbolic analysis is reused while the pattern stays the same
  std::shared_ptr<const SparsityPattern> analyzed;
  std::optional<Eigen::SparseLU<ColMatrix, Eigen::COLAMDOrdering<int>>> lu;

  // Krylov fallback
  RowMatrix owned;
  std::optional<Eigen::BiCGSTAB<RowMatrix, Eigen::DiagonalPreconditioner<T>>> krylov;

  Vector direct_solve(const Vector& b) const {
    if (method == "banded") {
      Vector x = b;
      const auto n = static_cast<lapack_int>(matrix.size());
      if (gbtrs(n, kl, kl, band.data(), ldab, pivots.data(), x.data()) != 0)
        throw SolverError("banded solve failed", std::numeric_limits<double>::infinity());
      return x;
    }
    return lu->solve(b);
  }
};

template <class T>
LinearSolver<T>::LinearSolver(SolverOptions opts) : opts_(opts), impl_(std::make_unique<Impl>()) {}
template <class T>
LinearSolver<T>::~LinearSolver() = default;
template <class T>
LinearSolver<T>::LinearSolver(LinearSolver&&) noexcept = default;
template <class T>
LinearSolver<T>& LinearSolver<T>::operator=(LinearSolver&&) noexcept = default;

template <class T>
void LinearSolver<T>::factorize(const SparseMatrix<T>& a) {
  Impl& s = *impl_;
  s.matrix = a;
  const Index n = a.size();
  if (opts_.method == SolveMethod::Iterative) {
    s.method = "bicgstab";
    s.owned = a.eigen_view();
    s.krylov.emplace();
    s.krylov->setTolerance(opts_.iterative_tol);
    s.krylov->setMaxIterations(opts_.max_iterations > 0 ? opts_.max_iterations : 10 * n);
    s.krylov->compute(s.owned);
    return;
  }
  const Index bw = a.pattern().bandwidth();
  if (bw <= opts_.band_limit) {
    s.method = "banded";
    s.kl = static_cast<lapack_int>(bw);
    s.ldab = 3 * s.kl + 1;
    s.band.assign(static_cast<std::size_t>(s.ldab) * static_cast<std::size_t>(n), T(0));
    s.pivots.assign(static_cast<std::size_t>(n), 0);
    const auto& offs = a.pattern().row_offsets();
    const auto& cols = a.pattern().cols();
    const auto vals = a.values();
    for (Index i = 0; i < n; ++i)
      for (int k = offs[static_cast<std::size_t>(i)]; k < offs[static_cast<std::size_t>(i) + 1]; ++k) {
        const Index j = cols[static_cast<std::size_t>(k)];
        s.band[static_cast<std::size_t>(2 * s.kl + i - j + j * s.ldab)] = vals[static_cast<std::size_t>(k)];
      }
    const lapack_int info = gbtrf(static_cast<lapack_int>(n), s.kl, s.kl, s.band.data(), s.ldab, s.pivots.data());
    if (info != 0) throw SolverError("singular banded factorization", std::numeric_limits<double>::infinity());
    return;
  }
  s.method = "sparse_lu";
  const typename Impl::ColMatrix col = a.eigen_view();
  if (!s.lu || s.analyzed != a.pattern_ptr()) {
    s.lu.emplace();
    s.lu->analyzePattern(col);
    s.analyzed = a.pattern_ptr();
  }
  s.lu->factorize(col);
  if (s.lu->info() != Eigen::Success)
    throw SolverError("sparse LU factorization failed: " + s.lu->lastErrorMessage(),
                      std::numeric_limits<double>::infinity());
}

template <class T>
typename LinearSolver<T>::Vector LinearSolver<T>::solve(const Vector& b, LinearSolveReport* report) const {
  const Impl& s = *impl_;
  if (b.size() != s.matrix.size()) throw std::invalid_argument("LinearSolver::solve: dimension mismatch");
  const auto start = std::chrono::steady_clock::now();
  LinearSolveReport rep;
  rep.method = s.method;
  Vector x;
  if (s.method == "bicgstab") {
    x = s.krylov->solve(b);
    rep.iterations = s.krylov->iterations();
    rep.relative_residual = relative_residual(s.matrix, x, b);
    if (s.krylov->info() != Eigen::Success || !(rep.relative_residual <= 10.0 * opts_.iterative_tol))
      throw SolverError("BiCGSTAB did not converge", rep.relative_residual);
  } else {
    x = s.direct_solve(b);
    rep.relative_residual = relative_residual(s.matrix, x, b);
    for (int k = 0; k < opts_.refinement_steps && rep.relative_residual > opts_.direct_tol; ++k) {
      x += s.direct_solve(b - matvec(s.matrix, x));
      rep.relative_residual = relative_residual(s.matrix, x, b);
    }
    if (!std::isfinite(rep.relative_residual)) throw SolverError("direct solve produced non-finite values", rep.relative_residual);
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (report) *report = rep;
  return x;
}

template <class T>
std::pair<typename LinearSolver<T>::Vector, LinearSolveReport> solve(const SparseMatrix<T>& a,
                                                                     const typename LinearSolver<T>::Vector& b,
                                                                     const SolverOptions& opts) {
  if (a.size() != b.size()) throw std::invalid_argument("solve: dimension mismatch");
  const auto start = std::chrono::steady_clock::now();
  LinearSolver<T> solver(opts);
  solver.factorize(a);
  LinearSolveReport rep;
  auto x = solver.solve(b, &rep);
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {std::move(x), rep};
}

template class LinearSolver<double>;
template class LinearSolver<Complex>;
template std::pair<RealVector, LinearSolveReport> solve(const RealMatrix&, const RealVector&, const SolverOptions&);
template std::pair<ComplexVector, LinearSolveReport> solve(const ComplexMatrix&, const ComplexVector&,
                                                           const SolverOptions&);

}  // namespace gpe

#pragma once

#include <complex>
#include <memory>
#include <span>
#include <stdexcept>
#include <tuple>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "gpe/mesh.hpp"

namespace gpe {

using Complex = std::complex<double>;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

/// Compressed row sparsity of a square matrix. Column indices are strictly
/// increasing inside each row.
class SparsityPattern {
 public:
  SparsityPattern(Index n, std::vector<int> row_offsets, std::vector<int> cols);

  /// Builds the pattern from unsorted (row, col) pairs; duplicates merge.
  static std::shared_ptr<const SparsityPattern> from_entries(Index n, std::vector<std::pair<int, int>> entries);
  static std::shared_ptr<const SparsityPattern> identity(Index n);

  Index size() const { return n_; }
  Index nnz() const { return static_cast<Index>(cols_.size()); }
  const std::vector<int>& row_offsets() const { return offsets_; }
  const std::vector<int>& cols() const { return cols_; }

  /// Position of (i, j) in the value array, or -1 if not stored.
  Index find(Index i, Index j) const;

  /// max |i - j| over stored entries.
  Index bandwidth() const { return bandwidth_; }

 private:
  Index n_;
  std::vector<int> offsets_;
  std::vector<int> cols_;
  Index bandwidth_ = 0;
};

/// Square CSR matrix over double or std::complex<double>. Patterns are
/// shared between matrices assembled on the same mesh.
template <class T>
class SparseMatrix {
 public:
  using Scalar = T;
  using Vector = Eigen::Matrix<T, Eigen::Dynamic, 1>;

  SparseMatrix() = default;
  explicit SparseMatrix(std::shared_ptr<const SparsityPattern> pattern)
      : pattern_(std::move(pattern)), values_(static_cast<std::size_t>(pattern_->nnz()), T(0)) {}
  SparseMatrix(std::shared_ptr<const SparsityPattern> pattern, std::vector<T> values);

  static SparseMatrix identity(Index n);
  static SparseMatrix from_triplets(Index n, const std::vector<std::tuple<int, int, T>>& triplets);

  Index size() const { return pattern_ ? pattern_->size() : 0; }
  Index nnz() const { return static_cast<Index>(values_.size()); }
  const SparsityPattern& pattern() const { return *pattern_; }
  const std::shared_ptr<const SparsityPattern>& pattern_ptr() const { return pattern_; }

  std::span<T> values() { return values_; }
  std::span<const T> values() const { return values_; }

  T coeff(Index i, Index j) const;
  void add_to(Index i, Index j, T v);

  /// Replaces the listed rows and columns with identity rows/columns.
  void apply_dirichlet(const std::vector<bool>& mask);

  Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> to_dense() const;
  Eigen::Map<const Eigen::SparseMatrix<T, Eigen::RowMajor, int>> eigen_view() const;

  SparseMatrix<Complex> to_complex() const;
  SparseMatrix adjoint() const;

 private:
  std::shared_ptr<const SparsityPattern> pattern_;
  std::vector<T> values_;
};

using RealMatrix = SparseMatrix<double>;
using ComplexMatrix = SparseMatrix<Complex>;

/// y = A x. Real matrices act on complex vectors entrywise.
template <class T, class V>
auto matvec(const SparseMatrix<T>& a, const Eigen::MatrixBase<V>& x)
    -> Eigen::Matrix<decltype(T{} * typename V::Scalar{}), Eigen::Dynamic, 1> {
  using R = decltype(T{} * typename V::Scalar{});
  if (x.size() != a.size()) throw std::invalid_argument("matvec: dimension mismatch");
  Eigen::Matrix<R, Eigen::Dynamic, 1> y(a.size());
  const auto& offs = a.pattern().row_offsets();
  const auto& cols = a.pattern().cols();
  const auto vals = a.values();
  for (Index i = 0; i < a.size(); ++i) {
    R acc(0);
    for (int k = offs[static_cast<std::size_t>(i)]; k < offs[static_cast<std::size_t>(i) + 1]; ++k)
      acc += vals[static_cast<std::size_t>(k)] * x(cols[static_cast<std::size_t>(k)]);
    y(i) = acc;
  }
  return y;
}

/// alpha A + beta B over the union of both patterns.
template <class S, class TA, class TB>
SparseMatrix<S> add_scaled(const SparseMatrix<TA>& a, const SparseMatrix<TB>& b, S alpha, S beta);

/// Re(x^H A x) for Hermitian-valued forms.
double real_form(const RealMatrix& a, const ComplexVector& x);
Complex form(const ComplexMatrix& a, const ComplexVector& x);

}  // namespace gpe

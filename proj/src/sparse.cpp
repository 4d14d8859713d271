#include "gpe/sparse.hpp"

#include <algorithm>
#include <limits>

namespace gpe {

SparsityPattern::SparsityPattern(Index n, std::vector<int> row_offsets, std::vector<int> cols)
    : n_(n), offsets_(std::move(row_offsets)), cols_(std::move(cols)) {
  if (static_cast<Index>(offsets_.size()) != n_ + 1 || offsets_.front() != 0 ||
      offsets_.back() != static_cast<int>(cols_.size()))
    throw std::invalid_argument("SparsityPattern: inconsistent row offsets");
  for (Index i = 0; i < n_; ++i) {
    const int begin = offsets_[static_cast<std::size_t>(i)];
    const int end = offsets_[static_cast<std::size_t>(i) + 1];
    if (end < begin) throw std::invalid_argument("SparsityPattern: offsets not monotone");
    for (int k = begin; k < end; ++k) {
      const int c = cols_[static_cast<std::size_t>(k)];
      if (c < 0 || c >= n_) throw std::invalid_argument("SparsityPattern: column out of range");
      if (k > begin && cols_[static_cast<std::size_t>(k) - 1] >= c)
        throw std::invalid_argument("SparsityPattern: columns not strictly increasing");
      bandwidth_ = std::max<Index>(bandwidth_, std::abs(c - i));
    }
  }
}

std::shared_ptr<const SparsityPattern> SparsityPattern::from_entries(Index n,
                                                                     std::vector<std::pair<int, int>> entries) {
  std::sort(entries.begin(), entries.end());
  entries.erase(std::unique(entries.begin(), entries.end()), entries.end());
  std::vector<int> offsets(static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> cols;
  cols.reserve(entries.size());
  for (const auto& [i, j] : entries) {
    if (i < 0 || i >= n) throw std::invalid_argument("SparsityPattern: row out of range");
    ++offsets[static_cast<std::size_t>(i) + 1];
    cols.push_back(j);
  }
  for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) offsets[i + 1] += offsets[i];
  return std::make_shared<const SparsityPattern>(n, std::move(offsets), std::move(cols));
}

std::shared_ptr<const SparsityPattern> SparsityPattern::identity(Index n) {
  std::vector<int> offsets(static_cast<std::size_t>(n) + 1);
  std::vector<int> cols(static_cast<std::size_t>(n));
  for (Index i = 0; i <= n; ++i) offsets[static_cast<std::size_t>(i)] = static_cast<int>(i);
  for (Index i = 0; i < n; ++i) cols[static_cast<std::size_t>(i)] = static_cast<int>(i);
  return std::make_shared<const SparsityPattern>(n, std::move(offsets), std::move(cols));
}

Index SparsityPattern::find(Index i, Index j) const {
  const auto begin = cols_.begin() + offsets_[static_cast<std::size_t>(i)];
  const auto end = cols_.begin() + offsets_[static_cast<std::size_t>(i) + 1];
  const auto it = std::lower_bound(begin, end, static_cast<int>(j));
  if (it == end || *it != j) return -1;
  return it - cols_.begin();
}

template <class T>
SparseMatrix<T>::SparseMatrix(std::shared_ptr<const SparsityPattern> pattern, std::vector<T> values)
    : pattern_(std::move(pattern)), values_(std::move(values)) {
  if (static_cast<Index>(values_.size()) != pattern_->nnz())
    throw std::invalid_argument("SparseMatrix: value count does not match pattern");
}

template <class T>
SparseMatrix<T> SparseMatrix<T>::identity(Index n) {
  return SparseMatrix(SparsityPattern::identity(n), std::vector<T>(static_cast<std::size_t>(n), T(1)));
}

template <class T>
SparseMatrix<T> SparseMatrix<T>::from_triplets(Index n, const std::vector<std::tuple<int, int, T>>& triplets) {
  std::vector<std::pair<int, int>> entries;
  entries.reserve(triplets.size());
  for (const auto& [i, j, v] : triplets) entries.emplace_back(i, j);
  SparseMatrix m(SparsityPattern::from_entries(n, std::move(entries)));
  for (const auto& [i, j, v] : triplets) m.add_to(i, j, v);
  return m;
}

template <class T>
T SparseMatrix<T>::coeff(Index i, Index j) const {
  const Index k = pattern_->find(i, j);
  return k < 0 ? T(0) : values_[static_cast<std::size_t>(k)];
}

template <class T>
void SparseMatrix<T>::add_to(Index i, Index j, T v) {
  const Index k = pattern_->find(i, j);
  if (k < 0) throw std::out_of_range("SparseMatrix::add_to: entry not in pattern");
  values_[static_cast<std::size_t>(k)] += v;
}

template <class T>
void SparseMatrix<T>::apply_dirichlet(const std::vector<bool>& mask) {
  if (static_cast<Index>(mask.size()) != size()) throw std::invalid_argument("apply_dirichlet: mask size");
  const auto& offs = pattern_->row_offsets();
  const auto& cols = pattern_->cols();
  for (Index i = 0; i < size(); ++i) {
    const bool row_fixed = mask[static_cast<std::size_t>(i)];
    for (int k = offs[static_cast<std::size_t>(i)]; k < offs[static_cast<std::size_t>(i) + 1]; ++k) {
      const int j = cols[static_cast<std::size_t>(k)];
      if (row_fixed || mask[static_cast<std::size_t>(j)])
        values_[static_cast<std::size_t>(k)] = (row_fixed && j == i) ? T(1) : T(0);
    }
  }
}

template <class T>
Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> SparseMatrix<T>::to_dense() const {
  Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> d =
      Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>::Zero(size(), size());
  const auto& offs = pattern_->row_offsets();
  const auto& cols = pattern_->cols();
  for (Index i = 0; i < size(); ++i)
    for (int k = offs[static_cast<std::size_t>(i)]; k < offs[static_cast<std::size_t>(i) + 1]; ++k)
      d(i, cols[static_cast<std::size_t>(k)]) = values_[static_cast<std::size_t>(k)];
  return d;
}

template <class T>
Eigen::Map<const Eigen::SparseMatrix<T, Eigen::RowMajor, int>> SparseMatrix<T>::eigen_view() const {
  return {size(), size(), nnz(), pattern_->row_offsets().data(), pattern_->cols().data(), values_.data()};
}

template <class T>
SparseMatrix<Complex> SparseMatrix<T>::to_complex() const {
  std::vector<Complex> vals(values_.begin(), values_.end());
  return SparseMatrix<Complex>(pattern_, std::move(vals));
}

template <class T>
SparseMatrix<T> SparseMatrix<T>::adjoint() const {
  std::vector<std::tuple<int, int, T>> trip;
  trip.reserve(values_.size());
  const auto& offs = pattern_->row_offsets();
  const auto& cols = pattern_->cols();
  for (Index i = 0; i < size(); ++i)
    for (int k = offs[static_cast<std::size_t>(i)]; k < offs[static_cast<std::size_t>(i) + 1]; ++k) {
      T v = values_[static_cast<std::size_t>(k)];
      if constexpr (std::is_same_v<T, Complex>) v = std::conj(v);
      trip.emplace_back(cols[static_cast<std::size_t>(k)], static_cast<int>(i), v);
    }
  return from_triplets(size(), trip);
}

template class SparseMatrix<double>;
template class SparseMatrix<Complex>;

template <class S, class TA, class TB>
SparseMatrix<S> add_scaled(const SparseMatrix<TA>& a, const SparseMatrix<TB>& b, S alpha, S beta) {
  if (a.size() != b.size()) throw std::invalid_argument("add_scaled: dimension mismatch");
  if (a.pattern_ptr() == b.pattern_ptr()) {
    std::vector<S> vals(static_cast<std::size_t>(a.nnz()));
    const auto av = a.values();
    const auto bv = b.values();
    for (std::size_t k = 0; k < vals.size(); ++k) vals[k] = alpha * S(av[k]) + beta * S(bv[k]);
    return SparseMatrix<S>(a.pattern_ptr(), std::move(vals));
  }
  // general case: merge rows
  const Index n = a.size();
  std::vector<int> offsets(static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> cols;
  std::vector<S> vals;
  const auto& ao = a.pattern().row_offsets();
  const auto& ac = a.pattern().cols();
  const auto& bo = b.pattern().row_offsets();
  const auto& bc = b.pattern().cols();
  for (Index i = 0; i < n; ++i) {
    int ka = ao[static_cast<std::size_t>(i)];
    int kb = bo[static_cast<std::size_t>(i)];
    const int ea = ao[static_cast<std::size_t>(i) + 1];
    const int eb = bo[static_cast<std::size_t>(i) + 1];
    while (ka < ea || kb < eb) {
      const int ca = ka < ea ? ac[static_cast<std::size_t>(ka)] : std::numeric_limits<int>::max();
      const int cb = kb < eb ? bc[static_cast<std::size_t>(kb)] : std::numeric_limits<int>::max();
      const int c = std::min(ca, cb);
      S v(0);
      if (ca == c) v += alpha * S(a.values()[static_cast<std::size_t>(ka++)]);
      if (cb == c) v += beta * S(b.values()[static_cast<std::size_t>(kb++)]);
      cols.push_back(c);
      vals.push_back(v);
    }
    offsets[static_cast<std::size_t>(i) + 1] = static_cast<int>(cols.size());
  }
  auto pattern = std::make_shared<const SparsityPattern>(n, std::move(offsets), std::move(cols));
  return SparseMatrix<S>(std::move(pattern), std::move(vals));
}

template SparseMatrix<double> add_scaled(const SparseMatrix<double>&, const SparseMatrix<double>&, double, double);
template SparseMatrix<Complex> add_scaled(const SparseMatrix<double>&, const SparseMatrix<double>&, Complex,
                                          Complex);
template SparseMatrix<Complex> add_scaled(const SparseMatrix<Complex>&, const SparseMatrix<Complex>&, Complex,
                                          Complex);
template SparseMatrix<Complex> add_scaled(const SparseMatrix<double>&, const SparseMatrix<Complex>&, Complex,
                                          Complex);
template SparseMatrix<Complex> add_scaled(const SparseMatrix<Complex>&, const SparseMatrix<double>&, Complex,
                                          Complex);

double real_form(const RealMatrix& a, const ComplexVector& x) { return x.dot(matvec(a, x)).real(); }

Complex form(const ComplexMatrix& a, const ComplexVector& x) { return x.dot(matvec(a, x)); }

}  // namespace gpe

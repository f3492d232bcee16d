#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "fsga/error.hpp"
#include "fsga/types.hpp"

namespace fsga {

struct Entry {
  std::size_t row;
  std::size_t col;
  cplx value;
};

/// Square complex matrix in sorted coordinate form (row-major, unique, no
/// stored zeros). `degree` is the creation-letter budget of the expression
/// that produced it: products add, sums take the max, adjoints keep it.
/// Entries built from 0/1 generators stay small integers, which doubles
/// represent exactly.
class SparseOperator {
 public:
  SparseOperator() = default;
  explicit SparseOperator(std::size_t dim, std::size_t degree = 0) : dim_(dim), degree_(degree) {}

  /// Sums duplicates, drops exact zeros, sorts.
  static SparseOperator from_entries(std::size_t dim, std::vector<Entry> entries,
                                     std::size_t degree) {
    for (const auto& e : entries)
      if (e.row >= dim || e.col >= dim) throw DimensionMismatch("entry outside matrix");
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
      return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    SparseOperator out(dim, degree);
    for (const auto& e : entries) {
      if (!out.entries_.empty() && out.entries_.back().row == e.row &&
          out.entries_.back().col == e.col)
        out.entries_.back().value += e.value;
      else
        out.entries_.push_back(e);
    }
    std::erase_if(out.entries_, [](const Entry& e) { return e.value == cplx{}; });
    out.index_rows();
    return out;
  }

  static SparseOperator identity(std::size_t dim) {
    std::vector<Entry> d;
    d.reserve(dim);
    for (std::size_t i = 0; i < dim; ++i) d.push_back({i, i, 1.0});
    return from_entries(dim, std::move(d), 0);
  }

  static SparseOperator diagonal(std::span<const cplx> values, std::size_t degree = 0) {
    std::vector<Entry> d;
    for (std::size_t i = 0; i < values.size(); ++i)
      if (values[i] != cplx{}) d.push_back({i, i, values[i]});
    return from_entries(values.size(), std::move(d), degree);
  }

  /// x (x) y^* : rank one, maps y to x.
  static SparseOperator rank_one(std::span<const cplx> x, std::span<const cplx> y,
                                 std::size_t degree = 0) {
    if (x.size() != y.size()) throw DimensionMismatch("rank_one vector sizes differ");
    std::vector<Entry> d;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i] != cplx{})
        for (std::size_t j = 0; j < y.size(); ++j)
          if (y[j] != cplx{}) d.push_back({i, j, x[i] * std::conj(y[j])});
    return from_entries(x.size(), std::move(d), degree);
  }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t degree() const noexcept { return degree_; }
  std::size_t nnz() const noexcept { return entries_.size(); }
  const std::vector<Entry>& entries() const noexcept { return entries_; }
  SparseOperator& set_degree(std::size_t d) {
    degree_ = d;
    return *this;
  }

  cplx at(std::size_t r, std::size_t c) const {
    auto [b, e] = row_range(r);
    auto it = std::lower_bound(entries_.begin() + static_cast<std::ptrdiff_t>(b),
                               entries_.begin() + static_cast<std::ptrdiff_t>(e), c,
                               [](const Entry& en, std::size_t col) { return en.col < col; });
    if (it != entries_.begin() + static_cast<std::ptrdiff_t>(e) && it->col == c) return it->value;
    return {};
  }

  std::pair<std::size_t, std::size_t> row_range(std::size_t r) const {
    if (row_ptr_.empty()) return {0, 0};
    return {row_ptr_[r], row_ptr_[r + 1]};
  }

  SparseOperator adjoint() const {
    std::vector<Entry> t;
    t.reserve(entries_.size());
    for (const auto& e : entries_) t.push_back({e.col, e.row, std::conj(e.value)});
    return from_entries(dim_, std::move(t), degree_);
  }

  std::vector<cplx> apply(std::span<const cplx> x) const {
    if (x.size() != dim_) throw DimensionMismatch("vector size does not match operator");
    std::vector<cplx> y(dim_);
    for (const auto& e : entries_) y[e.row] += e.value * x[e.col];
    return y;
  }

  std::vector<cplx> column(std::size_t c) const {
    std::vector<cplx> y(dim_);
    for (const auto& e : entries_)
      if (e.col == c) y[e.row] = e.value;
    return y;
  }

  /// A * diag(mask): keeps only the columns where mask is true.
  SparseOperator restrict_columns(const std::vector<bool>& mask) const {
    std::vector<Entry> kept;
    for (const auto& e : entries_)
      if (mask[e.col]) kept.push_back(e);
    return from_entries(dim_, std::move(kept), degree_);
  }

  /// diag(mask) * A.
  SparseOperator restrict_rows(const std::vector<bool>& mask) const {
    std::vector<Entry> kept;
    for (const auto& e : entries_)
      if (mask[e.row]) kept.push_back(e);
    return from_entries(dim_, std::move(kept), degree_);
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& e : entries_) m = std::max(m, std::abs(e.value));
    return m;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& e : entries_) s += std::norm(e.value);
    return std::sqrt(s);
  }

  bool is_zero() const noexcept { return entries_.empty(); }

  /// Drops entries with |value| <= tol.
  SparseOperator pruned(double tol) const {
    std::vector<Entry> kept;
    for (const auto& e : entries_)
      if (std::abs(e.value) > tol) kept.push_back(e);
    return from_entries(dim_, std::move(kept), degree_);
  }

  friend SparseOperator operator+(const SparseOperator& a, const SparseOperator& b) {
    check_same(a, b);
    std::vector<Entry> all = a.entries_;
    all.insert(all.end(), b.entries_.begin(), b.entries_.end());
    return from_entries(a.dim_, std::move(all), std::max(a.degree_, b.degree_));
  }

  friend SparseOperator operator-(const SparseOperator& a) { return cplx{-1.0} * a; }

  friend SparseOperator operator-(const SparseOperator& a, const SparseOperator& b) {
    return a + (-b);
  }

  friend SparseOperator operator*(cplx s, const SparseOperator& a) {
    std::vector<Entry> scaled = a.entries_;
    for (auto& e : scaled) e.value *= s;
    return from_entries(a.dim_, std::move(scaled), a.degree_);
  }

  // Gustavson row-by-row product with a dense accumulator.
  friend SparseOperator operator*(const SparseOperator& a, const SparseOperator& b) {
    check_same(a, b);
    const std::size_t n = a.dim_;
    std::vector<cplx> acc(n);
    std::vector<bool> touched(n, false);
    std::vector<std::size_t> cols;
    std::vector<Entry> out;
    std::size_t i = 0;
    while (i < a.entries_.size()) {
      const std::size_t row = a.entries_[i].row;
      cols.clear();
      for (; i < a.entries_.size() && a.entries_[i].row == row; ++i) {
        const auto& ea = a.entries_[i];
        auto [bb, be] = b.row_range(ea.col);
        for (std::size_t k = bb; k < be; ++k) {
          const auto& eb = b.entries_[k];
          if (!touched[eb.col]) {
            touched[eb.col] = true;
            cols.push_back(eb.col);
          }
          acc[eb.col] += ea.value * eb.value;
        }
      }
      std::sort(cols.begin(), cols.end());
      for (auto c : cols) {
        if (acc[c] != cplx{}) out.push_back({row, c, acc[c]});
        acc[c] = {};
        touched[c] = false;
      }
    }
    SparseOperator r(n, a.degree_ + b.degree_);
    r.entries_ = std::move(out);
    r.index_rows();
    return r;
  }

  bool operator==(const SparseOperator& o) const {
    if (dim_ != o.dim_ || entries_.size() != o.entries_.size()) return false;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      const auto& x = entries_[i];
      const auto& y = o.entries_[i];
      if (x.row != y.row || x.col != y.col || x.value != y.value) return false;
    }
    return true;
  }

 private:
  static void check_same(const SparseOperator& a, const SparseOperator& b) {
    if (a.dim_ != b.dim_) throw DimensionMismatch("operator dimensions differ");
  }

  void index_rows() {
    row_ptr_.assign(dim_ + 1, 0);
    for (const auto& e : entries_) ++row_ptr_[e.row + 1];
    for (std::size_t r = 0; r < dim_; ++r) row_ptr_[r + 1] += row_ptr_[r];
  }

  std::size_t dim_ = 0;
  std::size_t degree_ = 0;
  std::vector<Entry> entries_;
  std::vector<std::size_t> row_ptr_;
};

/// Commutator AB - BA.
inline SparseOperator commutator(const SparseOperator& a, const SparseOperator& b) {
  return a * b - b * a;
}

/// Largest |entry| of the difference.
inline double max_abs_diff(const SparseOperator& a, const SparseOperator& b) {
  return (a - b).max_abs();
}

inline double vector_norm(std::span<const cplx> v) {
  double s = 0.0;
  for (auto x : v) s += std::norm(x);
  return std::sqrt(s);
}

inline cplx inner(std::span<const cplx> x, std::span<const cplx> y) {
  // <x, y> linear in x, conjugate-linear in y.
  cplx s{};
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * std::conj(y[i]);
  return s;
}

}  // namespace fsga

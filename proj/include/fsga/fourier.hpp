#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fsga/error.hpp"
#include "fsga/fock.hpp"
#include "fsga/path.hpp"
#include "fsga/sparse.hpp"
#include "fsga/types.hpp"

namespace fsga {

/// Finite Fourier series sum_w a_w L_w, keyed by path in canonical order.
class CoefficientTable {
 public:
  void set(const Path& w, cplx a) {
    if (a == cplx{})
      coeffs_.erase(w);
    else
      coeffs_[w] = a;
  }
  void add(const Path& w, cplx a) { set(w, get(w) + a); }
  cplx get(const Path& w) const {
    auto it = coeffs_.find(w);
    return it == coeffs_.end() ? cplx{} : it->second;
  }
  std::size_t size() const noexcept { return coeffs_.size(); }
  bool empty() const noexcept { return coeffs_.empty(); }
  const std::map<Path, cplx>& entries() const noexcept { return coeffs_; }
  auto begin() const { return coeffs_.begin(); }
  auto end() const { return coeffs_.end(); }

  std::size_t max_length() const {
    std::size_t m = 0;
    for (const auto& [w, a] : coeffs_) m = std::max(m, w.length());
    return m;
  }

  /// Entries with |a| <= tol removed.
  CoefficientTable pruned(double tol) const {
    CoefficientTable out;
    for (const auto& [w, a] : coeffs_)
      if (std::abs(a) > tol) out.coeffs_.emplace(w, a);
    return out;
  }

 private:
  std::map<Path, cplx> coeffs_;
};

inline double max_abs_diff(const CoefficientTable& a, const CoefficientTable& b) {
  double m = 0.0;
  for (const auto& [w, v] : a) m = std::max(m, std::abs(v - b.get(w)));
  for (const auto& [w, v] : b) m = std::max(m, std::abs(v - a.get(w)));
  return m;
}

/// a_w = <A xi_{s(w)}, xi_w> for every basis path w.
inline CoefficientTable fourier_coefficients(const SparseOperator& a, const FockSpace& s) {
  if (a.dim() != s.dim()) throw DimensionMismatch("operator does not act on this space");
  CoefficientTable t;
  for (const auto& e : a.entries()) {
    const Path& w = s.path(e.row);
    if (e.col == w.src) t.set(w, e.value);
  }
  return t;
}

/// sum_w weight(|w|) a_w L_w (or R_w on side R).
template <class Weight>
SparseOperator synthesize_weighted(const CoefficientTable& t, const FockSpace& s, Side side,
                                   Weight weight) {
  std::vector<Entry> all;
  std::size_t degree = 0;
  for (const auto& [w, a] : t) {
    const cplx c = a * weight(w.length());
    if (c == cplx{}) continue;
    auto op = make_word_operator(s, side, w);
    for (const auto& e : op.entries()) all.push_back({e.row, e.col, c * e.value});
    degree = std::max(degree, w.length());
  }
  return SparseOperator::from_entries(s.dim(), std::move(all), degree);
}

inline SparseOperator synthesize(const CoefficientTable& t, const FockSpace& s,
                                 Side side = Side::L) {
  return synthesize_weighted(t, s, side, [](std::size_t) { return 1.0; });
}

/// Cesaro mean sum_{|w|<k} (1 - |w|/k) a_w L_w.
inline SparseOperator cesaro_operator(const CoefficientTable& t, const FockSpace& s,
                                      std::size_t k) {
  if (k == 0) throw DimensionMismatch("Cesaro index must be at least 1");
  return synthesize_weighted(t, s, Side::L, [k](std::size_t len) {
    return len < k ? 1.0 - static_cast<double>(len) / static_cast<double>(k) : 0.0;
  });
}

struct GeneratorResidual {
  std::string generator;  // "R[e]" or "Q[x]"
  double residual = 0.0;
};

struct CommutantReport {
  std::vector<GeneratorResidual> per_generator;
  std::size_t safe_level = 0;  // columns of length <= safe_level were tested
  double max_residual() const {
    double m = 0.0;
    for (const auto& g : per_generator) m = std::max(m, g.residual);
    return m;
  }
};

/// [A, g] for every right generator g in {R_e, Q_x}, tested on columns of
/// length <= level - degree(A) - 1.
inline CommutantReport commutant_report(const SparseOperator& a, const FockSpace& s) {
  const auto& g = s.graph();
  CommutantReport r;
  const std::size_t d = a.degree() + 1;
  const auto mask = s.safe_mask(d);
  r.safe_level = d <= s.level() ? s.level() - d : 0;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    auto re = right_creation(s, e);
    r.per_generator.push_back(
        {"R[" + g.edge(e).label + "]", commutator(a, re).restrict_columns(mask).max_abs()});
  }
  for (std::size_t x = 0; x < g.vertex_count(); ++x) {
    auto q = source_projection(s, x);
    r.per_generator.push_back(
        {"Q[" + g.vertex_label(x) + "]", commutator(a, q).restrict_columns(mask).max_abs()});
  }
  return r;
}

inline double commutant_residual(const SparseOperator& a, const FockSpace& s) {
  return commutant_report(a, s).max_residual();
}

inline void require_in_algebra(const SparseOperator& a, const FockSpace& s,
                               double tol = kEntryTolerance) {
  double r = commutant_residual(a, s);
  if (r > tol) throw NotInAlgebra(r);
}

/// Coefficients alpha_x with A = sum alpha_x P_x when A is normal on safe
/// levels; nullopt otherwise.
inline std::optional<std::vector<cplx>> normal_part_decomposition(const SparseOperator& a,
                                                                  const FockSpace& s,
                                                                  double tol = kEntryTolerance) {
  require_in_algebra(a, s, tol);
  const auto& g = s.graph();
  const auto mask = s.safe_mask(2 * a.degree());
  const auto ad = a.adjoint();
  if ((a * ad - ad * a).restrict_columns(mask).max_abs() > tol) return std::nullopt;
  std::vector<cplx> alpha(g.vertex_count());
  SparseOperator diag(s.dim());
  for (std::size_t x = 0; x < g.vertex_count(); ++x) {
    alpha[x] = a.at(x, x);
    diag = diag + alpha[x] * range_projection(s, x);
  }
  if ((a - diag).restrict_columns(mask).max_abs() > tol) return std::nullopt;
  return alpha;
}

}  // namespace fsga

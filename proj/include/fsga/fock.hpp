#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "fsga/error.hpp"
#include "fsga/graph.hpp"
#include "fsga/path.hpp"
#include "fsga/sparse.hpp"
#include "fsga/types.hpp"

namespace fsga {

/// Truncated Fock space: basis xi_w for |w| <= level in canonical order.
class FockSpace {
 public:
  explicit FockSpace(std::shared_ptr<const PathTable> table) : table_(std::move(table)) {}

  const DirectedMultigraph& graph() const noexcept { return table_->graph(); }
  const PathTable& table() const noexcept { return *table_; }
  std::size_t level() const noexcept { return table_->level(); }
  std::size_t dim() const noexcept { return table_->size(); }
  const Path& path(std::size_t i) const { return table_->path(i); }

  std::size_t index(const Path& p) const {
    auto i = table_->index(p);
    if (!i) throw InadmissiblePath("path is not in the truncated basis");
    return *i;
  }

  std::vector<cplx> basis_vector(const Path& p) const {
    std::vector<cplx> v(dim());
    v[index(p)] = 1.0;
    return v;
  }

  /// Columns on which a degree-d identity holds exactly: |w| <= level - d.
  std::vector<bool> safe_mask(std::size_t degree) const {
    std::vector<bool> mask(dim(), false);
    if (degree > level()) return mask;
    const std::size_t end = table_->level_begin(level() - degree + 1);
    std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(end), true);
    return mask;
  }

 private:
  std::shared_ptr<const PathTable> table_;
};

inline FockSpace build_space(const DirectedMultigraph& g, std::size_t level,
                             std::uint64_t cap = kDefaultBasisCap) {
  return FockSpace(std::make_shared<const PathTable>(g, level, cap));
}

enum class Side { L, R };
enum class GeneratorKind { L, R, P, Q, E };

/// L_e xi_w = xi_{ew} when r(w) = s(e) and |w| < level.
inline SparseOperator left_creation(const FockSpace& s, std::size_t e) {
  std::vector<Entry> out;
  for (std::size_t w = 0; w < s.dim(); ++w) {
    auto t = s.table().extend_last(w, e);
    if (t != PathTable::npos) out.push_back({t, w, 1.0});
  }
  return SparseOperator::from_entries(s.dim(), std::move(out), 1);
}

/// R_e xi_w = xi_{we} when s(w) = r(e) and |w| < level.
inline SparseOperator right_creation(const FockSpace& s, std::size_t e) {
  std::vector<Entry> out;
  for (std::size_t w = 0; w < s.dim(); ++w) {
    auto t = s.table().extend_first(w, e);
    if (t != PathTable::npos) out.push_back({t, w, 1.0});
  }
  return SparseOperator::from_entries(s.dim(), std::move(out), 1);
}

namespace detail {

template <class Pred>
SparseOperator selection(const FockSpace& s, Pred keep) {
  std::vector<Entry> out;
  for (std::size_t w = 0; w < s.dim(); ++w)
    if (keep(s.path(w))) out.push_back({w, w, 1.0});
  return SparseOperator::from_entries(s.dim(), std::move(out), 0);
}

}  // namespace detail

/// P_x = L_x: projection onto paths ending at x.
inline SparseOperator range_projection(const FockSpace& s, std::size_t x) {
  return detail::selection(s, [x](const Path& p) { return p.rng == x; });
}

/// Q_x = R_x: projection onto paths starting at x.
inline SparseOperator source_projection(const FockSpace& s, std::size_t x) {
  return detail::selection(s, [x](const Path& p) { return p.src == x; });
}

/// E_k: projection onto the length-k shell.
inline SparseOperator level_projection(const FockSpace& s, std::size_t k) {
  if (k > s.level()) throw DimensionMismatch("level projection above truncation level");
  return detail::selection(s, [k](const Path& p) { return p.length() == k; });
}

/// Diagonal projection onto the columns selected by `mask`.
inline SparseOperator mask_projection(const std::vector<bool>& mask) {
  std::vector<Entry> out;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) out.push_back({i, i, 1.0});
  return SparseOperator::from_entries(mask.size(), std::move(out), 0);
}

inline SparseOperator make_generator(const FockSpace& s, GeneratorKind kind,
                                     const std::string& label) {
  const auto& g = s.graph();
  switch (kind) {
    case GeneratorKind::L: return left_creation(s, g.require_edge(label));
    case GeneratorKind::R: return right_creation(s, g.require_edge(label));
    case GeneratorKind::P: return range_projection(s, g.require_vertex(label));
    case GeneratorKind::Q: return source_projection(s, g.require_vertex(label));
    case GeneratorKind::E: {
      std::size_t k = 0;
      try {
        std::size_t used = 0;
        k = std::stoul(label, &used);
        if (used != label.size()) throw UnknownLabel(label);
      } catch (const std::logic_error&) {
        throw UnknownLabel(label);
      }
      return level_projection(s, k);
    }
  }
  throw UnknownLabel(label);
}

/// L_w (side L) or R_w (side R) as the product of its letters; a vertex
/// gives P_x or Q_x.
inline SparseOperator make_word_operator(const FockSpace& s, Side side, const Path& w) {
  if (!is_admissible(s.graph(), w)) throw InadmissiblePath("word is not an admissible path");
  if (w.is_vertex())
    return side == Side::L ? range_projection(s, w.src) : source_projection(s, w.src);
  std::vector<Entry> out;
  for (std::size_t col = 0; col < s.dim(); ++col) {
    std::size_t cur = col;
    const Path& p = s.path(col);
    if (side == Side::L ? p.rng != w.src : p.src != w.rng) continue;
    if (side == Side::L) {
      for (auto it = w.edges.begin(); it != w.edges.end() && cur != PathTable::npos; ++it)
        cur = s.table().extend_last(cur, *it);
    } else {
      for (auto it = w.edges.rbegin(); it != w.edges.rend() && cur != PathTable::npos; ++it)
        cur = s.table().extend_first(cur, *it);
    }
    if (cur != PathTable::npos) out.push_back({cur, col, 1.0});
  }
  return SparseOperator::from_entries(s.dim(), std::move(out), w.length());
}

/// Side L with eta supported on Q_x: xi_w -> sum_v eta_v xi_{vw} for r(w) = x.
/// Side R with eta supported on P_x: xi_w -> sum_v eta_v xi_{wv} for s(w) = x.
/// Images above the truncation level are dropped.
inline SparseOperator make_creation_from_vector(const FockSpace& s, Side side, std::size_t x,
                                                std::span<const cplx> eta) {
  if (eta.size() != s.dim()) throw DimensionMismatch("vector size does not match space");
  std::vector<std::size_t> support;
  std::size_t degree = 0;
  for (std::size_t i = 0; i < eta.size(); ++i) {
    if (eta[i] == cplx{}) continue;
    const Path& v = s.path(i);
    if (side == Side::L ? v.src != x : v.rng != x)
      throw SupportViolation("vector has weight on '" + display(s.graph(), v) +
                             "' outside the required corner");
    support.push_back(i);
    degree = std::max(degree, v.length());
  }
  std::vector<Entry> out;
  for (std::size_t col = 0; col < s.dim(); ++col) {
    const Path& w = s.path(col);
    if (side == Side::L ? w.rng != x : w.src != x) continue;
    for (auto i : support) {
      const Path& v = s.path(i);
      std::size_t cur = col;
      if (side == Side::L) {
        for (auto it = v.edges.begin(); it != v.edges.end() && cur != PathTable::npos; ++it)
          cur = s.table().extend_last(cur, *it);
      } else {
        for (auto it = v.edges.rbegin(); it != v.edges.rend() && cur != PathTable::npos; ++it)
          cur = s.table().extend_first(cur, *it);
      }
      if (cur != PathTable::npos) out.push_back({cur, col, eta[i]});
    }
  }
  return SparseOperator::from_entries(s.dim(), std::move(out), degree);
}

/// Max |entry| of (a - b) restricted to the columns where `mask` holds.
inline double residual_on(const SparseOperator& a, const SparseOperator& b,
                          const std::vector<bool>& mask) {
  return (a - b).restrict_columns(mask).max_abs();
}

/// Residual of a == b on the safe columns for the given degree.
inline double safe_residual(const FockSpace& s, const SparseOperator& a, const SparseOperator& b,
                            std::size_t degree) {
  return residual_on(a, b, s.safe_mask(degree));
}

inline double safe_residual(const FockSpace& s, const SparseOperator& a,
                            const SparseOperator& b) {
  return safe_residual(s, a, b, std::max(a.degree(), b.degree()));
}

/// Basis bijection W from the transpose-graph space onto this space:
/// xi_{v^t} -> xi_v, with v^t the reversed path. Edge indices are shared,
/// so W^* L_e W = R_e on the transpose space.
inline SparseOperator transpose_map(const FockSpace& s, const FockSpace& st) {
  if (s.dim() != st.dim()) throw DimensionMismatch("spaces differ in dimension");
  std::vector<Entry> out;
  out.reserve(s.dim());
  for (std::size_t i = 0; i < st.dim(); ++i) {
    const Path& pt = st.path(i);
    Path p{pt.rng, pt.src, std::vector<std::size_t>(pt.edges.rbegin(), pt.edges.rend())};
    out.push_back({s.index(p), i, 1.0});
  }
  return SparseOperator::from_entries(s.dim(), std::move(out), 0);
}

// ---------------------------------------------------------------------------
// Free partial isometry representations

inline Eigen::MatrixXcd to_dense(const SparseOperator& a) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(a.dim()),
                                              static_cast<Eigen::Index>(a.dim()));
  for (const auto& e : a.entries())
    m(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col)) = e.value;
  return m;
}

inline SparseOperator from_dense(const Eigen::MatrixXcd& m, std::size_t degree = 0,
                                 double drop = 0.0) {
  std::vector<Entry> out;
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      if (std::abs(m(r, c)) > drop)
        out.push_back({static_cast<std::size_t>(r), static_cast<std::size_t>(c), m(r, c)});
  return SparseOperator::from_entries(static_cast<std::size_t>(m.rows()), std::move(out), degree);
}

/// Smallest eigenvalue of the Hermitian part of mask * a * mask.
inline double min_eigenvalue(const SparseOperator& a, const std::vector<bool>& mask) {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) keep.push_back(i);
  if (keep.empty()) return 0.0;
  bool diagonal = true;
  for (const auto& e : a.entries())
    if (e.row != e.col && mask[e.row] && mask[e.col]) diagonal = false;
  if (diagonal) {
    double m = 0.0;
    bool first = true;
    for (auto i : keep) {
      double d = a.at(i, i).real();
      m = first ? d : std::min(m, d);
      first = false;
    }
    return m;
  }
  const auto n = static_cast<Eigen::Index>(keep.size());
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = a.at(keep[i], keep[j]);
  Eigen::MatrixXcd h = (m + m.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

/// Projections P_x (by vertex) and partial isometries S_e (by edge) on a
/// common space. Identities are asserted on the columns in `mask`.
struct FpirFamily {
  DirectedMultigraph graph;
  std::size_t dim = 0;
  std::vector<SparseOperator> projections;  // indexed by vertex
  std::vector<SparseOperator> isometries;   // indexed by edge
  std::vector<bool> mask;                   // empty means every column
  std::size_t word_level = 0;               // words enumerated for the atomic sum
};

/// The truncated left-regular family {L_e, P_x}, asserted on levels <= level - 1.
inline FpirFamily standard_family(const FockSpace& s) {
  FpirFamily f{s.graph(), s.dim(), {}, {}, s.safe_mask(1), s.level()};
  for (std::size_t v = 0; v < s.graph().vertex_count(); ++v)
    f.projections.push_back(range_projection(s, v));
  for (std::size_t e = 0; e < s.graph().edge_count(); ++e)
    f.isometries.push_back(left_creation(s, e));
  return f;
}

struct ConditionResult {
  std::string name;
  bool passed = false;
  double residual = 0.0;
};

struct FpirReport {
  std::vector<ConditionResult> conditions;
  bool passed() const {
    return std::all_of(conditions.begin(), conditions.end(),
                       [](const ConditionResult& c) { return c.passed; });
  }
  const ConditionResult* find(const std::string& name) const {
    for (const auto& c : conditions)
      if (c.name == name) return &c;
    return nullptr;
  }
};

inline FpirReport check_fpir(const FpirFamily& fam, bool purely_atomic,
                             double tol = kEntryTolerance) {
  const auto& g = fam.graph;
  if (fam.projections.size() != g.vertex_count() || fam.isometries.size() != g.edge_count())
    throw DimensionMismatch("family does not match the graph");
  for (const auto& p : fam.projections)
    if (p.dim() != fam.dim) throw DimensionMismatch("projection has the wrong dimension");
  for (const auto& a : fam.isometries)
    if (a.dim() != fam.dim) throw DimensionMismatch("partial isometry has the wrong dimension");
  const std::vector<bool> mask = fam.mask.empty() ? std::vector<bool>(fam.dim, true) : fam.mask;
  const auto on_mask = [&](const SparseOperator& a) { return a.restrict_columns(mask).max_abs(); };
  const auto identity = SparseOperator::identity(fam.dim);

  FpirReport report;
  const auto add = [&](std::string name, double residual, bool extra = true) {
    report.conditions.push_back({std::move(name), extra && residual <= tol, residual});
  };

  // (i) S_e^* S_e = P_{s(e)} != 0
  {
    double r = 0.0;
    bool nonzero = true;
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      const auto& p = fam.projections[g.edge(e).src];
      r = std::max(r, on_mask(fam.isometries[e].adjoint() * fam.isometries[e] - p));
      if (p.restrict_columns(mask).is_zero()) nonzero = false;
    }
    add("initial_projections", r, nonzero);
  }
  // (ii) P_x self-adjoint idempotents, pairwise orthogonal, summing to I
  {
    double r = 0.0;
    SparseOperator sum(fam.dim);
    for (std::size_t x = 0; x < g.vertex_count(); ++x) {
      const auto& p = fam.projections[x];
      r = std::max(r, on_mask(p * p - p));
      r = std::max(r, on_mask(p.adjoint() - p));
      for (std::size_t y = x + 1; y < g.vertex_count(); ++y)
        r = std::max(r, on_mask(p * fam.projections[y]));
      sum = sum + p;
    }
    r = std::max(r, on_mask(sum - identity));
    add("vertex_projections", r);
  }
  // (iii) ranges pairwise orthogonal and E_x = P_x - sum_{r(e)=x} S_e S_e^* >= 0
  std::vector<SparseOperator> defect;
  {
    std::vector<SparseOperator> ranges;
    for (const auto& a : fam.isometries) ranges.push_back(a * a.adjoint());
    double r = 0.0;
    for (std::size_t e = 0; e < ranges.size(); ++e)
      for (std::size_t f = e + 1; f < ranges.size(); ++f)
        r = std::max(r, on_mask(ranges[e] * ranges[f]));
    double neg = 0.0;
    for (std::size_t x = 0; x < g.vertex_count(); ++x) {
      SparseOperator ex = fam.projections[x];
      for (auto e : g.in_edges(x)) ex = ex - ranges[e];
      neg = std::max(neg, -min_eigenvalue(ex, mask));
      defect.push_back(std::move(ex));
    }
    add("range_orthogonality", r);
    add("defect_positive", std::max(neg, 0.0));
  }
  if (purely_atomic) {
    bool all_nonzero = true;
    for (const auto& ex : defect)
      if (ex.restrict_columns(mask).pruned(tol).is_zero()) all_nonzero = false;
    add("defects_nonzero", 0.0, all_nonzero);
    // sum over words w of pi(w) E_{s(w)} pi(w)^*, grown one letter at a time
    std::vector<std::pair<std::size_t, SparseOperator>> shell;
    SparseOperator total(fam.dim);
    for (std::size_t x = 0; x < g.vertex_count(); ++x) {
      total = total + defect[x];
      shell.emplace_back(x, defect[x]);
    }
    for (std::size_t k = 1; k <= fam.word_level; ++k) {
      std::vector<std::pair<std::size_t, SparseOperator>> next;
      for (const auto& [rng, t] : shell)
        for (auto e : g.out_edges(rng)) {
          auto moved = fam.isometries[e] * t * fam.isometries[e].adjoint();
          total = total + moved;
          next.emplace_back(g.edge(e).dst, std::move(moved));
        }
      shell = std::move(next);
    }
    add("atomic_resolution", (total - identity).max_abs());
  }
  return report;
}

}  // namespace fsga

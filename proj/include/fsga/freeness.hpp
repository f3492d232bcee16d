#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "fsga/error.hpp"
#include "fsga/fock.hpp"
#include "fsga/fourier.hpp"
#include "fsga/graph.hpp"
#include "fsga/path.hpp"
#include "fsga/sparse.hpp"
#include "fsga/spectral.hpp"

namespace fsga {

struct IsometryPairReport {
  CoefficientTable u_table;
  CoefficientTable v_table;
  SparseOperator u;
  SparseOperator v;
  std::size_t degree = 0;      // identities are asserted on levels <= level - degree
  double same_initial = 0.0;   // |U^*U - V^*V|
  double u_range_excess = 0.0; // how far UU^* <= U^*U fails
  double v_range_excess = 0.0;
  double cross = 0.0;          // |U^*V|
  double isometric = 0.0;      // |U^*U - I|, only meaningful for the strong pair
  bool passed = false;
};

namespace detail {

// a <= b for projections that are diagonal on the masked columns: every
// off-diagonal entry vanishes and a's diagonal is dominated by b's.
inline double projection_excess(const SparseOperator& a, const SparseOperator& b,
                                const std::vector<bool>& mask) {
  double excess = 0.0;
  for (const auto* m : {&a, &b})
    for (const auto& e : m->entries())
      if (mask[e.col] && e.row != e.col) excess = std::max(excess, std::abs(e.value));
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) excess = std::max(excess, a.at(i, i).real() - b.at(i, i).real());
  return excess;
}

inline IsometryPairReport check_pair(const FockSpace& s, CoefficientTable ut, CoefficientTable vt,
                                     bool isometries) {
  IsometryPairReport r;
  r.u = synthesize(ut, s);
  r.v = synthesize(vt, s);
  r.u_table = std::move(ut);
  r.v_table = std::move(vt);
  r.degree = std::max(r.u.degree(), r.v.degree());
  const auto mask = s.safe_mask(r.degree);
  const auto uu = r.u.adjoint() * r.u;
  const auto vv = r.v.adjoint() * r.v;
  r.same_initial = (uu - vv).restrict_columns(mask).max_abs();
  r.u_range_excess = projection_excess(r.u * r.u.adjoint(), uu, mask);
  r.v_range_excess = projection_excess(r.v * r.v.adjoint(), vv, mask);
  r.cross = (r.u.adjoint() * r.v).restrict_columns(mask).max_abs();
  if (isometries) r.isometric = (uu - SparseOperator::identity(s.dim())).restrict_columns(mask).max_abs();
  r.passed = r.same_initial == 0.0 && r.u_range_excess <= 0.0 && r.v_range_excess <= 0.0 &&
             r.cross == 0.0 && r.isometric == 0.0;
  return r;
}

}  // namespace detail

/// U = L_w, V = L_w' for two first-return cycles at a double-cycle vertex.
inline std::optional<IsometryPairReport> double_cycle_pair(const FockSpace& s) {
  const auto& g = s.graph();
  auto dc = has_double_cycle(g);
  if (!dc) return std::nullopt;
  CoefficientTable ut, vt;
  ut.set(make_path(g, dc->first), 1.0);
  vt.set(make_path(g, dc->second), 1.0);
  return detail::check_pair(s, std::move(ut), std::move(vt), false);
}

struct Basin {
  std::size_t base = 0;                // double-cycle vertex x_i
  std::vector<std::size_t> vertices;   // B_i in vertex order
  std::vector<std::size_t> cycle1, cycle2;
  std::size_t k = 0;                   // 2^k >= 2|B_i|
  std::vector<Path> u1, u2, connector; // per vertex of B_i
};

/// Greedy disjoint basins with cycle words and connectors; nullopt when
/// some vertex reaches no double-cycle vertex.
inline std::optional<std::vector<Basin>> strong_pair_basins(const DirectedMultigraph& g) {
  if (!has_strong_double_cycle(g).holds) return std::nullopt;
  const auto marks = double_cycle_vertices(g);
  std::vector<bool> covered(g.vertex_count(), false);
  std::vector<Basin> basins;
  for (std::size_t x = 0; x < g.vertex_count(); ++x) {
    if (!marks[x] || covered[x]) continue;
    Basin b;
    b.base = x;
    auto into = reaches(g, x);
    for (std::size_t y = 0; y < g.vertex_count(); ++y)
      if (into[y] && !covered[y]) {
        b.vertices.push_back(y);
        covered[y] = true;
      }
    auto dc = double_cycle_at(g, x);
    if (!dc) throw InvalidGraph("double-cycle vertex without two first-return cycles");
    b.cycle1 = dc->first;
    b.cycle2 = dc->second;
    while ((std::size_t{1} << b.k) < 2 * b.vertices.size()) ++b.k;
    // The n-th word of k cycles in lexicographic order; the most significant
    // bit chooses the last-applied cycle, a set bit meaning cycle2.
    const auto word = [&](std::size_t n) {
      std::vector<std::size_t> edges;
      for (std::size_t pos = b.k; pos-- > 0;) {
        const auto& c = ((n >> pos) & 1) ? b.cycle2 : b.cycle1;
        edges.insert(edges.begin(), c.begin(), c.end());
      }
      return edges.empty() ? Path::vertex(x) : make_path(g, edges);
    };
    for (std::size_t j = 0; j < b.vertices.size(); ++j) {
      const auto y = b.vertices[j];
      b.u1.push_back(word(2 * j));
      b.u2.push_back(word(2 * j + 1));
      auto v = shortest_path(g, y, x);
      b.connector.push_back(v->empty() ? Path::vertex(y) : make_path(g, *v));
    }
    basins.push_back(std::move(b));
  }
  return basins;
}

inline std::size_t strong_pair_degree(const std::vector<Basin>& basins) {
  std::size_t d = 0;
  for (const auto& b : basins) {
    std::size_t conn = 0;
    for (const auto& v : b.connector) conn = std::max(conn, v.length());
    d = std::max(d, b.k * std::max(b.cycle1.size(), b.cycle2.size()) + conn);
  }
  return d;
}

/// U = sum L_{u1_y v_y}, V = sum L_{u2_y v_y}; isometries with orthogonal
/// ranges on safe levels.
inline std::optional<IsometryPairReport> strong_isometry_pair(const FockSpace& s) {
  auto basins = strong_pair_basins(s.graph());
  if (!basins) return std::nullopt;
  const auto degree = strong_pair_degree(*basins);
  if (s.level() < degree) throw LevelTooSmall(s.level(), degree);
  CoefficientTable ut, vt;
  for (const auto& b : *basins)
    for (std::size_t j = 0; j < b.vertices.size(); ++j) {
      ut.set(concat(b.u1[j], b.connector[j]), 1.0);
      vt.set(concat(b.u2[j], b.connector[j]), 1.0);
    }
  return detail::check_pair(s, std::move(ut), std::move(vt), true);
}

struct StandardFormTerm {
  std::size_t vertex = 0;
  std::vector<cplx> wandering;  // V xi_x
};

/// Partial isometry V in the algebra as sum_x L_{eta_x} with eta_x = V xi_x.
inline std::vector<StandardFormTerm> standard_form(const SparseOperator& v, const FockSpace& s,
                                                   double tol = kEntryTolerance) {
  require_in_algebra(v, s, tol);
  const auto& g = s.graph();
  const auto mask = s.safe_mask(2 * v.degree());
  const auto vv = v.adjoint() * v;
  if ((vv * vv - vv).restrict_columns(mask).max_abs() > tol)
    throw NotPartialIsometry("V^*V is not idempotent on safe levels");
  std::vector<StandardFormTerm> terms;
  SparseOperator rebuilt(s.dim()), initial(s.dim());
  for (std::size_t x = 0; x < g.vertex_count(); ++x) {
    auto eta = v.column(x);
    if (vector_norm(eta) <= tol) continue;
    for (auto& c : eta)
      if (std::abs(c) <= tol) c = {};
    rebuilt = rebuilt + make_creation_from_vector(s, Side::L, x, eta);
    initial = initial + range_projection(s, x);
    terms.push_back({x, std::move(eta)});
  }
  if ((rebuilt - v).restrict_columns(s.safe_mask(v.degree())).max_abs() > tol)
    throw NotPartialIsometry("V is not the sum of its wandering columns");
  if ((vv - initial).restrict_columns(mask).max_abs() > tol)
    throw NotPartialIsometry("initial projection is not a sum of vertex projections");
  return terms;
}

struct InnerOuter {
  std::vector<std::size_t> support;  // S = {x : A xi_x != 0}
  SparseOperator inner;              // V
  SparseOperator outer;              // B = V^* A
  std::vector<StandardFormTerm> wandering;
  double factor_residual = 0.0;      // |A - VB| on safe levels
  double initial_residual = 0.0;     // |V^*V - sum_S P_x| on safe levels
  std::size_t outer_rank = 0;        // rank of B on the safe corner
  std::size_t corner_dim = 0;
};

/// A = VB with V S-inner and B S-outer, from the range of A on side R.
inline InnerOuter inner_outer_factor(const SparseOperator& a, const FockSpace& s,
                                     double tol = kEntryTolerance) {
  require_in_algebra(a, s, tol);
  if (a.pruned(tol).is_zero()) throw Error("the zero operator has no inner-outer factorization");
  const auto& g = s.graph();
  InnerOuter out;
  for (std::size_t x = 0; x < g.vertex_count(); ++x)
    if (vector_norm(a.column(x)) > tol) out.support.push_back(x);

  std::vector<std::vector<cplx>> cols;
  for (std::size_t c = 0; c < s.dim(); ++c) {
    auto col = a.column(c);
    if (vector_norm(col) > tol) cols.push_back(std::move(col));
  }
  auto w = wandering_basis(s, cols, Side::R);
  SparseOperator v(s.dim());
  for (auto x : out.support) {
    const auto ax = a.column(x);
    std::vector<cplx> eta(s.dim());
    for (const auto& wv : w.basis) {
      if (wv.vertex != x) continue;
      const cplx c = inner(ax, wv.vector);
      for (std::size_t i = 0; i < s.dim(); ++i) eta[i] += c * wv.vector[i];
    }
    const double n = vector_norm(eta);
    if (n <= kRankTolerance) throw NotPartialIsometry("no wandering vector found at a support vertex");
    for (auto& c : eta) {
      c /= n;
      if (std::abs(c) <= tol) c = {};
    }
    v = v + make_creation_from_vector(s, Side::L, x, eta);
    out.wandering.push_back({x, std::move(eta)});
  }
  out.inner = v;
  out.outer = v.adjoint() * a;
  const auto mask = s.safe_mask(v.degree() + a.degree());
  out.factor_residual = (a - v * out.outer).restrict_columns(mask).max_abs();
  SparseOperator proj(s.dim());
  for (auto x : out.support) proj = proj + range_projection(s, x);
  out.initial_residual = (v.adjoint() * v - proj).restrict_columns(s.safe_mask(2 * v.degree())).max_abs();

  // Rank of B compressed to the support corner on safe levels.
  const auto safe = s.safe_mask(out.outer.degree());
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < s.dim(); ++i) {
    const auto r = s.path(i).rng;
    if (safe[i] && std::find(out.support.begin(), out.support.end(), r) != out.support.end())
      idx.push_back(i);
  }
  out.corner_dim = idx.size();
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = out.outer.at(idx[i], idx[j]);
  out.outer_rank = static_cast<std::size_t>(orthonormal_basis(m).cols());
  return out;
}

}  // namespace fsga

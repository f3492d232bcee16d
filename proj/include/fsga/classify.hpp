#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fsga/error.hpp"
#include "fsga/fock.hpp"
#include "fsga/fourier.hpp"
#include "fsga/graph.hpp"
#include "fsga/sparse.hpp"

namespace fsga {

/// rank(P_y E_1 Q_x) for every (y, x); rows are ranges, columns sources.
inline IntMatrix edge_rank_matrix(const FockSpace& s) {
  if (s.level() < 1) throw DimensionMismatch("edge ranks need truncation level >= 1");
  const auto n = s.graph().vertex_count();
  IntMatrix out(n, std::vector<std::int64_t>(n, 0));
  const auto e1 = level_projection(s, 1);
  for (std::size_t y = 0; y < n; ++y) {
    const auto py = range_projection(s, y) * e1;
    for (std::size_t x = 0; x < n; ++x) {
      // P_y E_1 Q_x selects basis vectors, so its rank is its nonzero count.
      out[y][x] = static_cast<std::int64_t>((py * source_projection(s, x)).nnz());
    }
  }
  return out;
}

/// A in the ideal of operators with A^* xi_x = 0 for every vertex x.
inline bool ideal_L0_membership(const SparseOperator& a, const FockSpace& s,
                                double tol = kEntryTolerance) {
  require_in_algebra(a, s, tol);
  const auto ad = a.adjoint();
  bool diagonal_zero = true, adjoint_zero = true;
  for (std::size_t x = 0; x < s.graph().vertex_count(); ++x) {
    if (std::abs(a.at(x, x)) > tol) diagonal_zero = false;
    for (const auto& e : ad.entries())
      if (e.col == x && std::abs(e.value) > tol) adjoint_zero = false;
  }
  if (diagonal_zero != adjoint_zero)
    throw Error("vacuum coefficient test and adjoint test disagree");
  return diagonal_zero;
}

/// Permutation xi_w -> xi_{phi(w)} from the space of G onto the space of G'.
inline SparseOperator intertwining_unitary(const FockSpace& s1, const FockSpace& s2,
                                           const GraphIsomorphism& iso) {
  if (!is_isomorphism(s1.graph(), s2.graph(), iso))
    throw InvalidGraph("maps are not a graph isomorphism");
  if (s1.level() != s2.level()) throw DimensionMismatch("truncation levels differ");
  std::vector<Entry> out;
  out.reserve(s1.dim());
  for (std::size_t i = 0; i < s1.dim(); ++i) {
    const Path& p = s1.path(i);
    Path q{iso.vertex_map[p.src], iso.vertex_map[p.rng], {}};
    for (auto e : p.edges) q.edges.push_back(iso.edge_map[e]);
    out.push_back({s2.index(q), i, 1.0});
  }
  return SparseOperator::from_entries(s1.dim(), std::move(out), 0);
}

/// max over generators of |U^* L'_{phi(e)} U - L_e| and |U^* P'_{phi(x)} U - P_x|.
inline double intertwining_residual(const FockSpace& s1, const FockSpace& s2,
                                    const GraphIsomorphism& iso, const SparseOperator& u) {
  const auto ua = u.adjoint();
  double r = 0.0;
  for (std::size_t e = 0; e < s1.graph().edge_count(); ++e)
    r = std::max(r, (ua * left_creation(s2, iso.edge_map[e]) * u - left_creation(s1, e)).max_abs());
  for (std::size_t x = 0; x < s1.graph().vertex_count(); ++x)
    r = std::max(
        r, (ua * range_projection(s2, iso.vertex_map[x]) * u - range_projection(s1, x)).max_abs());
  return r;
}

enum class Verdict { Isomorphic, Distinguished };

struct ClassificationVerdict {
  Verdict verdict = Verdict::Distinguished;
  std::optional<GraphIsomorphism> witness;
  double intertwining_residual = 0.0;
  std::string invariant;  // which invariant separated the graphs
};

inline std::vector<detail::VertexSignature> sorted_signatures(const DirectedMultigraph& g) {
  auto sig = detail::vertex_signatures(g, transition_matrix(g));
  std::sort(sig.begin(), sig.end());
  return sig;
}

inline ClassificationVerdict classify_pair(const DirectedMultigraph& g1,
                                           const DirectedMultigraph& g2, std::size_t level) {
  ClassificationVerdict v;
  if (g1.vertex_count() != g2.vertex_count()) {
    v.invariant = "vertex_count";
    return v;
  }
  if (g1.edge_count() != g2.edge_count()) {
    v.invariant = "edge_count";
    return v;
  }
  if (sorted_signatures(g1) != sorted_signatures(g2)) {
    v.invariant = "vertex_signatures";
    return v;
  }
  auto iso = find_isomorphism(g1, g2);
  if (!iso) {
    v.invariant = "transition_matrix";
    return v;
  }
  auto s1 = build_space(g1, level);
  auto s2 = build_space(g2, level);
  auto u = intertwining_unitary(s1, s2, *iso);
  v.verdict = Verdict::Isomorphic;
  v.intertwining_residual = intertwining_residual(s1, s2, *iso, u);
  v.witness = std::move(iso);
  return v;
}

}  // namespace fsga

#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

#include "fsga/fock.hpp"
#include "fsga/fourier.hpp"
#include "fsga/graph.hpp"
#include "fsga/sparse.hpp"

namespace fsga {

inline bool is_semisimple(const DirectedMultigraph& g) { return off_cycle_edges(g).empty(); }

/// Edges whose L_e generate the radical.
inline std::vector<std::size_t> radical_generators(const DirectedMultigraph& g) {
  return off_cycle_edges(g);
}

inline bool contains_off_cycle_edge(const Path& w, const std::vector<bool>& off_cycle) {
  return std::any_of(w.edges.begin(), w.edges.end(), [&](std::size_t e) { return off_cycle[e]; });
}

inline std::vector<bool> off_cycle_mask(const DirectedMultigraph& g) {
  std::vector<bool> mask(g.edge_count(), false);
  for (auto e : off_cycle_edges(g)) mask[e] = true;
  return mask;
}

/// True iff every nonzero Fourier coefficient sits on a path through B(G).
inline bool radical_membership(const SparseOperator& a, const FockSpace& s,
                               double tol = kEntryTolerance) {
  require_in_algebra(a, s, tol);
  const auto off = off_cycle_mask(s.graph());
  for (const auto& [w, c] : fourier_coefficients(a, s))
    if (std::abs(c) > tol && !contains_off_cycle_edge(w, off)) return false;
  return true;
}

struct TransitiveBlock {
  std::vector<std::size_t> vertices;
  std::vector<std::size_t> edges;
};

struct BlockDecomposition {
  std::vector<TransitiveBlock> blocks;
  std::vector<std::size_t> leftover;
  std::vector<std::optional<std::size_t>> block_of;  // per vertex
  std::vector<std::size_t> off_block_edges;
};

/// Maximally transitive components: strongly connected components with at
/// least one internal edge. Isolated loopless vertices are leftover.
inline BlockDecomposition block_decomposition(const DirectedMultigraph& g) {
  auto scc = strongly_connected_components(g);
  BlockDecomposition d;
  d.block_of.assign(g.vertex_count(), std::nullopt);
  std::vector<std::vector<std::size_t>> internal(scc.components.size());
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const auto& ed = g.edge(e);
    if (scc.component_of[ed.src] == scc.component_of[ed.dst])
      internal[scc.component_of[ed.src]].push_back(e);
    else
      d.off_block_edges.push_back(e);
  }
  for (std::size_t c = 0; c < scc.components.size(); ++c) {
    if (internal[c].empty()) {
      for (auto v : scc.components[c]) d.leftover.push_back(v);
      continue;
    }
    for (auto v : scc.components[c]) d.block_of[v] = d.blocks.size();
    d.blocks.push_back({scc.components[c], internal[c]});
  }
  std::sort(d.leftover.begin(), d.leftover.end());
  return d;
}

struct NilpotencyCertificate {
  std::size_t vertex_bound = 0;   // M = |V(G)|
  std::size_t component_bound = 0;  // #blocks + #leftover - 1
  std::size_t max_off_cycle = 0;  // most B(G) letters on any path of length <= scan
  std::size_t scan_length = 0;
  bool holds() const { return max_off_cycle < vertex_bound && max_off_cycle <= component_bound; }
};

/// Maximum count of off-cycle letters over paths of length <= scan_length,
/// by dynamic programming over (length, end vertex).
inline NilpotencyCertificate nilpotency_certificate(const DirectedMultigraph& g,
                                                    std::size_t scan_length) {
  const auto off = off_cycle_mask(g);
  std::vector<std::size_t> best(g.vertex_count(), 0);
  std::size_t overall = 0;
  for (std::size_t k = 1; k <= scan_length; ++k) {
    auto next = best;
    bool changed = false;
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      const auto& ed = g.edge(e);
      std::size_t cand = best[ed.src] + (off[e] ? 1 : 0);
      if (cand > next[ed.dst]) {
        next[ed.dst] = cand;
        changed = true;
      }
    }
    best = std::move(next);
    if (!changed) break;
  }
  for (auto b : best) overall = std::max(overall, b);
  auto blocks = block_decomposition(g);
  NilpotencyCertificate c;
  c.vertex_bound = g.vertex_count();
  c.component_bound = blocks.blocks.size() + blocks.leftover.size() - 1;
  c.max_off_cycle = overall;
  c.scan_length = scan_length;
  return c;
}

}  // namespace fsga

#pragma once

// Independent reference computations for the test suite. Nothing here calls
// into the library's graph algorithms or path tables.

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <cstddef>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "fsga/fock.hpp"
#include "fsga/graph.hpp"
#include "fsga/path.hpp"

namespace oracle {

using fsga::DirectedMultigraph;
using cplx = std::complex<double>;

struct Word {
  std::size_t src;
  std::vector<std::size_t> edges;  // first-applied-first
};

inline std::size_t word_range(const DirectedMultigraph& g, const Word& w) {
  return w.edges.empty() ? w.src : g.edge(w.edges.back()).dst;
}

/// Every admissible word of length <= n, by depth-first search.
inline std::vector<Word> all_words(const DirectedMultigraph& g, std::size_t n) {
  std::vector<Word> out;
  std::function<void(Word)> grow = [&](Word w) {
    out.push_back(w);
    if (w.edges.size() == n) return;
    for (std::size_t e = 0; e < g.edge_count(); ++e)
      if (g.edge(e).src == word_range(g, w)) {
        Word next = w;
        next.edges.push_back(e);
        grow(next);
      }
  };
  for (std::size_t v = 0; v < g.vertex_count(); ++v) grow(Word{v, {}});
  return out;
}

inline fsga::Path to_path(const DirectedMultigraph& g, const Word& w) {
  return fsga::Path{w.src, word_range(g, w), w.edges};
}

/// Dense L_w (side L: xi_v -> xi_{wv}) or R_w (xi_v -> xi_{vw}) in the
/// library's basis order, built word by word.
inline Eigen::MatrixXcd dense_word(const fsga::FockSpace& s, const Word& w, bool left) {
  const auto& g = s.graph();
  const auto n = static_cast<Eigen::Index>(s.dim());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  const auto wr = word_range(g, w);
  for (const auto& v : all_words(g, s.level())) {
    const auto vr = word_range(g, v);
    Word joined;
    if (left) {
      if (w.src != vr) continue;
      joined = {v.src, v.edges};
      joined.edges.insert(joined.edges.end(), w.edges.begin(), w.edges.end());
    } else {
      if (v.src != wr) continue;
      joined = {w.src, w.edges};
      joined.edges.insert(joined.edges.end(), v.edges.begin(), v.edges.end());
    }
    if (joined.edges.size() > s.level()) continue;
    m(static_cast<Eigen::Index>(s.index(to_path(g, joined))),
      static_cast<Eigen::Index>(s.index(to_path(g, v)))) = 1.0;
  }
  return m;
}

/// reach[a][b]: b reachable from a by a path of length >= 0 (Warshall).
inline std::vector<std::vector<bool>> reachability(const DirectedMultigraph& g) {
  const auto n = g.vertex_count();
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
  for (std::size_t v = 0; v < n; ++v) r[v][v] = true;
  for (const auto& e : g.edges()) r[e.src][e.dst] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (r[i][k] && r[k][j]) r[i][j] = true;
  return r;
}

/// Edge on a cycle iff its target reaches its source.
inline std::vector<std::size_t> off_cycle(const DirectedMultigraph& g) {
  auto r = reachability(g);
  std::vector<std::size_t> out;
  for (std::size_t e = 0; e < g.edge_count(); ++e)
    if (!r[g.edge(e).dst][g.edge(e).src]) out.push_back(e);
  return out;
}

inline std::vector<std::vector<long>> multiplicity(const DirectedMultigraph& g) {
  const auto n = g.vertex_count();
  std::vector<std::vector<long>> a(n, std::vector<long>(n, 0));
  for (const auto& e : g.edges()) a[e.dst][e.src] += 1;
  return a;
}

/// Isomorphic iff some vertex permutation preserves all multiplicities.
inline bool isomorphic(const DirectedMultigraph& g1, const DirectedMultigraph& g2) {
  if (g1.vertex_count() != g2.vertex_count() || g1.edge_count() != g2.edge_count()) return false;
  const auto a = multiplicity(g1);
  const auto b = multiplicity(g2);
  std::vector<std::size_t> p(g1.vertex_count());
  std::iota(p.begin(), p.end(), 0);
  do {
    bool ok = true;
    for (std::size_t i = 0; i < p.size() && ok; ++i)
      for (std::size_t j = 0; j < p.size() && ok; ++j) ok = a[i][j] == b[p[i]][p[j]];
    if (ok) return true;
  } while (std::next_permutation(p.begin(), p.end()));
  return false;
}

/// Vertex with two distinct first-return cycles: count first-return
/// cycles of length <= bound by brute force.
inline std::size_t first_return_count(const DirectedMultigraph& g, std::size_t x,
                                      std::size_t bound) {
  std::size_t count = 0;
  std::function<void(std::size_t, std::size_t)> walk = [&](std::size_t at, std::size_t len) {
    if (len == bound) return;
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      if (g.edge(e).src != at) continue;
      if (g.edge(e).dst == x)
        ++count;
      else
        walk(g.edge(e).dst, len + 1);
    }
  };
  walk(x, 0);
  return count;
}

/// Random multigraph on n vertices with m edges, labels v0.., a0...
inline DirectedMultigraph random_graph(std::mt19937& rng, std::size_t n, std::size_t m) {
  std::vector<std::string> vs;
  for (std::size_t i = 0; i < n; ++i) vs.push_back("v" + std::to_string(i));
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<fsga::EdgeSpec> es;
  for (std::size_t i = 0; i < m; ++i)
    es.push_back({"a" + std::to_string(i), vs[pick(rng)], vs[pick(rng)]});
  return DirectedMultigraph(vs, es);
}

/// Same graph with vertices and edges relabelled and reordered.
inline DirectedMultigraph shuffled(std::mt19937& rng, const DirectedMultigraph& g) {
  std::vector<std::size_t> vp(g.vertex_count()), ep(g.edge_count());
  std::iota(vp.begin(), vp.end(), 0);
  std::iota(ep.begin(), ep.end(), 0);
  std::shuffle(vp.begin(), vp.end(), rng);
  std::shuffle(ep.begin(), ep.end(), rng);
  std::vector<std::string> vs(g.vertex_count());
  for (std::size_t i = 0; i < vp.size(); ++i) vs[vp[i]] = "w" + std::to_string(i);
  std::vector<fsga::EdgeSpec> es;
  for (std::size_t i = 0; i < ep.size(); ++i) {
    const auto& e = g.edge(ep[i]);
    es.push_back({"b" + std::to_string(i), vs[vp[e.src]], vs[vp[e.dst]]});
  }
  return DirectedMultigraph(vs, es);
}

inline cplx random_complex(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return {u(rng), u(rng)};
}

}  // namespace oracle

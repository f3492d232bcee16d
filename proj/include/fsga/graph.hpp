#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "fsga/error.hpp"

namespace fsga {

using IntMatrix = std::vector<std::vector<std::int64_t>>;

struct Edge {
  std::string label;
  std::size_t src;  // s(e)
  std::size_t dst;  // r(e)
};

// Edge given by vertex labels, used when building graphs from text.
struct EdgeSpec {
  std::string label;
  std::string src;
  std::string dst;
};

inline bool is_valid_label(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
  });
}

/// Finite directed multigraph. Loops and parallel edges are allowed; vertex
/// and edge labels are unique and drawn from [A-Za-z0-9_]+. Vertices and
/// edges keep their input order, which fixes every deterministic tie-break.
class DirectedMultigraph {
 public:
  DirectedMultigraph(std::vector<std::string> vertices, std::vector<Edge> edges)
      : vertices_(std::move(vertices)), edges_(std::move(edges)) {
    validate();
  }

  DirectedMultigraph(std::vector<std::string> vertices, const std::vector<EdgeSpec>& edges)
      : vertices_(std::move(vertices)) {
    index_vertices();
    edges_.reserve(edges.size());
    for (const auto& e : edges) {
      auto s = vertex_index(e.src);
      auto d = vertex_index(e.dst);
      if (!s) throw InvalidGraph("edge '" + e.label + "' has unknown source '" + e.src + "'");
      if (!d) throw InvalidGraph("edge '" + e.label + "' has unknown target '" + e.dst + "'");
      edges_.push_back({e.label, *s, *d});
    }
    validate();
  }

  std::size_t vertex_count() const noexcept { return vertices_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<std::string>& vertices() const noexcept { return vertices_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::string& vertex_label(std::size_t v) const { return vertices_.at(v); }
  const Edge& edge(std::size_t e) const { return edges_.at(e); }

  std::optional<std::size_t> vertex_index(const std::string& label) const {
    auto it = vertex_lookup_.find(label);
    if (it == vertex_lookup_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<std::size_t> edge_index(const std::string& label) const {
    auto it = edge_lookup_.find(label);
    if (it == edge_lookup_.end()) return std::nullopt;
    return it->second;
  }
  std::size_t require_vertex(const std::string& label) const {
    auto v = vertex_index(label);
    if (!v) throw UnknownLabel(label);
    return *v;
  }
  std::size_t require_edge(const std::string& label) const {
    auto e = edge_index(label);
    if (!e) throw UnknownLabel(label);
    return *e;
  }

  // Edges leaving / entering v, in edge order.
  const std::vector<std::size_t>& out_edges(std::size_t v) const { return out_.at(v); }
  const std::vector<std::size_t>& in_edges(std::size_t v) const { return in_.at(v); }

  bool operator==(const DirectedMultigraph& o) const {
    if (vertices_ != o.vertices_ || edges_.size() != o.edges_.size()) return false;
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      const auto& a = edges_[i];
      const auto& b = o.edges_[i];
      if (a.label != b.label || a.src != b.src || a.dst != b.dst) return false;
    }
    return true;
  }

 private:
  void index_vertices() {
    vertex_lookup_.clear();
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      if (!is_valid_label(vertices_[i]))
        throw InvalidGraph("invalid vertex label '" + vertices_[i] + "'");
      if (!vertex_lookup_.emplace(vertices_[i], i).second)
        throw InvalidGraph("duplicate vertex label '" + vertices_[i] + "'");
    }
  }

  void validate() {
    if (vertices_.empty()) throw InvalidGraph("graph needs at least one vertex");
    index_vertices();
    edge_lookup_.clear();
    out_.assign(vertices_.size(), {});
    in_.assign(vertices_.size(), {});
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      const auto& e = edges_[i];
      if (!is_valid_label(e.label)) throw InvalidGraph("invalid edge label '" + e.label + "'");
      if (vertex_lookup_.count(e.label))
        throw InvalidGraph("label '" + e.label + "' used for both a vertex and an edge");
      if (!edge_lookup_.emplace(e.label, i).second)
        throw InvalidGraph("duplicate edge label '" + e.label + "'");
      if (e.src >= vertices_.size() || e.dst >= vertices_.size())
        throw InvalidGraph("edge '" + e.label + "' names a missing vertex");
      out_[e.src].push_back(i);
      in_[e.dst].push_back(i);
    }
  }

  std::vector<std::string> vertices_;
  std::vector<Edge> edges_;
  std::unordered_map<std::string, std::size_t> vertex_lookup_;
  std::unordered_map<std::string, std::size_t> edge_lookup_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> in_;
};

/// Entry (y, x) counts edges from x to y, i.e. rows are ranges and columns
/// are sources.
inline IntMatrix transition_matrix(const DirectedMultigraph& g) {
  const std::size_t n = g.vertex_count();
  IntMatrix a(n, std::vector<std::int64_t>(n, 0));
  for (const auto& e : g.edges()) ++a[e.dst][e.src];
  return a;
}

inline IntMatrix transpose(const IntMatrix& a) {
  IntMatrix t(a.empty() ? 0 : a[0].size(), std::vector<std::int64_t>(a.size(), 0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
  return t;
}

// Edge e^t keeps the label and index of e; only the direction flips.
inline DirectedMultigraph transpose(const DirectedMultigraph& g) {
  std::vector<Edge> edges;
  edges.reserve(g.edge_count());
  for (const auto& e : g.edges()) edges.push_back({e.label, e.dst, e.src});
  return DirectedMultigraph(g.vertices(), std::move(edges));
}

struct SccPartition {
  std::vector<std::vector<std::size_t>> components;  // sorted, ordered by smallest member
  std::vector<std::size_t> component_of;             // vertex -> component index
};

// Iterative Tarjan; components renumbered by their smallest vertex.
inline SccPartition strongly_connected_components(const DirectedMultigraph& g) {
  const std::size_t n = g.vertex_count();
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnset), low(n, 0), raw(n, kUnset);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::size_t counter = 0, ncomp = 0;

  struct Frame {
    std::size_t v;
    std::size_t next;
  };
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnset) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& f = call.back();
      const auto& outs = g.out_edges(f.v);
      if (f.next < outs.size()) {
        std::size_t w = g.edge(outs[f.next++]).dst;
        if (index[w] == kUnset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      std::size_t v = f.v;
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      if (low[v] == index[v]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          raw[w] = ncomp;
        } while (w != v);
        ++ncomp;
      }
    }
  }

  std::vector<std::size_t> smallest(ncomp, n);
  for (std::size_t v = 0; v < n; ++v) smallest[raw[v]] = std::min(smallest[raw[v]], v);
  std::vector<std::size_t> order(ncomp);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return smallest[a] < smallest[b]; });
  std::vector<std::size_t> rank(ncomp);
  for (std::size_t i = 0; i < ncomp; ++i) rank[order[i]] = i;

  SccPartition p;
  p.components.assign(ncomp, {});
  p.component_of.assign(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    p.component_of[v] = rank[raw[v]];
    p.components[rank[raw[v]]].push_back(v);
  }
  return p;
}

/// B(G): edges lying on no cycle, i.e. whose endpoints sit in different
/// strongly connected components. Sorted edge indices.
inline std::vector<std::size_t> off_cycle_edges(const DirectedMultigraph& g) {
  auto scc = strongly_connected_components(g);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    const auto& e = g.edge(i);
    if (scc.component_of[e.src] != scc.component_of[e.dst]) out.push_back(i);
  }
  return out;
}

/// Shortest path from `from` to `to` by BFS, ties broken by edge order.
/// Edges are listed first-applied-first. Length-0 path when from == to.
inline std::optional<std::vector<std::size_t>> shortest_path(const DirectedMultigraph& g,
                                                             std::size_t from, std::size_t to) {
  if (from == to) return std::vector<std::size_t>{};
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> via(g.vertex_count(), kUnset);
  std::vector<bool> seen(g.vertex_count(), false);
  std::deque<std::size_t> queue{from};
  seen[from] = true;
  while (!queue.empty()) {
    auto v = queue.front();
    queue.pop_front();
    for (auto e : g.out_edges(v)) {
      auto w = g.edge(e).dst;
      if (seen[w]) continue;
      seen[w] = true;
      via[w] = e;
      if (w == to) {
        std::vector<std::size_t> path;
        for (auto cur = to; cur != from; cur = g.edge(via[cur]).src) path.push_back(via[cur]);
        std::reverse(path.begin(), path.end());
        return path;
      }
      queue.push_back(w);
    }
  }
  return std::nullopt;
}

// Vertices in strongly connected components with more internal edges than
// vertices. Exactly these vertices carry two distinct minimal cycles.
inline std::vector<bool> double_cycle_vertices(const DirectedMultigraph& g) {
  auto scc = strongly_connected_components(g);
  std::vector<std::size_t> internal(scc.components.size(), 0);
  for (const auto& e : g.edges())
    if (scc.component_of[e.src] == scc.component_of[e.dst]) ++internal[scc.component_of[e.src]];
  std::vector<bool> out(g.vertex_count(), false);
  for (std::size_t c = 0; c < scc.components.size(); ++c)
    if (internal[c] > scc.components[c].size())
      for (auto v : scc.components[c]) out[v] = true;
  return out;
}

/// First-return cycles at x (x appears only at both ends), shortest first,
/// then lexicographic in edge order. Such cycles are minimal and no one of
/// them is a prefix of another. Search stops at `count` cycles or length
/// `max_length`.
inline std::vector<std::vector<std::size_t>> first_return_cycles(const DirectedMultigraph& g,
                                                                 std::size_t x, std::size_t count,
                                                                 std::size_t max_length) {
  std::vector<std::vector<std::size_t>> found;
  std::vector<std::size_t> walk;
  // Depth-limited DFS per length keeps the output ordered by length.
  auto dfs = [&](auto&& self, std::size_t v, std::size_t remaining) -> void {
    if (found.size() >= count) return;
    for (auto e : g.out_edges(v)) {
      auto w = g.edge(e).dst;
      walk.push_back(e);
      if (w == x) {
        if (remaining == 1) found.push_back(walk);
      } else if (remaining > 1) {
        self(self, w, remaining - 1);
      }
      walk.pop_back();
      if (found.size() >= count) return;
    }
  };
  for (std::size_t len = 1; len <= max_length && found.size() < count; ++len) dfs(dfs, x, len);
  return found;
}

struct DoubleCycle {
  std::size_t vertex;
  std::vector<std::size_t> first;   // edges, first-applied-first
  std::vector<std::size_t> second;
};

inline std::optional<DoubleCycle> double_cycle_at(const DirectedMultigraph& g, std::size_t x) {
  if (!double_cycle_vertices(g)[x]) return std::nullopt;
  auto cycles = first_return_cycles(g, x, 2, 2 * g.edge_count());
  if (cycles.size() < 2) return std::nullopt;
  return DoubleCycle{x, cycles[0], cycles[1]};
}

/// Witness of the double-cycle property at the first qualifying vertex.
inline std::optional<DoubleCycle> has_double_cycle(const DirectedMultigraph& g) {
  auto marks = double_cycle_vertices(g);
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    if (marks[v]) return double_cycle_at(g, v);
  return std::nullopt;
}

struct StrongDoubleCycleReport {
  bool holds = false;
  // Per vertex: path into a double-cycle vertex (empty when already on one).
  std::vector<std::optional<std::vector<std::size_t>>> witness;
  std::vector<std::size_t> failing;
};

inline StrongDoubleCycleReport has_strong_double_cycle(const DirectedMultigraph& g) {
  auto marks = double_cycle_vertices(g);
  StrongDoubleCycleReport r;
  r.witness.resize(g.vertex_count());
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (marks[v]) {
      r.witness[v] = std::vector<std::size_t>{};
      continue;
    }
    // Multi-target BFS: nearest double-cycle vertex, ties by edge order.
    std::vector<std::size_t> via(g.vertex_count(), static_cast<std::size_t>(-1));
    std::vector<bool> seen(g.vertex_count(), false);
    std::deque<std::size_t> queue{v};
    seen[v] = true;
    std::optional<std::size_t> hit;
    while (!queue.empty() && !hit) {
      auto u = queue.front();
      queue.pop_front();
      for (auto e : g.out_edges(u)) {
        auto w = g.edge(e).dst;
        if (seen[w]) continue;
        seen[w] = true;
        via[w] = e;
        if (marks[w]) {
          hit = w;
          break;
        }
        queue.push_back(w);
      }
    }
    if (!hit) {
      r.failing.push_back(v);
      continue;
    }
    std::vector<std::size_t> path;
    for (auto cur = *hit; cur != v; cur = g.edge(via[cur]).src) path.push_back(via[cur]);
    std::reverse(path.begin(), path.end());
    r.witness[v] = std::move(path);
  }
  r.holds = r.failing.empty();
  if (!r.holds) r.witness.assign(g.vertex_count(), std::nullopt);
  return r;
}

/// Vertices from which `target` is reachable (including target).
inline std::vector<bool> reaches(const DirectedMultigraph& g, std::size_t target) {
  std::vector<bool> seen(g.vertex_count(), false);
  std::deque<std::size_t> queue{target};
  seen[target] = true;
  while (!queue.empty()) {
    auto v = queue.front();
    queue.pop_front();
    for (auto e : g.in_edges(v)) {
      auto u = g.edge(e).src;
      if (!seen[u]) {
        seen[u] = true;
        queue.push_back(u);
      }
    }
  }
  return seen;
}

/// G1 and G2 glued at x1 ~ x2. Labels get a "g1_" / "g2_" prefix; the glued
/// vertex keeps the G1 name. Vertex order: G1's, then G2's without x2.
inline DirectedMultigraph amalgamate(const DirectedMultigraph& g1, const DirectedMultigraph& g2,
                                     const std::string& x1, const std::string& x2) {
  auto v1 = g1.require_vertex(x1);
  auto v2 = g2.require_vertex(x2);
  std::vector<std::string> vertices;
  for (const auto& v : g1.vertices()) vertices.push_back("g1_" + v);
  std::vector<std::size_t> map2(g2.vertex_count());
  for (std::size_t v = 0; v < g2.vertex_count(); ++v) {
    if (v == v2) {
      map2[v] = v1;
    } else {
      map2[v] = vertices.size();
      vertices.push_back("g2_" + g2.vertex_label(v));
    }
  }
  std::vector<Edge> edges;
  for (const auto& e : g1.edges()) edges.push_back({"g1_" + e.label, e.src, e.dst});
  for (const auto& e : g2.edges()) edges.push_back({"g2_" + e.label, map2[e.src], map2[e.dst]});
  return DirectedMultigraph(std::move(vertices), std::move(edges));
}

struct GraphIsomorphism {
  std::vector<std::size_t> vertex_map;  // G1 vertex -> G2 vertex
  std::vector<std::size_t> edge_map;    // G1 edge -> G2 edge
};

namespace detail {

struct VertexSignature {
  std::int64_t in_degree, out_degree, loops;
  std::size_t scc_size;
  bool operator==(const VertexSignature&) const = default;
  auto operator<=>(const VertexSignature&) const = default;
};

inline std::vector<VertexSignature> vertex_signatures(const DirectedMultigraph& g,
                                                      const IntMatrix& a) {
  auto scc = strongly_connected_components(g);
  std::vector<VertexSignature> sig(g.vertex_count());
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    sig[v].in_degree = static_cast<std::int64_t>(g.in_edges(v).size());
    sig[v].out_degree = static_cast<std::int64_t>(g.out_edges(v).size());
    sig[v].loops = a[v][v];
    sig[v].scc_size = scc.components[scc.component_of[v]].size();
  }
  return sig;
}

}  // namespace detail

/// Backtracking search for a vertex bijection preserving all edge
/// multiplicities; candidates pruned by (in, out, loops, SCC size). Parallel
/// edges are matched in edge order. Returns the first witness found.
inline std::optional<GraphIsomorphism> find_isomorphism(const DirectedMultigraph& g1,
                                                        const DirectedMultigraph& g2) {
  const std::size_t n = g1.vertex_count();
  if (n != g2.vertex_count() || g1.edge_count() != g2.edge_count()) return std::nullopt;
  auto a1 = transition_matrix(g1);
  auto a2 = transition_matrix(g2);
  auto s1 = detail::vertex_signatures(g1, a1);
  auto s2 = detail::vertex_signatures(g2, a2);
  {
    auto t1 = s1, t2 = s2;
    std::sort(t1.begin(), t1.end());
    std::sort(t2.begin(), t2.end());
    if (t1 != t2) return std::nullopt;
  }

  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> map(n, kUnset);
  std::vector<bool> used(n, false);
  auto extend = [&](auto&& self, std::size_t v) -> bool {
    if (v == n) return true;
    for (std::size_t c = 0; c < n; ++c) {
      if (used[c] || !(s1[v] == s2[c])) continue;
      bool ok = true;
      for (std::size_t u = 0; u < v && ok; ++u)
        ok = a1[v][u] == a2[c][map[u]] && a1[u][v] == a2[map[u]][c];
      if (!ok) continue;
      map[v] = c;
      used[c] = true;
      if (self(self, v + 1)) return true;
      used[c] = false;
      map[v] = kUnset;
    }
    return false;
  };
  if (!extend(extend, 0)) return std::nullopt;

  GraphIsomorphism iso;
  iso.vertex_map = map;
  iso.edge_map.assign(g1.edge_count(), kUnset);
  std::vector<bool> taken(g2.edge_count(), false);
  for (std::size_t e = 0; e < g1.edge_count(); ++e) {
    const auto& ed = g1.edge(e);
    for (auto f : g2.out_edges(map[ed.src])) {
      if (!taken[f] && g2.edge(f).dst == map[ed.dst]) {
        iso.edge_map[e] = f;
        taken[f] = true;
        break;
      }
    }
  }
  return iso;
}

/// True iff the maps preserve sources and ranges and are bijective.
inline bool is_isomorphism(const DirectedMultigraph& g1, const DirectedMultigraph& g2,
                           const GraphIsomorphism& iso) {
  if (iso.vertex_map.size() != g1.vertex_count() || iso.edge_map.size() != g1.edge_count())
    return false;
  if (g1.vertex_count() != g2.vertex_count() || g1.edge_count() != g2.edge_count()) return false;
  std::vector<bool> hit_v(g2.vertex_count(), false), hit_e(g2.edge_count(), false);
  for (auto v : iso.vertex_map) {
    if (v >= g2.vertex_count() || hit_v[v]) return false;
    hit_v[v] = true;
  }
  for (std::size_t e = 0; e < g1.edge_count(); ++e) {
    auto f = iso.edge_map[e];
    if (f >= g2.edge_count() || hit_e[f]) return false;
    hit_e[f] = true;
    if (g2.edge(f).src != iso.vertex_map[g1.edge(e).src]) return false;
    if (g2.edge(f).dst != iso.vertex_map[g1.edge(e).dst]) return false;
  }
  return true;
}

}  // namespace fsga

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fsga/error.hpp"
#include "fsga/graph.hpp"
#include "fsga/types.hpp"

namespace fsga {

/// Element of the free semigroupoid: a vertex (length 0) or an admissible
/// edge sequence. `edges` is stored first-applied-first, so the display
/// "e3.e2.e1" is edges = {e1, e2, e3}.
struct Path {
  std::size_t src = 0;  // s(w)
  std::size_t rng = 0;  // r(w)
  std::vector<std::size_t> edges;

  static Path vertex(std::size_t v) { return Path{v, v, {}}; }

  std::size_t length() const noexcept { return edges.size(); }
  bool is_vertex() const noexcept { return edges.empty(); }

  bool operator==(const Path& o) const {
    return src == o.src && rng == o.rng && edges == o.edges;
  }
  // Canonical order: length, then vertex index for vertices, then
  // lexicographic edge indices first-applied-first.
  bool operator<(const Path& o) const {
    if (edges.size() != o.edges.size()) return edges.size() < o.edges.size();
    if (edges.empty()) return src < o.src;
    return edges < o.edges;
  }
};

struct PathHash {
  std::size_t operator()(const Path& p) const noexcept {
    std::size_t h = std::hash<std::size_t>{}(p.src) * 0x9e3779b97f4a7c15ULL;
    for (auto e : p.edges) h = (h ^ (e + 0x7f4a7c15ULL)) * 0x100000001b3ULL;
    return h;
  }
};

inline Path edge_path(const DirectedMultigraph& g, std::size_t e) {
  return Path{g.edge(e).src, g.edge(e).dst, {e}};
}

/// Builds a path from edges listed first-applied-first, checking
/// admissibility. An empty list needs an explicit vertex.
inline Path make_path(const DirectedMultigraph& g, const std::vector<std::size_t>& edges) {
  if (edges.empty()) throw InadmissiblePath("empty edge list has no vertex");
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    if (g.edge(edges[i + 1]).src != g.edge(edges[i]).dst)
      throw InadmissiblePath("edge '" + g.edge(edges[i + 1]).label + "' cannot follow '" +
                             g.edge(edges[i]).label + "'");
  return Path{g.edge(edges.front()).src, g.edge(edges.back()).dst, edges};
}

inline bool is_admissible(const DirectedMultigraph& g, const Path& p) {
  if (p.src >= g.vertex_count() || p.rng >= g.vertex_count()) return false;
  if (p.edges.empty()) return p.src == p.rng;
  if (g.edge(p.edges.front()).src != p.src || g.edge(p.edges.back()).dst != p.rng) return false;
  for (std::size_t i = 0; i + 1 < p.edges.size(); ++i)
    if (g.edge(p.edges[i + 1]).src != g.edge(p.edges[i]).dst) return false;
  return true;
}

/// wv: v is applied first, then w. Vertices act as units.
inline Path concat(const Path& w, const Path& v) {
  if (w.src != v.rng) throw InadmissiblePath("cannot concatenate: s(w) != r(v)");
  Path out{v.src, w.rng, v.edges};
  out.edges.insert(out.edges.end(), w.edges.begin(), w.edges.end());
  return out;
}

/// Leftmost letter applied last; bare vertex label for vertices.
inline std::string display(const DirectedMultigraph& g, const Path& p) {
  if (p.is_vertex()) return g.vertex_label(p.src);
  std::string out;
  for (auto it = p.edges.rbegin(); it != p.edges.rend(); ++it) {
    if (!out.empty()) out += '.';
    out += g.edge(*it).label;
  }
  return out;
}

inline Path parse_path(const DirectedMultigraph& g, std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t start = 0;
  while (true) {
    auto dot = text.find('.', start);
    tokens.emplace_back(text.substr(start, dot == std::string_view::npos ? dot : dot - start));
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  if (tokens.size() == 1) {
    if (auto v = g.vertex_index(tokens[0])) return Path::vertex(*v);
  }
  std::vector<std::size_t> edges;
  for (auto it = tokens.rbegin(); it != tokens.rend(); ++it) edges.push_back(g.require_edge(*it));
  return make_path(g, edges);
}

/// w(lambda): product of lambda_e over the letters of w; vertices give 1.
/// Edges beyond the weight vector read as 0.
inline cplx path_eval(const Path& w, const std::vector<cplx>& lambda) {
  cplx out{1.0, 0.0};
  for (auto e : w.edges) out *= e < lambda.size() ? lambda[e] : cplx{};
  return out;
}

namespace detail {

inline std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return a > std::numeric_limits<std::uint64_t>::max() - b
             ? std::numeric_limits<std::uint64_t>::max()
             : a + b;
}

inline std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  return a > std::numeric_limits<std::uint64_t>::max() / b
             ? std::numeric_limits<std::uint64_t>::max()
             : a * b;
}

}  // namespace detail

/// Number of paths of length k for k = 0..level (saturating).
inline std::vector<std::uint64_t> path_counts(const DirectedMultigraph& g, std::size_t level) {
  const auto n = g.vertex_count();
  std::vector<std::uint64_t> ending(n, 1), counts{n};
  for (std::size_t k = 1; k <= level; ++k) {
    std::vector<std::uint64_t> next(n, 0);
    for (const auto& e : g.edges()) next[e.dst] = detail::saturating_add(next[e.dst], ending[e.src]);
    ending = std::move(next);
    std::uint64_t total = 0;
    for (auto c : ending) total = detail::saturating_add(total, c);
    counts.push_back(total);
  }
  return counts;
}

inline constexpr std::uint64_t kDefaultBasisCap = 20'000'000;
inline constexpr std::uint64_t kBasisWarnThreshold = 2'000'000;

/// All paths of length <= level in canonical order, with index lookup and
/// one-letter extension tables used to assemble creation operators.
class PathTable {
 public:
  PathTable(DirectedMultigraph graph, std::size_t level, std::uint64_t cap = kDefaultBasisCap)
      : graph_(std::make_shared<const DirectedMultigraph>(std::move(graph))), level_(level) {
    std::uint64_t total = 0;
    for (auto c : path_counts(*graph_, level)) total = detail::saturating_add(total, c);
    if (total > cap)
      throw SizeCapExceeded("basis of " + std::to_string(total) + " paths exceeds cap " +
                            std::to_string(cap));
    build(static_cast<std::size_t>(total));
  }

  const DirectedMultigraph& graph() const noexcept { return *graph_; }
  std::size_t level() const noexcept { return level_; }
  std::size_t size() const noexcept { return paths_.size(); }
  const std::vector<Path>& paths() const noexcept { return paths_; }
  const Path& path(std::size_t i) const { return paths_.at(i); }
  std::size_t length(std::size_t i) const { return paths_[i].edges.size(); }
  // [level_begin(k), level_begin(k+1)) holds the length-k paths.
  std::size_t level_begin(std::size_t k) const {
    return k <= level_ ? level_start_[k] : paths_.size();
  }

  std::optional<std::size_t> index(const Path& p) const {
    auto it = lookup_.find(p);
    if (it == lookup_.end()) return std::nullopt;
    return it->second;
  }
  std::size_t vertex_index(std::size_t v) const { return v; }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  // Index of e.w (e applied after w), or npos if inadmissible or above level.
  std::size_t extend_last(std::size_t w, std::size_t e) const { return last_[w * ne_ + e]; }
  // Index of w.e (e applied before w), or npos.
  std::size_t extend_first(std::size_t w, std::size_t e) const { return first_[w * ne_ + e]; }

 private:
  void build(std::size_t total) {
    const auto& g = *graph_;
    ne_ = g.edge_count();
    paths_.reserve(total);
    for (std::size_t v = 0; v < g.vertex_count(); ++v) paths_.push_back(Path::vertex(v));
    level_start_.push_back(0);
    std::size_t prev_begin = 0;
    for (std::size_t k = 1; k <= level_; ++k) {
      std::size_t prev_end = paths_.size();
      level_start_.push_back(prev_end);
      if (k == 1) {
        for (std::size_t e = 0; e < ne_; ++e) paths_.push_back(edge_path(g, e));
        prev_begin = prev_end;
        continue;
      }
      for (std::size_t i = prev_begin; i < prev_end; ++i) {
        const std::size_t r = paths_[i].rng;
        for (auto e : g.out_edges(r)) {
          Path p = paths_[i];
          p.edges.push_back(e);
          p.rng = g.edge(e).dst;
          paths_.push_back(std::move(p));
        }
      }
      prev_begin = prev_end;
    }
    level_start_.push_back(paths_.size());
    lookup_.reserve(paths_.size());
    for (std::size_t i = 0; i < paths_.size(); ++i) lookup_.emplace(paths_[i], i);

    last_.assign(paths_.size() * ne_, npos);
    first_.assign(paths_.size() * ne_, npos);
    for (std::size_t i = 0; i < paths_.size(); ++i) {
      const auto& p = paths_[i];
      if (p.edges.empty()) continue;
      // Parent without the last-applied letter.
      Path head = p;
      head.edges.pop_back();
      head.rng = head.edges.empty() ? head.src : g.edge(head.edges.back()).dst;
      last_[lookup_.at(head) * ne_ + p.edges.back()] = i;
      // Parent without the first-applied letter.
      Path tail{g.edge(p.edges.front()).dst, p.rng,
                std::vector<std::size_t>(p.edges.begin() + 1, p.edges.end())};
      first_[lookup_.at(tail) * ne_ + p.edges.front()] = i;
    }
  }

  std::shared_ptr<const DirectedMultigraph> graph_;
  std::size_t level_;
  std::size_t ne_ = 0;
  std::vector<Path> paths_;
  std::vector<std::size_t> level_start_;
  std::unordered_map<Path, std::size_t, PathHash> lookup_;
  std::vector<std::size_t> last_;
  std::vector<std::size_t> first_;
};

inline PathTable enumerate_paths(const DirectedMultigraph& g, std::size_t level) {
  return PathTable(g, level);
}

}  // namespace fsga

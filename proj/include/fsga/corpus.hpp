#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "fsga/error.hpp"
#include "fsga/graph.hpp"

namespace fsga::corpus {

/// One vertex x with n loops e, f, g, h (then e5, e6, ... past four).
inline DirectedMultigraph loops(std::size_t n) {
  static const char* names[] = {"e", "f", "g", "h"};
  std::vector<EdgeSpec> edges;
  for (std::size_t i = 0; i < n; ++i)
    edges.push_back({n <= 4 ? names[i] : "e" + std::to_string(i + 1), "x", "x"});
  return DirectedMultigraph({"x"}, edges);
}

/// C_n: vertices x1..xn, e_i from x_i to x_{i+1}, e_n from x_n back to x1.
inline DirectedMultigraph cycle(std::size_t n) {
  if (n == 0) throw InvalidGraph("cycle needs at least one vertex");
  std::vector<std::string> vertices;
  std::vector<EdgeSpec> edges;
  for (std::size_t i = 1; i <= n; ++i) vertices.push_back("x" + std::to_string(i));
  for (std::size_t i = 1; i <= n; ++i)
    edges.push_back({"e" + std::to_string(i), "x" + std::to_string(i),
                     "x" + std::to_string(i % n + 1)});
  return DirectedMultigraph(vertices, edges);
}

/// x1 with edges e to x2 and f to x3; no cycles.
inline DirectedMultigraph two_edge_tree() {
  return DirectedMultigraph({"x1", "x2", "x3"},
                            std::vector<EdgeSpec>{{"e", "x1", "x2"}, {"f", "x1", "x3"}});
}

/// Loop e at x and f from x to y.
inline DirectedMultigraph loop_with_tail() {
  return DirectedMultigraph({"x", "y"}, std::vector<EdgeSpec>{{"e", "x", "x"}, {"f", "x", "y"}});
}

/// Loop e at x, f from x to y, loop g at y.
inline DirectedMultigraph two_loops_bridge() {
  return DirectedMultigraph({"x", "y"}, std::vector<EdgeSpec>{
                                            {"e", "x", "x"}, {"f", "x", "y"}, {"g", "y", "y"}});
}

/// Loops e1, e2 at x1; e3 from x1 to x2; e4 from x2 to x1.
inline DirectedMultigraph double_loop_return() {
  return DirectedMultigraph({"x1", "x2"}, std::vector<EdgeSpec>{{"e1", "x1", "x1"},
                                                                {"e2", "x1", "x1"},
                                                                {"e3", "x1", "x2"},
                                                                {"e4", "x2", "x1"}});
}

/// Loop e1 at x1, e2 from x1 to x2, e3 from x2 to x1 (transition matrix [[1,1],[1,0]]).
inline DirectedMultigraph golden() {
  return DirectedMultigraph({"x1", "x2"}, std::vector<EdgeSpec>{
                                              {"e1", "x1", "x1"}, {"e2", "x1", "x2"}, {"e3", "x2", "x1"}});
}

/// The one-loop graph glued to C_2 at a vertex.
inline DirectedMultigraph loop_glued_cycle() { return amalgamate(loops(1), cycle(2), "x", "x1"); }

struct NamedGraph {
  std::string name;
  DirectedMultigraph graph;
};

/// The graphs every relation suite runs over.
inline std::vector<NamedGraph> standard() {
  return {
      {"loops1", loops(1)},
      {"loops2", loops(2)},
      {"loops3", loops(3)},
      {"cycle2", cycle(2)},
      {"cycle3", cycle(3)},
      {"cycle4", cycle(4)},
      {"two_edge_tree", two_edge_tree()},
      {"loop_with_tail", loop_with_tail()},
      {"two_loops_bridge", two_loops_bridge()},
      {"double_loop_return", double_loop_return()},
      {"golden", golden()},
  };
}

/// Standard corpus plus a few extra shapes used by property tests.
inline std::vector<NamedGraph> extended() {
  auto out = standard();
  out.push_back({"loop_glued_cycle", loop_glued_cycle()});
  out.push_back({"parallel_pair",
                 DirectedMultigraph({"a", "b"}, std::vector<EdgeSpec>{{"p", "a", "b"},
                                                                      {"q", "a", "b"},
                                                                      {"r", "b", "a"}})});
  out.push_back({"isolated", DirectedMultigraph({"v"}, std::vector<Edge>{})});
  out.push_back({"chain_into_loops",
                 DirectedMultigraph({"a", "b", "c"}, std::vector<EdgeSpec>{{"s", "a", "b"},
                                                                           {"t", "b", "c"},
                                                                           {"u", "c", "c"},
                                                                           {"w", "c", "c"}})});
  return out;
}

inline DirectedMultigraph by_name(const std::string& name) {
  for (auto& g : extended())
    if (g.name == name) return std::move(g.graph);
  throw UnknownLabel(name);
}

}  // namespace fsga::corpus

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fsga/error.hpp"
#include "fsga/fock.hpp"
#include "fsga/fourier.hpp"
#include "fsga/graph.hpp"
#include "fsga/sparse.hpp"

namespace fsga {

using VertexPair = std::pair<std::size_t, std::size_t>;  // (source, range)

/// Edges from `src` to `dst` in edge order.
inline std::vector<std::size_t> parallel_edges(const DirectedMultigraph& g, std::size_t src,
                                               std::size_t dst) {
  std::vector<std::size_t> out;
  for (auto e : g.out_edges(src))
    if (g.edge(e).dst == dst) out.push_back(e);
  return out;
}

/// One unitary per (source, range) pair, acting on the parallel edges in
/// edge order: U xi_e = sum_f U(f, e) xi_f.
struct GaugeData {
  std::map<VertexPair, Eigen::MatrixXcd> blocks;
};

inline GaugeData identity_gauge(const DirectedMultigraph& g) {
  GaugeData gd;
  for (const auto& e : g.edges()) {
    auto n = static_cast<Eigen::Index>(parallel_edges(g, e.src, e.dst).size());
    gd.blocks[{e.src, e.dst}] = Eigen::MatrixXcd::Identity(n, n);
  }
  return gd;
}

/// Blockwise product (a then b applied as a*b).
inline GaugeData compose(const GaugeData& a, const GaugeData& b) {
  GaugeData out;
  for (const auto& [key, m] : a.blocks) {
    auto it = b.blocks.find(key);
    if (it == b.blocks.end()) throw DimensionMismatch("gauge data cover different blocks");
    out.blocks[key] = m * it->second;
  }
  return out;
}

inline void validate_gauge(const DirectedMultigraph& g, const GaugeData& gd,
                           double tol = kEntryTolerance) {
  for (const auto& [key, m] : gd.blocks) {
    if (key.first >= g.vertex_count() || key.second >= g.vertex_count())
      throw DimensionMismatch("gauge block names an unknown vertex");
    auto n = static_cast<Eigen::Index>(parallel_edges(g, key.first, key.second).size());
    const std::string name = g.vertex_label(key.first) + "->" + g.vertex_label(key.second);
    if (n == 0) throw DimensionMismatch("gauge block " + name + " has no edges");
    if (m.rows() != n || m.cols() != n)
      throw DimensionMismatch("gauge block " + name + " must be " + std::to_string(n) + "x" +
                              std::to_string(n));
    double err = (m.adjoint() * m - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
    if (err > tol) throw NotUnitary("gauge block " + name + " is not unitary");
  }
  for (const auto& e : g.edges())
    if (!gd.blocks.count({e.src, e.dst}))
      throw DimensionMismatch("no gauge block for " + g.vertex_label(e.src) + "->" +
                              g.vertex_label(e.dst));
}

namespace detail {

// Position of each edge inside its parallel class.
inline std::vector<std::size_t> slot_of_edges(const DirectedMultigraph& g) {
  std::vector<std::size_t> slot(g.edge_count());
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    auto par = parallel_edges(g, g.edge(e).src, g.edge(e).dst);
    slot[e] = static_cast<std::size_t>(std::find(par.begin(), par.end(), e) - par.begin());
  }
  return slot;
}

}  // namespace detail

/// Level-preserving unitary acting letterwise by the gauge blocks. Built by
/// extending each column's image one last-applied letter at a time.
inline SparseOperator gauge_unitary(const FockSpace& s, const GaugeData& gd) {
  const auto& g = s.graph();
  validate_gauge(g, gd);
  const auto slot = detail::slot_of_edges(g);
  std::vector<std::vector<std::pair<std::size_t, cplx>>> image(s.dim());
  std::vector<Entry> out;
  for (std::size_t w = 0; w < s.dim(); ++w) {
    const Path& p = s.path(w);
    if (p.is_vertex()) {
      image[w] = {{w, 1.0}};
    } else {
      const auto e = p.edges.back();
      Path head = p;
      head.edges.pop_back();
      head.rng = head.edges.empty() ? head.src : g.edge(head.edges.back()).dst;
      const auto& m = gd.blocks.at({g.edge(e).src, g.edge(e).dst});
      const auto par = parallel_edges(g, g.edge(e).src, g.edge(e).dst);
      for (const auto& [v, c] : image[s.index(head)])
        for (std::size_t j = 0; j < par.size(); ++j) {
          const cplx u = m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(slot[e]));
          if (u == cplx{}) continue;
          image[w].emplace_back(s.table().extend_last(v, par[j]), c * u);
        }
    }
    for (const auto& [v, c] : image[w]) out.push_back({v, w, c});
  }
  return SparseOperator::from_entries(s.dim(), std::move(out), 0);
}

struct GaugeConjugateReport {
  CoefficientTable coefficients;  // of U~^* L_e U~
  CoefficientTable expected;      // conj(U(e, f)) at each parallel f
  double support_leak = 0.0;      // largest coefficient off the parallel edges
  double coefficient_error = 0.0;
  double commutant = 0.0;
  double conjugate_residual = 0.0;  // |U~^* L_e U~ - sum_f expected_f L_f|
  bool passed(double tol = kEntryTolerance) const {
    return support_leak <= tol && coefficient_error <= tol && commutant <= tol &&
           conjugate_residual <= tol;
  }
};

/// Theta_U(L_e) = U~^* L_e U~, which equals sum_f conj(U(e, f)) L_f.
inline GaugeConjugateReport gauge_conjugate_check(const FockSpace& s, const GaugeData& gd,
                                                  const SparseOperator& u, std::size_t e) {
  const auto& g = s.graph();
  const auto slot = detail::slot_of_edges(g);
  const auto& ed = g.edge(e);
  const auto par = parallel_edges(g, ed.src, ed.dst);
  const auto& m = gd.blocks.at({ed.src, ed.dst});
  auto theta = u.adjoint() * left_creation(s, e) * u;
  theta.set_degree(1);
  GaugeConjugateReport r;
  r.coefficients = fourier_coefficients(theta, s);
  for (auto f : par)
    r.expected.set(edge_path(g, f), std::conj(m(static_cast<Eigen::Index>(slot[e]),
                                               static_cast<Eigen::Index>(slot[f]))));
  for (const auto& [w, c] : r.coefficients)
    if (!(w.length() == 1 && std::find(par.begin(), par.end(), w.edges[0]) != par.end()))
      r.support_leak = std::max(r.support_leak, std::abs(c));
  for (const auto& [w, c] : r.expected)
    r.coefficient_error = std::max(r.coefficient_error, std::abs(c - r.coefficients.get(w)));
  for (auto f : par)
    r.coefficient_error = std::max(
        r.coefficient_error,
        std::abs(r.coefficients.get(edge_path(g, f)) - r.expected.get(edge_path(g, f))));
  r.commutant = commutant_residual(theta, s);
  r.conjugate_residual = (theta - synthesize(r.expected, s)).max_abs();
  return r;
}

}  // namespace fsga

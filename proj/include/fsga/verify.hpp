#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "fsga/classify.hpp"
#include "fsga/fock.hpp"
#include "fsga/freeness.hpp"
#include "fsga/graph.hpp"
#include "fsga/path.hpp"
#include "fsga/radical.hpp"
#include "fsga/sparse.hpp"

namespace fsga {

struct CheckResult {
  std::string name;
  bool passed = false;
  double residual = 0.0;
  std::string detail;
};

struct SuiteReport {
  std::size_t level = 0;
  std::vector<CheckResult> checks;
  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
  }
};

namespace detail {

inline std::vector<Path> words_up_to(const FockSpace& s, std::size_t max_len) {
  std::vector<Path> out;
  const auto end = std::min(s.dim(), s.table().level_begin(std::min(max_len, s.level()) + 1));
  for (std::size_t i = 0; i < end; ++i) out.push_back(s.path(i));
  return out;
}

}  // namespace detail

/// Generator relations on safe levels: L_e^*L_e = P_{s(e)}, sum P_x = I,
/// orthogonal ranges, E_0 = I - sum L_eL_e^*, xi_x xi_x^* = P_x - sum_{r(e)=x} L_eL_e^*,
/// and the same on the right.
inline CheckResult check_relations(const FockSpace& s) {
  const auto& g = s.graph();
  const auto mask = s.safe_mask(1);
  const auto id = SparseOperator::identity(s.dim());
  double r = 0.0;
  for (Side side : {Side::L, Side::R}) {
    std::vector<SparseOperator> gens, ranges;
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      gens.push_back(side == Side::L ? left_creation(s, e) : right_creation(s, e));
      ranges.push_back(gens.back() * gens.back().adjoint());
    }
    const auto proj = [&](std::size_t x) {
      return side == Side::L ? range_projection(s, x) : source_projection(s, x);
    };
    SparseOperator sum(s.dim()), range_sum(s.dim());
    for (std::size_t x = 0; x < g.vertex_count(); ++x) sum = sum + proj(x);
    r = std::max(r, residual_on(sum, id, mask));
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      const auto& ed = g.edge(e);
      // On the right, R_e^*R_e is the projection for the far end of e.
      const auto init = side == Side::L ? proj(ed.src) : proj(ed.dst);
      r = std::max(r, residual_on(gens[e].adjoint() * gens[e], init, mask));
      for (std::size_t f = e + 1; f < g.edge_count(); ++f)
        r = std::max(r, residual_on(ranges[e] * ranges[f], SparseOperator(s.dim()), mask));
      range_sum = range_sum + ranges[e];
    }
    r = std::max(r, residual_on(id - range_sum, level_projection(s, 0), mask));
    for (std::size_t x = 0; x < g.vertex_count(); ++x) {
      auto vac = proj(x);
      const auto& ends = side == Side::L ? g.in_edges(x) : g.out_edges(x);
      for (auto e : ends) vac = vac - ranges[e];
      const auto xi = SparseOperator::rank_one(s.basis_vector(Path::vertex(x)),
                                               s.basis_vector(Path::vertex(x)), 0);
      r = std::max(r, residual_on(vac, xi, mask));
    }
  }
  return {"relations", r == 0.0, r, ""};
}

/// [L_w, R_v] = 0 for all words of length <= max_len, on safe levels.
inline CheckResult check_commutant(const FockSpace& s, std::size_t max_len) {
  const auto words = detail::words_up_to(s, max_len);
  std::vector<SparseOperator> left, right;
  for (const auto& w : words) {
    left.push_back(make_word_operator(s, Side::L, w));
    right.push_back(make_word_operator(s, Side::R, w));
  }
  double r = 0.0;
  for (const auto& a : left)
    for (const auto& b : right) {
      const auto degree = a.degree() + b.degree();
      if (degree > s.level()) continue;
      r = std::max(r, commutator(a, b).restrict_columns(s.safe_mask(degree)).max_abs());
    }
  return {"commutant", r == 0.0, r, std::to_string(words.size()) + " words per side"};
}

/// W^* L_e W = R_e on the transpose graph, every entry.
inline CheckResult check_transpose(const FockSpace& s) {
  const auto gt = transpose(s.graph());
  const auto st = build_space(gt, s.level());
  const auto w = transpose_map(s, st);
  double r = 0.0;
  for (std::size_t e = 0; e < s.graph().edge_count(); ++e)
    r = std::max(r, max_abs_diff(w.adjoint() * left_creation(s, e) * w, right_creation(st, e)));
  return {"transpose_duality", r == 0.0, r, ""};
}

inline CheckResult check_rank_formula(const FockSpace& s) {
  const bool ok = s.level() >= 1 && edge_rank_matrix(s) == transition_matrix(s.graph());
  return {"rank_formula", ok, ok ? 0.0 : 1.0, ""};
}

inline CheckResult check_fpir_family(const FockSpace& s) {
  auto rep = check_fpir(standard_family(s), true);
  double r = 0.0;
  std::string failing;
  for (const auto& c : rep.conditions) {
    r = std::max(r, c.residual);
    if (!c.passed) failing += (failing.empty() ? "" : ",") + c.name;
  }
  return {"partial_isometry_family", rep.passed(), r, failing};
}

inline CheckResult check_nilpotency(const FockSpace& s) {
  const auto c = nilpotency_certificate(s.graph(), std::max<std::size_t>(20, s.level()));
  return {"radical_nilpotency", c.holds(), 0.0,
          "max off-cycle letters " + std::to_string(c.max_off_cycle) + " < " +
              std::to_string(c.vertex_bound)};
}

inline CheckResult check_double_cycle_pair(const FockSpace& s) {
  const bool has = has_double_cycle(s.graph()).has_value();
  auto pair = double_cycle_pair(s);
  if (!has) return {"double_cycle_pair", !pair, 0.0, "no double cycle"};
  if (!pair) return {"double_cycle_pair", false, 1.0, "construction failed"};
  const double r = std::max({pair->same_initial, pair->cross, pair->u_range_excess,
                             pair->v_range_excess});
  return {"double_cycle_pair", pair->passed, r, ""};
}

/// The full invariant suite for one graph at one truncation level.
inline SuiteReport run_suite(const DirectedMultigraph& g, std::size_t level) {
  const auto s = build_space(g, level);
  SuiteReport rep;
  rep.level = level;
  rep.checks.push_back(check_relations(s));
  rep.checks.push_back(check_commutant(s, std::min<std::size_t>(2, level)));
  rep.checks.push_back(check_transpose(s));
  rep.checks.push_back(check_rank_formula(s));
  rep.checks.push_back(check_fpir_family(s));
  rep.checks.push_back(check_nilpotency(s));
  rep.checks.push_back(check_double_cycle_pair(s));
  return rep;
}

}  // namespace fsga

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fsga/corpus.hpp"
#include "fsga/error.hpp"
#include "fsga/fock.hpp"
#include "fsga/fourier.hpp"
#include "fsga/sparse.hpp"

namespace fsga {

enum class FunctionClass { CyclicHardy, Hardy, HardyZero, Scalar, Zero };

struct PatternEntry {
  std::size_t z_power = 0;
  FunctionClass cls = FunctionClass::Zero;
  bool operator==(const PatternEntry&) const = default;
};

using BlockPattern = std::vector<std::vector<PatternEntry>>;

/// Entry (i, j) is z^{(i-j) mod n} H^inf(z^n).
inline BlockPattern cycle_block_pattern(std::size_t n) {
  if (n == 0) throw DimensionMismatch("pattern size must be at least 1");
  BlockPattern p(n, std::vector<PatternEntry>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      p[i][j] = {(i + n - j) % n, n == 1 ? FunctionClass::Hardy : FunctionClass::CyclicHardy};
  return p;
}

enum class Fixture { FiniteTree, LoopTail, LoopBridge, Cycle, CycleBlocked };

inline Fixture parse_fixture(const std::string& id) {
  if (id == "finite_tree") return Fixture::FiniteTree;
  if (id == "loop_tail") return Fixture::LoopTail;
  if (id == "loop_bridge") return Fixture::LoopBridge;
  if (id == "cycle") return Fixture::Cycle;
  if (id == "cycle_blocked") return Fixture::CycleBlocked;
  throw UnknownLabel(id);
}

inline std::string fixture_name(Fixture f) {
  switch (f) {
    case Fixture::FiniteTree: return "finite_tree";
    case Fixture::LoopTail: return "loop_tail";
    case Fixture::LoopBridge: return "loop_bridge";
    case Fixture::Cycle: return "cycle";
    case Fixture::CycleBlocked: return "cycle_blocked";
  }
  return "";
}

inline DirectedMultigraph fixture_graph(Fixture f, std::size_t n = 3) {
  switch (f) {
    case Fixture::FiniteTree: return corpus::two_edge_tree();
    case Fixture::LoopTail: return corpus::loop_with_tail();
    case Fixture::LoopBridge: return corpus::two_loops_bridge();
    case Fixture::Cycle:
    case Fixture::CycleBlocked: return corpus::cycle(n);
  }
  throw UnknownLabel(fixture_name(f));
}

/// Scalars for the fixture's generator combination, or a general element.
///   finite_tree:   a P_x1 + b P_x2 + c P_x3 + d L_e + f L_f
///   loop_tail:     a P_x + b P_y + c L_e + d L_f
///   loop_bridge:   a P_x + b P_y + c L_e + d L_f + f L_g
///   cycle(_blocked): n edge weights, or n vertex weights followed by n edge weights
struct FixtureParams {
  std::vector<cplx> scalars;
  std::optional<CoefficientTable> element;
  std::size_t n = 3;
};

/// Named sub-blocks of the reordered basis; `group` separates direct summands.
struct FixtureLayout {
  std::vector<std::string> names;
  std::vector<std::vector<std::size_t>> blocks;  // basis indices, in H^2 order
  std::vector<std::size_t> group;
};

struct FixtureReport {
  std::string id;
  std::size_t level = 0;
  bool passed = false;
  std::string discrepancy;
  double max_error = 0.0;
  FixtureLayout layout;
  Eigen::MatrixXcd reordered;  // the operator in the fixture basis
  std::vector<std::vector<std::string>> block_summary;
};

namespace detail {

inline std::size_t path_index(const FockSpace& s, const std::vector<std::size_t>& edges,
                              std::size_t vertex) {
  return edges.empty() ? vertex : s.index(make_path(s.graph(), edges));
}

inline std::vector<std::size_t> repeat(std::size_t e, std::size_t k) {
  return std::vector<std::size_t>(k, e);
}

inline std::vector<std::size_t> join(std::vector<std::size_t> first_applied,
                                     const std::vector<std::size_t>& then) {
  first_applied.insert(first_applied.end(), then.begin(), then.end());
  return first_applied;
}

inline std::string format_scalar(cplx c) {
  char buf[64];
  if (c.imag() == 0.0)
    std::snprintf(buf, sizeof buf, "%g", c.real());
  else if (c.real() == 0.0)
    std::snprintf(buf, sizeof buf, "%gi", c.imag());
  else
    std::snprintf(buf, sizeof buf, "(%g%+gi)", c.real(), c.imag());
  return buf;
}

/// Describes a rectangular block: 0, c I, c T (shift), Toeplitz, or dense.
inline std::string describe_block(const Eigen::MatrixXcd& b, double tol = kEntryTolerance) {
  if (b.size() == 0 || b.cwiseAbs().maxCoeff() <= tol) return "0";
  for (int offset : {0, 1}) {
    bool match = true;
    std::optional<cplx> value;
    for (Eigen::Index r = 0; r < b.rows() && match; ++r)
      for (Eigen::Index c = 0; c < b.cols() && match; ++c) {
        const cplx x = b(r, c);
        if (r - c == offset) {
          if (!value) value = x;
          match = std::abs(x - *value) <= tol;
        } else {
          match = std::abs(x) <= tol;
        }
      }
    if (match && value) return format_scalar(*value) + (offset == 0 ? " I" : " T");
  }
  for (Eigen::Index r = 1; r < b.rows(); ++r)
    for (Eigen::Index c = 1; c < b.cols(); ++c)
      if (std::abs(b(r, c) - b(r - 1, c - 1)) > tol) return "dense";
  for (Eigen::Index r = 0; r < b.rows(); ++r)
    for (Eigen::Index c = r + 1; c < b.cols(); ++c)
      if (std::abs(b(r, c)) > tol) return "dense";
  return "Toeplitz";
}

}  // namespace detail

/// Basis order of the fixture, grouped into H^2-identified blocks.
inline FixtureLayout fixture_layout(Fixture f, const FockSpace& s, std::size_t n) {
  using detail::join;
  using detail::path_index;
  using detail::repeat;
  const std::size_t N = s.level();
  FixtureLayout L;
  const auto add = [&](std::string name, std::vector<std::size_t> idx, std::size_t group) {
    L.names.push_back(std::move(name));
    L.blocks.push_back(std::move(idx));
    L.group.push_back(group);
  };
  switch (f) {
    case Fixture::FiniteTree: {
      std::vector<std::size_t> all;
      for (std::size_t i = 0; i < s.dim(); ++i) all.push_back(i);
      add("basis", all, 0);
      break;
    }
    case Fixture::LoopTail:
    case Fixture::LoopBridge: {
      // edges: e = 0 (loop at x), f = 1 (x to y), g = 2 (loop at y)
      std::vector<std::size_t> hx;
      for (std::size_t k = 0; k <= N; ++k) hx.push_back(path_index(s, repeat(0, k), 0));
      if (f == Fixture::LoopTail) {
        add("PxH", hx, 0);
        std::vector<std::size_t> hy{1};
        for (std::size_t k = 0; k + 1 <= N; ++k) hy.push_back(path_index(s, join(repeat(0, k), {1}), 0));
        add("PyH", hy, 0);
        break;
      }
      add("H1", hx, 0);
      for (std::size_t m = 2; m <= N + 1; ++m) {
        std::vector<std::size_t> hm;
        for (std::size_t k = 0; k + (m - 1) <= N; ++k)
          hm.push_back(path_index(s, join(join(repeat(0, k), {1}), repeat(2, m - 2)), 0));
        add("H" + std::to_string(m), hm, 0);
      }
      std::vector<std::size_t> hg;
      for (std::size_t k = 0; k <= N; ++k) hg.push_back(path_index(s, repeat(2, k), 1));
      add("Hg", hg, 1);
      break;
    }
    case Fixture::Cycle: {
      // H_{i,k}: paths from x_i to x_k, by increasing length.
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
          std::vector<std::size_t> idx;
          for (std::size_t len = (k + n - i) % n; len <= N; len += n) {
            std::vector<std::size_t> edges;
            for (std::size_t t = 0; t < len; ++t) edges.push_back((i + t) % n);
            idx.push_back(path_index(s, edges, i));
          }
          add("H" + std::to_string(i + 1) + "," + std::to_string(k + 1), idx, i);
        }
      break;
    }
    case Fixture::CycleBlocked: {
      // P_{x_i} H: the unique path of each length ending at x_i.
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::size_t> idx;
        for (std::size_t len = 0; len <= N; ++len) {
          const std::size_t start = (i + n * (len / n + 1) - len) % n;
          std::vector<std::size_t> edges;
          for (std::size_t t = 0; t < len; ++t) edges.push_back((start + t) % n);
          idx.push_back(path_index(s, edges, start));
        }
        add("P" + std::to_string(i + 1) + "H", idx, 0);
      }
      break;
    }
  }
  std::vector<bool> seen(s.dim(), false);
  std::size_t count = 0;
  for (const auto& b : L.blocks)
    for (auto i : b) {
      if (seen[i]) throw FixtureMismatch("fixture basis repeats a basis vector");
      seen[i] = true;
      ++count;
    }
  if (count != s.dim()) throw FixtureMismatch("fixture basis does not cover the space");
  return L;
}

namespace detail {

inline std::vector<std::size_t> flatten(const FixtureLayout& L) {
  std::vector<std::size_t> order;
  for (const auto& b : L.blocks) order.insert(order.end(), b.begin(), b.end());
  return order;
}

inline Eigen::MatrixXcd reorder(const SparseOperator& a, const std::vector<std::size_t>& order) {
  std::vector<std::size_t> pos(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
  const auto n = static_cast<Eigen::Index>(order.size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& e : a.entries())
    m(static_cast<Eigen::Index>(pos[e.row]), static_cast<Eigen::Index>(pos[e.col])) = e.value;
  return m;
}

inline std::vector<Eigen::Index> offsets(const FixtureLayout& L) {
  std::vector<Eigen::Index> off{0};
  for (const auto& b : L.blocks) off.push_back(off.back() + static_cast<Eigen::Index>(b.size()));
  return off;
}

inline SparseOperator fixture_operator(Fixture f, const FockSpace& s, const FixtureParams& p) {
  if (p.element) return synthesize(*p.element, s);
  const auto& g = s.graph();
  const auto& c = p.scalars;
  const auto need = [&](std::size_t k) {
    if (c.size() != k)
      throw DimensionMismatch("fixture " + fixture_name(f) + " takes " + std::to_string(k) +
                              " scalars");
  };
  SparseOperator a(s.dim());
  switch (f) {
    case Fixture::FiniteTree:
      need(5);
      for (std::size_t x = 0; x < 3; ++x) a = a + c[x] * range_projection(s, x);
      a = a + c[3] * left_creation(s, 0) + c[4] * left_creation(s, 1);
      return a;
    case Fixture::LoopTail:
    case Fixture::LoopBridge: {
      const std::size_t edges = f == Fixture::LoopTail ? 2 : 3;
      need(2 + edges);
      a = c[0] * range_projection(s, 0) + c[1] * range_projection(s, 1);
      for (std::size_t e = 0; e < edges; ++e) a = a + c[2 + e] * left_creation(s, e);
      return a;
    }
    case Fixture::Cycle:
    case Fixture::CycleBlocked: {
      const std::size_t n = g.vertex_count();
      if (c.size() != n && c.size() != 2 * n)
        throw DimensionMismatch("cycle fixture takes n or 2n scalars");
      const std::size_t shift = c.size() == 2 * n ? n : 0;
      for (std::size_t k = 0; k < n; ++k) {
        if (shift) a = a + c[k] * range_projection(s, k);
        a = a + c[shift + k] * left_creation(s, k);
      }
      return a;
    }
  }
  return a;
}

// Lower-triangular Toeplitz block: entry (r, c) = symbol(r - c) for r >= c.
inline void toeplitz_into(Eigen::MatrixXcd& m, Eigen::Index r0, Eigen::Index c0, Eigen::Index rows,
                          Eigen::Index cols, const std::function<cplx(std::size_t)>& symbol) {
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols && c <= r; ++c)
      m(r0 + r, c0 + c) = symbol(static_cast<std::size_t>(r - c));
}

/// The matrix the fixture's printed form predicts, in the fixture basis.
inline Eigen::MatrixXcd fixture_expected(Fixture f, const FockSpace& s, const FixtureLayout& L,
                                         const FixtureParams& p, const SparseOperator& a) {
  const auto& g = s.graph();
  const auto off = offsets(L);
  const auto n = static_cast<Eigen::Index>(s.dim());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  const auto rows = [&](std::size_t b) { return static_cast<Eigen::Index>(L.blocks[b].size()); };
  const auto coeffs = fourier_coefficients(a, s);
  const auto coef = [&](std::vector<std::size_t> edges, std::size_t vertex) {
    return coeffs.get(edges.empty() ? Path::vertex(vertex) : make_path(g, edges));
  };
  const auto safe = [&](auto fn) {
    return [fn](std::size_t k) -> cplx {
      try {
        return fn(k);
      } catch (const InadmissiblePath&) {
        return cplx{};
      }
    };
  };
  switch (f) {
    case Fixture::FiniteTree: {
      const auto& c = p.scalars;
      if (c.size() != 5) throw DimensionMismatch("finite_tree takes 5 scalars");
      // basis x1, x2, x3, e, f
      m(0, 0) = c[0];
      m(1, 1) = c[1];
      m(2, 2) = c[2];
      m(3, 0) = c[3];
      m(3, 3) = c[1];
      m(4, 0) = c[4];
      m(4, 4) = c[2];
      break;
    }
    case Fixture::LoopTail: {
      // [[h, 0], [h0, c I]] with h0(0) = 0
      toeplitz_into(m, off[0], off[0], rows(0), rows(0),
                    safe([&](std::size_t k) { return coef(detail::repeat(0, k), 0); }));
      toeplitz_into(m, off[1], off[0], rows(1), rows(0), safe([&](std::size_t k) {
                      return k == 0 ? cplx{} : coef(join(detail::repeat(0, k - 1), {1}), 0);
                    }));
      const cplx scalar = coef({}, 1);
      for (Eigen::Index r = 0; r < rows(1); ++r) m(off[1] + r, off[1] + r) = scalar;
      break;
    }
    case Fixture::LoopBridge: {
      const std::size_t last = L.blocks.size() - 1;  // Hg
      const auto hhat = safe([&](std::size_t k) { return coef(detail::repeat(2, k), 1); });
      // first column: h_1 on H1, h_m = coefficients of g^{m-2} f e^k
      toeplitz_into(m, off[0], off[0], rows(0), rows(0),
                    safe([&](std::size_t k) { return coef(detail::repeat(0, k), 0); }));
      for (std::size_t b = 1; b < last; ++b)
        toeplitz_into(m, off[b], off[0], rows(b), rows(0), safe([&](std::size_t k) {
                        return coef(join(join(detail::repeat(0, k), {1}), detail::repeat(2, b - 1)), 0);
                      }));
      // Toeplitz tail: block (i, j), i >= j >= 2, is hhat(i - j) I
      for (std::size_t j = 1; j < last; ++j)
        for (std::size_t i = j; i < last; ++i) {
          const cplx v = hhat(i - j);
          for (Eigen::Index r = 0; r < std::min(rows(i), rows(j)); ++r)
            m(off[i] + r, off[j] + r) = v;
        }
      toeplitz_into(m, off[last], off[last], rows(last), rows(last), hhat);
      break;
    }
    case Fixture::Cycle: {
      const auto& c = p.scalars;
      const std::size_t nv = g.vertex_count();
      const std::size_t shift = c.size() == 2 * nv ? nv : 0;
      for (std::size_t i = 0; i < nv; ++i)
        for (std::size_t k = 0; k < nv; ++k) {
          const std::size_t from = i * nv + k;
          const std::size_t to = i * nv + (k + 1) % nv;
          if (shift)
            for (Eigen::Index r = 0; r < rows(from); ++r) m(off[from] + r, off[from] + r) = c[k];
          // L_{e_k}: H_{i,k} -> H_{i,k+1}, the shift exactly when it lands on x_i
          const Eigen::Index step = (k + 1) % nv == i ? 1 : 0;
          for (Eigen::Index r = 0; r < rows(from); ++r)
            if (r + step < rows(to)) m(off[to] + r + step, off[from] + r) += c[shift + k];
        }
      break;
    }
    case Fixture::CycleBlocked: {
      const auto& c = p.scalars;
      const std::size_t nv = g.vertex_count();
      const std::size_t shift = c.size() == 2 * nv ? nv : 0;
      for (std::size_t k = 0; k < nv; ++k) {
        const std::size_t to = (k + 1) % nv;
        for (Eigen::Index r = 0; r < rows(k); ++r) {
          if (shift) m(off[k] + r, off[k] + r) = c[k];
          if (r + 1 < rows(to)) m(off[to] + r + 1, off[k] + r) += c[shift + k];
        }
      }
      break;
    }
  }
  return m;
}

/// For a general element of the blocked cycle form: block (i, j) is lower
/// Toeplitz with nonzero diagonals only at offsets = (i - j) mod n.
inline std::string cycle_pattern_violation(const Eigen::MatrixXcd& m, const FixtureLayout& L,
                                           std::size_t n, double tol) {
  const auto pat = cycle_block_pattern(n);
  const auto off = offsets(L);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const auto b = m.block(off[i], off[j], off[i + 1] - off[i], off[j + 1] - off[j]);
      for (Eigen::Index r = 0; r < b.rows(); ++r)
        for (Eigen::Index c = 0; c < b.cols(); ++c) {
          const bool allowed = r >= c && static_cast<std::size_t>(r - c) % n == pat[i][j].z_power;
          const bool toeplitz = r == 0 || c == 0 || std::abs(b(r, c) - b(r - 1, c - 1)) <= tol;
          if ((!allowed && std::abs(b(r, c)) > tol) || !toeplitz)
            return "block (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") entry (" +
                   std::to_string(r) + "," + std::to_string(c) + ") breaks the pattern";
        }
    }
  return "";
}

}  // namespace detail

inline FixtureReport verify_fixture(Fixture f, const FixtureParams& p, std::size_t level,
                                    double tol = kEntryTolerance) {
  auto g = fixture_graph(f, p.n);
  auto s = build_space(g, level);
  FixtureReport r;
  r.id = fixture_name(f);
  r.level = level;
  if (p.element && f != Fixture::LoopTail && f != Fixture::LoopBridge &&
      f != Fixture::CycleBlocked)
    throw DimensionMismatch("fixture " + r.id + " takes scalars only");
  r.layout = fixture_layout(f, s, g.vertex_count());
  auto a = detail::fixture_operator(f, s, p);
  r.reordered = detail::reorder(a, detail::flatten(r.layout));
  const auto off = detail::offsets(r.layout);
  if (p.element && f == Fixture::CycleBlocked) {
    r.discrepancy = detail::cycle_pattern_violation(r.reordered, r.layout, g.vertex_count(), tol);
  } else {
    auto expected = detail::fixture_expected(f, s, r.layout, p, a);
    for (Eigen::Index c = 0; c < expected.cols() && r.discrepancy.empty(); ++c)
      for (Eigen::Index row = 0; row < expected.rows(); ++row) {
        const double err = std::abs(expected(row, c) - r.reordered(row, c));
        r.max_error = std::max(r.max_error, err);
        if (err > tol && r.discrepancy.empty()) {
          std::size_t bi = 0, bj = 0;
          while (off[bi + 1] <= row) ++bi;
          while (off[bj + 1] <= c) ++bj;
          r.discrepancy = "block (" + r.layout.names[bi] + ", " + r.layout.names[bj] +
                          ") entry (" + std::to_string(row - off[bi]) + "," +
                          std::to_string(c - off[bj]) + "): expected " +
                          detail::format_scalar(expected(row, c)) + ", got " +
                          detail::format_scalar(r.reordered(row, c));
        }
      }
  }
  for (std::size_t i = 0; i < r.layout.blocks.size(); ++i) {
    std::vector<std::string> row;
    for (std::size_t j = 0; j < r.layout.blocks.size(); ++j) {
      if (r.layout.group[i] != r.layout.group[j]) continue;
      row.push_back(detail::describe_block(
          r.reordered.block(off[i], off[j], off[i + 1] - off[i], off[j + 1] - off[j]), tol));
    }
    r.block_summary.push_back(std::move(row));
  }
  r.passed = r.discrepancy.empty();
  return r;
}

/// verify_fixture that throws FixtureMismatch with the first discrepancy.
inline FixtureReport require_fixture(Fixture f, const FixtureParams& p, std::size_t level) {
  auto r = verify_fixture(f, p, level);
  if (!r.passed) throw FixtureMismatch(r.id + ": " + r.discrepancy);
  return r;
}

}  // namespace fsga

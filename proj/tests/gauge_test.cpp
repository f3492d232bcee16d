#include <gtest/gtest.h>

#include <random>

#include "fsga/corpus.hpp"
#include "fsga/gauge.hpp"
#include "oracle.hpp"

using namespace fsga;

namespace {

Eigen::MatrixXcd random_unitary(std::mt19937& rng, Eigen::Index n) {
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = oracle::random_complex(rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
  return qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
}

GaugeData random_gauge(std::mt19937& rng, const DirectedMultigraph& g) {
  GaugeData gd = identity_gauge(g);
  for (auto& [key, m] : gd.blocks) m = random_unitary(rng, m.rows());
  return gd;
}

// Letterwise product over every pair of same-shape words.
Eigen::MatrixXcd dense_gauge(const FockSpace& s, const GaugeData& gd) {
  const auto& g = s.graph();
  const auto n = static_cast<Eigen::Index>(s.dim());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  auto slot = [&](std::size_t e) {
    auto par = parallel_edges(g, g.edge(e).src, g.edge(e).dst);
    return static_cast<Eigen::Index>(std::find(par.begin(), par.end(), e) - par.begin());
  };
  for (std::size_t a = 0; a < s.dim(); ++a)
    for (std::size_t b = 0; b < s.dim(); ++b) {
      const auto& v = s.path(a);
      const auto& w = s.path(b);
      if (v.length() != w.length()) continue;
      if (v.is_vertex()) {
        if (v.src == w.src) m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = 1.0;
        continue;
      }
      cplx c = 1.0;
      for (std::size_t i = 0; i < v.length() && c != cplx{}; ++i) {
        const auto& ev = g.edge(v.edges[i]);
        const auto& ew = g.edge(w.edges[i]);
        if (ev.src != ew.src || ev.dst != ew.dst) {
          c = 0.0;
          break;
        }
        c *= gd.blocks.at({ev.src, ev.dst})(slot(v.edges[i]), slot(w.edges[i]));
      }
      m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = c;
    }
  return m;
}

}  // namespace

TEST(Gauge, UnitaryMatchesLetterwiseOracle) {
  std::mt19937 rng(17);
  for (auto g : {corpus::loops(2), corpus::loops(3), corpus::by_name("parallel_pair"),
                 corpus::double_loop_return()}) {
    auto s = build_space(g, 4);
    auto gd = random_gauge(rng, g);
    auto u = gauge_unitary(s, gd);
    EXPECT_LT((to_dense(u) - dense_gauge(s, gd)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Gauge, UnitaryLevelPreservingVacuumFixing) {
  std::mt19937 rng(29);
  for (int t = 0; t < 20; ++t) {
    auto g = t % 2 ? corpus::loops(3) : corpus::by_name("parallel_pair");
    auto s = build_space(g, 5);
    auto u = gauge_unitary(s, random_gauge(rng, g));
    EXPECT_LT(max_abs_diff(u.adjoint() * u, SparseOperator::identity(s.dim())), 1e-12);
    for (const auto& e : u.entries()) EXPECT_EQ(s.path(e.row).length(), s.path(e.col).length());
    for (std::size_t x = 0; x < g.vertex_count(); ++x) EXPECT_EQ(u.column(x), s.basis_vector(Path::vertex(x)));
  }
}

TEST(Gauge, ConjugationMovesAmongParallelEdges) {
  std::mt19937 rng(37);
  for (auto g : {corpus::loops(2), corpus::loops(3), corpus::by_name("parallel_pair")}) {
    auto s = build_space(g, 5);
    auto gd = random_gauge(rng, g);
    auto u = gauge_unitary(s, gd);
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      auto r = gauge_conjugate_check(s, gd, u, e);
      EXPECT_TRUE(r.passed(1e-12)) << r.support_leak << " " << r.coefficient_error << " "
                                   << r.conjugate_residual;
    }
  }
}

TEST(Gauge, RotationSign) {
  auto g = corpus::loops(2);
  auto s = build_space(g, 4);
  const double th = 0.3, c = std::cos(th), sn = std::sin(th);
  GaugeData gd;
  Eigen::MatrixXcd rot(2, 2);
  rot << c, -sn, sn, c;
  gd.blocks[{0, 0}] = rot;
  auto u = gauge_unitary(s, gd);
  auto theta = u.adjoint() * left_creation(s, 0) * u;
  auto expect = c * left_creation(s, 0) - sn * left_creation(s, 1);
  EXPECT_LT(max_abs_diff(theta, expect), 1e-15);
}

TEST(Gauge, ComposeIsHomomorphism) {
  std::mt19937 rng(41);
  auto g = corpus::loops(2);
  auto s = build_space(g, 4);
  auto a = random_gauge(rng, g), b = random_gauge(rng, g);
  auto lhs = gauge_unitary(s, compose(a, b));
  auto rhs = gauge_unitary(s, a) * gauge_unitary(s, b);
  EXPECT_LT(max_abs_diff(lhs, rhs), 1e-12);
}

TEST(Gauge, Validation) {
  auto g = corpus::loops(2);
  auto s = build_space(g, 3);
  GaugeData missing;
  EXPECT_THROW(gauge_unitary(s, missing), DimensionMismatch);
  GaugeData wrong;
  wrong.blocks[{0, 0}] = Eigen::MatrixXcd::Identity(3, 3);
  EXPECT_THROW(gauge_unitary(s, wrong), DimensionMismatch);
  GaugeData nonunitary;
  nonunitary.blocks[{0, 0}] = 2.0 * Eigen::MatrixXcd::Identity(2, 2);
  EXPECT_THROW(gauge_unitary(s, nonunitary), NotUnitary);
}

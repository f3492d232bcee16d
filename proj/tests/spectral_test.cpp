#include <gtest/gtest.h>

#include <random>

#include "fsga/corpus.hpp"
#include "fsga/fourier.hpp"
#include "fsga/spectral.hpp"
#include "oracle.hpp"

using namespace fsga;

namespace {

std::vector<cplx> basis(const FockSpace& s, const std::string& path) {
  return s.basis_vector(parse_path(s.graph(), path));
}

// Columns of the truncated R_{e1} + R_{e2}: paths whose first letter is e1 or e2.
std::vector<std::vector<cplx>> golden_subspace(const FockSpace& s) {
  const auto& g = s.graph();
  auto a = right_creation(s, g.require_edge("e1")) + right_creation(s, g.require_edge("e2"));
  std::vector<std::vector<cplx>> cols;
  for (std::size_t c = 0; c < s.dim(); ++c) {
    auto col = a.column(c);
    if (vector_norm(col) > 0.0) cols.push_back(std::move(col));
  }
  return cols;
}

}  // namespace

TEST(Spectral, SingleLoopEigenvector) {
  auto g = corpus::loops(1);
  auto s = build_space(g, 20);
  auto ev = eigenvector(s, EigenPoint{0, {0.5}});
  auto l = left_creation(s, 0);
  auto lnu = l.adjoint().apply(ev.vector);
  double err = 0.0;
  for (std::size_t i = 0; i < s.dim(); ++i) err = std::max(err, std::abs(lnu[i] - 0.5 * ev.vector[i]));
  EXPECT_LE(err, ev.eigen_residual + 1e-15);
  EXPECT_LE(ev.eigen_residual, 2.0 * std::pow(2.0, -20));
  auto lk = SparseOperator::identity(s.dim());
  for (int k = 0; k <= 5; ++k) {
    EXPECT_NEAR(std::abs(point_functional(lk, ev.vector) - std::pow(0.5, k)), 0.0, 1e-5);
    lk = l * lk;
  }
  EXPECT_NEAR(ev.norm * ev.norm + ev.tail * ev.tail, 1.0, 1e-12);
}

TEST(Spectral, PointFunctionalEvaluatesSeries) {
  std::mt19937 rng(2);
  auto g = corpus::loops(2);
  auto s = build_space(g, 14);
  std::uniform_real_distribution<double> u(-0.35, 0.35);
  for (int t = 0; t < 10; ++t) {
    EigenPoint p{0, {cplx(u(rng), u(rng)), cplx(u(rng), u(rng))}};
    auto ev = eigenvector(s, p);
    CoefficientTable table;
    cplx expect = 0.0;
    for (const auto& w : oracle::all_words(g, 3)) {
      const auto c = oracle::random_complex(rng);
      table.set(oracle::to_path(g, w), c);
      cplx val = 1.0;
      for (auto e : w.edges) val *= p.lambda[e];
      expect += c * val;
    }
    EXPECT_LT(std::abs(point_functional(synthesize(table, s), ev.vector) - expect), 1e-5);
    // multiplicative on products
    auto a = left_creation(s, 0) + 2.0 * left_creation(s, 1);
    auto b = cplx(0, 1) * left_creation(s, 1) + SparseOperator::identity(s.dim());
    EXPECT_LT(std::abs(point_functional(a * b, ev.vector) -
                       point_functional(a, ev.vector) * point_functional(b, ev.vector)),
              1e-5);
  }
}

TEST(Spectral, EigenvectorAtNonTrivialVertex) {
  auto g = corpus::two_loops_bridge();
  auto s = build_space(g, 10);
  std::vector<cplx> lambda(g.edge_count());
  lambda[g.require_edge("g")] = cplx(0.2, 0.3);
  auto ev = eigenvector(s, EigenPoint{g.require_vertex("y"), lambda});
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    auto lnu = left_creation(s, e).adjoint().apply(ev.vector);
    double err = 0.0;
    for (std::size_t i = 0; i < s.dim(); ++i)
      err = std::max(err, std::abs(lnu[i] - std::conj(lambda[e]) * ev.vector[i]));
    EXPECT_LE(err, ev.eigen_residual + 1e-15);
  }
}

TEST(Spectral, RejectsInvalidPoints) {
  auto tree = corpus::two_edge_tree();
  auto s = build_space(tree, 3);
  EXPECT_THROW(eigenvector(s, EigenPoint{0, {0.1, 0.0}}), InvalidEigenPoint);
  EXPECT_THROW(eigenvector(s, EigenPoint{0, {0.0, cplx(0, 0.2)}}), InvalidEigenPoint);
  EXPECT_NO_THROW(eigenvector(s, EigenPoint{0, {0.0, 0.0}}));
  auto c = corpus::cycle(3);
  auto sc = build_space(c, 3);
  EXPECT_THROW(eigenvector(sc, EigenPoint{1, {0.0, 0.5, 0.0}}), InvalidEigenPoint);
  auto l = corpus::loops(2);
  auto sl = build_space(l, 3);
  EXPECT_THROW(eigenvector(sl, EigenPoint{0, {0.8, 0.6}}), InvalidEigenPoint);
  EXPECT_THROW(eigenvector(sl, EigenPoint{0, {0.5}}), InvalidEigenPoint);
}

TEST(Spectral, GoldenWanderingSubspace) {
  auto g = corpus::golden();
  auto s = build_space(g, 6);
  auto w = wandering_basis(s, golden_subspace(s), Side::L);
  ASSERT_EQ(w.basis.size(), 2u);
  EXPECT_EQ(w.invariance_residual, 0.0);
  const auto e1 = basis(s, "e1"), e2 = basis(s, "e2");
  for (const auto& v : w.basis) {
    const auto& target = v.vertex == g.require_vertex("x1") ? e1 : e2;
    for (std::size_t i = 0; i < s.dim(); ++i) EXPECT_NEAR(std::abs(v.vector[i] - target[i]), 0.0, 1e-9);
  }
  auto split = beurling_split(s, golden_subspace(s), Side::L);
  ASSERT_EQ(split.pieces.size(), 2u);
  EXPECT_EQ(split.range_overlap, 0.0);
  EXPECT_LT(split.reconstruction_residual, 1e-9);
}

TEST(Spectral, CyclicSubspaceHasOneWanderingVector) {
  std::mt19937 rng(9);
  auto g = corpus::loops(2);
  auto s = build_space(g, 5);
  for (int t = 0; t < 5; ++t) {
    std::vector<cplx> zeta(s.dim());
    zeta[0] = oracle::random_complex(rng);
    zeta[1] = oracle::random_complex(rng);
    zeta[2] = oracle::random_complex(rng);
    std::vector<std::vector<cplx>> span;
    for (const auto& w : oracle::all_words(g, 5))
      span.push_back(make_word_operator(s, Side::L, oracle::to_path(g, w)).apply(zeta));
    auto res = wandering_basis(s, span, Side::L);
    ASSERT_EQ(res.basis.size(), 1u);
    // orthogonal to every translate L_e M
    for (std::size_t e = 0; e < g.edge_count(); ++e)
      for (const auto& v : span) {
        auto moved = left_creation(s, e).apply(v);
        EXPECT_LT(std::abs(inner(res.basis[0].vector, moved)), 1e-9);
      }
    auto split = beurling_split(s, span, Side::L);
    EXPECT_LT(split.reconstruction_residual, 1e-9);
  }
}

TEST(Spectral, RightSideWandering) {
  // Transpose duality: the L-invariant golden subspace maps to an
  // R-invariant subspace of the transposed graph.
  auto g = corpus::golden();
  auto s = build_space(g, 5);
  auto st = build_space(transpose(g), 5);
  auto w = transpose_map(s, st);
  auto wa = w.adjoint();
  std::vector<std::vector<cplx>> moved;
  for (const auto& v : golden_subspace(s)) moved.push_back(wa.apply(v));
  auto res = wandering_basis(st, moved, Side::R);
  EXPECT_EQ(res.basis.size(), 2u);
}

TEST(Spectral, NonInvariantSubspaceRejected) {
  auto g = corpus::loops(1);
  auto s = build_space(g, 4);
  EXPECT_THROW(wandering_basis(s, {basis(s, "e")}, Side::L), NonInvariantSubspace);
}

TEST(Spectral, PhaseNormalization) {
  std::vector<cplx> v{cplx(0, 0.1), cplx(0, -2.0)};
  auto n = phase_normalized(v);
  EXPECT_NEAR(n[1].real(), 2.0, 1e-15);
  EXPECT_NEAR(n[1].imag(), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(n[0]), 0.1, 1e-15);
}

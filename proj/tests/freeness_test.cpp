#include <gtest/gtest.h>

#include <random>

#include "fsga/corpus.hpp"
#include "fsga/freeness.hpp"
#include "oracle.hpp"

using namespace fsga;

TEST(Freeness, DoubleCyclePairExactlyWhenDoubleCycle) {
  for (const auto& [name, g] : corpus::extended()) {
    auto s = build_space(g, 6);
    auto pair = double_cycle_pair(s);
    EXPECT_EQ(pair.has_value(), has_double_cycle(g).has_value()) << name;
    if (pair) {
      EXPECT_TRUE(pair->passed) << name;
    }
  }
}

TEST(Freeness, DoubleCyclePairOnRandomGraphs) {
  std::mt19937 rng(23);
  for (int t = 0; t < 30; ++t) {
    auto g = oracle::random_graph(rng, 1 + t % 3, 2 + t % 4);
    auto s = build_space(g, 5);
    auto pair = double_cycle_pair(s);
    if (!pair) continue;
    if (pair->degree > s.level()) continue;
    EXPECT_TRUE(pair->passed) << t;
  }
}

TEST(Freeness, StrongPairOnNamedGraphs) {
  for (auto g : {corpus::loops(2), corpus::double_loop_return()}) {
    auto basins = strong_pair_basins(g);
    ASSERT_TRUE(basins);
    const auto degree = strong_pair_degree(*basins);
    auto s = build_space(g, degree + 2);
    auto pair = strong_isometry_pair(s);
    ASSERT_TRUE(pair);
    EXPECT_EQ(pair->isometric, 0.0);
    EXPECT_EQ(pair->same_initial, 0.0);
    EXPECT_EQ(pair->cross, 0.0);
    EXPECT_TRUE(pair->passed);
  }
}

TEST(Freeness, StrongPairBasinShape) {
  auto g = corpus::double_loop_return();
  auto basins = strong_pair_basins(g);
  ASSERT_TRUE(basins);
  ASSERT_EQ(basins->size(), 1u);
  const auto& b = basins->front();
  EXPECT_EQ(b.vertices.size(), 2u);
  EXPECT_EQ(b.k, 2u);
  auto s = build_space(g, strong_pair_degree(*basins));
  auto pair = strong_isometry_pair(s);
  ASSERT_TRUE(pair);
  EXPECT_EQ(pair->u_table.size(), 2u);
  EXPECT_EQ(pair->v_table.size(), 2u);
  EXPECT_TRUE(pair->passed);
}

TEST(Freeness, StrongPairAbsentOnCycles) {
  for (std::size_t n = 2; n <= 4; ++n) {
    auto s = build_space(corpus::cycle(n), 6);
    EXPECT_FALSE(strong_isometry_pair(s));
  }
  EXPECT_FALSE(strong_isometry_pair(build_space(corpus::loop_with_tail(), 6)));
}

TEST(Freeness, StrongPairNeedsEnoughLevels) {
  auto s = build_space(corpus::double_loop_return(), 2);
  EXPECT_THROW(strong_isometry_pair(s), LevelTooSmall);
}

TEST(Freeness, StandardFormOfPartialIsometry) {
  auto g = corpus::loops(2);
  auto s = build_space(g, 6);
  // (L_e + L_f)/sqrt2 is an isometry in the algebra.
  auto v = (1.0 / std::sqrt(2.0)) * (left_creation(s, 0) + left_creation(s, 1));
  auto terms = standard_form(v, s);
  ASSERT_EQ(terms.size(), 1u);
  EXPECT_NEAR(std::abs(terms[0].wandering[s.index(parse_path(g, "e"))]), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_THROW(standard_form(left_creation(s, 0) + left_creation(s, 1), s), NotPartialIsometry);
  EXPECT_THROW(standard_form(right_creation(s, 0), s), NotInAlgebra);
}

TEST(Freeness, InnerOuterOfSingleLoopPolynomial) {
  auto g = corpus::loops(1);
  auto s = build_space(g, 10);
  auto l = left_creation(s, 0);
  auto a = l + l * l;
  auto f = inner_outer_factor(a, s);
  EXPECT_EQ(f.support, std::vector<std::size_t>{0});
  EXPECT_LT(f.factor_residual, 1e-9);
  EXPECT_LT(f.initial_residual, 1e-9);
  // The inner factor is L_e up to a phase: A = L_e (1 + L_e) and 1 + L_e is outer.
  auto coeffs = fourier_coefficients(f.inner, s).pruned(1e-9);
  ASSERT_EQ(coeffs.size(), 1u);
  EXPECT_NEAR(std::abs(coeffs.get(parse_path(g, "e"))), 1.0, 1e-9);
  EXPECT_EQ(f.outer_rank, f.corner_dim);
}

TEST(Freeness, InnerOuterOverCorpus) {
  std::mt19937 rng(31);
  for (const auto& [name, g] : corpus::standard()) {
    auto s = build_space(g, 5);
    CoefficientTable t;
    for (const auto& w : oracle::all_words(g, 1)) t.set(oracle::to_path(g, w), oracle::random_complex(rng));
    auto a = synthesize(t, s);
    auto f = inner_outer_factor(a, s);
    EXPECT_LT(f.factor_residual, 1e-9) << name;
    EXPECT_LT(f.initial_residual, 1e-9) << name;
  }
  EXPECT_THROW(inner_outer_factor(SparseOperator(build_space(corpus::loops(1), 3).dim()),
                                  build_space(corpus::loops(1), 3)),
               Error);
}

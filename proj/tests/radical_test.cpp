#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "fsga/corpus.hpp"
#include "fsga/radical.hpp"
#include "oracle.hpp"

using namespace fsga;

namespace {

std::vector<std::string> labels(const DirectedMultigraph& g, const std::vector<std::size_t>& es) {
  std::vector<std::string> out;
  for (auto e : es) out.push_back(g.edge(e).label);
  return out;
}

}  // namespace

TEST(Radical, GeneratorsOfNamedGraphs) {
  auto tree = corpus::two_edge_tree();
  EXPECT_EQ(labels(tree, radical_generators(tree)), (std::vector<std::string>{"e", "f"}));
  auto tail = corpus::loop_with_tail();
  EXPECT_EQ(labels(tail, radical_generators(tail)), (std::vector<std::string>{"f"}));
  auto bridge = corpus::two_loops_bridge();
  EXPECT_EQ(labels(bridge, radical_generators(bridge)), (std::vector<std::string>{"f"}));
  for (std::size_t n = 2; n <= 5; ++n) {
    EXPECT_TRUE(radical_generators(corpus::cycle(n)).empty());
    EXPECT_TRUE(is_semisimple(corpus::cycle(n)));
  }
  EXPECT_FALSE(is_semisimple(tree));
}

TEST(Radical, ProductsWithTwoOffCycleLettersVanish) {
  for (auto g : {corpus::two_edge_tree(), corpus::loop_with_tail(), corpus::two_loops_bridge()}) {
    auto s = build_space(g, 6);
    const auto off = off_cycle_mask(g);
    std::vector<SparseOperator> gens;
    for (std::size_t e = 0; e < g.edge_count(); ++e) gens.push_back(left_creation(s, e));
    // every letter sequence, admissible or not
    std::function<void(SparseOperator, std::size_t, std::size_t)> grow =
        [&](SparseOperator prod, std::size_t len, std::size_t count) {
          if (count >= 2) {
            EXPECT_TRUE(prod.is_zero());
          }
          if (len == 6) return;
          for (std::size_t e = 0; e < g.edge_count(); ++e)
            grow(gens[e] * prod, len + 1, count + (off[e] ? 1 : 0));
        };
    grow(SparseOperator::identity(s.dim()), 0, 0);
  }
}

TEST(Radical, NilpotencyCertificateMatchesBruteForce) {
  std::mt19937 rng(13);
  for (int t = 0; t < 40; ++t) {
    auto g = oracle::random_graph(rng, 1 + t % 5, t % 7);
    auto cert = nilpotency_certificate(g, 8);
    const auto off = oracle::off_cycle(g);
    std::vector<bool> mask(g.edge_count(), false);
    for (auto e : off) mask[e] = true;
    std::size_t best = 0;
    for (const auto& w : oracle::all_words(g, 8)) {
      std::size_t c = 0;
      for (auto e : w.edges) c += mask[e];
      best = std::max(best, c);
    }
    EXPECT_EQ(cert.max_off_cycle, best);
    EXPECT_TRUE(cert.holds());
    EXPECT_LT(cert.max_off_cycle, g.vertex_count());
  }
}

TEST(Radical, CertificateOnNamedGraphs) {
  for (auto g : {corpus::two_edge_tree(), corpus::loop_with_tail(), corpus::two_loops_bridge()}) {
    auto c = nilpotency_certificate(g, 20);
    EXPECT_EQ(c.max_off_cycle, 1u);
    EXPECT_TRUE(c.holds());
  }
}

TEST(Radical, Membership) {
  auto g = corpus::loop_with_tail();
  auto s = build_space(g, 5);
  auto f = left_creation(s, g.require_edge("f"));
  auto e = left_creation(s, g.require_edge("e"));
  EXPECT_TRUE(radical_membership(f * e + 2.0 * f, s));
  EXPECT_FALSE(radical_membership(f + e, s));
  EXPECT_THROW(radical_membership(right_creation(s, 0) + f, s), NotInAlgebra);
}

TEST(Radical, RadicalElementsAreNilpotent) {
  // (L_f + L_f L_e)^2 = 0 since f cannot follow f.
  auto g = corpus::loop_with_tail();
  auto s = build_space(g, 6);
  auto f = left_creation(s, g.require_edge("f"));
  auto e = left_creation(s, g.require_edge("e"));
  auto a = f + f * e;
  EXPECT_TRUE((a * a).is_zero());
  EXPECT_FALSE((e * e).is_zero());
}

TEST(Radical, BlockDecomposition) {
  auto g = corpus::by_name("chain_into_loops");
  auto d = block_decomposition(g);
  ASSERT_EQ(d.blocks.size(), 1u);
  EXPECT_EQ(d.blocks[0].vertices, std::vector<std::size_t>{2});
  EXPECT_EQ(d.leftover, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(d.off_block_edges.size(), 2u);
}

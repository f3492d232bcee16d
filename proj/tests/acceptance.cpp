// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "fsga/fsga.hpp"
#include "oracle.hpp"

using namespace fsga;

namespace {

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok && passed) detail << "failed: " << what << "; ";
    passed = passed && ok;
  }
};

int failures = 0;

void criterion(int k, const char* title, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.passed = false;
    o.detail << "exception: " << e.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.passed) ++failures;
  std::printf("%s criterion %2d: %s [%.1fs] %s\n", o.passed ? "PASS" : "FAIL", k, title, secs,
              o.detail.str().c_str());
  std::fflush(stdout);
}

std::vector<cplx> random_scalars(std::mt19937& rng, std::size_t k) {
  std::vector<cplx> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(oracle::random_complex(rng));
  return out;
}

CoefficientTable random_table(std::mt19937& rng, const FockSpace& s, std::size_t max_len) {
  const auto end = s.table().level_begin(max_len + 1);
  std::uniform_int_distribution<std::size_t> pick(0, end - 1);
  std::uniform_int_distribution<int> count(1, 8);
  CoefficientTable t;
  for (int i = count(rng); i > 0; --i) t.set(s.path(pick(rng)), oracle::random_complex(rng));
  return t;
}

Eigen::MatrixXcd random_unitary(std::mt19937& rng, Eigen::Index n) {
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = oracle::random_complex(rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
  return qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
}

double dense_diff(const SparseOperator& a, const Eigen::MatrixXcd& b) {
  return (to_dense(a) - b).cwiseAbs().maxCoeff();
}

}  // namespace

int main() {
  criterion(1, "generator relations exact at level 6 over the corpus", [](Outcome& o) {
    for (const auto& [name, g] : corpus::extended()) {
      auto s = build_space(g, 6);
      auto r = check_relations(s);
      o.require(r.residual == 0.0, name + " relations");
      auto f = check_fpir_family(s);
      o.require(f.passed, name + " partial isometry family " + f.detail);
    }
    o.detail << corpus::extended().size() << " graphs";
  });

  criterion(2, "[L_w, R_v] = 0 for |w|,|v| <= 3 at level 8", [](Outcome& o) {
    std::size_t pairs = 0;
    for (const auto& [name, g] : corpus::standard()) {
      auto s = build_space(g, 8);
      auto r = check_commutant(s, 3);
      o.require(r.residual == 0.0, name);
      const auto n = detail::words_up_to(s, 3).size();
      pairs += n * n;
    }
    o.detail << pairs << " word pairs";
  });

  criterion(3, "transpose duality W^* L_e W = R_e", [](Outcome& o) {
    for (const auto& [name, g] : corpus::extended()) {
      auto s = build_space(g, 6);
      o.require(check_transpose(s).residual == 0.0, name);
      // independent dense check of R_e against the word-by-word oracle
      for (std::size_t e = 0; e < g.edge_count(); ++e) {
        oracle::Word w{g.edge(e).src, {e}};
        o.require(dense_diff(right_creation(s, e), oracle::dense_word(s, w, false)) == 0.0,
                  name + " R_e oracle");
      }
    }
  });

  criterion(4, "Fourier round trip and commutant test", [](Outcome& o) {
    std::mt19937 rng(2024);
    const auto graphs = corpus::extended();
    double worst = 0.0, commutant = 0.0;
    for (int t = 0; t < 100; ++t) {
      const auto& g = graphs[static_cast<std::size_t>(t) % graphs.size()].graph;
      auto s = build_space(g, 6);
      auto table = random_table(rng, s, 3);
      auto a = synthesize(table, s);
      worst = std::max(worst, max_abs_diff(fourier_coefficients(a, s), table));
      commutant = std::max(commutant, commutant_residual(a, s));
    }
    o.require(worst <= 1e-12, "round trip");
    o.require(commutant == 0.0, "commutant of synthesized elements");
    double smallest = 1e300;
    for (int t = 0; t < 20; ++t) {
      const auto& g = graphs[static_cast<std::size_t>(t) % graphs.size()].graph;
      auto s = build_space(g, 6);
      if (g.edge_count() == 0) continue;
      auto a = synthesize(random_table(rng, s, 3), s);
      // move a path of length 1..3 onto a vertex: never an algebra element
      std::uniform_int_distribution<std::size_t> pu(s.table().level_begin(1),
                                                    s.table().level_begin(4) - 1);
      std::uniform_int_distribution<std::size_t> pv(0, g.vertex_count() - 1);
      std::uniform_real_distribution<double> mag(0.01, 1.0);
      std::vector<cplx> xv(s.dim()), xu(s.dim());
      xv[pv(rng)] = 1.0;
      xu[pu(rng)] = mag(rng);
      auto bad = a + SparseOperator::rank_one(xv, xu, a.degree());
      const double r = commutant_residual(bad, s);
      smallest = std::min(smallest, r);
      o.require(r > 1e-3, "perturbation " + std::to_string(t));
    }
    o.detail << "round trip " << worst << ", smallest perturbation residual " << smallest;
  });

  criterion(5, "radical generators, nilpotency certificate, vanishing products", [](Outcome& o) {
    const auto labels = [](const DirectedMultigraph& g) {
      std::vector<std::string> out;
      for (auto e : radical_generators(g)) out.push_back(g.edge(e).label);
      return out;
    };
    o.require(labels(corpus::loop_with_tail()) == std::vector<std::string>{"f"}, "loop with tail");
    o.require(labels(corpus::two_edge_tree()) == std::vector<std::string>{"e", "f"}, "tree");
    for (std::size_t n = 1; n <= 4; ++n)
      o.require(radical_generators(corpus::cycle(n)).empty(), "cycle " + std::to_string(n));
    for (auto g : {corpus::two_edge_tree(), corpus::loop_with_tail(), corpus::two_loops_bridge()}) {
      auto c = nilpotency_certificate(g, 20);
      o.require(c.max_off_cycle == 1 && c.holds(), "certificate");
      auto s = build_space(g, 6);
      const auto off = off_cycle_mask(g);
      std::vector<SparseOperator> gens;
      for (std::size_t e = 0; e < g.edge_count(); ++e) gens.push_back(left_creation(s, e));
      std::function<void(const SparseOperator&, std::size_t, std::size_t)> grow =
          [&](const SparseOperator& prod, std::size_t len, std::size_t count) {
            if (count >= 2) o.require(prod.is_zero(), "product with two off-cycle letters");
            if (len == 6) return;
            for (std::size_t e = 0; e < g.edge_count(); ++e)
              grow(gens[e] * prod, len + 1, count + (off[e] ? 1 : 0));
          };
      grow(SparseOperator::identity(s.dim()), 0, 0);
    }
  });

  criterion(6, "single-loop eigenvector at lambda = 1/2, level 20", [](Outcome& o) {
    auto g = corpus::loops(1);
    auto s = build_space(g, 20);
    auto ev = eigenvector(s, EigenPoint{0, {0.5}});
    auto l = left_creation(s, 0);
    auto lnu = l.adjoint().apply(ev.vector);
    double err = 0.0;
    for (std::size_t i = 0; i < s.dim(); ++i)
      err = std::max(err, std::abs(lnu[i] - 0.5 * ev.vector[i]));
    // the vector-norm residual, not just the largest entry
    std::vector<cplx> diff(s.dim());
    for (std::size_t i = 0; i < s.dim(); ++i) diff[i] = lnu[i] - 0.5 * ev.vector[i];
    const double norm_err = vector_norm(diff);
    o.require(norm_err <= 2.0 * std::pow(2.0, -20), "eigen residual");
    auto lk = SparseOperator::identity(s.dim());
    double moment = 0.0;
    for (int k = 0; k <= 5; ++k) {
      moment = std::max(moment, std::abs(point_functional(lk, ev.vector) - std::pow(0.5, k)));
      lk = l * lk;
    }
    o.require(moment <= 1e-5, "moments");
    bool rejected = false;
    try {
      eigenvector(build_space(corpus::cycle(3), 4), EigenPoint{0, {0.5, 0.0, 0.0}});
    } catch (const InvalidEigenPoint&) {
      rejected = true;
    }
    o.require(rejected, "loopless vertex with nonzero weight");
    o.detail << "residual " << norm_err << ", moment error " << moment;
  });

  criterion(7, "edge rank matrix equals transition matrix", [](Outcome& o) {
    for (const auto& [name, g] : corpus::extended()) {
      auto s = build_space(g, 4);
      o.require(edge_rank_matrix(s) == transition_matrix(g), name);
      o.require(transition_matrix(g) == oracle::multiplicity(g), name + " oracle");
    }
  });

  criterion(8, "golden-mean wandering subspace and cyclic split", [](Outcome& o) {
    auto g = corpus::golden();
    auto s = build_space(g, 6);
    auto a = right_creation(s, g.require_edge("e1")) + right_creation(s, g.require_edge("e2"));
    std::vector<std::vector<cplx>> cols;
    for (std::size_t c = 0; c < s.dim(); ++c) {
      auto col = a.column(c);
      if (vector_norm(col) > 0.0) cols.push_back(std::move(col));
    }
    auto w = wandering_basis(s, cols, Side::L);
    o.require(w.basis.size() == 2, "wandering dimension 2");
    const auto e1 = s.basis_vector(parse_path(g, "e1"));
    const auto e2 = s.basis_vector(parse_path(g, "e2"));
    for (const auto& v : w.basis) {
      const auto& target = v.vertex == g.require_vertex("x1") ? e1 : e2;
      double d = 0.0;
      for (std::size_t i = 0; i < s.dim(); ++i) d = std::max(d, std::abs(v.vector[i] - target[i]));
      o.require(d <= 1e-9, "wandering vector");
    }
    auto split = beurling_split(s, cols, Side::L);
    o.require(split.pieces.size() == 2, "two cyclic pieces");
    o.require(split.range_overlap == 0.0, "orthogonal ranges");
    o.require(split.reconstruction_residual <= 1e-9, "pieces span the subspace");
  });

  criterion(9, "free isometry pairs from double cycles", [](Outcome& o) {
    for (const auto& [name, g] : corpus::extended()) {
      auto s = build_space(g, 6);
      auto pair = double_cycle_pair(s);
      o.require(pair.has_value() == has_double_cycle(g).has_value(), name + " existence");
      bool brute = false;
      for (std::size_t x = 0; x < g.vertex_count(); ++x)
        brute = brute || oracle::first_return_count(g, x, 2 * g.vertex_count()) >= 2;
      o.require(brute == pair.has_value(), name + " oracle");
      if (pair) o.require(pair->passed, name + " pair relations");
    }
    for (auto g : {corpus::loops(2), corpus::double_loop_return()}) {
      auto basins = strong_pair_basins(g);
      o.require(basins.has_value(), "strong basins");
      if (!basins) continue;
      auto s = build_space(g, strong_pair_degree(*basins) + 2);
      auto sp = strong_isometry_pair(s);
      o.require(sp && sp->passed && sp->isometric == 0.0 && sp->same_initial == 0.0 &&
                    sp->cross == 0.0,
                "strong pair exact");
    }
    for (std::size_t n = 1; n <= 4; ++n)
      o.require(!strong_isometry_pair(build_space(corpus::cycle(n), 6)), "no pair on cycles");
  });

  criterion(10, "matrix forms of the fixture graphs", [](Outcome& o) {
    std::mt19937 rng(10);
    for (int t = 0; t < 5; ++t) {
      auto c = random_scalars(rng, 5);
      auto r = verify_fixture(Fixture::FiniteTree, {c, std::nullopt, 3}, 6);
      Eigen::MatrixXcd want = Eigen::MatrixXcd::Zero(5, 5);
      want(0, 0) = c[0];
      want(1, 1) = c[1];
      want(2, 2) = c[2];
      want(3, 0) = c[3];
      want(3, 3) = c[1];
      want(4, 0) = c[4];
      want(4, 4) = c[2];
      o.require(r.passed && r.reordered.rows() == 5 &&
                    (r.reordered - want).cwiseAbs().maxCoeff() == 0.0,
                "finite tree");
    }
    auto rc = verify_fixture(Fixture::Cycle, {random_scalars(rng, 3), std::nullopt, 3}, 6);
    o.require(rc.passed && rc.max_error == 0.0, "cycle placement " + rc.discrepancy);
    auto ru = verify_fixture(Fixture::Cycle, {{1.0, 1.0, 1.0}, std::nullopt, 3}, 6);
    for (std::size_t i = 0; i < 3; ++i)
      o.require(ru.block_summary[3 * i + i][(i + 2) % 3] == "1 T", "shift block");
    auto rb = verify_fixture(Fixture::CycleBlocked, {random_scalars(rng, 3), std::nullopt, 3}, 6);
    o.require(rb.passed, "blocked cycle " + rb.discrepancy);
    auto rt = verify_fixture(Fixture::LoopTail, {random_scalars(rng, 4), std::nullopt, 3}, 6);
    const auto nx = static_cast<Eigen::Index>(rt.layout.blocks[0].size());
    const auto ny = static_cast<Eigen::Index>(rt.layout.blocks[1].size());
    o.require(rt.passed && rt.reordered.block(0, nx, nx, ny).cwiseAbs().maxCoeff() == 0.0,
              "loop tail zero block");
  });

  criterion(11, "gauge unitaries and their automorphisms", [](Outcome& o) {
    std::mt19937 rng(11);
    double unitary = 0.0, conj = 0.0;
    for (int t = 0; t < 20; ++t) {
      auto g = t % 3 == 0 ? corpus::loops(2) : t % 3 == 1 ? corpus::loops(3) : corpus::by_name("parallel_pair");
      auto s = build_space(g, 5);
      GaugeData gd = identity_gauge(g);
      for (auto& [key, m] : gd.blocks) m = random_unitary(rng, m.rows());
      auto u = gauge_unitary(s, gd);
      unitary = std::max(unitary, max_abs_diff(u.adjoint() * u, SparseOperator::identity(s.dim())));
      for (const auto& e : u.entries())
        o.require(s.path(e.row).length() == s.path(e.col).length(), "level preserving");
      for (std::size_t x = 0; x < g.vertex_count(); ++x)
        o.require(u.column(x) == s.basis_vector(Path::vertex(x)), "vacuum fixing");
      for (std::size_t e = 0; e < g.edge_count(); ++e) {
        auto r = gauge_conjugate_check(s, gd, u, e);
        conj = std::max({conj, r.support_leak, r.coefficient_error, r.conjugate_residual});
      }
    }
    o.require(unitary <= 1e-12, "unitary");
    o.require(conj <= 1e-12, "conjugates");
    o.detail << "unitary " << unitary << ", conjugate " << conj;
  });

  criterion(12, "classification with intertwining unitaries", [](Outcome& o) {
    auto c3 = corpus::cycle(3);
    auto rot = DirectedMultigraph({"y1", "y2", "y3"}, std::vector<EdgeSpec>{{"a", "y2", "y3"},
                                                                          {"b", "y3", "y1"},
                                                                          {"c", "y1", "y2"}});
    auto v = classify_pair(c3, rot, 6);
    o.require(v.verdict == Verdict::Isomorphic && v.intertwining_residual == 0.0, "rotated cycle");
    std::mt19937 rng(12);
    int distinguished = 0;
    while (distinguished < 10) {
      auto g1 = oracle::random_graph(rng, 3, 4);
      auto g2 = oracle::random_graph(rng, 3, 4);
      if (oracle::isomorphic(g1, g2)) continue;
      o.require(classify_pair(g1, g2, 4).verdict == Verdict::Distinguished, "non-isomorphic pair");
      ++distinguished;
    }
    for (int t = 0; t < 10; ++t) {
      auto g = oracle::random_graph(rng, 3, 5);
      auto h = oracle::shuffled(rng, g);
      auto r = classify_pair(g, h, 4);
      o.require(r.verdict == Verdict::Isomorphic && r.intertwining_residual == 0.0,
                "self-isomorphism");
    }
  });

  std::printf("%s: %d of 12 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}

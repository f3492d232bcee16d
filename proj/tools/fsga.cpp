// fsga: command-line front end for the free semigroupoid algebra toolkit.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fsga/fsga.hpp"
#include "fsga/io.hpp"

using namespace fsga;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFailed = 2;

struct Options {
  bool json_out = false;
  std::size_t level = 6;
};

std::string fmt(double x) { return io::format_double(x); }

std::string fmt(cplx c) {
  if (c.imag() == 0.0) return fmt(c.real());
  char buf[80];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", c.real(), c.imag());
  return buf;
}

std::vector<std::string> names(const DirectedMultigraph& g, const std::vector<std::size_t>& edges) {
  std::vector<std::string> out;
  for (auto e : edges) out.push_back(g.edge(e).label);
  return out;
}

// Text rendering of a report: one "key: value" line per top-level field.
void print_text(const json& j) {
  for (const auto& [key, v] : j.items()) {
    if (v.is_string()) {
      std::cout << key << ": " << v.get<std::string>() << '\n';
    } else if (v.is_array() && std::all_of(v.begin(), v.end(), [](const json& x) {
                 return x.is_number() || x.is_boolean() ||
                        (x.is_string() && x.get<std::string>().find(' ') == std::string::npos);
               })) {
      std::cout << key << ":";
      for (const auto& x : v) std::cout << ' ' << (x.is_string() ? x.get<std::string>() : x.dump());
      std::cout << '\n';
    } else if (v.is_array()) {
      std::cout << key << ":\n";
      for (const auto& x : v)
        std::cout << "  " << (x.is_string() ? x.get<std::string>() : x.dump()) << '\n';
    } else {
      std::cout << key << ": " << v.dump() << '\n';
    }
  }
}

void emit(const Options& o, const json& report) {
  if (!o.json_out) return print_text(report);
  json j{{"schema_version", io::kSchemaVersion}};
  j.update(report);
  std::cout << j.dump(2) << '\n';
}

FockSpace space_for(const DirectedMultigraph& g, std::size_t level) {
  std::uint64_t total = 0;
  for (auto c : path_counts(g, level)) total = detail::saturating_add(total, c);
  if (total > kBasisWarnThreshold)
    std::cerr << "warning: basis has " << total << " paths at level " << level << '\n';
  return build_space(g, level);
}

json check_json(const CheckResult& c) {
  return {{"name", c.name}, {"passed", c.passed}, {"residual", c.residual}, {"detail", c.detail}};
}

// ---------------------------------------------------------------------------

int cmd_analyze(const Options& o, const std::string& file) {
  auto g = io::load_graph(file);
  json j;
  j["vertices"] = g.vertices();
  std::vector<std::string> edges;
  for (const auto& e : g.edges())
    edges.push_back(e.label + ":" + g.vertex_label(e.src) + "->" + g.vertex_label(e.dst));
  j["edges"] = edges;
  j["transition_matrix"] = transition_matrix(g);
  auto scc = strongly_connected_components(g);
  json comps = json::array();
  for (const auto& c : scc.components) {
    std::vector<std::string> vs;
    for (auto v : c) vs.push_back(g.vertex_label(v));
    comps.push_back(vs);
  }
  j["strong_components"] = comps;
  j["radical_generators"] = names(g, radical_generators(g));
  j["semisimple"] = is_semisimple(g);
  auto dc = has_double_cycle(g);
  j["double_cycle"] = dc ? g.vertex_label(dc->vertex) + ": " + display(g, make_path(g, dc->first)) +
                               " , " + display(g, make_path(g, dc->second))
                         : std::string("none");
  j["strong_double_cycle"] = has_strong_double_cycle(g).holds;
  std::vector<std::uint64_t> counts = path_counts(g, o.level);
  j["path_counts"] = counts;
  emit(o, j);
  return kExitOk;
}

int cmd_fock(const Options& o, const std::string& file, const std::string& op,
             const std::string& out, bool basis) {
  auto g = io::load_graph(file);
  auto s = space_for(g, o.level);
  auto expr = parse_op_expr(op);
  auto a = evaluate(*expr, s);
  if (!out.empty()) {
    std::ofstream f(out);
    if (!f) throw Error("cannot write '" + out + "'");
    io::write_matrix(f, a);
  }
  if (o.json_out) {
    json j{{"expression", print_op_expr(*expr)}, {"dim", a.dim()}, {"degree", a.degree()},
           {"nnz", a.nnz()}};
    if (out.empty()) {
      json entries = json::array();
      for (const auto& e : a.entries())
        entries.push_back({e.row, e.col, e.value.real(), e.value.imag()});
      j["entries"] = entries;
    }
    if (basis) {
      std::vector<std::string> paths;
      for (std::size_t i = 0; i < s.dim(); ++i) paths.push_back(display(g, s.path(i)));
      j["basis"] = paths;
    }
    emit(o, j);
    return kExitOk;
  }
  if (basis) io::write_basis(std::cout, s);
  if (out.empty())
    io::write_matrix(std::cout, a);
  else
    std::cout << "expression: " << print_op_expr(*expr) << "\ndim: " << a.dim()
              << "\ndegree: " << a.degree() << "\nnnz: " << a.nnz() << '\n';
  return kExitOk;
}

// "e=0.5" or "e=0.5,0.25i"
void parse_lambda(const DirectedMultigraph& g, const std::string& text, std::vector<cplx>& lambda) {
  auto eq = text.find('=');
  if (eq == std::string::npos) throw ParseError("--lambda expects edge=RE[,IMi]", 0);
  auto e = g.require_edge(text.substr(0, eq));
  std::string value = text.substr(eq + 1);
  double re = 0.0, im = 0.0;
  auto comma = value.find(',');
  const auto number = [&](const std::string& s, std::size_t at) {
    char* end = nullptr;
    double x = std::strtod(s.c_str(), &end);
    if (end == s.c_str()) throw ParseError("bad number in --lambda", at);
    return std::pair{x, std::string(end)};
  };
  auto [r, rest] = number(value.substr(0, comma), eq + 1);
  if (!rest.empty()) throw ParseError("bad real part in --lambda", eq + 1);
  re = r;
  if (comma != std::string::npos) {
    auto [i, tail] = number(value.substr(comma + 1), eq + 2 + comma);
    if (tail != "i") throw ParseError("imaginary part must end in 'i'", eq + 2 + comma);
    im = i;
  }
  lambda[e] = {re, im};
}

int cmd_eig(const Options& o, const std::string& file, const std::string& vertex,
            const std::vector<std::string>& lambdas) {
  auto g = io::load_graph(file);
  auto s = space_for(g, o.level);
  EigenPoint p{g.require_vertex(vertex), std::vector<cplx>(g.edge_count())};
  for (const auto& l : lambdas) parse_lambda(g, l, p.lambda);
  auto ev = eigenvector(s, p);
  double measured = 0.0;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    auto lnu = left_creation(s, e).adjoint().apply(ev.vector);
    for (std::size_t i = 0; i < s.dim(); ++i)
      measured = std::max(measured, std::abs(lnu[i] - std::conj(p.lambda[e]) * ev.vector[i]));
  }
  const bool ok = measured <= ev.eigen_residual + kEntryTolerance;
  json coeffs = json::array();
  for (std::size_t i = 0; i < s.dim(); ++i)
    if (ev.vector[i] != cplx{}) coeffs.push_back(display(g, s.path(i)) + " " + fmt(ev.vector[i]));
  emit(o, {{"vertex", vertex},
           {"norm", ev.norm},
           {"tail", ev.tail},
           {"residual_bound", ev.eigen_residual},
           {"residual", measured},
           {"passed", ok},
           {"coefficients", coeffs}});
  return ok ? kExitOk : kExitFailed;
}

int cmd_radical(const Options& o, const std::string& file) {
  auto g = io::load_graph(file);
  auto s = space_for(g, o.level);
  auto cert = nilpotency_certificate(g, std::max<std::size_t>(20, o.level));
  auto blocks = block_decomposition(g);
  json bl = json::array();
  for (const auto& b : blocks.blocks) {
    std::vector<std::string> vs;
    for (auto v : b.vertices) vs.push_back(g.vertex_label(v));
    bl.push_back(vs);
  }
  // Every product of two radical generators with a word in between vanishes
  // or stays in the radical; check the nilpotency bound on the space.
  const auto off = radical_generators(g);
  SparseOperator rad(s.dim());
  for (auto e : off) rad = rad + left_creation(s, e);
  SparseOperator power = SparseOperator::identity(s.dim());
  std::size_t index = 0;
  while (!power.is_zero() && index <= g.vertex_count()) {
    power = power * rad;
    ++index;
  }
  const bool ok = cert.holds() && (off.empty() || index <= g.vertex_count());
  std::vector<std::string> leftover;
  for (auto v : blocks.leftover) leftover.push_back(g.vertex_label(v));
  emit(o, {{"radical_generators", names(g, off)},
           {"semisimple", off.empty()},
           {"transitive_blocks", bl},
           {"leftover_vertices", leftover},
           {"max_off_cycle_letters", cert.max_off_cycle},
           {"vertex_bound", cert.vertex_bound},
           {"scan_length", cert.scan_length},
           {"generator_sum_nilpotency_index", off.empty() ? 0 : index},
           {"passed", ok}});
  return ok ? kExitOk : kExitFailed;
}

json pair_json(const DirectedMultigraph& g, const IsometryPairReport& r) {
  std::vector<std::string> u, v;
  for (const auto& [w, c] : r.u_table) u.push_back(display(g, w));
  for (const auto& [w, c] : r.v_table) v.push_back(display(g, w));
  return {{"u_words", u},          {"v_words", v},       {"degree", r.degree},
          {"same_initial", r.same_initial}, {"cross", r.cross}, {"isometric", r.isometric},
          {"passed", r.passed}};
}

int cmd_free(const Options& o, const std::string& file) {
  auto g = io::load_graph(file);
  auto s = space_for(g, o.level);
  json j;
  bool ok = true;
  auto pair = double_cycle_pair(s);
  j["double_cycle"] = has_double_cycle(g).has_value();
  j["double_cycle_pair"] = pair ? pair_json(g, *pair) : json("none");
  if (pair) ok = ok && pair->passed;
  auto strong = has_strong_double_cycle(g);
  j["strong_double_cycle"] = strong.holds;
  if (!strong.holds) {
    std::vector<std::string> failing;
    for (auto v : strong.failing) failing.push_back(g.vertex_label(v));
    j["vertices_without_double_cycle"] = failing;
    j["strong_isometry_pair"] = "none";
  } else {
    try {
      auto sp = strong_isometry_pair(s);
      j["strong_isometry_pair"] = pair_json(g, *sp);
      ok = ok && sp->passed;
    } catch (const LevelTooSmall& e) {
      j["strong_isometry_pair"] = std::string("level too small: ") + e.what();
      ok = false;
    }
  }
  j["passed"] = ok;
  emit(o, j);
  return ok ? kExitOk : kExitFailed;
}

int cmd_classify(const Options& o, const std::string& f1, const std::string& f2) {
  auto g1 = io::load_graph(f1);
  auto g2 = io::load_graph(f2);
  space_for(g1, 0);
  auto v = classify_pair(g1, g2, o.level);
  json j{{"verdict", v.verdict == Verdict::Isomorphic ? "isomorphic" : "distinguished"}};
  if (v.witness) {
    std::vector<std::string> vm, em;
    for (std::size_t x = 0; x < g1.vertex_count(); ++x)
      vm.push_back(g1.vertex_label(x) + "->" + g2.vertex_label(v.witness->vertex_map[x]));
    for (std::size_t e = 0; e < g1.edge_count(); ++e)
      em.push_back(g1.edge(e).label + "->" + g2.edge(v.witness->edge_map[e]).label);
    j["vertex_map"] = vm;
    j["edge_map"] = em;
    j["intertwining_residual"] = v.intertwining_residual;
  } else {
    j["invariant"] = v.invariant;
  }
  emit(o, j);
  return v.verdict == Verdict::Isomorphic && v.intertwining_residual != 0.0 ? kExitFailed : kExitOk;
}

int cmd_gauge(const Options& o, const std::string& file, const std::string& blocks) {
  auto g = io::load_graph(file);
  auto gd = io::load_gauge(g, blocks);
  auto s = space_for(g, o.level);
  auto u = gauge_unitary(s, gd);
  const double unitary = max_abs_diff(u.adjoint() * u, SparseOperator::identity(s.dim()));
  bool level_preserving = true;
  for (const auto& e : u.entries())
    if (s.path(e.row).length() != s.path(e.col).length()) level_preserving = false;
  double vacuum = 0.0;
  for (std::size_t x = 0; x < g.vertex_count(); ++x) {
    auto col = u.column(x);
    col[x] -= 1.0;
    vacuum = std::max(vacuum, vector_norm(col));
  }
  bool ok = unitary <= kEntryTolerance && level_preserving && vacuum <= kEntryTolerance;
  json edges = json::array();
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    auto r = gauge_conjugate_check(s, gd, u, e);
    std::string image;
    for (const auto& [w, c] : r.expected) {
      const bool minus = c.imag() == 0.0 && c.real() < 0.0 && !image.empty();
      image += (image.empty() ? "" : minus ? " - " : " + ") + fmt(minus ? -c : c) + " L[" +
               display(g, w) + "]";
    }
    edges.push_back({{"edge", g.edge(e).label},
                     {"image", image},
                     {"support_leak", r.support_leak},
                     {"coefficient_error", r.coefficient_error},
                     {"passed", r.passed()}});
    ok = ok && r.passed();
  }
  emit(o, {{"unitary_residual", unitary},
           {"level_preserving", level_preserving},
           {"vacuum_residual", vacuum},
           {"conjugates", edges},
           {"passed", ok}});
  return ok ? kExitOk : kExitFailed;
}

int cmd_verify(const Options& o, const std::string& file) {
  auto g = io::load_graph(file);
  space_for(g, o.level);
  auto rep = run_suite(g, o.level);
  json checks = json::array();
  for (const auto& c : rep.checks) checks.push_back(check_json(c));
  if (o.json_out) {
    emit(o, {{"level", rep.level}, {"checks", checks}, {"passed", rep.passed()}});
  } else {
    for (const auto& c : rep.checks)
      std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << " residual=" << fmt(c.residual)
                << (c.detail.empty() ? "" : " (" + c.detail + ")") << '\n';
    std::cout << (rep.passed() ? "all checks passed" : "some checks failed") << '\n';
  }
  return rep.passed() ? kExitOk : kExitFailed;
}

std::vector<cplx> parse_scalars(const std::string& text) {
  std::vector<cplx> out;
  std::stringstream ss(text);
  std::string item;
  std::size_t offset = 0;
  while (std::getline(ss, item, ',')) {
    auto e = parse_op_expr(item);
    if (e->kind != OpExpr::Kind::Scalar) throw ParseError("--scalars takes numbers", offset);
    out.push_back(e->scalar);
    offset += item.size() + 1;
  }
  return out;
}

std::vector<cplx> default_scalars(Fixture f, std::size_t n) {
  std::size_t k = 0;
  switch (f) {
    case Fixture::FiniteTree: k = 5; break;
    case Fixture::LoopTail: k = 4; break;
    case Fixture::LoopBridge: k = 5; break;
    case Fixture::Cycle:
    case Fixture::CycleBlocked: k = n; break;
  }
  std::vector<cplx> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back({1.0 + static_cast<double>(i), 0.5});
  return out;
}

int cmd_beurling(const Options& o) {
  auto g = corpus::golden();
  auto s = space_for(g, o.level);
  auto a = right_creation(s, g.require_edge("e1")) + right_creation(s, g.require_edge("e2"));
  std::vector<std::vector<cplx>> cols;
  for (std::size_t c = 0; c < s.dim(); ++c) {
    auto col = a.column(c);
    if (vector_norm(col) > 0.0) cols.push_back(std::move(col));
  }
  auto w = wandering_basis(s, cols, Side::L);
  auto split = beurling_split(s, cols, Side::L);
  json basis = json::array();
  for (const auto& v : w.basis) {
    std::string terms;
    for (std::size_t i = 0; i < s.dim(); ++i)
      if (v.vector[i] != cplx{}) terms += (terms.empty() ? "" : " + ") + fmt(v.vector[i]) + " " + display(g, s.path(i));
    basis.push_back(terms);
  }
  const bool ok = w.basis.size() == 2 && split.range_overlap == 0.0 &&
                  split.reconstruction_residual <= kRankTolerance;
  emit(o, {{"subspace_dim", w.subspace_dim},
           {"wandering_dim", w.basis.size()},
           {"wandering_basis", basis},
           {"cyclic_pieces", split.pieces.size()},
           {"range_overlap", split.range_overlap},
           {"reconstruction_residual", split.reconstruction_residual},
           {"passed", ok}});
  return ok ? kExitOk : kExitFailed;
}

int cmd_example(const Options& o, const std::string& id, const std::string& scalars,
                std::size_t n) {
  if (id == "beurling") return cmd_beurling(o);
  auto f = parse_fixture(id);
  FixtureParams p{scalars.empty() ? default_scalars(f, n) : parse_scalars(scalars), std::nullopt, n};
  auto r = verify_fixture(f, p, o.level);
  json summary = json::array();
  for (std::size_t i = 0; i < r.block_summary.size(); ++i) {
    std::string row = r.layout.names[i] + ":";
    for (const auto& cell : r.block_summary[i]) row += " [" + cell + "]";
    summary.push_back(row);
  }
  emit(o, {{"fixture", r.id},
           {"level", r.level},
           {"dim", r.reordered.rows()},
           {"blocks", summary},
           {"max_error", r.max_error},
           {"discrepancy", r.discrepancy.empty() ? std::string("none") : r.discrepancy},
           {"passed", r.passed}});
  return r.passed ? kExitOk : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Truncated Fock-space computations for free semigroupoid algebras of graphs"};
  app.require_subcommand(1);
  Options o;
  app.add_flag("--json", o.json_out, "Emit reports as JSON");

  std::string graph, graph2, op, out, vertex, blocks, id, scalars;
  std::vector<std::string> lambdas;
  bool basis = false;
  std::size_t n = 3;

  const auto level = [&](CLI::App* sub) {
    sub->add_option("--level", o.level, "Truncation level N")->capture_default_str();
    sub->add_flag("--json", o.json_out, "Emit reports as JSON");
  };

  auto* analyze = app.add_subcommand("analyze", "Graph invariants");
  analyze->add_option("graph", graph, "Graph JSON file")->required();
  level(analyze);

  auto* fock = app.add_subcommand("fock", "Evaluate an operator expression");
  fock->add_option("graph", graph, "Graph JSON file")->required();
  fock->add_option("--op", op, "Expression, e.g. \"2L[e] . adj(L[e]) - P[x]\"")->required();
  fock->add_option("--out", out, "Write the matrix to this file");
  fock->add_flag("--basis", basis, "Also list the basis paths");
  level(fock);

  auto* eig = app.add_subcommand("eig", "Eigenvector of the adjoint generators");
  eig->add_option("graph", graph, "Graph JSON file")->required();
  eig->add_option("--vertex", vertex, "Base vertex")->required();
  eig->add_option("--lambda", lambdas, "Loop weight edge=RE[,IMi]; repeatable");
  level(eig);

  auto* radical = app.add_subcommand("radical", "Radical generators and nilpotency");
  radical->add_option("graph", graph, "Graph JSON file")->required();
  level(radical);

  auto* free_cmd = app.add_subcommand("free", "Free isometry pairs");
  free_cmd->add_option("graph", graph, "Graph JSON file")->required();
  level(free_cmd);

  auto* classify = app.add_subcommand("classify", "Isomorphism test with intertwiner");
  classify->add_option("graph1", graph, "First graph JSON file")->required();
  classify->add_option("graph2", graph2, "Second graph JSON file")->required();
  level(classify);

  auto* gauge = app.add_subcommand("gauge", "Gauge unitary and automorphism check");
  gauge->add_option("graph", graph, "Graph JSON file")->required();
  gauge->add_option("--blocks", blocks, "Gauge block JSON file")->required();
  level(gauge);

  auto* verify = app.add_subcommand("verify", "Run the full invariant suite");
  verify->add_option("graph", graph, "Graph JSON file")->required();
  level(verify);

  auto* example = app.add_subcommand("example", "Verify a matrix-form fixture");
  example->add_option("id", id,
                      "finite_tree, loop_tail, loop_bridge, cycle, cycle_blocked or beurling")
      ->required();
  example->add_option("--scalars", scalars, "Comma-separated coefficients, e.g. 1,2i,(1+2i)");
  example->add_option("--n", n, "Cycle length")->capture_default_str();
  level(example);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*analyze) return cmd_analyze(o, graph);
    if (*fock) return cmd_fock(o, graph, op, out, basis);
    if (*eig) return cmd_eig(o, graph, vertex, lambdas);
    if (*radical) return cmd_radical(o, graph);
    if (*free_cmd) return cmd_free(o, graph);
    if (*classify) return cmd_classify(o, graph, graph2);
    if (*gauge) return cmd_gauge(o, graph, blocks);
    if (*verify) return cmd_verify(o, graph);
    if (*example) return cmd_example(o, id, scalars, n);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

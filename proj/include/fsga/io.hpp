#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "fsga/error.hpp"
#include "fsga/fock.hpp"
#include "fsga/fourier.hpp"
#include "fsga/gauge.hpp"
#include "fsga/graph.hpp"
#include "fsga/path.hpp"
#include "fsga/sparse.hpp"

namespace fsga::io {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// Graph JSON: {"vertices": [...], "edges": [{"id", "src", "dst"}, ...]}

inline DirectedMultigraph graph_from_json(const json& j) {
  if (!j.is_object() || !j.contains("vertices") || !j["vertices"].is_array())
    throw InvalidGraph("graph JSON needs a \"vertices\" array");
  std::vector<std::string> vertices;
  for (const auto& v : j["vertices"]) {
    if (!v.is_string()) throw InvalidGraph("vertex labels must be strings");
    vertices.push_back(v.get<std::string>());
  }
  std::vector<EdgeSpec> edges;
  if (j.contains("edges")) {
    if (!j["edges"].is_array()) throw InvalidGraph("\"edges\" must be an array");
    for (const auto& e : j["edges"]) {
      for (const char* key : {"id", "src", "dst"})
        if (!e.is_object() || !e.contains(key) || !e[key].is_string())
          throw InvalidGraph(std::string("edge entries need a string \"") + key + "\"");
      edges.push_back({e["id"].get<std::string>(), e["src"].get<std::string>(),
                       e["dst"].get<std::string>()});
    }
  }
  return DirectedMultigraph(std::move(vertices), edges);
}

inline DirectedMultigraph parse_graph(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), e.byte);
  }
  return graph_from_json(j);
}

inline DirectedMultigraph load_graph(const std::string& path) { return parse_graph(read_file(path)); }

inline json graph_to_json(const DirectedMultigraph& g) {
  json j;
  j["vertices"] = g.vertices();
  j["edges"] = json::array();
  for (const auto& e : g.edges())
    j["edges"].push_back(
        {{"id", e.label}, {"src", g.vertex_label(e.src)}, {"dst", g.vertex_label(e.dst)}});
  return j;
}

inline json matrix_to_json(const IntMatrix& m) { return json(m); }

// ---------------------------------------------------------------------------
// Gauge JSON: {"blocks": {"x->y": [[entry, ...], ...]}}, entry = number or [re, im]

inline cplx complex_from_json(const json& v) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  throw ParseError("complex entry must be a number or [re, im]", 0);
}

inline json complex_to_json(cplx c) { return json::array({c.real(), c.imag()}); }

inline GaugeData gauge_from_json(const DirectedMultigraph& g, const json& j) {
  if (!j.is_object() || !j.contains("blocks") || !j["blocks"].is_object())
    throw ParseError("gauge JSON needs a \"blocks\" object", 0);
  GaugeData gd;
  for (const auto& [key, rows] : j["blocks"].items()) {
    auto arrow = key.find("->");
    if (arrow == std::string::npos) throw ParseError("block key '" + key + "' is not src->dst", 0);
    auto src = g.require_vertex(key.substr(0, arrow));
    auto dst = g.require_vertex(key.substr(arrow + 2));
    if (!rows.is_array()) throw ParseError("block '" + key + "' must be an array of rows", 0);
    const auto n = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
      const auto& row = rows[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
        throw ParseError("block '" + key + "' is not square", 0);
      for (Eigen::Index c = 0; c < n; ++c) m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
    }
    gd.blocks[{src, dst}] = std::move(m);
  }
  return gd;
}

inline GaugeData load_gauge(const DirectedMultigraph& g, const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), e.byte);
  }
  return gauge_from_json(g, j);
}

inline json gauge_to_json(const DirectedMultigraph& g, const GaugeData& gd) {
  json blocks = json::object();
  for (const auto& [key, m] : gd.blocks) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
      rows.push_back(std::move(row));
    }
    blocks[g.vertex_label(key.first) + "->" + g.vertex_label(key.second)] = std::move(rows);
  }
  return json{{"schema_version", kSchemaVersion}, {"blocks", std::move(blocks)}};
}

// ---------------------------------------------------------------------------
// Text formats

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// "dim <d> degree <g>" then one "row col re im" line per stored entry.
inline void write_matrix(std::ostream& out, const SparseOperator& a) {
  out << "dim " << a.dim() << " degree " << a.degree() << '\n';
  for (const auto& e : a.entries())
    out << e.row << ' ' << e.col << ' ' << format_double(e.value.real()) << ' '
        << format_double(e.value.imag()) << '\n';
}

inline SparseOperator read_matrix(std::istream& in) {
  std::string line, word1, word2;
  std::size_t dim = 0, degree = 0;
  std::getline(in, line);
  std::istringstream head(line);
  if (!(head >> word1 >> dim >> word2 >> degree) || word1 != "dim" || word2 != "degree")
    throw ParseError("matrix header must be 'dim <d> degree <g>'", 0);
  std::size_t offset = line.size() + 1;
  std::vector<Entry> entries;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::size_t r, c;
    double re, im;
    std::string extra;
    if (line.find_first_not_of(" \t\r") != std::string::npos) {
      if (!(ls >> r >> c >> re >> im) || (ls >> extra))
        throw ParseError("matrix entry line must be '<row> <col> <re> <im>'", offset);
      if (r >= dim || c >= dim) throw ParseError("matrix entry outside dimension", offset);
      entries.push_back({r, c, {re, im}});
    }
    offset += line.size() + 1;
  }
  return SparseOperator::from_entries(dim, std::move(entries), degree);
}

/// "basis <index> <path>" for every basis vector.
inline void write_basis(std::ostream& out, const FockSpace& s) {
  for (std::size_t i = 0; i < s.dim(); ++i)
    out << "basis " << i << ' ' << display(s.graph(), s.path(i)) << '\n';
}

/// "<path> <re> <im>" per coefficient.
inline void write_coefficients(std::ostream& out, const DirectedMultigraph& g,
                               const CoefficientTable& t) {
  for (const auto& [w, a] : t)
    out << display(g, w) << ' ' << format_double(a.real()) << ' ' << format_double(a.imag())
        << '\n';
}

inline CoefficientTable read_coefficients(std::istream& in, const DirectedMultigraph& g) {
  CoefficientTable t;
  std::string line;
  std::size_t offset = 0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string path;
    double re, im;
    if (!(ls >> path)) {
      offset += line.size() + 1;
      continue;
    }
    if (!(ls >> re >> im)) throw ParseError("coefficient line needs '<path> <re> <im>'", offset);
    t.add(parse_path(g, path), {re, im});
    offset += line.size() + 1;
  }
  return t;
}

/// Coefficients of a vector, keyed by the basis paths it touches.
inline CoefficientTable vector_table(const FockSpace& s, const std::vector<cplx>& v) {
  CoefficientTable t;
  for (std::size_t i = 0; i < v.size(); ++i) t.set(s.path(i), v[i]);
  return t;
}

inline json coefficients_to_json(const DirectedMultigraph& g, const CoefficientTable& t) {
  json j = json::array();
  for (const auto& [w, a] : t) j.push_back({{"path", display(g, w)}, {"value", complex_to_json(a)}});
  return j;
}

}  // namespace fsga::io

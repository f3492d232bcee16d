#pragma once

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "fsga/error.hpp"
#include "fsga/fock.hpp"
#include "fsga/path.hpp"
#include "fsga/sparse.hpp"

namespace fsga {

// Operator expressions over the generators:
//   expr    := ['-'] term (('+' | '-') term)*
//   term    := factor (('.' | '*') factor)*
//   factor  := scalar [primary] | primary
//   (a parenthesized scalar counts as a scalar)
//   primary := atom | 'adj(' expr ')' | '(' expr ')'
//   atom    := ('L' | 'R' | 'P' | 'Q' | 'E') '[' label ']' | 'I'
//   scalar  := number ['i'] | 'i'
// L[...] and R[...] accept a path "e2.e1" or a vertex.
struct OpExpr {
  enum class Kind { Atom, Scalar, Adjoint, Add, Sub, Mul, Neg };
  Kind kind = Kind::Scalar;
  char atom = 0;  // 'L', 'R', 'P', 'Q', 'E' or 'I'
  std::string label;
  cplx scalar{};
  std::vector<std::shared_ptr<const OpExpr>> children;
  std::size_t offset = 0;
};

using ExprPtr = std::shared_ptr<const OpExpr>;

namespace detail {

class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : text_(text) {}

  ExprPtr parse() {
    auto e = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  static ExprPtr node(OpExpr::Kind k, std::vector<ExprPtr> kids, std::size_t at) {
    auto n = std::make_shared<OpExpr>();
    n->kind = k;
    n->children = std::move(kids);
    n->offset = at;
    return n;
  }

  static ExprPtr scalar_node(cplx v, std::size_t at) {
    auto n = std::make_shared<OpExpr>();
    n->kind = OpExpr::Kind::Scalar;
    n->scalar = v;
    n->offset = at;
    return n;
  }

  // Sums and negations of plain scalars collapse to one scalar.
  static ExprPtr fold(OpExpr::Kind k, ExprPtr a, ExprPtr b, std::size_t at) {
    using K = OpExpr::Kind;
    if (a->kind == K::Scalar && b && b->kind == K::Scalar) {
      if (k == K::Add) return scalar_node(a->scalar + b->scalar, a->offset);
      if (k == K::Sub) return scalar_node(a->scalar - b->scalar, a->offset);
    }
    if (k == K::Neg && a->kind == K::Scalar) return scalar_node(-a->scalar, at);
    if (k == K::Neg) return node(k, {a}, at);
    return node(k, {a, b}, at);
  }

  ExprPtr expr() {
    skip();
    const auto at = pos_;
    ExprPtr left;
    if (accept('-'))
      left = fold(OpExpr::Kind::Neg, term(), nullptr, at);
    else
      left = term();
    while (true) {
      skip();
      const auto op_at = pos_;
      if (accept('+'))
        left = fold(OpExpr::Kind::Add, left, term(), op_at);
      else if (accept('-'))
        left = fold(OpExpr::Kind::Sub, left, term(), op_at);
      else
        return left;
    }
  }

  ExprPtr term() {
    auto left = factor();
    while (true) {
      skip();
      const auto at = pos_;
      if (accept('.') || accept('*'))
        left = node(OpExpr::Kind::Mul, {left, factor()}, at);
      else
        return left;
    }
  }

  bool at_number() {
    skip();
    if (pos_ >= text_.size()) return false;
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) return true;
    return c == '.' && pos_ + 1 < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]));
  }

  bool at_imaginary_unit() {
    skip();
    return pos_ < text_.size() && text_[pos_] == 'i' &&
           (pos_ + 1 >= text_.size() || !std::isalnum(static_cast<unsigned char>(text_[pos_ + 1])));
  }

  double number() {
    const auto start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.' && pos_ + 1 < text_.size() &&
        std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      auto p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
        pos_ = p;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    return std::strtod(std::string(text_.substr(start, pos_ - start)).c_str(), nullptr);
  }

  bool at_primary() {
    skip();
    if (pos_ >= text_.size()) return false;
    char c = text_[pos_];
    return c == '(' || c == 'L' || c == 'R' || c == 'P' || c == 'Q' || c == 'E' || c == 'I' ||
           text_.substr(pos_, 4) == "adj(";
  }

  ExprPtr factor() {
    skip();
    const auto at = pos_;
    if (at_number() || at_imaginary_unit()) {
      cplx v;
      if (at_imaginary_unit()) {
        ++pos_;
        v = {0.0, 1.0};
      } else {
        double x = number();
        if (at_imaginary_unit_here()) {
          ++pos_;
          v = {0.0, x};
        } else {
          v = {x, 0.0};
        }
      }
      auto s = scalar_node(v, at);
      if (at_primary()) return node(OpExpr::Kind::Mul, {s, primary()}, at);
      return s;
    }
    auto p = primary();
    // "(1+2i) L[e]": a parenthesized scalar may also prefix a primary.
    if (p->kind == OpExpr::Kind::Scalar && at_primary())
      return node(OpExpr::Kind::Mul, {p, primary()}, at);
    return p;
  }

  // 'i' directly after a number (no space), not starting a longer word.
  bool at_imaginary_unit_here() const {
    return pos_ < text_.size() && text_[pos_] == 'i' &&
           (pos_ + 1 >= text_.size() || !std::isalnum(static_cast<unsigned char>(text_[pos_ + 1])));
  }

  ExprPtr primary() {
    skip();
    const auto at = pos_;
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    if (text_.substr(pos_, 4) == "adj(") {
      pos_ += 4;
      auto inner = expr();
      expect(')');
      return node(OpExpr::Kind::Adjoint, {inner}, at);
    }
    if (accept('(')) {
      auto inner = expr();
      expect(')');
      return inner;
    }
    const char c = text_[pos_];
    if (c == 'I' && (pos_ + 1 >= text_.size() || text_[pos_ + 1] != '[')) {
      ++pos_;
      auto n = std::make_shared<OpExpr>();
      n->kind = OpExpr::Kind::Atom;
      n->atom = 'I';
      n->offset = at;
      return n;
    }
    if (c == 'L' || c == 'R' || c == 'P' || c == 'Q' || c == 'E') {
      ++pos_;
      if (pos_ >= text_.size() || text_[pos_] != '[') fail("expected '['");
      ++pos_;
      const auto start = pos_;
      while (pos_ < text_.size() && text_[pos_] != ']') {
        const char d = text_[pos_];
        if (!(std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '.'))
          fail("invalid character in label");
        ++pos_;
      }
      if (pos_ >= text_.size()) fail("expected ']'");
      if (pos_ == start) fail("empty label");
      auto n = std::make_shared<OpExpr>();
      n->kind = OpExpr::Kind::Atom;
      n->atom = c;
      n->label = std::string(text_.substr(start, pos_ - start));
      n->offset = at;
      ++pos_;
      return n;
    }
    fail("expected an operator");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

inline std::string print_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string print_scalar(cplx v) {
  if (v.imag() == 0.0) return print_number(v.real());
  if (v.real() == 0.0) return print_number(v.imag()) + "i";
  std::string im = print_number(v.imag());
  if (im[0] != '-') im = "+" + im;
  return "(" + print_number(v.real()) + im + "i)";
}

inline bool is_additive(const OpExpr& e) {
  return e.kind == OpExpr::Kind::Add || e.kind == OpExpr::Kind::Sub ||
         e.kind == OpExpr::Kind::Neg;
}

inline bool is_negative_scalar(const OpExpr& e) {
  return e.kind == OpExpr::Kind::Scalar && print_scalar(e.scalar)[0] == '-';
}

}  // namespace detail

inline ExprPtr parse_op_expr(std::string_view text) { return detail::ExprParser(text).parse(); }

/// Canonical text; parsing it gives back an expression that prints the same.
inline std::string print_op_expr(const OpExpr& e) {
  using K = OpExpr::Kind;
  const auto wrap = [](const OpExpr& c, bool paren) {
    auto s = print_op_expr(c);
    return paren ? "(" + s + ")" : s;
  };
  switch (e.kind) {
    case K::Atom: return e.atom == 'I' ? "I" : std::string(1, e.atom) + "[" + e.label + "]";
    case K::Scalar: return detail::print_scalar(e.scalar);
    case K::Adjoint: return "adj(" + print_op_expr(*e.children[0]) + ")";
    case K::Neg: {
      const auto& c = *e.children[0];
      return "-" + wrap(c, detail::is_additive(c) || detail::is_negative_scalar(c));
    }
    case K::Mul: {
      const auto& a = *e.children[0];
      const auto& b = *e.children[1];
      const auto needs = [](const OpExpr& c) {
        return detail::is_additive(c) || detail::is_negative_scalar(c);
      };
      // Products associate to the left, so a product on the right needs parentheses.
      return wrap(a, needs(a)) + " . " + wrap(b, needs(b) || b.kind == K::Mul);
    }
    case K::Add:
    case K::Sub: {
      const auto& a = *e.children[0];
      const auto& b = *e.children[1];
      const bool left_paren = a.kind == K::Scalar && b.kind == K::Scalar;
      const bool right_paren = detail::is_additive(b) || detail::is_negative_scalar(b) ||
                               (b.kind == K::Scalar && a.kind == K::Scalar);
      return wrap(a, left_paren) + (e.kind == K::Add ? " + " : " - ") + wrap(b, right_paren);
    }
  }
  return "";
}

inline SparseOperator evaluate(const OpExpr& e, const FockSpace& s) {
  using K = OpExpr::Kind;
  const auto& g = s.graph();
  switch (e.kind) {
    case K::Atom:
      switch (e.atom) {
        case 'I': return SparseOperator::identity(s.dim());
        case 'P': return range_projection(s, g.require_vertex(e.label));
        case 'Q': return source_projection(s, g.require_vertex(e.label));
        case 'E': return make_generator(s, GeneratorKind::E, e.label);
        case 'L':
        case 'R': return make_word_operator(s, e.atom == 'L' ? Side::L : Side::R, parse_path(g, e.label));
      }
      throw ParseError("unknown atom", e.offset);
    case K::Scalar: return e.scalar * SparseOperator::identity(s.dim());
    case K::Adjoint: return evaluate(*e.children[0], s).adjoint();
    case K::Neg: return -evaluate(*e.children[0], s);
    case K::Add: return evaluate(*e.children[0], s) + evaluate(*e.children[1], s);
    case K::Sub: return evaluate(*e.children[0], s) - evaluate(*e.children[1], s);
    case K::Mul: {
      const auto& a = *e.children[0];
      if (a.kind == K::Scalar) return a.scalar * evaluate(*e.children[1], s);
      return evaluate(a, s) * evaluate(*e.children[1], s);
    }
  }
  return SparseOperator(s.dim());
}

inline SparseOperator evaluate(std::string_view text, const FockSpace& s) {
  return evaluate(*parse_op_expr(text), s);
}

}  // namespace fsga

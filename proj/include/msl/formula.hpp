#pragma once

// Modal formulas over a single negation/disjunction/box core:
//
//   phi := x | ~phi | (phi|phi) | [O]phi
//
// Size is the node count, modal depth the maximal box nesting. The extended
// parser additionally accepts &, -> and <O> and desugars them into the core.
// Immutable nodes behind shared_ptr so subformulas can be shared freely.

#include <algorithm>
#include <cassert>
#include <memory>
#include <string>
#include <vector>

#include "msl/core.hpp"
#include "msl/operators.hpp"

namespace msl {

enum class FKind : unsigned char { Var, Not, Or, Box };

class Formula {
 public:
  Formula() = default;

  static Formula var(const std::string& name);
  static Formula negation(Formula f);
  static Formula disjunction(Formula a, Formula b);
  static Formula box(const std::string& op, Formula f);

  bool valid() const { return node_ != nullptr; }
  FKind kind() const;
  // Variable name (Var) or operator name (Box).
  const std::string& label() const;
  const Formula& lhs() const;
  const Formula& rhs() const;
  int size() const;
  int modal_depth() const;

  const void* id() const { return node_.get(); }

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  const Node* node() const {
    assert(node_ && "empty formula handle");
    return node_.get();
  }
  std::shared_ptr<const Node> node_;
};

struct Formula::Node {
  FKind kind;
  std::string label;
  Formula lhs, rhs;
  int size;
  int modal_depth;
};

inline Formula Formula::var(const std::string& name) {
  require(valid_name(name), "bad variable name '" + name + "'");
  return Formula(std::make_shared<Node>(Node{FKind::Var, name, {}, {}, 1, 0}));
}
inline Formula Formula::negation(Formula f) {
  int sz = f.size() + 1, md = f.modal_depth();
  return Formula(
      std::make_shared<Node>(Node{FKind::Not, "", std::move(f), {}, sz, md}));
}
inline Formula Formula::disjunction(Formula a, Formula b) {
  int sz = a.size() + b.size() + 1;
  int md = std::max(a.modal_depth(), b.modal_depth());
  return Formula(std::make_shared<Node>(
      Node{FKind::Or, "", std::move(a), std::move(b), sz, md}));
}
inline Formula Formula::box(const std::string& op, Formula f) {
  require(valid_name(op), "bad operator name '" + op + "'");
  int sz = f.size() + 1, md = f.modal_depth() + 1;
  return Formula(
      std::make_shared<Node>(Node{FKind::Box, op, std::move(f), {}, sz, md}));
}

inline FKind Formula::kind() const { return node()->kind; }
inline const std::string& Formula::label() const { return node()->label; }
inline const Formula& Formula::lhs() const { return node()->lhs; }
inline const Formula& Formula::rhs() const { return node()->rhs; }
inline int Formula::size() const { return node()->size; }
inline int Formula::modal_depth() const { return node()->modal_depth; }

inline void print_into(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case FKind::Var: out += f.label(); break;
    case FKind::Not:
      out += '~';
      print_into(f.lhs(), out);
      break;
    case FKind::Or:
      out += '(';
      print_into(f.lhs(), out);
      out += '|';
      print_into(f.rhs(), out);
      out += ')';
      break;
    case FKind::Box:
      out += '[';
      out += f.label();
      out += ']';
      print_into(f.lhs(), out);
      break;
  }
}

inline std::string print(const Formula& f) {
  std::string s;
  print_into(f, s);
  return s;
}

inline bool operator==(const Formula& a, const Formula& b) {
  if (a.id() == b.id()) return true;
  if (a.kind() != b.kind() || a.size() != b.size()) return false;
  switch (a.kind()) {
    case FKind::Var: return a.label() == b.label();
    case FKind::Not: return a.lhs() == b.lhs();
    case FKind::Or: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
    case FKind::Box: return a.label() == b.label() && a.lhs() == b.lhs();
  }
  return false;
}
inline bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

namespace detail {
inline void collect_vars(const Formula& f, std::vector<std::string>& out) {
  switch (f.kind()) {
    case FKind::Var: out.push_back(f.label()); break;
    case FKind::Not:
    case FKind::Box: collect_vars(f.lhs(), out); break;
    case FKind::Or:
      collect_vars(f.lhs(), out);
      collect_vars(f.rhs(), out);
      break;
  }
}
inline void collect_ops(const Formula& f, std::vector<std::string>& out) {
  switch (f.kind()) {
    case FKind::Var: break;
    case FKind::Box: out.push_back(f.label()); [[fallthrough]];
    case FKind::Not: collect_ops(f.lhs(), out); break;
    case FKind::Or:
      collect_ops(f.lhs(), out);
      collect_ops(f.rhs(), out);
      break;
  }
}
}  // namespace detail

inline std::vector<std::string> variables_of(const Formula& f) {
  std::vector<std::string> v;
  detail::collect_vars(f, v);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

inline std::vector<std::string> operators_of(const Formula& f) {
  std::vector<std::string> v;
  detail::collect_ops(f, v);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// ── parsing ──────────────────────────────────────────────────────────────

namespace detail {

class Parser {
 public:
  Parser(const std::string& text, const OperatorRegistry& reg, bool extended)
      : text_(text), reg_(reg), extended_(extended) {}

  Formula run() {
    Formula f = extended_ ? parse_implication() : parse_core();
    skip_space();
    require(pos_ == text_.size(),
            "unexpected trailing input at offset " + std::to_string(pos_) +
                " in '" + text_ + "'");
    return f;
  }

 private:
  // Core grammar: fully parenthesized binary disjunction only.
  Formula parse_core() {
    skip_space();
    require(pos_ < text_.size(), "unexpected end of formula");
    char c = text_[pos_];
    if (c == '~') {
      ++pos_;
      return Formula::negation(parse_core());
    }
    if (c == '[') {
      std::string op = box_name();
      return Formula::box(op, parse_core());
    }
    if (c == '(') {
      ++pos_;
      Formula a = parse_core();
      skip_space();
      expect('|');
      Formula b = parse_core();
      skip_space();
      expect(')');
      return Formula::disjunction(a, b);
    }
    return Formula::var(ident());
  }

  // Extended grammar with precedence ~ [O] <O>  >  &  >  |  >  ->
  Formula parse_implication() {
    Formula a = parse_disjunction();
    skip_space();
    if (pos_ + 1 < text_.size() && text_[pos_] == '-' && text_[pos_ + 1] == '>') {
      pos_ += 2;
      Formula b = parse_implication();  // right associative
      return Formula::disjunction(Formula::negation(a), b);
    }
    return a;
  }
  Formula parse_disjunction() {
    Formula a = parse_conjunction();
    while (true) {
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == '|') {
        ++pos_;
        a = Formula::disjunction(a, parse_conjunction());
      } else {
        return a;
      }
    }
  }
  Formula parse_conjunction() {
    Formula a = parse_unary();
    while (true) {
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == '&') {
        ++pos_;
        Formula b = parse_unary();
        a = Formula::negation(Formula::disjunction(Formula::negation(a),
                                                   Formula::negation(b)));
      } else {
        return a;
      }
    }
  }
  Formula parse_unary() {
    skip_space();
    require(pos_ < text_.size(), "unexpected end of formula");
    char c = text_[pos_];
    if (c == '~') {
      ++pos_;
      return Formula::negation(parse_unary());
    }
    if (c == '[') {
      std::string op = box_name();
      return Formula::box(op, parse_unary());
    }
    if (c == '<') {
      ++pos_;
      std::string op = ident();
      skip_space();
      expect('>');
      check_op(op);
      return Formula::negation(
          Formula::box(op, Formula::negation(parse_unary())));
    }
    if (c == '(') {
      ++pos_;
      Formula a = parse_implication();
      skip_space();
      expect(')');
      return a;
    }
    return Formula::var(ident());
  }

  std::string box_name() {
    expect('[');
    std::string op = ident();
    skip_space();
    expect(']');
    check_op(op);
    return op;
  }

  void check_op(const std::string& op) {
    require(reg_.find(op) != nullptr,
            "unknown operator '" + op + "' in formula '" + text_ + "'");
  }

  std::string ident() {
    skip_space();
    size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_'))
      ++pos_;
    require(pos_ > start, "expected identifier at offset " +
                              std::to_string(start) + " in '" + text_ + "'");
    std::string s = text_.substr(start, pos_ - start);
    require(valid_name(s), "bad identifier '" + s + "'");
    return s;
  }

  void expect(char c) {
    require(pos_ < text_.size() && text_[pos_] == c,
            std::string("expected '") + c + "' at offset " +
                std::to_string(pos_) + " in '" + text_ + "'");
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  const std::string& text_;
  const OperatorRegistry& reg_;
  bool extended_;
  size_t pos_ = 0;
};

}  // namespace detail

// Strict core syntax.
inline Formula parse(const std::string& text, const OperatorRegistry& reg) {
  return detail::Parser(text, reg, false).run();
}

// Extended syntax (&, ->, <O>, loose parentheses), desugared into the core.
inline Formula desugar(const std::string& text, const OperatorRegistry& reg) {
  return detail::Parser(text, reg, true).run();
}

// Box iterated i times: [op]^i phi.
inline Formula box_power(const std::string& op, int i, Formula f) {
  for (int k = 0; k < i; ++k) f = Formula::box(op, std::move(f));
  return f;
}

}  // namespace msl

#pragma once

// Operator registries: named successor selection functions shared by the
// parser, the semantics and the games. An operator is either a Boolean
// function over edge types (one-step), a finite language (multi-step), or an
// alternation language declared by its length (sugar for the language form).

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "msl/core.hpp"
#include "msl/language.hpp"
#include "msl/truth_table.hpp"

namespace msl {

enum class OpKind { Bool, Lang, Alt };

struct OperatorSpec {
  std::string name;
  OpKind kind = OpKind::Bool;
  TruthTable table;    // Bool
  FiniteLanguage lang; // Lang and Alt (materialized)
  int ell = 0;         // Alt

  int arity() const { return kind == OpKind::Bool ? table.n : lang.n; }

  static OperatorSpec make_bool(std::string name, TruthTable t) {
    OperatorSpec s;
    s.name = std::move(name);
    s.kind = OpKind::Bool;
    s.table = std::move(t);
    return s;
  }
  static OperatorSpec make_lang(std::string name, FiniteLanguage l) {
    l.normalize();
    OperatorSpec s;
    s.name = std::move(name);
    s.kind = OpKind::Lang;
    s.lang = std::move(l);
    return s;
  }
  static OperatorSpec make_alt(std::string name, int ell) {
    OperatorSpec s;
    s.name = std::move(name);
    s.kind = OpKind::Alt;
    s.ell = ell;
    s.lang = alt_language(ell);
    return s;
  }
};

class OperatorRegistry {
 public:
  OperatorRegistry() = default;
  explicit OperatorRegistry(int n) : n_(n) {}

  int arity() const { return n_; }
  size_t size() const { return ops_.size(); }
  bool empty() const { return ops_.empty(); }

  void add(OperatorSpec op) {
    require(valid_name(op.name), "bad operator name '" + op.name + "'");
    require(find(op.name) == nullptr,
            "duplicate operator name '" + op.name + "'");
    if (n_ == 0) n_ = op.arity();
    require(op.arity() == n_, "operator '" + op.name + "' has arity " +
                                  std::to_string(op.arity()) +
                                  ", registry has " + std::to_string(n_));
    ops_.push_back(std::move(op));
    std::sort(ops_.begin(), ops_.end(),
              [](const OperatorSpec& a, const OperatorSpec& b) {
                return a.name < b.name;
              });
  }

  const OperatorSpec* find(const std::string& name) const {
    for (const auto& op : ops_)
      if (op.name == name) return &op;
    return nullptr;
  }

  const OperatorSpec& at(const std::string& name) const {
    const OperatorSpec* op = find(name);
    if (!op) fail("unknown operator '" + name + "'");
    return *op;
  }

  // Name-sorted, which fixes iteration order everywhere.
  const std::vector<OperatorSpec>& ops() const { return ops_; }

  std::vector<std::string> names() const {
    std::vector<std::string> r;
    for (const auto& op : ops_) r.push_back(op.name);
    return r;
  }

  bool all_bool() const {
    for (const auto& op : ops_)
      if (op.kind != OpKind::Bool) return false;
    return true;
  }

 private:
  int n_ = 0;
  std::vector<OperatorSpec> ops_;
};

}  // namespace msl

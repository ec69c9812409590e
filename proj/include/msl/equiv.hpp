#pragma once

// Deciding formula equivalence. Two routes: an exact signed tableau, complete
// for Boolean operators with f(0,...,0)=0 (language boxes are expanded away
// first), and a bounded tree-model sweep for everything else. The bounded
// route claims Equivalent only when its enumeration provably covered enough
// models; otherwise it reports the verdict as unknown within its bounds.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "msl/formula.hpp"
#include "msl/kripke.hpp"
#include "msl/operators.hpp"
#include "msl/translate.hpp"

namespace msl {

enum class Verdict { Equivalent, Inequivalent, UnknownWithinBounds };

struct BoundedConfig {
  int branching = 3;
  int max_worlds = 6;
  std::uint64_t model_cap = 2'000'000;
};

struct EquivResult {
  Verdict verdict = Verdict::UnknownWithinBounds;
  std::optional<PointedModel> countermodel;  // set iff Inequivalent
  std::string route;                         // "exact" or "bounded"
  BoundedConfig bounds;                      // bounds a bounded run used
};

namespace detail {

inline void collect_used_ops(const Formula& f, std::set<std::string>& out) {
  switch (f.kind()) {
    case FKind::Var: return;
    case FKind::Not: collect_used_ops(f.lhs(), out); return;
    case FKind::Or:
      collect_used_ops(f.lhs(), out);
      collect_used_ops(f.rhs(), out);
      return;
    case FKind::Box:
      out.insert(f.label());
      collect_used_ops(f.lhs(), out);
      return;
  }
}

inline bool uses_language_ops(const Formula& f, const OperatorRegistry& reg) {
  std::set<std::string> ops;
  collect_used_ops(f, ops);
  for (const auto& name : ops)
    if (reg.at(name).kind != OpKind::Bool) return true;
  return false;
}

// Do the Boolean operators used by the formulas keep to f(0,...,0)=0? That is
// what makes successor sets edge-determined and the tableau complete.
inline bool used_ops_well_behaved(const Formula& a, const Formula& b,
                                  const OperatorRegistry& reg) {
  std::set<std::string> ops;
  collect_used_ops(a, ops);
  collect_used_ops(b, ops);
  for (const auto& name : ops) {
    const OperatorSpec& op = reg.at(name);
    if (op.kind == OpKind::Bool && !op.table.well_behaved()) return false;
  }
  return true;
}

inline void collect_subformula_prints(const Formula& f,
                                      std::set<std::string>& out) {
  out.insert(print(f));
  switch (f.kind()) {
    case FKind::Var: return;
    case FKind::Not:
    case FKind::Box: collect_subformula_prints(f.lhs(), out); return;
    case FKind::Or:
      collect_subformula_prints(f.lhs(), out);
      collect_subformula_prints(f.rhs(), out);
      return;
  }
}

// ── exact route ───────────────────────────────────────────────────────────

// Countermodel skeleton assembled by the tableau.
struct TableauTree {
  std::map<std::string, bool> atoms;
  std::vector<std::pair<EdgeType, TableauTree>> kids;
};

class Tableau {
 public:
  explicit Tableau(const OperatorRegistry& reg) : reg_(reg) {}

  std::optional<TableauTree> satisfiable(
      std::vector<std::pair<bool, Formula>> init) {
    State st;
    std::map<std::string, bool> seen;
    return saturate(std::move(init), std::move(st), std::move(seen));
  }

 private:
  struct State {
    std::map<std::string, bool> atoms;
    std::vector<Formula> univ;  // true boxes
    std::vector<Formula> exis;  // false boxes
  };

  // Propositional saturation; the left branch of a true disjunction is tried
  // first, so results are deterministic.
  std::optional<TableauTree> saturate(
      std::vector<std::pair<bool, Formula>> todo, State st,
      std::map<std::string, bool> seen) {
    while (!todo.empty()) {
      auto [sign, f] = todo.back();
      todo.pop_back();
      std::string key = print(f);
      auto it = seen.find(key);
      if (it != seen.end()) {
        if (it->second != sign) return std::nullopt;  // clash
        continue;
      }
      seen[key] = sign;
      switch (f.kind()) {
        case FKind::Var:
          st.atoms[f.label()] = sign;
          break;
        case FKind::Not:
          todo.push_back({!sign, f.lhs()});
          break;
        case FKind::Or:
          if (sign) {
            // branch: left first
            std::vector<std::pair<bool, Formula>> left = todo;
            left.push_back({true, f.lhs()});
            if (auto t = saturate(std::move(left), st, seen)) return t;
            todo.push_back({true, f.rhs()});
          } else {
            todo.push_back({false, f.lhs()});
            todo.push_back({false, f.rhs()});
          }
          break;
        case FKind::Box:
          (sign ? st.univ : st.exis).push_back(f);
          break;
      }
    }
    return modal(std::move(st));
  }

  std::optional<TableauTree> modal(State st) {
    std::string key = state_key(st);
    auto hit = memo_.find(key);
    if (hit != memo_.end()) return hit->second;

    TableauTree tree;
    for (const auto& [var, val] : st.atoms) tree.atoms[var] = val;
    bool ok = true;
    for (const Formula& ex : st.exis) {
      const TruthTable& f = reg_.at(ex.label()).table;
      bool found = false;
      for (EdgeType t = 0; t < (1u << f.n) && !found; ++t) {
        if (!f.eval(t)) continue;
        std::vector<std::pair<bool, Formula>> child;
        child.push_back({false, ex.lhs()});
        for (const Formula& u : st.univ)
          if (reg_.at(u.label()).table.eval(t))
            child.push_back({true, u.lhs()});
        if (auto sub = satisfiable(std::move(child))) {
          tree.kids.push_back({t, std::move(*sub)});
          found = true;
        }
      }
      if (!found) {
        ok = false;
        break;
      }
    }
    std::optional<TableauTree> result =
        ok ? std::optional<TableauTree>(std::move(tree)) : std::nullopt;
    memo_[key] = result;
    return result;
  }

  static std::string state_key(const State& st) {
    std::string key;
    for (const auto& [var, val] : st.atoms)
      key += (val ? "+" : "-") + var + ";";
    std::vector<std::string> u, e;
    for (const Formula& f : st.univ) u.push_back(print(f));
    for (const Formula& f : st.exis) e.push_back(print(f));
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    key += "|U:";
    for (const auto& s : u) key += s + ";";
    key += "|E:";
    for (const auto& s : e) key += s + ";";
    return key;
  }

  const OperatorRegistry& reg_;
  std::map<std::string, std::optional<TableauTree>> memo_;
};

inline void tableau_tree_to_model(const TableauTree& t, KripkeModel& m,
                                  int parent, EdgeType type) {
  int w = m.add_world("w" + std::to_string(m.worlds.size()));
  m.ensure_relations();
  if (parent >= 0)
    for (int j = 1; j <= m.n; ++j)
      if (type_bit(type, j, m.n)) m.add_edge(j, parent, w);
  for (const auto& [var, val] : t.atoms)
    if (val) m.set_true(var, w);
  for (const auto& [tau, kid] : t.kids) tableau_tree_to_model(kid, m, w, tau);
}

inline PointedModel materialize_tableau_tree(const TableauTree& t, int arity) {
  auto m = std::make_shared<KripkeModel>();
  m->id = "cex";
  m->n = arity;
  tableau_tree_to_model(t, *m, -1, 0);
  m->points = {0};
  return PointedModel{m, 0};
}

// ── bounded route ─────────────────────────────────────────────────────────

// Canonical tree models of depth <= d with per-node valuations, child edge
// types and nondecreasing child order. Children live one level down, so a
// level is a DAG over the previous one.
struct TreePool {
  struct T {
    unsigned val = 0;  // bitmask over the variable list
    std::vector<std::pair<EdgeType, int>> kids;  // type + index one level down
    int worlds = 1;
  };
  std::vector<T> trees;
};

}  // namespace detail

// The exact route. Callers must have expanded language boxes away and
// checked well-behavedness; `equivalent` below does both.
inline EquivResult exact_equivalent(const Formula& a, const Formula& b,
                                    const OperatorRegistry& reg) {
  std::set<std::string> ops;
  detail::collect_used_ops(a, ops);
  detail::collect_used_ops(b, ops);
  for (const auto& name : ops) {
    const OperatorSpec& op = reg.at(name);
    require(op.kind == OpKind::Bool && op.table.well_behaved(),
            "exact_equivalent needs well-behaved boolean operators, got '" +
                name + "'");
  }
  detail::Tableau tab(reg);
  EquivResult r;
  r.route = "exact";
  for (int dir = 0; dir < 2; ++dir) {
    auto tree = dir == 0 ? tab.satisfiable({{true, a}, {false, b}})
                         : tab.satisfiable({{false, a}, {true, b}});
    if (tree) {
      r.verdict = Verdict::Inequivalent;
      r.countermodel = detail::materialize_tableau_tree(*tree, reg.arity());
      return r;
    }
  }
  r.verdict = Verdict::Equivalent;
  return r;
}

namespace detail {

inline void unfold_tree_rec(const std::vector<TreePool>& levels, int level,
                            int index, KripkeModel& m, int parent,
                            EdgeType type,
                            const std::vector<std::string>& vars) {
  const TreePool::T& t = levels[level].trees[index];
  int w = m.add_world("w" + std::to_string(m.worlds.size()));
  m.ensure_relations();
  if (parent >= 0)
    for (int j = 1; j <= m.n; ++j)
      if (type_bit(type, j, m.n)) m.add_edge(j, parent, w);
  for (size_t v = 0; v < vars.size(); ++v)
    if (t.val & (1u << v)) m.set_true(vars[v], w);
  for (const auto& [tau, kid] : t.kids)
    unfold_tree_rec(levels, level - 1, kid, m, w, tau, vars);
}

}  // namespace detail

// The bounded route: sweep canonical tree models of depth up to the pair's
// modal depth (post-expansion), branching and world count capped by the
// config. Inequivalent is always trustworthy; Equivalent is only claimed
// when the sweep provably covered a complete model class.
inline EquivResult bounded_equivalent(const Formula& a, const Formula& b,
                                      const OperatorRegistry& reg,
                                      BoundedConfig cfg = {}) {
  require(cfg.branching >= 1 && cfg.max_worlds >= 1, "bad bounded config");
  EquivResult r;
  r.route = "bounded";
  r.bounds = cfg;

  Formula ea =
      detail::uses_language_ops(a, reg) ? expand_language_box(a, reg) : a;
  Formula eb =
      detail::uses_language_ops(b, reg) ? expand_language_box(b, reg) : b;
  int depth = std::max(ea.modal_depth(), eb.modal_depth());

  std::vector<std::string> vars = variables_of(a);
  for (const auto& v : variables_of(b)) vars.push_back(v);
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  require(vars.size() <= 16, "too many variables for the bounded sweep");
  int arity = reg.arity();
  unsigned type_count = 1u << arity;

  std::uint64_t budget = cfg.model_cap;
  bool truncated = false;

  std::vector<detail::TreePool> levels(depth + 1);
  for (unsigned val = 0; val < (1u << vars.size()); ++val)
    levels[0].trees.push_back({val, {}, 1});

  // sweep callback: evaluate the pair on a model, stop at a countermodel
  auto test_model = [&](int level, int index) -> bool {
    auto m = std::make_shared<KripkeModel>();
    m->id = "bcex";
    m->n = arity;
    detail::unfold_tree_rec(levels, level, index, *m, -1, 0, vars);
    m->points = {0};
    Evaluator ev(*m, reg);
    if (ev.satisfies(0, a) != ev.satisfies(0, b)) {
      r.verdict = Verdict::Inequivalent;
      r.countermodel = PointedModel{m, 0};
      return true;
    }
    return false;
  };

  if (depth == 0) {
    for (int i = 0; i < int(levels[0].trees.size()); ++i)
      if (test_model(0, i)) return r;
    r.verdict = Verdict::Equivalent;  // all valuations of a single world
    return r;
  }

  for (int d = 1; d <= depth && !truncated; ++d) {
    const detail::TreePool& prev = levels[d - 1];
    detail::TreePool& cur = levels[d];
    // nondecreasing sequences of (type, previous-level index)
    std::vector<std::pair<EdgeType, int>> kids;
    std::function<void(unsigned, int, int)> grow =
        [&](unsigned val, int min_kind, int worlds_left) {
          if (budget == 0) {
            truncated = true;
            return;
          }
          --budget;
          cur.trees.push_back({val, kids, cfg.max_worlds - worlds_left});
          if (int(kids.size()) >= cfg.branching) return;
          int kinds = int(type_count) * int(prev.trees.size());
          for (int k = min_kind; k < kinds && !truncated; ++k) {
            EdgeType tau = EdgeType(k / int(prev.trees.size()));
            int child = k % int(prev.trees.size());
            int need = prev.trees[child].worlds;
            if (need > worlds_left) continue;
            kids.push_back({tau, child});
            grow(val, k, worlds_left - need);
            kids.pop_back();
          }
        };
    for (unsigned val = 0; val < (1u << vars.size()) && !truncated; ++val)
      grow(val, 0, cfg.max_worlds - 1);

    if (d == depth)
      for (int i = 0; i < int(cur.trees.size()); ++i)
        if (test_model(d, i)) return r;
  }

  // completeness: all used operators well-behaved, enough branching for one
  // witness per subformula, and the world cap never bit
  std::set<std::string> subs;
  detail::collect_subformula_prints(ea, subs);
  detail::collect_subformula_prints(eb, subs);
  std::uint64_t full = 1, layer = 1;
  for (int i = 1; i <= depth; ++i) {
    layer *= std::uint64_t(cfg.branching);
    full += layer;
    if (full > std::uint64_t(cfg.max_worlds)) break;
  }
  bool complete = !truncated && detail::used_ops_well_behaved(a, b, reg) &&
                  cfg.branching >= int(subs.size()) &&
                  full <= std::uint64_t(cfg.max_worlds);
  r.verdict = complete ? Verdict::Equivalent : Verdict::UnknownWithinBounds;
  return r;
}

// Equivalence with automatic route choice: language boxes are expanded, and
// the exact tableau runs whenever every used Boolean operator keeps to
// f(0,...,0)=0; the bounded sweep covers the rest. Inequivalent verdicts are
// re-verified on the original formulas before being returned.
inline EquivResult equivalent(const Formula& a, const Formula& b,
                              const OperatorRegistry& reg,
                              BoundedConfig cfg = {}) {
  EquivResult r;
  if (detail::used_ops_well_behaved(a, b, reg)) {
    bool lang = detail::uses_language_ops(a, reg) ||
                detail::uses_language_ops(b, reg);
    if (lang) {
      OperatorRegistry ereg = expansion_registry(reg);
      Formula ea = expand_language_box(a, reg);
      Formula eb = expand_language_box(b, reg);
      r = exact_equivalent(ea, eb, ereg);
    } else {
      r = exact_equivalent(a, b, reg);
    }
  } else {
    r = bounded_equivalent(a, b, reg, cfg);
  }
  if (r.verdict == Verdict::Inequivalent) {
    const PointedModel& pm = *r.countermodel;
    require(satisfies(*pm.model, pm.world, a, reg) !=
                satisfies(*pm.model, pm.world, b, reg),
            "internal error: countermodel does not separate the formulas");
  }
  return r;
}

}  // namespace msl

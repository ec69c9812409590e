#pragma once

// Formula-size game trees. A tree node carries a pair of pointed-model
// classes (left must satisfy the node's subformula, right must falsify it)
// plus a move label; closed trees are exactly the separating formulas, node
// for node. This file builds the canonical tree of a formula, verifies
// arbitrary trees against the move rules, enumerates closed trees outright,
// and evaluates the counting and structure properties used by the
// lower-bound arguments.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "msl/core.hpp"
#include "msl/families.hpp"
#include "msl/formula.hpp"
#include "msl/kripke.hpp"
#include "msl/language.hpp"
#include "msl/operators.hpp"

namespace msl {

// ── tree shape ────────────────────────────────────────────────────────────

enum class Move { Unlabelled, Atom, Not, Or, BoxMove };

struct GameNode {
  ModelClass left;   // must satisfy the node's subformula
  ModelClass right;  // must falsify it
  Move move = Move::Unlabelled;
  std::string label;  // variable name (Atom) or operator name (BoxMove)
  std::vector<GameNode> kids;
};

struct GameTree {
  GameNode root;
  OperatorRegistry registry;
};

inline int node_count(const GameNode& n) {
  int c = 1;
  for (const auto& k : n.kids) c += node_count(k);
  return c;
}

inline bool is_closed(const GameNode& n) {
  if (n.kids.empty()) return n.move == Move::Atom;
  for (const auto& k : n.kids)
    if (!is_closed(k)) return false;
  return true;
}

namespace detail {

using MemberKey = std::pair<std::string, std::string>;  // (model id, world id)

inline std::set<MemberKey> member_keys(const ModelClass& c) {
  std::set<MemberKey> keys;
  for (const auto& pm : c) keys.insert(pm.key());
  return keys;
}

inline bool same_class(const ModelClass& a, const ModelClass& b) {
  return member_keys(a) == member_keys(b);
}

inline std::string class_key(const ModelClass& c) {
  std::string s;
  for (const auto& pm : c) {
    s += pm.model->id;
    s += '@';
    s += pm.world_id();
    s += ';';
  }
  return s;
}

inline ModelClass box_image(const ModelClass& c, const OperatorSpec& op) {
  ModelClass out;
  for (const auto& pm : c) {
    WorldSet succ = successors_of(*pm.model, pm.world, op);
    for (size_t w = succ.find_first(); w != WorldSet::npos;
         w = succ.find_next(w))
      out.push_back({pm.model, int(w)});
  }
  return make_class(std::move(out));
}

}  // namespace detail

// ── canonical tree of a formula ───────────────────────────────────────────

namespace detail {

inline GameNode tree_from_formula_rec(const Formula& f, ModelClass c,
                                      ModelClass d,
                                      const OperatorRegistry& reg) {
  GameNode v;
  v.left = std::move(c);
  v.right = std::move(d);
  switch (f.kind()) {
    case FKind::Var:
      v.move = Move::Atom;
      v.label = f.label();
      break;
    case FKind::Not:
      v.move = Move::Not;
      v.kids.push_back(tree_from_formula_rec(f.lhs(), v.right, v.left, reg));
      break;
    case FKind::Or: {
      v.move = Move::Or;
      ModelClass c1, c2;
      for (const auto& pm : v.left)
        (satisfies(pm, f.lhs(), reg) ? c1 : c2).push_back(pm);
      v.kids.push_back(tree_from_formula_rec(f.lhs(), make_class(c1),
                                             v.right, reg));
      v.kids.push_back(tree_from_formula_rec(f.rhs(), make_class(c2),
                                             v.right, reg));
      break;
    }
    case FKind::Box: {
      v.move = Move::BoxMove;
      v.label = f.label();
      const OperatorSpec& op = reg.at(f.label());
      ModelClass d1;
      for (const auto& pm : v.right) {
        WorldSet succ = successors_of(*pm.model, pm.world, op);
        int pick = -1;
        for (size_t w = succ.find_first(); w != WorldSet::npos;
             w = succ.find_next(w)) {
          if (satisfies(*pm.model, int(w), f.lhs(), reg)) continue;
          if (pick < 0 || pm.model->worlds[w] < pm.model->worlds[pick])
            pick = int(w);
        }
        require(pick >= 0, "a right-class member satisfies the box at '" +
                               pm.model->id + "@" + pm.world_id() + "'");
        d1.push_back({pm.model, pick});
      }
      v.kids.push_back(tree_from_formula_rec(f.lhs(), box_image(v.left, op),
                                             make_class(std::move(d1)), reg));
      break;
    }
  }
  return v;
}

}  // namespace detail

// The deterministic tree of a separating formula: or-moves split the left
// class by truth of the left disjunct, box-moves pick the lexicographically
// least falsifying successor per right-class member. Node count = size(f).
inline GameTree tree_from_formula(const Formula& f, const ModelClass& a,
                                  const ModelClass& b,
                                  const OperatorRegistry& reg) {
  require(class_satisfies(a, f, reg),
          "the left class does not satisfy the formula");
  require(class_satisfies(b, Formula::negation(f), reg),
          "the right class does not falsify the formula");
  GameTree t;
  t.registry = reg;
  t.root = detail::tree_from_formula_rec(f, make_class(a), make_class(b), reg);
  return t;
}

// ── verification ──────────────────────────────────────────────────────────

struct GameViolation {
  std::string kind;    // "or-cover", "box-choice", ...
  std::string where;   // node path, child indices joined by '.'
  std::string detail;
};

namespace detail {

inline std::optional<GameViolation> verify_node(const GameNode& v,
                                                const OperatorRegistry& reg,
                                                const std::string& path) {
  auto at = [&](std::string kind, std::string detail) {
    return GameViolation{std::move(kind), path.empty() ? "root" : path,
                         std::move(detail)};
  };
  std::set<MemberKey> lk = member_keys(v.left), rk = member_keys(v.right);
  for (const auto& k : lk)
    if (rk.count(k))
      return at("disjointness",
                "'" + k.first + "@" + k.second + "' appears on both sides");

  size_t want_kids = 0;
  switch (v.move) {
    case Move::Unlabelled:
      if (!v.kids.empty()) return at("arity", "unlabelled node with children");
      return at("open-leaf", "leaf without a variable label");
    case Move::Atom: want_kids = 0; break;
    case Move::Not: want_kids = 1; break;
    case Move::Or: want_kids = 2; break;
    case Move::BoxMove: want_kids = 1; break;
  }
  if (v.kids.size() != want_kids)
    return at("arity", "wrong number of children for the move");

  switch (v.move) {
    case Move::Unlabelled: break;
    case Move::Atom: {
      Formula p = Formula::var(v.label);
      for (const auto& pm : v.left)
        if (!satisfies(pm, p, reg))
          return at("atomic-move", "left member '" + pm.model->id + "@" +
                                       pm.world_id() + "' falsifies " +
                                       v.label);
      for (const auto& pm : v.right)
        if (satisfies(pm, p, reg))
          return at("atomic-move", "right member '" + pm.model->id + "@" +
                                       pm.world_id() + "' satisfies " +
                                       v.label);
      break;
    }
    case Move::Not:
      if (!same_class(v.kids[0].left, v.right) ||
          !same_class(v.kids[0].right, v.left))
        return at("not-swap", "child classes are not the swapped pair");
      break;
    case Move::Or: {
      std::set<MemberKey> cover;
      for (int j = 0; j < 2; ++j) {
        if (!same_class(v.kids[j].right, v.right))
          return at("or-right", "child keeps a different right class");
        for (const auto& k : member_keys(v.kids[j].left)) {
          if (!lk.count(k))
            return at("or-cover", "'" + k.first + "@" + k.second +
                                      "' is not part of the split class");
          cover.insert(k);
        }
      }
      if (cover != lk)
        return at("or-cover", "children do not cover the left class");
      break;
    }
    case Move::BoxMove: {
      const OperatorSpec* op = reg.find(v.label);
      if (!op) return at("unknown-operator", "'" + v.label + "'");
      if (!same_class(v.kids[0].left, box_image(v.left, *op)))
        return at("box-left",
                  "child left class is not the full successor image");
      std::set<MemberKey> choice = member_keys(v.kids[0].right);
      for (const auto& pm : v.right) {
        WorldSet succ = successors_of(*pm.model, pm.world, *op);
        bool covered = false;
        for (size_t w = succ.find_first(); w != WorldSet::npos && !covered;
             w = succ.find_next(w))
          covered = choice.count({pm.model->id, pm.model->worlds[w]}) > 0;
        if (!covered)
          return at("box-choice", "no chosen successor for '" +
                                      pm.model->id + "@" + pm.world_id() +
                                      "'");
      }
      break;
    }
  }
  for (size_t j = 0; j < v.kids.size(); ++j) {
    std::string sub = path.empty() ? std::to_string(j)
                                   : path + "." + std::to_string(j);
    if (auto viol = verify_node(v.kids[j], reg, sub)) return viol;
  }
  return std::nullopt;
}

}  // namespace detail

// Checks every node against the move rules, closedness included, and the
// disjointness property of closed trees. Returns the first violation.
inline std::optional<GameViolation> verify_closed_tree(const GameTree& t) {
  return detail::verify_node(t.root, t.registry, "");
}

// ── reading a formula back ────────────────────────────────────────────────

namespace detail {

inline Formula formula_from_node(const GameNode& v) {
  switch (v.move) {
    case Move::Atom: return Formula::var(v.label);
    case Move::Not: return Formula::negation(formula_from_node(v.kids[0]));
    case Move::Or:
      return Formula::disjunction(formula_from_node(v.kids[0]),
                                  formula_from_node(v.kids[1]));
    case Move::BoxMove:
      return Formula::box(v.label, formula_from_node(v.kids[0]));
    case Move::Unlabelled: break;
  }
  fail("unlabelled node in a closed tree");
}

}  // namespace detail

inline Formula formula_from_tree(const GameTree& t) {
  if (auto viol = verify_closed_tree(t))
    fail("tree fails verification: " + viol->kind + " at " + viol->where +
         " (" + viol->detail + ")");
  return detail::formula_from_node(t.root);
}

// ── enumeration ───────────────────────────────────────────────────────────

namespace detail {

// Shared recursion for streaming all closed trees and for the min-size
// program. Both memoize on (class pair, budget); both prune pairs that
// violate disjointness, which no closed tree can repair.
struct TreeSearch {
  const OperatorRegistry& reg;
  const Limits& limits;
  std::vector<std::string> vars;
  std::int64_t generated = 0;

  std::map<std::pair<std::string, int>, std::vector<GameNode>> tree_memo;
  std::map<std::pair<std::string, int>, int> size_memo;
  static constexpr int kInf = 1 << 29;

  TreeSearch(const ModelClass& a, const ModelClass& b,
             const OperatorRegistry& r, const Limits& lim,
             std::vector<std::string> vocabulary)
      : reg(r), limits(lim), vars(std::move(vocabulary)) {
    if (vars.empty()) vars = class_variables(a, b);
    require(int(a.size() + b.size()) <= limits.max_class_members,
            "class pair too large to enumerate");
    for (const ModelClass* cls : {&a, &b})
      for (const auto& pm : *cls)
        require(int(pm.model->worlds.size()) <= limits.max_enum_model_worlds,
                "model too large to enumerate");
  }

  // Distinct right-class choices for a box move: one successor per member,
  // images deduplicated. Empty optional when the move is unplayable.
  std::optional<std::vector<ModelClass>> box_choices(const ModelClass& d,
                                                     const OperatorSpec& op) {
    std::vector<std::vector<int>> menus;
    std::uint64_t product = 1;
    for (const auto& pm : d) {
      WorldSet succ = successors_of(*pm.model, pm.world, op);
      std::vector<int> menu;
      for (size_t w = succ.find_first(); w != WorldSet::npos;
           w = succ.find_next(w))
        menu.push_back(int(w));
      if (menu.empty()) return std::nullopt;
      product *= menu.size();
      require(product <= std::uint64_t(limits.max_pow),
              "too many box successor choices");
      menus.push_back(std::move(menu));
    }
    std::set<std::string> seen;
    std::vector<ModelClass> out;
    std::vector<size_t> pick(menus.size(), 0);
    for (;;) {
      ModelClass d1;
      for (size_t m = 0; m < menus.size(); ++m)
        d1.push_back({d[m].model, menus[m][pick[m]]});
      d1 = make_class(std::move(d1));
      if (seen.insert(class_key(d1)).second) out.push_back(std::move(d1));
      size_t m = 0;
      while (m < menus.size() && ++pick[m] == menus[m].size()) {
        pick[m] = 0;
        ++m;
      }
      if (m == menus.size()) break;
    }
    return out;
  }

  // All or-splits of c as ordered subset pairs covering c. Digit per member:
  // 0 left only, 1 right only, 2 both.
  std::vector<std::pair<ModelClass, ModelClass>> or_splits(
      const ModelClass& c) {
    std::vector<std::pair<ModelClass, ModelClass>> out;
    std::uint64_t total = 1;
    for (size_t m = 0; m < c.size(); ++m) total *= 3;
    for (std::uint64_t code = 0; code < total; ++code) {
      ModelClass c1, c2;
      std::uint64_t rest = code;
      for (const auto& pm : c) {
        int digit = int(rest % 3);
        rest /= 3;
        if (digit != 1) c1.push_back(pm);
        if (digit != 0) c2.push_back(pm);
      }
      out.emplace_back(make_class(std::move(c1)), make_class(std::move(c2)));
    }
    return out;
  }

  bool disjoint(const ModelClass& c, const ModelClass& d) {
    std::set<MemberKey> lk = member_keys(c);
    for (const auto& pm : d)
      if (lk.count(pm.key())) return false;
    return true;
  }

  std::vector<std::string> separating_vars(const ModelClass& c,
                                           const ModelClass& d) {
    std::vector<std::string> out;
    for (const auto& var : vars) {
      Formula p = Formula::var(var);
      bool ok = true;
      for (const auto& pm : c)
        if (!satisfies(pm, p, reg)) { ok = false; break; }
      if (ok)
        for (const auto& pm : d)
          if (satisfies(pm, p, reg)) { ok = false; break; }
      if (ok) out.push_back(var);
    }
    return out;
  }

  const std::vector<GameNode>& trees(const ModelClass& c, const ModelClass& d,
                                     int budget) {
    auto key = std::make_pair(class_key(c) + "||" + class_key(d), budget);
    auto it = tree_memo.find(key);
    if (it != tree_memo.end()) return it->second;
    std::vector<GameNode> out;
    if (budget >= 1 && disjoint(c, d)) {
      auto push = [&](GameNode n) {
        generated += node_count(n);
        require(generated < 2'000'000, "closed-tree enumeration exploded");
        out.push_back(std::move(n));
      };
      for (const auto& var : separating_vars(c, d))
        push({c, d, Move::Atom, var, {}});
      for (const GameNode& sub : trees(d, c, budget - 1))
        push({c, d, Move::Not, "", {sub}});
      if (budget >= 3)
        for (auto& [c1, c2] : or_splits(c))
          for (const GameNode& t1 : trees(c1, d, budget - 2))
            for (const GameNode& t2 :
                 trees(c2, d, budget - 1 - node_count(t1)))
              push({c, d, Move::Or, "", {t1, t2}});
      for (const auto& op : reg.ops())
        if (auto choices = box_choices(d, op)) {
          ModelClass c1 = box_image(c, op);
          for (const ModelClass& d1 : *choices)
            for (const GameNode& sub : trees(c1, d1, budget - 1))
              push({c, d, Move::BoxMove, op.name, {sub}});
        }
    }
    return tree_memo.emplace(std::move(key), std::move(out)).first->second;
  }

  int min_size(const ModelClass& c, const ModelClass& d, int budget) {
    if (budget <= 0) return kInf;
    auto key = std::make_pair(class_key(c) + "||" + class_key(d), budget);
    auto it = size_memo.find(key);
    if (it != size_memo.end()) return it->second;
    size_memo.emplace(key, kInf);  // cycle guard while computing
    int best = kInf;
    if (disjoint(c, d)) {
      if (!separating_vars(c, d).empty()) best = 1;
      if (best > 1) {
        int sub = min_size(d, c, budget - 1);
        if (sub < kInf) best = std::min(best, 1 + sub);
        if (budget >= 3)
          for (auto& [c1, c2] : or_splits(c)) {
            int m1 = min_size(c1, d, budget - 2);
            if (m1 >= kInf) continue;
            int m2 = min_size(c2, d, budget - 1 - m1);
            if (m2 < kInf) best = std::min(best, 1 + m1 + m2);
          }
        for (const auto& op : reg.ops())
          if (auto choices = box_choices(d, op)) {
            ModelClass c1 = box_image(c, op);
            for (const ModelClass& d1 : *choices) {
              int m = min_size(c1, d1, budget - 1);
              if (m < kInf) best = std::min(best, 1 + m);
            }
          }
      }
    }
    size_memo[key] = best;
    return best;
  }
};

inline std::string serialize_node(const GameNode& n) {
  std::string s = "(" + std::to_string(int(n.move)) + ":" + n.label + "[" +
                  class_key(n.left) + "|" + class_key(n.right) + "]";
  for (const auto& k : n.kids) s += serialize_node(k);
  return s + ")";
}

}  // namespace detail

// Every closed tree with root <a, b> and at most max_size nodes, smallest
// first, then in a stable structural order. Exhaustive over or-splits
// (ordered, overlapping allowed) and box successor choices. Atom labels are
// drawn from `vocabulary`, or from the variables of the classes when empty;
// a vocabulary matters when a branch needs a variable the models never make
// true anywhere.
inline std::vector<GameTree> enumerate_closed_trees(
    const ModelClass& a, const ModelClass& b, const OperatorRegistry& reg,
    int max_size, const Limits& limits = {},
    std::vector<std::string> vocabulary = {}) {
  require(max_size >= 1, "tree size bound must be positive");
  detail::TreeSearch search(a, b, reg, limits, std::move(vocabulary));
  std::vector<GameNode> roots =
      search.trees(make_class(a), make_class(b), max_size);
  std::vector<std::pair<std::pair<int, std::string>, const GameNode*>> order;
  std::set<std::string> seen;
  for (const GameNode& n : roots) {
    std::string ser = detail::serialize_node(n);
    if (!seen.insert(ser).second) continue;
    order.push_back({{node_count(n), std::move(ser)}, &n});
  }
  std::sort(order.begin(), order.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<GameTree> out;
  for (const auto& [rank, n] : order) out.push_back({*n, reg});
  return out;
}

// Size of the smallest closed tree, if one exists within the bound. Agrees
// with the smallest separating formula by the formula-size correspondence.
inline std::optional<int> min_closed_tree_size(
    const ModelClass& a, const ModelClass& b, const OperatorRegistry& reg,
    int max_size, const Limits& limits = {},
    std::vector<std::string> vocabulary = {}) {
  require(max_size >= 1, "tree size bound must be positive");
  detail::TreeSearch search(a, b, reg, limits, std::move(vocabulary));
  int m = search.min_size(make_class(a), make_class(b), max_size);
  if (m >= detail::TreeSearch::kInf || m > max_size) return std::nullopt;
  return m;
}

// ── per-node views ────────────────────────────────────────────────────────

struct NodeContext {
  const GameNode* node = nullptr;
  std::string path;                    // child indices joined by '.', root ""
  std::vector<std::string> boxlabels;  // operator labels strictly above
  int negations = 0;                   // not labels strictly above
};

namespace detail {

template <class F>
inline void walk_rec(const GameNode& n, NodeContext ctx, F& f) {
  ctx.node = &n;
  f(static_cast<const NodeContext&>(ctx));
  for (size_t j = 0; j < n.kids.size(); ++j) {
    NodeContext sub = ctx;
    sub.path = ctx.path.empty() ? std::to_string(j)
                                : ctx.path + "." + std::to_string(j);
    if (n.move == Move::BoxMove) sub.boxlabels.push_back(n.label);
    if (n.move == Move::Not) ++sub.negations;
    walk_rec(n.kids[j], std::move(sub), f);
  }
}

}  // namespace detail

template <class F>
inline void walk_tree(const GameTree& t, F&& f) {
  detail::walk_rec(t.root, NodeContext{}, f);
}

inline const GameNode& node_at(const GameTree& t, const std::string& path) {
  const GameNode* n = &t.root;
  size_t pos = 0;
  while (pos < path.size()) {
    size_t dot = path.find('.', pos);
    if (dot == std::string::npos) dot = path.size();
    int idx = std::stoi(path.substr(pos, dot - pos));
    require(idx >= 0 && idx < int(n->kids.size()),
            "no node at path '" + path + "'");
    n = &n->kids[idx];
    pos = dot + 1;
  }
  return *n;
}

namespace detail {

inline NodeContext context_at(const GameTree& t, const std::string& path) {
  std::optional<NodeContext> found;
  walk_tree(t, [&](const NodeContext& ctx) {
    if (ctx.path == path) found = ctx;
  });
  require(found.has_value(), "no node at path '" + path + "'");
  return *found;
}

}  // namespace detail

// Operator labels on the path from the root to the node, its own excluded.
inline std::vector<std::string> boxlabels(const GameTree& t,
                                          const std::string& path) {
  return detail::context_at(t, path).boxlabels;
}

// Word length of the concatenated boxlabel languages. Defined only when all
// labels are length-uniform language operators.
inline int language_depth(const OperatorRegistry& reg,
                          const std::vector<std::string>& labels) {
  int d = 0;
  for (const auto& name : labels) {
    const OperatorSpec& op = reg.at(name);
    require(op.kind != OpKind::Bool,
            "operator '" + name + "' has no word length");
    require(length_uniform(op.lang),
            "operator '" + name + "' is not length-uniform");
    d += dcard(op.lang);
  }
  return d;
}

inline int node_modal_depth(const GameTree& t, const std::string& path) {
  return language_depth(t.registry, boxlabels(t, path));
}

// Which root class the node's left side descends from, by negation parity.
inline Side corresponding_class(const GameTree& t, const std::string& path) {
  return detail::context_at(t, path).negations % 2 == 0 ? Side::A : Side::B;
}

// Strings s whose completed B model appears in either class at the node.
inline std::set<std::string> covered_strings(const GameNode& v, int ell,
                                             int i) {
  std::set<std::string> out;
  std::string prefix = "B_l" + std::to_string(ell) + "_s";
  std::string suffix = "_star";
  for (const ModelClass* cls : {&v.left, &v.right})
    for (const auto& pm : *cls) {
      const std::string& id = pm.model->id;
      if (id.size() <= prefix.size() + suffix.size()) continue;
      if (id.compare(0, prefix.size(), prefix) != 0) continue;
      if (id.compare(id.size() - suffix.size(), suffix.size(), suffix) != 0)
        continue;
      std::string s =
          id.substr(prefix.size(), id.size() - prefix.size() - suffix.size());
      if (int(s.size()) != i) continue;
      bool good = !s.empty();
      for (char c : s) good = good && (c == '1' || c == '2');
      if (good) out.insert(s);
    }
  return out;
}

// Smallest number of leaves forced when each leaf covers at most c of the
// a_count models: ceiling of a_count / c.
inline std::int64_t pigeonhole_bound(std::int64_t a_count, std::int64_t c) {
  require(c >= 1, "cover capacity must be positive");
  require(a_count >= 0, "class size cannot be negative");
  return (a_count + c - 1) / c;
}

// ── path reconstruction ───────────────────────────────────────────────────

// Every class member at every node must be reachable from its root class
// along the boxlabel operators. Verifies the reconstruction for both sides.
inline std::optional<GameViolation> check_path_property(const GameTree& t) {
  std::optional<GameViolation> viol;
  walk_tree(t, [&](const NodeContext& ctx) {
    if (viol) return;
    bool even = ctx.negations % 2 == 0;
    const ModelClass* roots[2] = {even ? &t.root.left : &t.root.right,
                                  even ? &t.root.right : &t.root.left};
    const ModelClass* sides[2] = {&ctx.node->left, &ctx.node->right};
    for (int side = 0; side < 2 && !viol; ++side)
      for (const auto& pm : *sides[side]) {
        WorldSet reach(pm.model->worlds.size());
        for (const auto& origin : *roots[side])
          if (origin.model->id == pm.model->id) reach.set(origin.world);
        for (const auto& name : ctx.boxlabels) {
          const OperatorSpec& op = t.registry.at(name);
          WorldSet next(pm.model->worlds.size());
          for (size_t w = reach.find_first(); w != WorldSet::npos;
               w = reach.find_next(w))
            next |= successors_of(*pm.model, int(w), op);
          reach = std::move(next);
        }
        if (!reach.test(pm.world)) {
          viol = GameViolation{
              "path-property", ctx.path.empty() ? "root" : ctx.path,
              "'" + pm.model->id + "@" + pm.world_id() +
                  "' is unreachable from its root class"};
          break;
        }
      }
  });
  return viol;
}

// ── structure checks for alternation-class trees ──────────────────────────

struct LemmaCheck {
  std::string name;
  bool holds = true;
  std::string detail;  // first failure witness, or a skip note
};

struct StructureReport {
  std::vector<LemmaCheck> checks;
  bool all_hold = true;

  const LemmaCheck& at(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return c;
    fail("no check named '" + name + "'");
  }
};

namespace detail {

inline int star_depth(const KripkeModel& m, int from, int target) {
  std::vector<int> dist(m.worlds.size(), -1);
  std::queue<int> q;
  dist[from] = 0;
  q.push(from);
  while (!q.empty()) {
    int w = q.front();
    q.pop();
    for (const auto& rel : m.rel)
      for (size_t v = rel[w].find_first(); v != WorldSet::npos;
           v = rel[w].find_next(v))
        if (dist[v] < 0) {
          dist[v] = dist[w] + 1;
          q.push(int(v));
        }
  }
  return dist[target];
}

inline std::optional<int> alt_length_of(const OperatorSpec& op) {
  if (op.kind == OpKind::Alt) return op.ell;
  if (op.kind == OpKind::Lang)
    if (auto ell = alternation_length(op.lang)) return ell;
  return std::nullopt;
}

}  // namespace detail

// Evaluates the structural properties that minimal separating formulas over
// the alternation classes must exhibit. A report entry per property; the
// checker makes no minimality claim of its own.
inline StructureReport check_structure_lemmas(const GameTree& t, int ell,
                                              int i,
                                              const std::vector<int>& lengths) {
  require(ell >= 1 && i >= 1, "bad alternation parameters");
  std::string a_id =
      "A_l" + std::to_string(ell) + "_i" + std::to_string(i) + "_star";
  require(!t.root.left.empty() && !t.root.right.empty(),
          "root classes must be nonempty");
  for (const auto& pm : t.root.left)
    require(pm.model->id == a_id, "left root class is not the expected one");
  for (const auto& pm : t.root.right)
    require(covered_strings({{}, {pm}}, ell, i).size() == 1,
            "right root class holds a model of the wrong shape");
  std::set<std::string> allowed = {"b1", "b2"};
  for (int l : lengths) allowed.insert("A" + std::to_string(l));
  walk_tree(t, [&](const NodeContext& ctx) {
    if (ctx.node->move == Move::BoxMove)
      require(allowed.count(ctx.node->label) > 0,
              "operator '" + ctx.node->label + "' is outside the logic");
  });

  StructureReport rep;
  rep.checks.reserve(8);  // references below must survive the push_backs
  auto check = [&](const std::string& name) -> LemmaCheck& {
    rep.checks.push_back({name, true, ""});
    return rep.checks.back();
  };
  LemmaCheck& trap = check("trap-avoidance");
  LemmaCheck& multiples = check("box-depth-multiples");
  LemmaCheck& prefix_membership = check("covered-prefix-membership");
  LemmaCheck& agreement = check("off-multiple-agreement");
  LemmaCheck& identities = check("long-block-identities");
  LemmaCheck& leaf_bound = check("leaf-cover-bound");
  LemmaCheck& alignment = check("depth-alignment");

  auto fail_once = [](LemmaCheck& c, const std::string& witness) {
    if (c.holds) {
      c.holds = false;
      c.detail = witness;
    }
  };
  std::int64_t leaf_cap = 1;
  for (int k = 0; k < i / 2; ++k) leaf_cap *= 2;
  if (i % 2 != 0) {
    leaf_bound.detail = "skipped: defined for an even iteration count";
  }

  walk_tree(t, [&](const NodeContext& ctx) {
    const GameNode& v = *ctx.node;
    std::string where = ctx.path.empty() ? "root" : ctx.path;

    for (const ModelClass* cls : {&v.left, &v.right})
      for (const auto& pm : *cls)
        if (pm.world_id() == "trap")
          fail_once(trap, "trap member of '" + pm.model->id + "' at " + where);

    int depth = language_depth(t.registry, ctx.boxlabels);
    if (v.move == Move::BoxMove &&
        detail::alt_length_of(t.registry.at(v.label)).has_value() &&
        depth % ell != 0)
      fail_once(multiples, "alternation label at depth " +
                               std::to_string(depth) + " at " + where);

    std::set<std::string> covered = covered_strings(v, ell, i);
    std::optional<FiniteLanguage> lang;
    bool uniform = true;
    for (const auto& name : ctx.boxlabels) {
      const OperatorSpec& op = t.registry.at(name);
      if (op.kind == OpKind::Bool || !length_uniform(op.lang)) {
        uniform = false;
        break;
      }
      lang = lang ? concat(*lang, op.lang) : op.lang;
    }
    if (lang && uniform && !covered.empty()) {
      int d = dcard(*lang);
      for (const auto& s : covered) {
        std::string w = altword(s, ell);
        if (d > int(w.size()) ||
            std::find(lang->words.begin(), lang->words.end(),
                      w.substr(0, size_t(d))) == lang->words.end()) {
          fail_once(prefix_membership,
                    "string " + s + " not led to by the labels at " + where);
          break;
        }
      }
    }

    // positions constrained by alternation labels along the path
    int prefix_d = 0;
    for (const auto& name : ctx.boxlabels) {
      const OperatorSpec& op = t.registry.at(name);
      if (op.kind == OpKind::Bool) break;
      std::optional<int> lp = detail::alt_length_of(op);
      if (lp && *lp % ell != 0) {
        if (prefix_d % ell != 0) {
          fail_once(agreement, "label at off-multiple depth at " + where);
        } else {
          int f = *lp / ell;
          int u = prefix_d / ell + f + 1;
          if (u <= i && covered.size() >= 2) {
            char c0 = 0;
            for (const auto& s : covered) {
              if (c0 == 0) c0 = s[u - 1];
              if (s[u - 1] != c0) {
                fail_once(agreement, "strings disagree at position " +
                                         std::to_string(u) + " at " + where);
                break;
              }
            }
          }
        }
      }
      if (lp && *lp > ell) {
        if (prefix_d % ell != 0) {
          fail_once(identities, "label at off-multiple depth at " + where);
        } else {
          int u = prefix_d / ell;
          for (const auto& s : covered)
            for (int j = 1; j * ell < *lp; ++j) {
              if (u + j + 1 > i) break;
              char x = s[u + j - 1], y = s[u + j];
              bool ok = ell % 2 == 0 ? x == y : x == '1' + '2' - y;
              if (!ok) {
                fail_once(identities, "string " + s + " breaks the block " +
                                          "identity at " + where);
                break;
              }
            }
        }
      }
      prefix_d += dcard(op.lang);
    }

    if (i % 2 == 0 && v.kids.empty() &&
        std::int64_t(covered.size()) > leaf_cap)
      fail_once(leaf_bound, "leaf at " + where + " covers " +
                                std::to_string(covered.size()) + " strings");

    for (const ModelClass* cls : {&v.left, &v.right})
      for (const auto& pm : *cls) {
        int got = detail::star_depth(*pm.model, pm.model->world("w0"),
                                     pm.world);
        if (got != depth) {
          fail_once(alignment, "'" + pm.model->id + "@" + pm.world_id() +
                                   "' sits at depth " + std::to_string(got) +
                                   ", labels say " + std::to_string(depth) +
                                   " at " + where);
        }
      }
  });

  for (const auto& c : rep.checks) rep.all_hold = rep.all_hold && c.holds;
  return rep;
}

}  // namespace msl

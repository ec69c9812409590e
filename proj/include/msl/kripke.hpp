#pragma once

// Kripke models with n accessibility relations, pointed models, model
// classes, and formula evaluation against an operator registry.
//
// Successor computation for Boolean operators scans every ordered world pair:
// a pair's edge type may make f true even when no relation connects the two
// worlds (ill-behaved f with f(0,...,0)=1 selects non-neighbors on purpose).

#include <boost/dynamic_bitset.hpp>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "msl/core.hpp"
#include "msl/formula.hpp"
#include "msl/operators.hpp"

namespace msl {

using WorldSet = boost::dynamic_bitset<>;

struct KripkeModel {
  std::string id = "m";
  int n = 1;                              // number of relations
  std::vector<std::string> worlds;        // ids, index = position
  std::map<std::string, int> index;       // id -> index
  std::vector<std::vector<WorldSet>> rel; // [relation][src] -> dst set
  std::map<std::string, WorldSet> valuation;  // var -> worlds where true
  std::vector<int> points;                // distinguished worlds

  size_t world_count() const { return worlds.size(); }

  int world(const std::string& wid) const {
    auto it = index.find(wid);
    if (it == index.end())
      fail("model '" + id + "' has no world '" + wid + "'");
    return it->second;
  }

  int add_world(const std::string& wid) {
    require(!wid.empty(), "empty world id");
    require(index.find(wid) == index.end(),
            "duplicate world id '" + wid + "' in model '" + id + "'");
    int w = static_cast<int>(worlds.size());
    worlds.push_back(wid);
    index[wid] = w;
    for (auto& r : rel) {
      for (auto& row : r) row.resize(worlds.size());
      r.emplace_back(worlds.size());
    }
    for (auto& [var, set] : valuation) set.resize(worlds.size());
    return w;
  }

  void ensure_relations() {
    if (rel.empty())
      rel.assign(n, std::vector<WorldSet>(worlds.size(), WorldSet(worlds.size())));
  }

  // j is 1-based.
  void add_edge(int j, int from, int to) {
    require(j >= 1 && j <= n, "relation index out of range");
    ensure_relations();
    rel[j - 1][from].set(to);
  }
  bool has_edge(int j, int from, int to) const {
    return !rel.empty() && rel[j - 1][from].test(to);
  }

  void set_true(const std::string& var, int w) {
    auto it = valuation.find(var);
    if (it == valuation.end())
      it = valuation.emplace(var, WorldSet(worlds.size())).first;
    it->second.set(w);
  }

  bool var_true(const std::string& var, int w) const {
    auto it = valuation.find(var);
    return it != valuation.end() && it->second.test(w);
  }

  EdgeType edge_type(int from, int to) const {
    EdgeType t = 0;
    for (int j = 1; j <= n; ++j)
      if (has_edge(j, from, to)) t |= 1u << (n - j);
    return t;
  }

  WorldSet empty_set() const { return WorldSet(worlds.size()); }
  WorldSet full_set() const {
    WorldSet s(worlds.size());
    s.set();
    return s;
  }
};

inline void validate_model(const KripkeModel& m, const Limits& limits = {}) {
  require(!m.worlds.empty(), "model '" + m.id + "' has no worlds");
  require(m.n >= 1 && m.n <= limits.max_arity,
          "model '" + m.id + "' arity out of range");
  require(m.rel.empty() || m.rel.size() == size_t(m.n),
          "model '" + m.id + "' relation count mismatch");
  for (const auto& r : m.rel) {
    require(r.size() == m.worlds.size(), "relation row count mismatch");
    for (const auto& row : r)
      require(row.size() == m.worlds.size(), "relation row width mismatch");
  }
  for (const auto& [var, set] : m.valuation) {
    require(valid_name(var), "bad variable name '" + var + "'");
    require(set.size() == m.worlds.size(), "valuation width mismatch");
  }
  for (size_t i = 0; i < m.worlds.size(); ++i)
    require(m.index.count(m.worlds[i]) && m.index.at(m.worlds[i]) == int(i),
            "world index out of sync");
  for (int p : m.points)
    require(p >= 0 && p < int(m.worlds.size()), "point out of range");
}

struct PointedModel {
  std::shared_ptr<const KripkeModel> model;
  int world = 0;

  const std::string& world_id() const { return model->worlds[world]; }
  std::pair<std::string, std::string> key() const {
    return {model->id, world_id()};
  }
};

inline bool operator==(const PointedModel& a, const PointedModel& b) {
  return a.key() == b.key();
}
inline bool operator<(const PointedModel& a, const PointedModel& b) {
  return a.key() < b.key();
}

// A class of pointed models, kept sorted by (model id, world id), deduplicated.
using ModelClass = std::vector<PointedModel>;

inline ModelClass make_class(ModelClass members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  return members;
}

// All distinct variable names appearing in any member's model valuation.
inline std::vector<std::string> class_variables(const ModelClass& a,
                                                const ModelClass& b = {}) {
  std::vector<std::string> vars;
  for (const ModelClass* cls : {&a, &b})
    for (const auto& pm : *cls)
      for (const auto& [var, set] : pm.model->valuation) vars.push_back(var);
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

// ── successors and satisfaction ──────────────────────────────────────────

inline WorldSet successors_of(const KripkeModel& m, int w,
                              const OperatorSpec& op) {
  require(op.arity() == m.n, "operator '" + op.name + "' arity " +
                                 std::to_string(op.arity()) +
                                 " does not match model arity " +
                                 std::to_string(m.n));
  WorldSet out(m.worlds.size());
  if (op.kind == OpKind::Bool) {
    for (size_t v = 0; v < m.worlds.size(); ++v)
      if (op.table.eval(m.edge_type(w, static_cast<int>(v)))) out.set(v);
    return out;
  }
  // Language operator: union over words of the endpoints of all paths
  // spelling the word.
  for (const auto& word : op.lang.words) {
    WorldSet cur(m.worlds.size());
    cur.set(w);
    for (char c : word) {
      WorldSet next(m.worlds.size());
      int j = c - '1';
      for (size_t u = cur.find_first(); u != WorldSet::npos;
           u = cur.find_next(u))
        if (!m.rel.empty()) next |= m.rel[j][u];
      cur = std::move(next);
      if (cur.none()) break;
    }
    out |= cur;
  }
  return out;
}

// Per-model evaluator with caches for subformula extensions and operator
// successor tables.
class Evaluator {
 public:
  Evaluator(const KripkeModel& m, const OperatorRegistry& reg)
      : m_(m), reg_(reg) {}

  const WorldSet& sat_set(const Formula& f) {
    // Memo keys are node addresses, so roots evaluated here must outlive the
    // evaluator: pin them, or a freed address could be reused by a later
    // formula and hit a stale entry.
    pinned_.push_back(f);
    return sat_set_rec(f);
  }

  bool satisfies(int w, const Formula& f) { return sat_set(f).test(w); }

  const std::vector<WorldSet>& successor_table(const std::string& op_name) {
    auto it = succ_.find(op_name);
    if (it != succ_.end()) return it->second;
    const OperatorSpec& op = reg_.at(op_name);
    std::vector<WorldSet> table;
    table.reserve(m_.worlds.size());
    for (size_t w = 0; w < m_.worlds.size(); ++w)
      table.push_back(successors_of(m_, static_cast<int>(w), op));
    return succ_.emplace(op_name, std::move(table)).first->second;
  }

 private:
  const WorldSet& sat_set_rec(const Formula& f) {
    auto it = memo_.find(f.id());
    if (it != memo_.end()) return it->second;
    WorldSet r(m_.worlds.size());
    switch (f.kind()) {
      case FKind::Var: {
        auto v = m_.valuation.find(f.label());
        if (v != m_.valuation.end()) r = v->second;
        break;
      }
      case FKind::Not:
        r = ~sat_set_rec(f.lhs());
        break;
      case FKind::Or:
        r = sat_set_rec(f.lhs()) | sat_set_rec(f.rhs());
        break;
      case FKind::Box: {
        const auto& succ = successor_table(f.label());
        const WorldSet& inner = sat_set_rec(f.lhs());
        for (size_t w = 0; w < m_.worlds.size(); ++w)
          if (succ[w].is_subset_of(inner)) r.set(w);
        break;
      }
    }
    return memo_.emplace(f.id(), std::move(r)).first->second;
  }

  const KripkeModel& m_;
  const OperatorRegistry& reg_;
  std::map<const void*, WorldSet> memo_;
  std::map<std::string, std::vector<WorldSet>> succ_;
  std::vector<Formula> pinned_;
};

inline bool satisfies(const KripkeModel& m, int w, const Formula& f,
                      const OperatorRegistry& reg) {
  return Evaluator(m, reg).satisfies(w, f);
}

inline bool satisfies(const KripkeModel& m, const std::string& wid,
                      const Formula& f, const OperatorRegistry& reg) {
  return satisfies(m, m.world(wid), f, reg);
}

inline bool satisfies(const PointedModel& pm, const Formula& f,
                      const OperatorRegistry& reg) {
  return satisfies(*pm.model, pm.world, f, reg);
}

// True iff every member satisfies f.
inline bool class_satisfies(const ModelClass& cls, const Formula& f,
                            const OperatorRegistry& reg) {
  for (const auto& pm : cls)
    if (!satisfies(pm, f, reg)) return false;
  return true;
}

// True iff every member falsifies f.
inline bool class_falsifies(const ModelClass& cls, const Formula& f,
                            const OperatorRegistry& reg) {
  for (const auto& pm : cls)
    if (satisfies(pm, f, reg)) return false;
  return true;
}

}  // namespace msl

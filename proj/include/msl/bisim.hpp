#pragma once

// Bisimulations for generalized operators: a relation between two models is a
// bisimulation when related worlds agree on variables and every operator's
// successor step can be matched in both directions. Checking, the greatest
// bisimulation, and a brute-force invariance probe that hunts for a
// discriminating formula.

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "msl/enumerate.hpp"
#include "msl/kripke.hpp"
#include "msl/operators.hpp"

namespace msl {

using WorldRelation = std::set<std::pair<int, int>>;

struct BisimViolation {
  enum class Kind { Atom, Forward, Back };
  Kind kind = Kind::Atom;
  int w1 = 0, w2 = 0;       // the offending pair
  std::string detail;       // variable (Atom) or operator name
  int witness = -1;         // unmatched successor world (Forward/Back)

  std::string describe(const KripkeModel& m1, const KripkeModel& m2) const {
    std::string pair =
        "(" + m1.worlds[w1] + "," + m2.worlds[w2] + ")";
    switch (kind) {
      case Kind::Atom:
        return "atom mismatch at " + pair + " on variable '" + detail + "'";
      case Kind::Forward:
        return "forward condition fails at " + pair + " for operator '" +
               detail + "': successor '" + m1.worlds[witness] +
               "' has no match";
      case Kind::Back:
        return "back condition fails at " + pair + " for operator '" +
               detail + "': successor '" + m2.worlds[witness] +
               "' has no match";
    }
    return "";
  }
};

namespace detail {

inline std::vector<std::string> shared_variables(const KripkeModel& m1,
                                                 const KripkeModel& m2) {
  std::set<std::string> vars;
  for (const auto& [v, _] : m1.valuation) vars.insert(v);
  for (const auto& [v, _] : m2.valuation) vars.insert(v);
  return {vars.begin(), vars.end()};
}

// Successor tables for every operator on one model, built on first use.
class SuccessorTables {
 public:
  SuccessorTables(const KripkeModel& m, const OperatorRegistry& reg)
      : ev_(m, reg) {}
  const std::vector<WorldSet>& table(const std::string& op) {
    return ev_.successor_table(op);
  }

 private:
  Evaluator ev_;
};

}  // namespace detail

// Check the three bisimulation conditions for every pair and every operator;
// first violation in deterministic order (pairs ascending, variables then
// operators name-sorted, successors ascending), or nothing when Z is a
// bisimulation.
inline std::optional<BisimViolation> check_bisimulation(
    const KripkeModel& m1, const KripkeModel& m2, const WorldRelation& z,
    const OperatorRegistry& reg) {
  require(m1.n == reg.arity() && m2.n == reg.arity(),
          "model arity does not match the registry");
  for (const auto& [u, v] : z) {
    require(u >= 0 && u < int(m1.worlds.size()), "relation world out of range");
    require(v >= 0 && v < int(m2.worlds.size()), "relation world out of range");
  }
  std::vector<std::string> vars = detail::shared_variables(m1, m2);
  detail::SuccessorTables s1(m1, reg), s2(m2, reg);
  for (const auto& [u, v] : z) {
    for (const auto& var : vars)
      if (m1.var_true(var, u) != m2.var_true(var, v))
        return BisimViolation{BisimViolation::Kind::Atom, u, v, var, -1};
    for (const auto& op : reg.ops()) {
      const WorldSet& su = s1.table(op.name)[u];
      const WorldSet& sv = s2.table(op.name)[v];
      for (size_t up = 0; up < su.size(); ++up) {
        if (!su.test(up)) continue;
        bool matched = false;
        for (size_t vp = 0; vp < sv.size() && !matched; ++vp)
          if (sv.test(vp) && z.count({int(up), int(vp)})) matched = true;
        if (!matched)
          return BisimViolation{BisimViolation::Kind::Forward, u, v, op.name,
                                int(up)};
      }
      for (size_t vp = 0; vp < sv.size(); ++vp) {
        if (!sv.test(vp)) continue;
        bool matched = false;
        for (size_t up = 0; up < su.size() && !matched; ++up)
          if (su.test(up) && z.count({int(up), int(vp)})) matched = true;
        if (!matched)
          return BisimViolation{BisimViolation::Kind::Back, u, v, op.name,
                                int(vp)};
      }
    }
  }
  return std::nullopt;
}

// The largest bisimulation between two models: start from all atom-compatible
// pairs and drop violating pairs until the relation stabilizes. The result of
// each round only shrinks, so the loop terminates.
inline WorldRelation greatest_bisimulation(const KripkeModel& m1,
                                           const KripkeModel& m2,
                                           const OperatorRegistry& reg) {
  require(m1.n == reg.arity() && m2.n == reg.arity(),
          "model arity does not match the registry");
  std::vector<std::string> vars = detail::shared_variables(m1, m2);
  WorldRelation z;
  for (int u = 0; u < int(m1.worlds.size()); ++u)
    for (int v = 0; v < int(m2.worlds.size()); ++v) {
      bool ok = true;
      for (const auto& var : vars)
        if (m1.var_true(var, u) != m2.var_true(var, v)) {
          ok = false;
          break;
        }
      if (ok) z.insert({u, v});
    }
  detail::SuccessorTables s1(m1, reg), s2(m2, reg);
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = z.begin(); it != z.end();) {
      auto [u, v] = *it;
      bool ok = true;
      for (const auto& op : reg.ops()) {
        const WorldSet& su = s1.table(op.name)[u];
        const WorldSet& sv = s2.table(op.name)[v];
        for (size_t up = 0; up < su.size() && ok; ++up) {
          if (!su.test(up)) continue;
          bool matched = false;
          for (size_t vp = 0; vp < sv.size() && !matched; ++vp)
            if (sv.test(vp) && z.count({int(up), int(vp)})) matched = true;
          ok = matched;
        }
        for (size_t vp = 0; vp < sv.size() && ok; ++vp) {
          if (!sv.test(vp)) continue;
          bool matched = false;
          for (size_t up = 0; up < su.size() && !matched; ++up)
            if (su.test(up) && z.count({int(up), int(vp)})) matched = true;
          ok = matched;
        }
        if (!ok) break;
      }
      if (ok) {
        ++it;
      } else {
        it = z.erase(it);
        changed = true;
      }
    }
  }
  return z;
}

// Enumerate formulas over the registry within the budget and return the first
// one on which the two pointed models disagree, or nothing. By invariance,
// bisimilar points can never yield a formula here.
inline std::optional<Formula> invariance_probe(const KripkeModel& m1, int w1,
                                               const KripkeModel& m2, int w2,
                                               const OperatorRegistry& reg,
                                               SizeBudget budget) {
  require(w1 >= 0 && w1 < int(m1.worlds.size()), "probe world out of range");
  require(w2 >= 0 && w2 < int(m2.worlds.size()), "probe world out of range");
  std::vector<std::string> vars = detail::shared_variables(m1, m2);
  if (vars.empty()) vars = {"p"};
  FormulaEnumerator en(reg, vars, budget);
  ArenaEvaluator e1(m1, reg), e2(m2, reg);
  std::optional<Formula> found;
  en.for_each([&](int, std::int32_t idx) {
    if (e1.satisfies(en, idx, w1) != e2.satisfies(en, idx, w2)) {
      found = en.formula_at(idx);
      return false;
    }
    return true;
  });
  return found;
}

}  // namespace msl

#pragma once

// Rewritings between operator vocabularies:
//  - decomposition of a one-step operator g as a disjunction of operators
//    from a registry, with refuting assignments when impossible,
//  - translation of boxes over decomposable operators into conjunctions,
//  - expansion of finite-language boxes into single-relation box chains,
//  - the alternation logic registries (with and without classical boxes).

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "msl/formula.hpp"
#include "msl/kripke.hpp"
#include "msl/operators.hpp"

namespace msl {

namespace detail {
inline std::vector<const OperatorSpec*> bool_ops(const OperatorRegistry& reg) {
  std::vector<const OperatorSpec*> r;
  for (const auto& op : reg.ops())
    if (op.kind == OpKind::Bool) r.push_back(&op);
  return r;
}
}  // namespace detail

// The maximal decomposition candidate S = {f in F : f <= g}, name-sorted.
// Only Boolean operators of the registry participate.
inline std::vector<std::string> maximal_below(const TruthTable& g,
                                              const OperatorRegistry& reg) {
  std::vector<std::string> s;
  for (const OperatorSpec* op : detail::bool_ops(reg)) {
    require(op->table.n == g.n, "arity mismatch between '" + op->name +
                                    "' and the decomposition target");
    if (leq(op->table, g)) s.push_back(op->name);
  }
  return s;
}

// Is g equivalent to a disjunction of registry operators? Returns the maximal
// witness subset, or nothing. Maximality is sound: if any subset works, the
// maximal one does.
inline std::optional<std::vector<std::string>> is_disjunction_of(
    const TruthTable& g, const OperatorRegistry& reg) {
  std::vector<std::string> s = maximal_below(g, reg);
  TruthTable acc = TruthTable::constant(g.n, false);
  for (const auto& name : s) acc = or_tables(acc, reg.at(name).table);
  if (acc == g) return s;
  return std::nullopt;
}

// Witness assignments produced when g does not decompose over the registry:
// for every f outside S an edge type where f holds but g does not, and one
// edge type where g holds but no member of S does. Least witnesses, so the
// derived countermodels are reproducible.
struct DecompositionWitnesses {
  std::vector<std::string> s;                     // maximal candidate
  std::map<std::string, EdgeType> refuting;       // f outside S -> I_f
  EdgeType gap = 0;                               // I_g
};

inline DecompositionWitnesses decomposition_witnesses(
    const TruthTable& g, const OperatorRegistry& reg) {
  require(!is_disjunction_of(g, reg),
          "decomposition witnesses requested for a decomposable function");
  DecompositionWitnesses w;
  w.s = maximal_below(g, reg);
  TruthTable span = TruthTable::constant(g.n, false);
  for (const auto& name : w.s) span = or_tables(span, reg.at(name).table);
  for (const OperatorSpec* op : detail::bool_ops(reg)) {
    if (std::find(w.s.begin(), w.s.end(), op->name) != w.s.end()) continue;
    bool found = false;
    for (EdgeType t = 0; t < (1u << g.n) && !found; ++t)
      if (op->table.eval(t) && !g.eval(t)) {
        w.refuting[op->name] = t;
        found = true;
      }
    require(found, "no refuting assignment for '" + op->name +
                       "' (it should have been in S)");
  }
  bool found = false;
  for (EdgeType t = 0; t < (1u << g.n) && !found; ++t)
    if (g.eval(t) && !span.eval(t)) {
      w.gap = t;
      found = true;
    }
  require(found, "no gap assignment (g decomposes after all)");
  return w;
}

namespace detail {
inline Formula conjunction_fold(const std::vector<Formula>& parts) {
  // a & b desugars to ~(~a|~b); fold left.
  Formula acc = parts.front();
  for (size_t i = 1; i < parts.size(); ++i)
    acc = Formula::negation(Formula::disjunction(Formula::negation(acc),
                                                 Formula::negation(parts[i])));
  return acc;
}
}  // namespace detail

// Rewrite every box of phi into the target vocabulary: each operator g used
// in phi must decompose over `target` as g = OR S, and [g]psi becomes the
// conjunction over S of [f]psi. An empty S (g constantly false) makes [g]psi
// a tautology, emitted as (psi|~psi).
inline Formula translate_boolean_box(const Formula& phi,
                                     const OperatorRegistry& from,
                                     const OperatorRegistry& target) {
  switch (phi.kind()) {
    case FKind::Var: return phi;
    case FKind::Not:
      return Formula::negation(translate_boolean_box(phi.lhs(), from, target));
    case FKind::Or:
      return Formula::disjunction(
          translate_boolean_box(phi.lhs(), from, target),
          translate_boolean_box(phi.rhs(), from, target));
    case FKind::Box: break;
  }
  const OperatorSpec& g = from.at(phi.label());
  require(g.kind == OpKind::Bool,
          "translate_boolean_box cannot translate language operator '" +
              g.name + "'");
  auto s = is_disjunction_of(g.table, target);
  require(s.has_value(),
          "operator '" + g.name + "' does not decompose over the target set");
  Formula inner = translate_boolean_box(phi.lhs(), from, target);
  if (s->empty())
    return Formula::disjunction(inner, Formula::negation(inner));
  std::vector<Formula> parts;
  for (const auto& name : *s) parts.push_back(Formula::box(name, inner));
  return detail::conjunction_fold(parts);
}

// ── language expansion ────────────────────────────────────────────────────

// Registry for the expansion image: the Boolean operators of `reg` plus the
// projections r1..rn. An existing name may only be reused if it already
// denotes the same projection.
inline OperatorRegistry expansion_registry(const OperatorRegistry& reg) {
  OperatorRegistry out(reg.arity());
  for (const auto& op : reg.ops())
    if (op.kind == OpKind::Bool) out.add(op);
  for (int j = 1; j <= reg.arity(); ++j) {
    std::string name = "r" + std::to_string(j);
    TruthTable proj = TruthTable::projection(reg.arity(), j);
    if (const OperatorSpec* existing = out.find(name)) {
      require(existing->table == proj,
              "name '" + name +
                  "' is taken by a non-projection operator; expansion would "
                  "be ambiguous");
      continue;
    }
    out.add(OperatorSpec::make_bool(name, proj));
  }
  return out;
}

// Replace every finite-language box by the conjunction, over the language's
// words, of single-relation box chains: [L]phi = AND_{s in L} [r_{s_1}]...
// [r_{s_k}] phi. Boolean boxes are kept. The result lives in
// expansion_registry(reg).
inline Formula expand_language_box(const Formula& phi,
                                   const OperatorRegistry& reg) {
  switch (phi.kind()) {
    case FKind::Var: return phi;
    case FKind::Not:
      return Formula::negation(expand_language_box(phi.lhs(), reg));
    case FKind::Or:
      return Formula::disjunction(expand_language_box(phi.lhs(), reg),
                                  expand_language_box(phi.rhs(), reg));
    case FKind::Box: break;
  }
  const OperatorSpec& op = reg.at(phi.label());
  Formula inner = expand_language_box(phi.lhs(), reg);
  if (op.kind == OpKind::Bool) return Formula::box(phi.label(), inner);
  std::vector<Formula> parts;
  for (const auto& word : op.lang.words) {  // sorted by normalize()
    Formula chain = inner;
    for (auto it = word.rbegin(); it != word.rend(); ++it)
      chain = Formula::box("r" + std::string(1, *it), chain);
    parts.push_back(chain);
  }
  return detail::conjunction_fold(parts);
}

// ── alternation logics ────────────────────────────────────────────────────

// The two registries of the alternation fragment for index set I:
// `plain` offers only the alternation operators A_ell, `plus` additionally
// the classical one-step boxes as singleton languages {1} and {2}.
struct AlternationRegistries {
  OperatorRegistry plain{2};
  OperatorRegistry plus{2};
};

inline AlternationRegistries build_alternation_registries(std::vector<int> I) {
  std::sort(I.begin(), I.end());
  I.erase(std::unique(I.begin(), I.end()), I.end());
  AlternationRegistries r;
  for (int ell : I) {
    require(ell >= 1, "alternation length must be positive");
    std::string name = "A" + std::to_string(ell);
    r.plain.add(OperatorSpec::make_alt(name, ell));
    r.plus.add(OperatorSpec::make_alt(name, ell));
  }
  for (int j = 1; j <= 2; ++j) {
    FiniteLanguage single;
    single.n = 2;
    single.words = {std::string(1, char('0' + j))};
    r.plus.add(OperatorSpec::make_lang("b" + std::to_string(j), single));
  }
  return r;
}

}  // namespace msl

#pragma once

// Minimal-formula search. Candidates stream from the enumerator in
// (size, print) order; countermodels from failed equivalence checks
// accumulate in a pool that filters later candidates, so the exact check
// runs only on survivors. A representative mode collapses candidates that
// agree on every pool model, which reaches budgets the plain sweep cannot.
// The succinctness experiments drive both against the hand-built families.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "msl/core.hpp"
#include "msl/enumerate.hpp"
#include "msl/equiv.hpp"
#include "msl/families.hpp"
#include "msl/formula.hpp"
#include "msl/kripke.hpp"
#include "msl/operators.hpp"
#include "msl/translate.hpp"

namespace msl {

// ── registry utilities ────────────────────────────────────────────────────

inline OperatorRegistry subregistry(const OperatorRegistry& reg,
                                    const std::vector<std::string>& keep) {
  OperatorRegistry out(reg.arity());
  for (const auto& name : keep) out.add(reg.at(name));
  return out;
}

// Union by name. A shared name must carry the same operator on both sides.
inline OperatorRegistry merge_registries(const OperatorRegistry& a,
                                         const OperatorRegistry& b) {
  require(a.empty() || b.empty() || a.arity() == b.arity(),
          "cannot merge registries of different arity");
  OperatorRegistry out = a;
  for (const auto& op : b.ops()) {
    const OperatorSpec* have = out.find(op.name);
    if (!have) {
      out.add(op);
      continue;
    }
    bool same = have->kind == op.kind &&
                (op.kind == OpKind::Bool ? have->table == op.table
                                         : have->lang == op.lang);
    require(same, "operator '" + op.name +
                      "' means different things in the merged registries");
  }
  return out;
}

// ── enumeration, materialized ─────────────────────────────────────────────

inline std::vector<Formula> enumerate_formulas(const OperatorRegistry& reg,
                                               std::vector<std::string> vars,
                                               SizeBudget budget,
                                               EnumerationOptions opt = {}) {
  FormulaEnumerator en(reg, std::move(vars), budget, opt);
  std::vector<Formula> out;
  en.for_each([&](int, std::int32_t idx) {
    out.push_back(en.formula_at(idx));
    return true;
  });
  return out;
}

// ── search results ────────────────────────────────────────────────────────

struct SearchResult {
  enum class Kind { Found, NoneUpTo };
  Kind kind = Kind::NoneUpTo;
  std::optional<Formula> witness;  // set iff Found
  int size = 0;                    // witness size, or the exhausted bound
};

struct SearchStats {
  std::int64_t candidates = 0;    // candidates that reached the pool filter
  std::int64_t exact_checks = 0;  // candidates that reached the exact oracle
  int pool = 0;                   // countermodels accumulated
  int restarts = 0;               // representative-mode regenerations
};

struct SearchOptions {
  // Collapse candidates with equal behavior on the pool into one
  // representative per behavior. Sound for both verdicts: any equivalent
  // formula has a representative recomposition of the same size or smaller,
  // and every representative that matches the target on the pool is still
  // confirmed by the exact oracle before it counts.
  bool dedup = false;
  bool prune_double_negation = false;
  // Candidate variables; defaults to the variables of the target.
  std::vector<std::string> variables;
  // Operators the target uses beyond the candidate registry (for example a
  // macro operator the search is asked to express without).
  std::optional<OperatorRegistry> target_registry;
  int max_restarts = 64;
  std::uint64_t node_cap = 8'000'000;
  SearchStats* stats = nullptr;  // filled when non-null
};

namespace detail {

// The exact oracle certifies both Found and NoneUpTo, so every operator in
// reach of the search must be expressible to it: languages expand away, and
// Boolean operators must not select along absent edges.
inline void require_searchable(const OperatorRegistry& reg) {
  for (const auto& op : reg.ops())
    if (op.kind == OpKind::Bool)
      require(op.table.well_behaved(),
              "operator '" + op.name +
                  "' selects non-neighbors; minimality cannot be certified");
}

inline void require_ops_known(const Formula& f, const OperatorRegistry& reg,
                              const char* what) {
  std::set<std::string> used;
  collect_used_ops(f, used);
  for (const auto& name : used)
    require(reg.find(name) != nullptr, std::string("the ") + what +
                                           " uses operator '" + name +
                                           "' which no registry provides");
}

// One countermodel plus everything needed to evaluate candidates on it.
struct PoolEntry {
  PointedModel pm;
  std::unique_ptr<Evaluator> ev;
  bool target_true = false;
};

inline void add_pool_entry(std::vector<PoolEntry>& pool,
                           const PointedModel& pm, const Formula& target,
                           const OperatorRegistry& reg) {
  PoolEntry e;
  e.pm = pm;
  e.ev = std::make_unique<Evaluator>(*e.pm.model, reg);
  e.target_true = e.ev->satisfies(e.pm.world, target);
  pool.push_back(std::move(e));
}

// Satisfaction set of an arena candidate on one pool model. No memo: the
// candidate is small and the models are countermodel-sized.
inline WorldSet arena_sat(const FormulaEnumerator& en,
                          const std::vector<std::string>& op_names,
                          std::int32_t idx, const KripkeModel& m,
                          Evaluator& ev) {
  const FormulaEnumerator::Node& n = en.node(idx);
  switch (n.kind) {
    case FKind::Var: {
      auto it = m.valuation.find(en.variables()[n.sym]);
      if (it != m.valuation.end()) return it->second;
      return WorldSet(m.worlds.size());
    }
    case FKind::Not: return ~arena_sat(en, op_names, n.a, m, ev);
    case FKind::Or:
      return arena_sat(en, op_names, n.a, m, ev) |
             arena_sat(en, op_names, n.b, m, ev);
    case FKind::Box: {
      const auto& succ = ev.successor_table(op_names[n.sym]);
      WorldSet inner = arena_sat(en, op_names, n.a, m, ev);
      WorldSet r(m.worlds.size());
      for (size_t w = 0; w < m.worlds.size(); ++w)
        if (succ[w].is_subset_of(inner)) r.set(w);
      return r;
    }
  }
  fail("corrupt arena node");
}

inline SearchResult plain_search(const Formula& target,
                                 const OperatorRegistry& registry,
                                 const OperatorRegistry& eff,
                                 std::vector<std::string> vars,
                                 SizeBudget budget, const SearchOptions& opt,
                                 SearchStats& st) {
  EnumerationOptions eopt;
  eopt.prune_double_negation = opt.prune_double_negation;
  eopt.node_cap = opt.node_cap;
  FormulaEnumerator en(registry, std::move(vars), budget, eopt);
  const std::vector<std::string> op_names = registry.names();

  std::vector<PoolEntry> pool;
  SearchResult res;
  res.kind = SearchResult::Kind::NoneUpTo;
  res.size = budget.max_size;

  en.for_each([&](int size, std::int32_t idx) {
    ++st.candidates;
    for (auto& e : pool) {
      bool v = arena_sat(en, op_names, idx, *e.pm.model, *e.ev)
                   .test(e.pm.world);
      if (v != e.target_true) return true;
    }
    ++st.exact_checks;
    Formula cand = en.formula_at(idx);
    // Language boxes expand away inside, so this always runs exactly.
    EquivResult r = equivalent(target, cand, eff);
    require(r.verdict != Verdict::UnknownWithinBounds,
            "the searchable registry check let a bounded verdict through");
    if (r.verdict == Verdict::Equivalent) {
      res.kind = SearchResult::Kind::Found;
      res.witness = cand;
      res.size = size;
      return false;
    }
    require(r.countermodel.has_value(), "inequivalence without a witness");
    add_pool_entry(pool, *r.countermodel, target, eff);
    return true;
  });
  st.pool = int(pool.size());
  return res;
}

// ── representative mode ──

// A representative of one pool behavior: satisfaction sets per pool model
// plus the recipe to rebuild the formula. Children point at earlier
// representatives, so recomposition never grows a candidate.
struct RepNode {
  FKind kind = FKind::Var;
  std::int16_t sym = -1;
  std::int32_t a = -1;
  std::int32_t b = -1;
  std::int16_t size = 0;
  std::vector<WorldSet> sets;
  std::string print;
};

struct RepCandidate {
  FKind kind = FKind::Var;
  std::int16_t sym = -1;
  std::int32_t a = -1;
  std::int32_t b = -1;
  std::string print;
};

inline Formula rep_formula(const std::vector<RepNode>& reps,
                           const std::vector<std::string>& vars,
                           const std::vector<std::string>& op_names,
                           std::int32_t r) {
  const RepNode& n = reps[r];
  switch (n.kind) {
    case FKind::Var: return Formula::var(vars[n.sym]);
    case FKind::Not:
      return Formula::negation(rep_formula(reps, vars, op_names, n.a));
    case FKind::Or:
      return Formula::disjunction(rep_formula(reps, vars, op_names, n.a),
                                  rep_formula(reps, vars, op_names, n.b));
    case FKind::Box:
      return Formula::box(op_names[n.sym],
                          rep_formula(reps, vars, op_names, n.a));
  }
  fail("corrupt representative node");
}

inline SearchResult rep_search(const Formula& target,
                               const OperatorRegistry& registry,
                               const OperatorRegistry& eff,
                               std::vector<std::string> vars,
                               SizeBudget budget, const SearchOptions& opt,
                               SearchStats& st) {
  // Representatives are picked by minimal size, so a depth cap below
  // size-1 could exclude a recomposition whose original fits it. Keep the
  // certificate honest by refusing budgets where depth binds.
  require(budget.max_depth >= budget.max_size - 1,
          "representative search needs an unconstraining depth budget");
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  require(!vars.empty(), "search needs at least one variable");
  const std::vector<std::string> op_names = registry.names();

  std::vector<PoolEntry> pool;
  std::vector<RepNode> reps;
  std::vector<std::vector<std::int32_t>> by_size;
  std::unordered_map<std::string, std::int32_t> sig_seen;

  auto sig_of = [&](const std::vector<WorldSet>& sets) {
    std::string s;
    for (const auto& ws : sets) {
      s.push_back('|');
      for (size_t i = 0; i < ws.size(); ++i)
        s.push_back(ws.test(i) ? '1' : '0');
    }
    return s;
  };

  for (int gen = 0;; ++gen) {
    require(gen <= opt.max_restarts,
            "representative search did not stabilize");
    st.restarts = gen;
    reps.clear();
    by_size.assign(budget.max_size + 1, {});
    sig_seen.clear();
    bool restarted = false;

    for (int k = 1; k <= budget.max_size && !restarted; ++k) {
      std::vector<RepCandidate> cands;
      if (k == 1) {
        for (std::int16_t v = 0; v < std::int16_t(vars.size()); ++v)
          cands.push_back({FKind::Var, v, -1, -1, vars[v]});
      } else {
        for (std::int32_t c : by_size[k - 1]) {
          cands.push_back({FKind::Not, -1, c, -1, "~" + reps[c].print});
          for (std::int16_t op = 0; op < std::int16_t(op_names.size()); ++op)
            cands.push_back({FKind::Box, op, c, -1,
                             "[" + op_names[op] + "]" + reps[c].print});
        }
        for (int i = 1; i <= k - 2; ++i)
          for (std::int32_t a : by_size[i])
            for (std::int32_t b : by_size[k - 1 - i])
              cands.push_back({FKind::Or, -1, a, b,
                               "(" + reps[a].print + "|" + reps[b].print +
                                   ")"});
      }
      std::sort(cands.begin(), cands.end(),
                [](const RepCandidate& x, const RepCandidate& y) {
                  return x.print < y.print;
                });

      for (const RepCandidate& c : cands) {
        ++st.candidates;
        std::vector<WorldSet> sets;
        sets.reserve(pool.size());
        for (size_t mi = 0; mi < pool.size(); ++mi) {
          const KripkeModel& m = *pool[mi].pm.model;
          switch (c.kind) {
            case FKind::Var: {
              auto it = m.valuation.find(vars[c.sym]);
              sets.push_back(it != m.valuation.end()
                                 ? it->second
                                 : WorldSet(m.worlds.size()));
              break;
            }
            case FKind::Not: sets.push_back(~reps[c.a].sets[mi]); break;
            case FKind::Or:
              sets.push_back(reps[c.a].sets[mi] | reps[c.b].sets[mi]);
              break;
            case FKind::Box: {
              const auto& succ =
                  pool[mi].ev->successor_table(op_names[c.sym]);
              const WorldSet& inner = reps[c.a].sets[mi];
              WorldSet r(m.worlds.size());
              for (size_t w = 0; w < m.worlds.size(); ++w)
                if (succ[w].is_subset_of(inner)) r.set(w);
              sets.push_back(std::move(r));
              break;
            }
          }
        }
        std::string sig = sig_of(sets);
        if (sig_seen.count(sig)) continue;
        require(reps.size() < opt.node_cap,
                "representative search exceeds the node cap");
        std::int32_t idx = std::int32_t(reps.size());
        sig_seen.emplace(std::move(sig), idx);
        reps.push_back({c.kind, c.sym, c.a, c.b, std::int16_t(k),
                        std::move(sets), c.print});
        by_size[k].push_back(idx);

        bool match = true;
        for (size_t mi = 0; mi < pool.size() && match; ++mi)
          match = reps[idx].sets[mi].test(pool[mi].pm.world) ==
                  pool[mi].target_true;
        if (!match) continue;
        ++st.exact_checks;
        Formula cand = rep_formula(reps, vars, op_names, idx);
        EquivResult r = equivalent(target, cand, eff);
        require(r.verdict != Verdict::UnknownWithinBounds,
                "the searchable registry check let a bounded verdict through");
        if (r.verdict == Verdict::Equivalent) {
          st.pool = int(pool.size());
          SearchResult res;
          res.kind = SearchResult::Kind::Found;
          res.witness = cand;
          res.size = k;
          return res;
        }
        require(r.countermodel.has_value(),
                "inequivalence without a witness");
        add_pool_entry(pool, *r.countermodel, target, eff);
        restarted = true;
        break;
      }
    }
    if (!restarted) {
      st.pool = int(pool.size());
      SearchResult res;
      res.kind = SearchResult::Kind::NoneUpTo;
      res.size = budget.max_size;
      return res;
    }
  }
}

}  // namespace detail

// Smallest formula over the registry equivalent to the target, in
// (size, print) enumeration order; NoneUpTo when the budget holds none.
// Both verdicts are certified through the exact equivalence route.
inline SearchResult minimal_equivalent_size(const Formula& target,
                                            const OperatorRegistry& registry,
                                            SizeBudget budget,
                                            SearchOptions opt = {}) {
  validate(budget);
  OperatorRegistry eff = opt.target_registry
                             ? merge_registries(registry, *opt.target_registry)
                             : registry;
  detail::require_searchable(eff);
  detail::require_ops_known(target, eff, "target");
  std::vector<std::string> vars =
      opt.variables.empty() ? variables_of(target) : opt.variables;

  SearchStats local;
  SearchStats& st = opt.stats ? *opt.stats : local;
  st = SearchStats{};
  if (opt.dedup)
    return detail::rep_search(target, registry, eff, std::move(vars), budget,
                              opt, st);
  return detail::plain_search(target, registry, eff, std::move(vars), budget,
                              opt, st);
}

// ── succinctness experiments ──────────────────────────────────────────────

struct ExperimentRow {
  int i = 0;
  std::string target_print;
  int rich_size = 0;
  SearchResult poor;
  double bound = 0.0;
  bool satisfied = false;
};

struct ExperimentReport {
  std::string kind;
  std::string rich_logic;
  std::string poor_logic;
  std::vector<ExperimentRow> rows;
};

namespace detail {

// Found(s) proves the minimum is s; NoneUpTo(K) proves it exceeds K.
inline bool bound_satisfied(const SearchResult& poor, double bound) {
  double proven = poor.kind == SearchResult::Kind::Found ? poor.size
                                                         : poor.size + 1;
  return proven + 1e-9 >= bound;
}

inline std::string joined_names(const OperatorRegistry& reg) {
  std::string s;
  for (const auto& name : reg.names()) {
    if (!s.empty()) s += ",";
    s += name;
  }
  return "{" + s + "}";
}

}  // namespace detail

struct SinglestepParams {
  OperatorRegistry ops;  // the base operators plus the macro operator
  std::string g_name;    // the macro the poor logic must do without
  int min_i = 1;
  int max_i = 2;
  SizeBudget budget;
  SearchOptions search;
};

// How expensive is "some g-successor path of length i reaches p" without g?
// The expected growth rate is (t/(t-1))^i where t is the size of the minimal
// witness set of edge types for g.
inline ExperimentReport succinctness_experiment(const SinglestepParams& p) {
  require(p.min_i >= 1 && p.min_i <= p.max_i, "bad experiment range");
  const OperatorSpec& g = p.ops.at(p.g_name);
  require(g.kind == OpKind::Bool, "the macro operator must be Boolean");
  std::vector<std::string> family_names;
  for (const auto& name : p.ops.names())
    if (name != p.g_name) family_names.push_back(name);
  OperatorRegistry family = subregistry(p.ops, family_names);
  require(!family.empty(), "the experiment needs base operators");

  auto [f1, f2] = f1_f2_split(g.table, family);
  std::vector<TruthTable> f1_tables;
  for (const auto& name : f1) f1_tables.push_back(family.at(name).table);
  std::vector<EdgeType> beta = minimal_beta_set(g.table, f1_tables);
  double t = double(beta.size());

  ExperimentReport rep;
  rep.kind = "singlestep";
  rep.rich_logic = detail::joined_names(p.ops);
  rep.poor_logic = detail::joined_names(family);
  Formula pvar = Formula::var("p");
  for (int i = p.min_i; i <= p.max_i; ++i) {
    Formula target =
        Formula::negation(box_power(p.g_name, i, Formula::negation(pvar)));
    ExperimentRow row;
    row.i = i;
    row.target_print = print(target);
    row.rich_size = target.size();
    SearchOptions opt = p.search;
    opt.target_registry = p.ops;
    row.poor = minimal_equivalent_size(target, family, p.budget, opt);
    row.bound = std::pow(t / (t - 1.0), i);
    row.satisfied = detail::bound_satisfied(row.poor, row.bound);
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

struct AlternationParams {
  int ell = 1;                // alternation length of the rich operator
  std::vector<int> index_set; // lengths available to the poor logic
  int min_i = 1;
  int max_i = 2;
  SizeBudget budget;
  SearchOptions search;
};

// How expensive is an iterated alternation box in a logic with the wrong
// alternation lengths, even granting the single-letter boxes? The expected
// lower bound is 2^(i/2).
inline ExperimentReport succinctness_experiment(const AlternationParams& p) {
  require(p.min_i >= 1 && p.min_i <= p.max_i, "bad experiment range");
  require(p.ell >= 1, "alternation length must be positive");
  AlternationRegistries regs = build_alternation_registries(p.index_set);
  std::string rich_name = "A" + std::to_string(p.ell);
  OperatorRegistry rich(2);
  rich.add(OperatorSpec::make_alt(rich_name, p.ell));

  ExperimentReport rep;
  rep.kind = "alternation";
  rep.rich_logic = detail::joined_names(rich);
  rep.poor_logic = detail::joined_names(regs.plus);
  Formula pvar = Formula::var("p");
  for (int i = p.min_i; i <= p.max_i; ++i) {
    Formula target = box_power(rich_name, i, pvar);
    ExperimentRow row;
    row.i = i;
    row.target_print = print(target);
    row.rich_size = target.size();
    SearchOptions opt = p.search;
    opt.target_registry = rich;
    row.poor = minimal_equivalent_size(target, regs.plus, p.budget, opt);
    row.bound = std::pow(2.0, i / 2.0);
    row.satisfied = detail::bound_satisfied(row.poor, row.bound);
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

}  // namespace msl

#pragma once

// Model family builders: alternation chains with trap completion, single-step
// tree universes, and the two-model counterexample pair for non-decomposable
// operators. Every builder audits its own satisfaction claims before
// returning, so a family that constructs successfully is known to behave.

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "msl/bisim.hpp"
#include "msl/kripke.hpp"
#include "msl/language.hpp"
#include "msl/operators.hpp"
#include "msl/translate.hpp"

namespace msl {

enum class Side { A, B };

// ── layered depth audit ───────────────────────────────────────────────────

// Depth map of a layered model: every edge must go down exactly one layer,
// which makes the distance from the root unique per world. Errors otherwise.
inline std::vector<int> layered_depths(const KripkeModel& m, int root) {
  std::vector<int> depth(m.worlds.size(), -1);
  std::vector<int> queue{root};
  depth[root] = 0;
  for (size_t h = 0; h < queue.size(); ++h) {
    int u = queue[h];
    for (int j = 1; j <= m.n && !m.rel.empty(); ++j) {
      const WorldSet& row = m.rel[j - 1][u];
      for (size_t v = row.find_first(); v != WorldSet::npos;
           v = row.find_next(v)) {
        if (depth[v] == -1) {
          depth[v] = depth[u] + 1;
          queue.push_back(int(v));
        }
      }
    }
  }
  for (size_t w = 0; w < m.worlds.size(); ++w)
    require(depth[w] >= 0,
            "world '" + m.worlds[w] + "' is unreachable from the root");
  for (int j = 1; j <= m.n && !m.rel.empty(); ++j)
    for (size_t u = 0; u < m.worlds.size(); ++u) {
      const WorldSet& row = m.rel[j - 1][u];
      for (size_t v = row.find_first(); v != WorldSet::npos;
           v = row.find_next(v))
        require(depth[v] == depth[u] + 1,
                "edge " + m.worlds[u] + " -> " + m.worlds[v] +
                    " breaks the layering");
    }
  return depth;
}

// ── alternation family ────────────────────────────────────────────────────

// Chain w_0..w_i whose super-edges are realized by intermediate paths
// spelling alternating blocks of length ell. The A side realizes both blocks
// per super-edge and holds p at w_i; the B side realizes one block per
// super-edge, picked by the word s, and holds p nowhere.
inline KripkeModel build_alternation_base(Side side, int ell, int i,
                                          const std::string& s = "") {
  require(ell >= 1 && i >= 1, "alternation parameters must be positive");
  if (side == Side::B) {
    require(int(s.size()) == i, "B-side base needs a block word of length i");
    for (char c : s)
      require(c == '1' || c == '2', "block word symbols must be 1 or 2");
  } else {
    require(s.empty(), "A-side base takes no block word");
  }

  KripkeModel m;
  m.id = side == Side::A
             ? "A_l" + std::to_string(ell) + "_i" + std::to_string(i)
             : "B_l" + std::to_string(ell) + "_s" + s;
  m.n = 2;
  std::vector<int> chain;
  for (int k = 0; k <= i; ++k)
    chain.push_back(m.add_world("w" + std::to_string(k)));

  auto add_path = [&](int from, int to, const std::string& word,
                      const std::string& tag) {
    int cur = from;
    for (size_t k = 0; k + 1 < word.size(); ++k) {
      int mid = m.add_world(tag + std::to_string(k + 1));
      m.add_edge(word[k] - '0', cur, mid);
      cur = mid;
    }
    m.add_edge(word.back() - '0', cur, to);
  };

  for (int e = 0; e < i; ++e) {
    std::string tag = "x" + std::to_string(e) + "_";
    if (side == Side::A) {
      add_path(chain[e], chain[e + 1], alternating_block('1', ell), tag + "1_");
      add_path(chain[e], chain[e + 1], alternating_block('2', ell), tag + "2_");
    } else {
      add_path(chain[e], chain[e + 1], alternating_block(s[e], ell), tag);
    }
  }
  if (side == Side::A) m.set_true("p", chain[i]);
  return m;
}

// Completion: one reflexive trap world, plus a j-edge into it from every
// world lacking a j-successor. The result is complete (both successors
// everywhere). The trap falsifies p on the A side and satisfies it on B.
inline KripkeModel build_alternation_star(const KripkeModel& base, Side side) {
  KripkeModel m = base;
  m.id = base.id + "_star";
  int trap = m.add_world("trap");
  m.ensure_relations();
  for (int j = 1; j <= m.n; ++j) m.add_edge(j, trap, trap);
  for (size_t w = 0; w + 1 < m.worlds.size(); ++w)
    for (int j = 1; j <= m.n; ++j)
      if (m.rel[j - 1][w].none()) m.add_edge(j, int(w), trap);
  if (side == Side::B) m.set_true("p", trap);
  for (size_t w = 0; w < m.worlds.size(); ++w)
    for (int j = 1; j <= m.n; ++j)
      require(m.rel[j - 1][w].any(), "completion left a missing successor");
  return m;
}

struct AlternationFamily {
  int ell = 1;
  int i = 1;
  PointedModel star_a;
  std::vector<std::pair<std::string, PointedModel>> star_b;  // word -> model
  ModelClass class_a;
  ModelClass class_b;
};

inline AlternationFamily build_alternation_family(int ell, int i,
                                                  const Limits& limits = {}) {
  require(ell >= 1 && i >= 1, "alternation parameters must be positive");
  require(i < 30 && (1 << i) <= limits.max_pow,
          "2^i exceeds the family size guard");

  AlternationFamily fam;
  fam.ell = ell;
  fam.i = i;

  KripkeModel abase = build_alternation_base(Side::A, ell, i);
  layered_depths(abase, 0);
  auto astar =
      std::make_shared<KripkeModel>(build_alternation_star(abase, Side::A));
  astar->points = {0};
  fam.star_a = PointedModel{astar, 0};
  fam.class_a = make_class({fam.star_a});

  ModelClass bs;
  for (int bits = 0; bits < (1 << i); ++bits) {
    std::string s;
    for (int k = i - 1; k >= 0; --k) s += (bits >> k) & 1 ? '2' : '1';
    KripkeModel bbase = build_alternation_base(Side::B, ell, i, s);
    layered_depths(bbase, 0);
    auto bstar =
        std::make_shared<KripkeModel>(build_alternation_star(bbase, Side::B));
    bstar->points = {0};
    fam.star_b.push_back({s, PointedModel{bstar, 0}});
    bs.push_back(PointedModel{bstar, 0});
  }
  fam.class_b = make_class(std::move(bs));
  require(fam.class_b.size() == size_t(1) << i,
          "B class lost members during dedup");

  OperatorRegistry reg(2);
  std::string op = "A" + std::to_string(ell);
  reg.add(OperatorSpec::make_alt(op, ell));
  Formula phi = box_power(op, i, Formula::var("p"));
  require(class_satisfies(fam.class_a, phi, reg),
          "alternation family audit: the A side must satisfy the box power");
  require(class_falsifies(fam.class_b, phi, reg),
          "alternation family audit: every B member must falsify it");
  return fam;
}

// ── single-step family ────────────────────────────────────────────────────

// Split a family against a target: the functions pointwise below g versus
// the rest. Both halves come back name-sorted.
inline std::pair<std::vector<std::string>, std::vector<std::string>>
f1_f2_split(const TruthTable& g, const OperatorRegistry& fs) {
  std::vector<std::string> f1 = maximal_below(g, fs);
  std::vector<std::string> f2;
  for (const auto& name : fs.names())
    if (std::find(f1.begin(), f1.end(), name) == f1.end())
      f2.push_back(name);
  return {f1, f2};
}

// Smallest set of edge types on which g is uniformly true while no family
// member is; lexicographically least among the smallest, scanning types in
// ascending order. Exists exactly when g coincides with no single member.
inline std::vector<EdgeType> minimal_beta_set(
    const TruthTable& g, const std::vector<TruthTable>& f1) {
  TruthTable join = TruthTable::constant(g.n, false);
  for (const TruthTable& f : f1) {
    require(f.n == g.n, "arity mismatch in the beta search");
    require(leq(f, g), "beta search expects only functions below the target");
    join = or_tables(join, f);
  }
  require(join == g, "the target must be the disjunction of the family");

  std::vector<EdgeType> cand;
  for (EdgeType t = 0; t < (1u << g.n); ++t)
    if (g.eval(t)) cand.push_back(t);

  for (size_t size = 1; size <= cand.size(); ++size) {
    std::vector<size_t> pick(size);
    for (size_t k = 0; k < size; ++k) pick[k] = k;
    while (true) {
      bool admissible = true;
      for (const TruthTable& f : f1) {
        bool all = true;
        for (size_t k : pick)
          if (!f.eval(cand[k])) {
            all = false;
            break;
          }
        if (all) {
          admissible = false;
          break;
        }
      }
      if (admissible) {
        std::vector<EdgeType> beta;
        for (size_t k : pick) beta.push_back(cand[k]);
        return beta;
      }
      // next combination
      size_t k = size;
      while (k > 0 && pick[k - 1] == cand.size() - size + k - 1) --k;
      if (k == 0) break;
      ++pick[k - 1];
      for (size_t j = k; j < size; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  fail("no admissible vector set: the target coincides with a family member");
}

// Least edge type per listed function where it is true but the target is
// false. Callers pass the names of the functions not below the target.
inline std::map<std::string, EdgeType> alpha_assignments(
    const TruthTable& g, const OperatorRegistry& fs,
    const std::vector<std::string>& f2) {
  std::map<std::string, EdgeType> alpha;
  for (const auto& name : f2) {
    const TruthTable& f = fs.at(name).table;
    require(f.n == g.n, "arity mismatch in the alpha search");
    bool found = false;
    for (EdgeType t = 0; t < (1u << g.n) && !found; ++t)
      if (f.eval(t) && !g.eval(t)) {
        alpha[name] = t;
        found = true;
      }
    require(found, "function '" + name + "' lies below the target");
  }
  return alpha;
}

struct SingleStepFamily {
  int t = 0;
  int i = 0;
  int n = 0;
  std::vector<EdgeType> beta;
  std::map<std::string, EdgeType> alpha;
  std::shared_ptr<const KripkeModel> universe;
  ModelClass class_a;
  ModelClass class_b;
  std::vector<std::string> labels_a;  // branch words, aligned with class_a
};

// One combined universe holding a tree copy per branch word plus one
// all-false copy, with witness-typed cross edges between copies at
// consecutive depths. The registry must contain the target operator by
// name; the family is every other operator in it.
inline SingleStepFamily build_singlestep_family(const OperatorRegistry& ops,
                                                const std::string& g_name,
                                                int i,
                                                const Limits& limits = {}) {
  require(i >= 1, "tree depth must be positive");
  const OperatorSpec& gop = ops.at(g_name);
  require(gop.kind == OpKind::Bool, "the target operator must be boolean");
  const TruthTable& g = gop.table;
  int n = ops.arity();

  OperatorRegistry fs(n);
  for (const OperatorSpec& op : ops.ops()) {
    if (op.name == g_name) continue;
    require(op.kind == OpKind::Bool,
            "single-step families need boolean operators");
    require(!(op.table == g),
            "the target operator must not belong to the family itself");
    fs.add(op);
  }

  auto [f1, f2] = f1_f2_split(g, fs);
  std::vector<TruthTable> f1_tables;
  for (const auto& name : f1) f1_tables.push_back(fs.at(name).table);

  SingleStepFamily fam;
  fam.i = i;
  fam.n = n;
  fam.beta = minimal_beta_set(g, f1_tables);
  fam.t = int(fam.beta.size());
  require(fam.t <= 9, "branch factor too large for path naming");
  fam.alpha = alpha_assignments(g, fs, f2);

  std::uint64_t branches = 1;
  for (int k = 0; k < i; ++k) {
    branches *= std::uint64_t(fam.t);
    require(branches <= std::uint64_t(limits.max_pow),
            "t^i exceeds the family size guard");
  }

  // tree copies: one per branch word, then the all-false copy
  std::vector<std::string> words;
  {
    std::vector<int> odo(i, 1);
    while (true) {
      std::string w;
      for (int d : odo) w += char('0' + d);
      words.push_back(w);
      int k = i - 1;
      while (k >= 0 && odo[k] == fam.t) odo[k--] = 1;
      if (k < 0) break;
      ++odo[k];
    }
  }

  std::uint64_t tree_size = 0, layer = 1;
  for (int d = 0; d <= i; ++d) {
    tree_size += layer;
    layer *= std::uint64_t(fam.t);
  }
  require((branches + 1) * tree_size <=
              std::uint64_t(limits.max_universe_worlds),
          "combined universe exceeds the world guard");

  auto uni = std::make_shared<KripkeModel>();
  uni->id = "singlestep_" + g_name + "_i" + std::to_string(i);
  uni->n = n;

  // by_depth[d] per copy group: indices of depth-d worlds
  std::vector<std::vector<int>> a_depth(i + 1), b_depth(i + 1);
  std::vector<int> a_roots;
  int b_root = -1;

  auto build_copy = [&](const std::string& prefix, bool is_b,
                        const std::string& p_path) {
    // nodes keyed by path over {1..t}, breadth-first by depth
    std::vector<std::vector<std::pair<std::string, int>>> level(i + 1);
    int root = uni->add_world(prefix + ":");
    level[0].push_back({"", root});
    (is_b ? b_depth : a_depth)[0].push_back(root);
    for (int d = 0; d < i; ++d)
      for (const auto& [path, u] : level[d])
        for (int j = 1; j <= fam.t; ++j) {
          std::string child_path = path + char('0' + j);
          int v = uni->add_world(prefix + ":" + child_path);
          for (int b = 1; b <= n; ++b)
            if (type_bit(fam.beta[j - 1], b, n)) uni->add_edge(b, u, v);
          level[d + 1].push_back({child_path, v});
          (is_b ? b_depth : a_depth)[d + 1].push_back(v);
        }
    if (!is_b) uni->set_true("p", uni->world(prefix + ":" + p_path));
    return root;
  };

  for (const auto& w : words) a_roots.push_back(build_copy("a" + w, false, w));
  b_root = build_copy("b", true, "");

  // cross edges carry the union of the alpha witnesses; audit that the
  // union still behaves like each witness individually
  if (!f2.empty()) {
    EdgeType cross = 0;
    for (const auto& [name, a] : fam.alpha) cross |= a;
    for (const auto& name : f2)
      require(fs.at(name).table.eval(cross),
              "cross-edge witness types conflict on '" + name + "'");
    require(!g.eval(cross), "cross-edge type is visible to the target");
    for (int d = 0; d < i; ++d) {
      for (int u : a_depth[d])
        for (int v : b_depth[d + 1])
          for (int b = 1; b <= n; ++b)
            if (type_bit(cross, b, n)) uni->add_edge(b, u, v);
      for (int u : b_depth[d])
        for (int v : a_depth[d + 1])
          for (int b = 1; b <= n; ++b)
            if (type_bit(cross, b, n)) uni->add_edge(b, u, v);
    }
  }

  uni->points = a_roots;
  uni->points.push_back(b_root);
  fam.universe = uni;
  fam.labels_a = words;
  ModelClass as;
  for (int r : a_roots) as.push_back(PointedModel{uni, r});
  fam.class_a = make_class(std::move(as));
  require(fam.class_a.size() == words.size(), "A class lost members");
  fam.class_b = make_class({PointedModel{uni, b_root}});

  // build-time audits
  Formula reach_p = Formula::negation(
      box_power(g_name, i, Formula::negation(Formula::var("p"))));
  require(class_satisfies(fam.class_a, reach_p, ops),
          "single-step audit: every branch root must reach its p-leaf");
  require(class_falsifies(fam.class_b, reach_p, ops),
          "single-step audit: the all-false root must not reach any p-world");

  // cross edges must not open a target-successor path from a branch root
  // into another copy's p-world
  {
    Evaluator ev(*uni, ops);
    const auto& succ = ev.successor_table(g_name);
    const WorldSet& pset = uni->valuation.at("p");
    for (size_t a = 0; a < fam.class_a.size(); ++a) {
      WorldSet cur = uni->empty_set();
      cur.set(fam.class_a[a].world);
      for (int step = 0; step < i; ++step) {
        WorldSet next = uni->empty_set();
        for (size_t w = cur.find_first(); w != WorldSet::npos;
             w = cur.find_next(w))
          next |= succ[w];
        cur = next;
      }
      WorldSet hits = cur & pset;
      require(hits.count() == 1,
              "single-step audit: branch root reaches a foreign p-world");
    }
  }
  return fam;
}

// ── counterexample pair for a non-decomposable operator ───────────────────

struct CounterexamplePair {
  PointedModel m1;
  PointedModel m2;
  WorldRelation z;
};

// Two models separated only by the target box: the roots are bisimilar for
// the family, yet the target reaches a p-world in one and a non-p-world in
// the other. The registry must contain the target by name; the family is
// every other operator.
inline CounterexamplePair counterexample_models(const OperatorRegistry& ops,
                                                const std::string& g_name) {
  const OperatorSpec& gop = ops.at(g_name);
  require(gop.kind == OpKind::Bool, "the target operator must be boolean");
  const TruthTable& g = gop.table;
  int n = ops.arity();

  OperatorRegistry fs(n);
  for (const OperatorSpec& op : ops.ops()) {
    if (op.name == g_name) continue;
    require(op.kind == OpKind::Bool,
            "counterexample models need boolean operators");
    fs.add(op);
  }
  require(!is_disjunction_of(g, fs).has_value(),
          "the target decomposes over the family; no counterexample exists");
  DecompositionWitnesses wit = decomposition_witnesses(g, fs);

  auto build = [&](const std::string& id, const std::string& root_id,
                   bool p_at_named) {
    auto m = std::make_shared<KripkeModel>();
    m->id = id;
    m->n = n;
    int root = m->add_world(root_id);
    for (const auto& [name, type] : wit.refuting) {
      int up = m->add_world("u_" + name + "_p");
      int un = m->add_world("u_" + name + "_n");
      for (int b = 1; b <= n; ++b)
        if (type_bit(type, b, n)) {
          m->add_edge(b, root, up);
          m->add_edge(b, root, un);
        }
      m->set_true("p", up);
    }
    int wg = m->add_world("wg");
    for (int b = 1; b <= n; ++b)
      if (type_bit(wit.gap, b, n)) m->add_edge(b, root, wg);
    if (p_at_named) m->set_true("p", wg);
    m->ensure_relations();
    m->points = {root};
    return m;
  };

  CounterexamplePair pair;
  auto m1 = build("M1", "w1", true);
  auto m2 = build("M2", "w2", false);
  pair.m1 = PointedModel{m1, 0};
  pair.m2 = PointedModel{m2, 0};

  pair.z.insert({0, 0});
  for (size_t u = 1; u < m1->worlds.size(); ++u)
    for (size_t v = 1; v < m2->worlds.size(); ++v)
      if (m1->var_true("p", int(u)) == m2->var_true("p", int(v)))
        pair.z.insert({int(u), int(v)});

  auto violation = check_bisimulation(*m1, *m2, pair.z, fs);
  require(!violation.has_value(),
          "counterexample audit: the relation is not a family bisimulation");
  Formula probe = Formula::box(g_name, Formula::var("p"));
  require(satisfies(*m1, 0, probe, ops),
          "counterexample audit: the first root must satisfy the target box");
  require(!satisfies(*m2, 0, probe, ops),
          "counterexample audit: the second root must falsify it");
  return pair;
}

}  // namespace msl

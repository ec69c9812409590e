#pragma once

// Partial orders and their embeddings into operator and language families.
// An embedding assigns each element a family so that order containment and
// family containment coincide; builders audit that biconditional over every
// element pair before returning.
//
// Family membership is compared by operator name, not by truth table: codes
// with a single bit make some f_s coincide extensionally with a projection,
// so extensional comparison would blur deliberately distinct families.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "msl/core.hpp"
#include "msl/operators.hpp"
#include "msl/translate.hpp"
#include "msl/truth_table.hpp"

namespace msl {

struct Poset {
  std::vector<std::string> elements;
  std::set<std::pair<std::string, std::string>> leq;
};

inline bool poset_leq(const Poset& p, const std::string& a,
                      const std::string& b) {
  return p.leq.count({a, b}) > 0;
}

// Builds a validated poset from elements and order pairs. The reflexive
// closure is added automatically; antisymmetry and transitivity are
// validated, not repaired.
inline Poset make_poset(std::vector<std::string> elements,
                        std::set<std::pair<std::string, std::string>> pairs) {
  Poset p;
  p.elements = std::move(elements);
  require(!p.elements.empty(), "a poset needs at least one element");
  std::set<std::string> seen;
  for (const auto& e : p.elements) {
    require(!e.empty(), "empty poset element name");
    require(seen.insert(e).second, "duplicate poset element '" + e + "'");
  }
  for (const auto& [a, b] : pairs) {
    require(seen.count(a) && seen.count(b),
            "order pair (" + a + "," + b + ") uses unknown elements");
  }
  p.leq = std::move(pairs);
  for (const auto& e : p.elements) p.leq.insert({e, e});
  for (const auto& [a, b] : p.leq)
    require(a == b || !p.leq.count({b, a}),
            "order is not antisymmetric at (" + a + "," + b + ")");
  for (const auto& [a, b] : p.leq)
    for (const auto& e : p.elements)
      if (p.leq.count({b, e}))
        require(p.leq.count({a, e}),
                "order is not transitive: (" + a + "," + b + "," + e + ")");
  return p;
}

// Topological order, smallest original index first among the available
// elements, so embeddings are byte-reproducible.
inline std::vector<std::string> topological_order(const Poset& p) {
  std::vector<std::string> order;
  std::set<std::string> placed;
  while (order.size() < p.elements.size()) {
    bool progressed = false;
    for (const auto& e : p.elements) {
      if (placed.count(e)) continue;
      bool ready = true;
      for (const auto& d : p.elements)
        if (d != e && poset_leq(p, d, e) && !placed.count(d)) {
          ready = false;
          break;
        }
      if (ready) {
        order.push_back(e);
        placed.insert(e);
        progressed = true;
        break;
      }
    }
    require(progressed, "order contains a cycle");
  }
  return order;
}

// ── single-step embedding ─────────────────────────────────────────────────

struct SinglestepEmbedding {
  Poset poset;
  int k = 1;  // arity of the generated operators
  std::vector<std::string> topo;
  std::map<std::string, int> code;           // element -> 1-based code
  OperatorRegistry ops{1};                   // projections plus all f_s, g_s
  std::map<std::string, std::string> f_name; // element -> its f operator
  std::map<std::string, std::string> g_name;
  std::map<std::string, std::set<std::string>> f_family;
  std::map<std::string, std::set<std::string>> g_family;
};

// Assigns each element the nonempty register subset spelled by its position
// in the topological order, read in binary. f_s is the disjunction of the
// subset, g_s the exclusive or; the family of s collects the operators of
// all elements below it (plus every projection on the f side).
inline SinglestepEmbedding embed_poset_singlestep(const Poset& p,
                                                  const Limits& limits = {}) {
  int count = int(p.elements.size());
  require(count <= limits.max_poset_elements,
          "poset exceeds the element guard");

  SinglestepEmbedding em;
  em.poset = p;
  em.topo = topological_order(p);
  em.k = 1;
  while ((1 << em.k) < count + 1) ++em.k;

  em.ops = OperatorRegistry(em.k);
  for (int j = 1; j <= em.k; ++j)
    em.ops.add(OperatorSpec::make_bool("r" + std::to_string(j),
                                       TruthTable::projection(em.k, j)));

  for (int pos = 1; pos <= count; ++pos) {
    const std::string& s = em.topo[pos - 1];
    em.code[s] = pos;
    std::vector<int> regs;
    for (int b = 1; b <= em.k; ++b)
      if ((pos >> (b - 1)) & 1) regs.push_back(b);
    std::string fn = "f" + std::to_string(pos);
    std::string gn = "g" + std::to_string(pos);
    em.ops.add(OperatorSpec::make_bool(fn, TruthTable::or_of(em.k, regs)));
    em.ops.add(OperatorSpec::make_bool(gn, TruthTable::xor_of(em.k, regs)));
    em.f_name[s] = fn;
    em.g_name[s] = gn;
  }

  for (const auto& s : p.elements) {
    std::set<std::string>& ff = em.f_family[s];
    std::set<std::string>& gf = em.g_family[s];
    for (int j = 1; j <= em.k; ++j) ff.insert("r" + std::to_string(j));
    for (const auto& t : p.elements)
      if (poset_leq(p, t, s)) {
        ff.insert(em.f_name[t]);
        gf.insert(em.g_name[t]);
      }
  }

  // containment must mirror the order, in both directions
  for (const auto& s : p.elements)
    for (const auto& t : p.elements) {
      bool below = poset_leq(p, s, t);
      bool f_sub = std::includes(em.f_family[t].begin(), em.f_family[t].end(),
                                 em.f_family[s].begin(), em.f_family[s].end());
      bool g_sub = std::includes(em.g_family[t].begin(), em.g_family[t].end(),
                                 em.g_family[s].begin(), em.g_family[s].end());
      require(below == f_sub && below == g_sub,
              "embedding audit failed at (" + s + "," + t + ")");
    }
  return em;
}

// ── language embedding ────────────────────────────────────────────────────

struct LanguageEmbedding {
  Poset poset;
  std::vector<std::string> topo;
  std::map<std::string, int> index;           // element -> alternation length
  std::map<std::string, std::set<int>> index_sets;  // lengths of all below
};

// Each element gets the alternation length equal to its topological
// position; its index set collects the lengths of everything below it.
inline LanguageEmbedding embed_poset_languages(const Poset& p,
                                               const Limits& limits = {}) {
  require(int(p.elements.size()) <= limits.max_poset_elements,
          "poset exceeds the element guard");
  LanguageEmbedding em;
  em.poset = p;
  em.topo = topological_order(p);
  for (size_t pos = 0; pos < em.topo.size(); ++pos)
    em.index[em.topo[pos]] = int(pos) + 1;

  for (const auto& s : p.elements) {
    std::set<int>& is = em.index_sets[s];
    for (const auto& t : p.elements)
      if (poset_leq(p, t, s)) is.insert(em.index[t]);
  }

  for (const auto& s : p.elements)
    for (const auto& t : p.elements) {
      bool below = poset_leq(p, s, t);
      bool sub = std::includes(em.index_sets[t].begin(),
                               em.index_sets[t].end(),
                               em.index_sets[s].begin(),
                               em.index_sets[s].end());
      require(below == sub,
              "language embedding audit failed at (" + s + "," + t + ")");
    }
  return em;
}

// The two operator registries of an embedded element: alternation operators
// for its index set, with and without the singleton step languages.
inline AlternationRegistries element_registries(const LanguageEmbedding& em,
                                                const std::string& s) {
  auto it = em.index_sets.find(s);
  require(it != em.index_sets.end(), "unknown poset element '" + s + "'");
  std::vector<int> lengths(it->second.begin(), it->second.end());
  return build_alternation_registries(lengths);
}

}  // namespace msl

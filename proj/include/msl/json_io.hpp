#pragma once

// JSON readers and writers for the on-disk formats: operator registries,
// Kripke models, posets, bisimulation relations, and game trees. Writers
// emit ordered objects with sorted collections so repeated runs produce
// byte-identical files; readers validate the shape and name the offending
// field when they fail.

#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "msl/bisim.hpp"
#include "msl/core.hpp"
#include "msl/game.hpp"
#include "msl/kripke.hpp"
#include "msl/operators.hpp"
#include "msl/poset.hpp"

namespace msl {

using ordered_json = nlohmann::ordered_json;

// ── files ─────────────────────────────────────────────────────────────────

inline ordered_json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open '" + path + "'");
  try {
    return ordered_json::parse(in);
  } catch (const std::exception& e) {
    fail("invalid JSON in '" + path + "': " + e.what());
  }
}

inline void save_json(const std::string& path, const ordered_json& j) {
  std::ofstream out(path);
  if (!out) fail("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

// ── field access with named errors ────────────────────────────────────────

namespace detail {

inline const ordered_json& need(const ordered_json& j, const char* key,
                                const std::string& what) {
  require(j.is_object(), what + " must be a JSON object");
  auto it = j.find(key);
  if (it == j.end()) fail(what + " is missing field '" + key + "'");
  return *it;
}

inline std::string need_string(const ordered_json& j, const char* key,
                               const std::string& what) {
  const ordered_json& v = need(j, key, what);
  require(v.is_string(), what + " field '" + std::string(key) +
                             "' must be a string");
  return v.get<std::string>();
}

inline int need_int(const ordered_json& j, const char* key,
                    const std::string& what) {
  const ordered_json& v = need(j, key, what);
  require(v.is_number_integer(), what + " field '" + std::string(key) +
                                     "' must be an integer");
  return v.get<int>();
}

inline std::vector<std::string> string_list(const ordered_json& v,
                                            const std::string& what) {
  require(v.is_array(), what + " must be an array");
  std::vector<std::string> out;
  for (const auto& e : v) {
    require(e.is_string(), what + " entries must be strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

inline std::pair<std::string, std::string> string_pair(
    const ordered_json& v, const std::string& what) {
  require(v.is_array() && v.size() == 2 && v[0].is_string() &&
              v[1].is_string(),
          what + " must be a [string, string] pair");
  return {v[0].get<std::string>(), v[1].get<std::string>()};
}

}  // namespace detail

// ── operators ─────────────────────────────────────────────────────────────

inline ordered_json operator_to_json(const OperatorSpec& op) {
  ordered_json j;
  switch (op.kind) {
    case OpKind::Bool:
      j["kind"] = "bool";
      j["n"] = op.table.n;
      j["bits"] = op.table.bit_string();
      break;
    case OpKind::Lang:
      j["kind"] = "lang";
      j["n"] = op.lang.n;
      j["words"] = op.lang.words;
      break;
    case OpKind::Alt:
      j["kind"] = "alt";
      j["ell"] = op.ell;
      break;
  }
  return j;
}

inline OperatorSpec operator_from_json(const std::string& name,
                                       const ordered_json& j) {
  std::string what = "operator '" + name + "'";
  std::string kind = detail::need_string(j, "kind", what);
  if (kind == "bool") {
    int n = detail::need_int(j, "n", what);
    std::string bits = detail::need_string(j, "bits", what);
    return OperatorSpec::make_bool(name, TruthTable::from_bits(n, bits));
  }
  if (kind == "lang") {
    FiniteLanguage l;
    l.n = detail::need_int(j, "n", what);
    l.words = detail::string_list(detail::need(j, "words", what),
                                  what + " words");
    return OperatorSpec::make_lang(name, std::move(l));
  }
  if (kind == "alt")
    return OperatorSpec::make_alt(name, detail::need_int(j, "ell", what));
  fail(what + " has unknown kind '" + kind + "'");
}

inline ordered_json registry_to_json(const OperatorRegistry& reg) {
  ordered_json j = ordered_json::object();
  for (const OperatorSpec& op : reg.ops()) j[op.name] = operator_to_json(op);
  return j;
}

inline OperatorRegistry registry_from_json(const ordered_json& j) {
  require(j.is_object(), "a registry file must be a JSON object");
  require(!j.empty(), "a registry file must name at least one operator");
  std::vector<OperatorSpec> ops;
  for (const auto& [name, spec] : j.items())
    ops.push_back(operator_from_json(name, spec));
  OperatorRegistry reg(ops.front().arity());
  for (OperatorSpec& op : ops) reg.add(std::move(op));
  return reg;
}

// ── models ────────────────────────────────────────────────────────────────

inline ordered_json model_to_json(const KripkeModel& m) {
  ordered_json j;
  j["id"] = m.id;
  j["n"] = m.n;
  j["worlds"] = m.worlds;
  ordered_json rels = ordered_json::array();
  for (int r = 1; r <= m.n; ++r) {
    ordered_json edges = ordered_json::array();
    for (size_t u = 0; u < m.worlds.size(); ++u)
      for (size_t v = 0; v < m.worlds.size(); ++v)
        if (m.has_edge(r, int(u), int(v)))
          edges.push_back({m.worlds[u], m.worlds[v]});
    rels.push_back(std::move(edges));
  }
  j["relations"] = std::move(rels);
  ordered_json val = ordered_json::object();
  for (const auto& [var, set] : m.valuation) {
    ordered_json ids = ordered_json::array();
    for (size_t w = set.find_first(); w != WorldSet::npos;
         w = set.find_next(w))
      ids.push_back(m.worlds[w]);
    val[var] = std::move(ids);
  }
  j["valuation"] = std::move(val);
  ordered_json pts = ordered_json::array();
  for (int w : m.points) pts.push_back(m.worlds[w]);
  j["points"] = std::move(pts);
  return j;
}

inline std::shared_ptr<KripkeModel> model_from_json(
    const ordered_json& j, const std::string& fallback_id = "m") {
  auto m = std::make_shared<KripkeModel>();
  m->id = j.is_object() && j.contains("id")
              ? detail::need_string(j, "id", "model")
              : fallback_id;
  std::string what = "model '" + m->id + "'";
  m->n = detail::need_int(j, "n", what);
  require(m->n >= 1 && m->n <= Limits{}.max_arity,
          what + " relation count out of range");
  for (const std::string& wid :
       detail::string_list(detail::need(j, "worlds", what), what + " worlds"))
    m->add_world(wid);
  m->ensure_relations();

  const ordered_json& rels = detail::need(j, "relations", what);
  require(rels.is_array() && int(rels.size()) == m->n,
          what + " needs exactly " + std::to_string(m->n) +
              " relation lists");
  for (int r = 0; r < m->n; ++r) {
    require(rels[r].is_array(), what + " relation lists must be arrays");
    for (const auto& e : rels[r]) {
      auto [from, to] = detail::string_pair(e, what + " edge");
      m->add_edge(r + 1, m->world(from), m->world(to));
    }
  }

  if (j.contains("valuation")) {
    const ordered_json& val = j["valuation"];
    require(val.is_object(), what + " valuation must be an object");
    for (const auto& [var, ids] : val.items())
      for (const std::string& wid :
           detail::string_list(ids, what + " valuation of '" + var + "'"))
        m->set_true(var, m->world(wid));
  }

  if (j.contains("points")) {
    for (const std::string& wid : detail::string_list(
             j["points"], what + " points"))
      m->points.push_back(m->world(wid));
  } else if (!m->worlds.empty()) {
    m->points = {0};
  }
  return m;
}

// The pointed models a model file denotes: one per listed point.
inline ModelClass points_of(std::shared_ptr<const KripkeModel> m) {
  require(!m->points.empty(), "model '" + m->id + "' lists no points");
  ModelClass out;
  for (int w : m->points) out.push_back({m, w});
  return make_class(std::move(out));
}

// ── posets ────────────────────────────────────────────────────────────────

inline ordered_json poset_to_json(const Poset& p) {
  ordered_json j;
  j["elements"] = p.elements;
  ordered_json leq = ordered_json::array();
  for (const auto& [a, b] : p.leq)
    if (a != b) leq.push_back({a, b});  // reflexive pairs are implied
  j["leq"] = std::move(leq);
  return j;
}

inline Poset poset_from_json(const ordered_json& j) {
  std::vector<std::string> elements = detail::string_list(
      detail::need(j, "elements", "poset"), "poset elements");
  std::set<std::pair<std::string, std::string>> leq;
  const ordered_json& pairs = detail::need(j, "leq", "poset");
  require(pairs.is_array(), "poset leq must be an array");
  for (const auto& e : pairs)
    leq.insert(detail::string_pair(e, "poset leq entry"));
  return make_poset(std::move(elements), std::move(leq));
}

// ── bisimulation relations ────────────────────────────────────────────────

inline ordered_json relation_to_json(const WorldRelation& z,
                                     const KripkeModel& m1,
                                     const KripkeModel& m2) {
  ordered_json j = ordered_json::array();
  for (const auto& [w1, w2] : z) j.push_back({m1.worlds[w1], m2.worlds[w2]});
  return j;
}

inline WorldRelation relation_from_json(const ordered_json& j,
                                        const KripkeModel& m1,
                                        const KripkeModel& m2) {
  require(j.is_array(), "a relation file must be an array of pairs");
  WorldRelation z;
  for (const auto& e : j) {
    auto [a, b] = detail::string_pair(e, "relation entry");
    z.insert({m1.world(a), m2.world(b)});
  }
  return z;
}

// ── game trees ────────────────────────────────────────────────────────────

// Models referenced by a serialized tree, keyed by model id.
using ModelStore = std::map<std::string, std::shared_ptr<const KripkeModel>>;

namespace detail {

inline const char* move_name(Move m) {
  switch (m) {
    case Move::Atom: return "atom";
    case Move::Not: return "not";
    case Move::Or: return "or";
    case Move::BoxMove: return "box";
    case Move::Unlabelled: break;
  }
  return "unlabelled";
}

inline Move move_from_name(const std::string& s) {
  if (s == "atom") return Move::Atom;
  if (s == "not") return Move::Not;
  if (s == "or") return Move::Or;
  if (s == "box") return Move::BoxMove;
  if (s == "unlabelled") return Move::Unlabelled;
  fail("unknown move '" + s + "'");
}

}  // namespace detail

inline ordered_json class_to_json(const ModelClass& c) {
  ordered_json j = ordered_json::array();
  for (const PointedModel& pm : c) j.push_back({pm.model->id, pm.world_id()});
  return j;
}

inline ModelClass class_from_json(const ordered_json& j,
                                  const ModelStore& models) {
  require(j.is_array(), "a class snapshot must be an array of pairs");
  ModelClass out;
  for (const auto& e : j) {
    auto [mid, wid] = detail::string_pair(e, "class member");
    auto it = models.find(mid);
    if (it == models.end()) fail("class references unknown model '" + mid +
                                 "'");
    out.push_back({it->second, it->second->world(wid)});
  }
  return make_class(std::move(out));
}

inline ordered_json tree_to_json(const GameNode& n) {
  ordered_json j;
  j["move"] = detail::move_name(n.move);
  if (!n.label.empty()) j["label"] = n.label;
  j["left"] = class_to_json(n.left);
  j["right"] = class_to_json(n.right);
  if (!n.kids.empty()) {
    ordered_json kids = ordered_json::array();
    for (const GameNode& k : n.kids) kids.push_back(tree_to_json(k));
    j["kids"] = std::move(kids);
  }
  return j;
}

inline GameNode tree_from_json(const ordered_json& j,
                               const ModelStore& models) {
  GameNode n;
  n.move = detail::move_from_name(
      detail::need_string(j, "move", "tree node"));
  if (j.contains("label"))
    n.label = detail::need_string(j, "label", "tree node");
  n.left = class_from_json(detail::need(j, "left", "tree node"), models);
  n.right = class_from_json(detail::need(j, "right", "tree node"), models);
  if (j.contains("kids")) {
    const ordered_json& kids = j["kids"];
    require(kids.is_array(), "tree node kids must be an array");
    for (const auto& k : kids) n.kids.push_back(tree_from_json(k, models));
  }
  return n;
}

}  // namespace msl

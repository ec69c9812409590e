#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "msl/families.hpp"
#include "msl/json_io.hpp"
#include "msl/translate.hpp"

using namespace msl;
namespace fs = std::filesystem;

namespace {

OperatorRegistry mixed_registry() {
  OperatorRegistry reg(2);
  reg.add(OperatorSpec::make_bool("or2", TruthTable::or_of(2, {1, 2})));
  reg.add(OperatorSpec::make_bool("r1", TruthTable::projection(2, 1)));
  FiniteLanguage swaps;
  swaps.n = 2;
  swaps.words = {"12", "21"};
  reg.add(OperatorSpec::make_lang("swap", std::move(swaps)));
  reg.add(OperatorSpec::make_alt("A3", 3));
  return reg;
}

std::shared_ptr<KripkeModel> two_world_model() {
  auto m = std::make_shared<KripkeModel>();
  m->id = "pair";
  m->n = 2;
  int w0 = m->add_world("w0");
  int w1 = m->add_world("w1");
  m->ensure_relations();
  m->add_edge(1, w0, w1);
  m->add_edge(2, w1, w1);
  m->set_true("p", w1);
  m->set_true("q", w0);
  m->set_true("q", w1);
  m->points = {w0, w1};
  return m;
}

// A scratch file name under the system temp directory.
fs::path scratch(const std::string& stem) {
  return fs::temp_directory_path() / ("msl_json_test_" + stem + ".json");
}

}  // namespace

TEST_CASE("operator specs roundtrip through JSON") {
  OperatorRegistry reg = mixed_registry();
  for (const OperatorSpec& op : reg.ops()) {
    ordered_json j = operator_to_json(op);
    OperatorSpec back = operator_from_json(op.name, j);
    CHECK(back.name == op.name);
    CHECK(back.kind == op.kind);
    CHECK(back.arity() == op.arity());
    CHECK(operator_to_json(back).dump() == j.dump());
  }

  ordered_json j = operator_to_json(reg.at("or2"));
  CHECK(j.dump() == R"({"kind":"bool","n":2,"bits":"0111"})");
  j = operator_to_json(reg.at("swap"));
  CHECK(j.dump() == R"({"kind":"lang","n":2,"words":["12","21"]})");
  j = operator_to_json(reg.at("A3"));
  CHECK(j.dump() == R"({"kind":"alt","ell":3})");

  // Alt specs carry their language expansion with them.
  OperatorSpec alt = operator_from_json("A3", j);
  CHECK(alt.lang.words == alt_language(3).words);
}

TEST_CASE("registries roundtrip and are validated") {
  OperatorRegistry reg = mixed_registry();
  ordered_json j = registry_to_json(reg);
  OperatorRegistry back = registry_from_json(j);
  CHECK(back.arity() == 2);
  CHECK(back.size() == reg.size());
  CHECK(registry_to_json(back).dump() == j.dump());

  CHECK_THROWS_AS(registry_from_json(ordered_json::object()), Error);
  CHECK_THROWS_AS(registry_from_json(ordered_json::array()), Error);

  ordered_json bad = ordered_json::object();
  bad["g"] = {{"kind", "spooky"}};
  CHECK_THROWS_WITH(registry_from_json(bad),
                    Catch::Matchers::ContainsSubstring("unknown kind"));

  bad = ordered_json::object();
  bad["g"] = {{"kind", "bool"}, {"n", 2}, {"bits", "01"}};
  CHECK_THROWS_AS(registry_from_json(bad), Error);  // wrong bit count

  bad = ordered_json::object();
  bad["g"] = {{"kind", "bool"}, {"n", 1}, {"bits", "01"}};
  bad["h"] = {{"kind", "bool"}, {"n", 2}, {"bits", "0111"}};
  CHECK_THROWS_WITH(registry_from_json(bad),
                    Catch::Matchers::ContainsSubstring("arity"));

  bad = ordered_json::object();
  bad["g"] = {{"kind", "lang"}, {"n", 2}, {"words", ordered_json::array()}};
  CHECK_THROWS_AS(registry_from_json(bad), Error);  // empty language

  bad = ordered_json::object();
  bad["g"] = {{"n", 2}, {"bits", "0111"}};
  CHECK_THROWS_WITH(registry_from_json(bad),
                    Catch::Matchers::ContainsSubstring("missing field 'kind'"));
}

TEST_CASE("models roundtrip with worlds, edges, valuation, and points") {
  auto m = two_world_model();
  ordered_json j = model_to_json(*m);
  auto back = model_from_json(j);
  CHECK(back->id == "pair");
  CHECK(back->n == 2);
  CHECK(back->worlds == m->worlds);
  CHECK(back->points == m->points);
  CHECK(back->has_edge(1, 0, 1));
  CHECK_FALSE(back->has_edge(1, 1, 0));
  CHECK(back->has_edge(2, 1, 1));
  CHECK(back->var_true("p", 1));
  CHECK_FALSE(back->var_true("p", 0));
  CHECK(back->var_true("q", 0));
  CHECK(model_to_json(*back).dump() == j.dump());

  ModelClass pts = points_of(back);
  REQUIRE(pts.size() == 2);
  CHECK(pts[0].world_id() == "w0");
  CHECK(pts[1].world_id() == "w1");
}

TEST_CASE("model files may omit id, valuation, and points") {
  ordered_json j = ordered_json::parse(R"({
    "n": 1,
    "worlds": ["w0", "w1"],
    "relations": [[["w0", "w1"]]]
  })");
  auto m = model_from_json(j, "fresh");
  CHECK(m->id == "fresh");
  CHECK(m->valuation.empty());
  REQUIRE(m->points == std::vector<int>{0});
  CHECK(m->has_edge(1, 0, 1));

  ordered_json named = ordered_json::parse(R"({
    "id": "named",
    "n": 1,
    "worlds": ["a"],
    "relations": [[]],
    "valuation": {"p": ["a"]},
    "points": ["a", "a"]
  })");
  auto n = model_from_json(named);
  CHECK(n->id == "named");
  CHECK(n->var_true("p", 0));
  CHECK(n->points == std::vector<int>{0, 0});
}

TEST_CASE("malformed model files name the offending field") {
  ordered_json j = ordered_json::parse(
      R"({"n": 1, "worlds": ["w0"], "relations": [[["w0", "zz"]]]})");
  CHECK_THROWS_WITH(model_from_json(j),
                    Catch::Matchers::ContainsSubstring("zz"));

  j = ordered_json::parse(R"({"n": 2, "worlds": ["w0"], "relations": [[]]})");
  CHECK_THROWS_WITH(model_from_json(j),
                    Catch::Matchers::ContainsSubstring("relation lists"));

  j = ordered_json::parse(R"({"worlds": ["w0"], "relations": [[]]})");
  CHECK_THROWS_WITH(model_from_json(j),
                    Catch::Matchers::ContainsSubstring("missing field 'n'"));

  j = ordered_json::parse(R"({"n": 0, "worlds": ["w0"], "relations": []})");
  CHECK_THROWS_WITH(model_from_json(j),
                    Catch::Matchers::ContainsSubstring("out of range"));

  auto empty_points = std::make_shared<KripkeModel>();
  empty_points->id = "bare";
  empty_points->n = 1;
  empty_points->add_world("w0");
  empty_points->ensure_relations();
  CHECK_THROWS_WITH(points_of(empty_points),
                    Catch::Matchers::ContainsSubstring("no points"));
}

TEST_CASE("posets roundtrip and imply reflexive pairs") {
  Poset diamond = make_poset({"bot", "l", "r", "top"},
                             {{"bot", "l"},
                              {"bot", "r"},
                              {"l", "top"},
                              {"r", "top"},
                              {"bot", "top"}});
  ordered_json j = poset_to_json(diamond);
  for (const auto& e : j["leq"]) CHECK(e[0] != e[1]);

  Poset back = poset_from_json(j);
  CHECK(back.elements == diamond.elements);
  CHECK(back.leq == diamond.leq);
  CHECK(poset_to_json(back).dump() == j.dump());

  CHECK_THROWS_WITH(poset_from_json(ordered_json::object()),
                    Catch::Matchers::ContainsSubstring("elements"));
  ordered_json bad = ordered_json::parse(
      R"({"elements": ["a"], "leq": [["a", "b"]]})");
  CHECK_THROWS_AS(poset_from_json(bad), Error);
}

TEST_CASE("bisimulation relations roundtrip against their models") {
  auto m1 = two_world_model();
  auto m2 = two_world_model();
  WorldRelation z = {{0, 0}, {1, 1}};
  ordered_json j = relation_to_json(z, *m1, *m2);
  CHECK(j.dump() == R"([["w0","w0"],["w1","w1"]])");
  CHECK(relation_from_json(j, *m1, *m2) == z);

  ordered_json bad = ordered_json::parse(R"([["w0", "nope"]])");
  CHECK_THROWS_AS(relation_from_json(bad, *m1, *m2), Error);
}

TEST_CASE("game trees roundtrip through JSON with a model store") {
  AlternationRegistries regs = build_alternation_registries({2});
  AlternationFamily fam = build_alternation_family(2, 2);
  Formula f = box_power("A2", 2, Formula::var("p"));
  GameTree t = tree_from_formula(f, fam.class_a, fam.class_b, regs.plain);

  ordered_json j = tree_to_json(t.root);
  ModelStore store;
  store[fam.star_a.model->id] = fam.star_a.model;
  for (const auto& [word, pm] : fam.star_b) store[pm.model->id] = pm.model;

  GameTree back{tree_from_json(j, store), regs.plain};
  CHECK_FALSE(verify_closed_tree(back).has_value());
  CHECK(node_count(back.root) == node_count(t.root));
  CHECK(print(formula_from_tree(back)) == print(f));
  CHECK(tree_to_json(back.root).dump() == j.dump());

  ModelStore missing;
  CHECK_THROWS_WITH(tree_from_json(j, missing),
                    Catch::Matchers::ContainsSubstring("unknown model"));

  ordered_json bad = j;
  bad["move"] = "jump";
  CHECK_THROWS_WITH(tree_from_json(bad, store),
                    Catch::Matchers::ContainsSubstring("unknown move"));
}

TEST_CASE("class snapshots preserve membership") {
  auto m = two_world_model();
  ModelClass c = make_class({{m, 1}, {m, 0}});
  ordered_json j = class_to_json(c);
  ModelStore store{{m->id, m}};
  ModelClass back = class_from_json(j, store);
  REQUIRE(back.size() == c.size());
  for (size_t i = 0; i < c.size(); ++i) {
    CHECK(back[i].model->id == c[i].model->id);
    CHECK(back[i].world == c[i].world);
  }
}

TEST_CASE("files save and load byte-stably") {
  OperatorRegistry reg = mixed_registry();
  ordered_json j = registry_to_json(reg);
  fs::path path = scratch("registry");
  save_json(path.string(), j);
  ordered_json loaded = load_json(path.string());
  CHECK(loaded.dump() == j.dump());

  // A second save writes the identical byte sequence.
  std::string once = [&] {
    std::ifstream in(path);
    return std::string(std::istreambuf_iterator<char>(in), {});
  }();
  save_json(path.string(), loaded);
  std::string twice = [&] {
    std::ifstream in(path);
    return std::string(std::istreambuf_iterator<char>(in), {});
  }();
  CHECK(once == twice);
  fs::remove(path);

  CHECK_THROWS_WITH(load_json((fs::temp_directory_path() /
                               "msl_json_test_absent.json")
                                  .string()),
                    Catch::Matchers::ContainsSubstring("cannot open"));

  fs::path junk = scratch("junk");
  {
    std::ofstream out(junk);
    out << "{ not json";
  }
  CHECK_THROWS_WITH(load_json(junk.string()),
                    Catch::Matchers::ContainsSubstring("invalid JSON"));
  fs::remove(junk);
}

TEST_CASE("random models survive a JSON roundtrip") {
  std::mt19937 rng(4242);
  for (int trial = 0; trial < 40; ++trial) {
    auto m = msl::testing::make_random_model(rng, 2, 4, {"p", "q"},
                                             "rnd" + std::to_string(trial));
    ordered_json j = model_to_json(*m);
    auto back = model_from_json(j);
    CHECK(model_to_json(*back).dump() == j.dump());
    REQUIRE(back->world_count() == m->world_count());
    for (int r = 1; r <= m->n; ++r)
      for (int u = 0; u < m->world_count(); ++u)
        for (int v = 0; v < m->world_count(); ++v)
          CHECK(back->has_edge(r, u, v) == m->has_edge(r, u, v));
  }
}

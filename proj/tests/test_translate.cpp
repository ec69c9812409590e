#include <random>

#include "catch2/catch_amalgamated.hpp"
#include "helpers.hpp"
#include "msl/translate.hpp"

using namespace msl;

namespace {

OperatorRegistry projections_r1_r2() {
  OperatorRegistry reg(2);
  reg.add(OperatorSpec::make_bool("r1", TruthTable::projection(2, 1)));
  reg.add(OperatorSpec::make_bool("r2", TruthTable::projection(2, 2)));
  return reg;
}

}  // namespace

TEST_CASE("disjunction decomposition detection") {
  OperatorRegistry reg = projections_r1_r2();

  auto s = is_disjunction_of(TruthTable::or_of(2, {1, 2}), reg);
  REQUIRE(s.has_value());
  REQUIRE(*s == std::vector<std::string>{"r1", "r2"});

  REQUIRE_FALSE(is_disjunction_of(TruthTable::and_of(2, {1, 2}), reg).has_value());
  REQUIRE_FALSE(is_disjunction_of(TruthTable::xor_of(2, {1, 2}), reg).has_value());

  // A projection decomposes over itself.
  auto id = is_disjunction_of(TruthTable::projection(2, 1), reg);
  REQUIRE(id.has_value());
  REQUIRE(*id == std::vector<std::string>{"r1"});

  // Constant false is the empty disjunction.
  auto zero = is_disjunction_of(TruthTable::constant(2, false), reg);
  REQUIRE(zero.has_value());
  REQUIRE(zero->empty());

  // The maximal candidate below or is everything except the strict overshoot.
  OperatorRegistry rich = projections_r1_r2();
  rich.add(OperatorSpec::make_bool("and2", TruthTable::and_of(2, {1, 2})));
  rich.add(OperatorSpec::make_bool("one", TruthTable::constant(2, true)));
  auto over = is_disjunction_of(TruthTable::or_of(2, {1, 2}), rich);
  REQUIRE(over.has_value());
  REQUIRE(*over == std::vector<std::string>{"and2", "r1", "r2"});
}

TEST_CASE("witness assignments for non-decomposable operators") {
  OperatorRegistry reg = projections_r1_r2();

  SECTION("conjunction over the projections") {
    DecompositionWitnesses w =
        decomposition_witnesses(TruthTable::and_of(2, {1, 2}), reg);
    REQUIRE(w.s.empty());
    REQUIRE(w.refuting.size() == 2);
    REQUIRE(w.refuting.at("r1") == 0b10u);  // (1,0)
    REQUIRE(w.refuting.at("r2") == 0b01u);  // (0,1)
    REQUIRE(w.gap == 0b11u);                // (1,1)
    REQUIRE(type_string(w.gap, 2) == "(1,1)");
  }

  SECTION("xor over the first projection alone") {
    OperatorRegistry only_r1(2);
    only_r1.add(OperatorSpec::make_bool("r1", TruthTable::projection(2, 1)));
    DecompositionWitnesses w =
        decomposition_witnesses(TruthTable::xor_of(2, {1, 2}), only_r1);
    REQUIRE(w.s.empty());
    REQUIRE(w.refuting.at("r1") == 0b11u);  // (1,1)
    REQUIRE(w.gap == 0b01u);                // (0,1)
  }

  SECTION("decomposable input is rejected") {
    REQUIRE_THROWS_AS(decomposition_witnesses(TruthTable::or_of(2, {1, 2}), reg),
                      Error);
  }
}

TEST_CASE("boolean box translation") {
  OperatorRegistry target = projections_r1_r2();

  OperatorRegistry from = projections_r1_r2();
  from.add(OperatorSpec::make_bool("or2", TruthTable::or_of(2, {1, 2})));
  from.add(OperatorSpec::make_bool("and2", TruthTable::and_of(2, {1, 2})));
  from.add(OperatorSpec::make_bool("zero", TruthTable::constant(2, false)));

  SECTION("disjunction box becomes a conjunction of boxes") {
    Formula phi = parse("[or2]p", from);
    REQUIRE(print(translate_boolean_box(phi, from, target)) ==
            "~(~[r1]p|~[r2]p)");
  }

  SECTION("projection box is kept") {
    Formula phi = parse("[r1]p", from);
    REQUIRE(print(translate_boolean_box(phi, from, target)) == "[r1]p");
  }

  SECTION("translation recurses through connectives") {
    Formula phi = parse("~([or2](p|q)|[r2]p)", from);
    REQUIRE(print(translate_boolean_box(phi, from, target)) ==
            "~(~(~[r1](p|q)|~[r2](p|q))|[r2]p)");
  }

  SECTION("constantly false operator yields a tautologous box") {
    Formula phi = parse("[zero]p", from);
    REQUIRE(print(translate_boolean_box(phi, from, target)) == "(p|~p)");
  }

  SECTION("non-decomposable operator is an error naming the culprit") {
    Formula phi = parse("[and2]p", from);
    try {
      translate_boolean_box(phi, from, target);
      FAIL("expected an error");
    } catch (const Error& e) {
      REQUIRE(std::string(e.what()).find("and2") != std::string::npos);
    }
  }

  SECTION("language operators are not translatable") {
    OperatorRegistry lang_reg(2);
    lang_reg.add(OperatorSpec::make_alt("A2", 2));
    Formula phi = parse("[A2]p", lang_reg);
    REQUIRE_THROWS_AS(translate_boolean_box(phi, lang_reg, target), Error);
  }
}

TEST_CASE("boolean box translation preserves satisfaction") {
  OperatorRegistry target = projections_r1_r2();
  OperatorRegistry from = projections_r1_r2();
  from.add(OperatorSpec::make_bool("or2", TruthTable::or_of(2, {1, 2})));
  OperatorRegistry merged = projections_r1_r2();
  merged.add(OperatorSpec::make_bool("or2", TruthTable::or_of(2, {1, 2})));

  std::vector<Formula> corpus = {
      parse("[or2]p", from),
      parse("[or2](p|~q)", from),
      parse("~[or2]~p", from),
      parse("[or2][or2]p", from),
      parse("([or2]p|[r1]~p)", from),
      parse("[r2][or2](q|p)", from),
  };
  std::mt19937 rng(20240817);
  for (int round = 0; round < 100; ++round) {
    auto m = testing::make_random_model(rng, 2, 5, {"p", "q"});
    Evaluator ev(*m, merged);
    for (const Formula& phi : corpus) {
      Formula psi = translate_boolean_box(phi, from, target);
      for (size_t w = 0; w < m->worlds.size(); ++w)
        REQUIRE(ev.satisfies(int(w), phi) == ev.satisfies(int(w), psi));
    }
  }
}

TEST_CASE("decomposition describes successor sets") {
  // If g = OR S then the g-successors are the union of the f-successors.
  OperatorRegistry reg = projections_r1_r2();
  reg.add(OperatorSpec::make_bool("or2", TruthTable::or_of(2, {1, 2})));
  auto s = is_disjunction_of(TruthTable::or_of(2, {1, 2}), reg);
  REQUIRE(s.has_value());

  std::mt19937 rng(991);
  for (int round = 0; round < 100; ++round) {
    auto m = testing::make_random_model(rng, 2, 6, {"p"});
    for (size_t w = 0; w < m->worlds.size(); ++w) {
      WorldSet uni = m->empty_set();
      for (const auto& name : *s)
        uni |= successors_of(*m, int(w), reg.at(name));
      REQUIRE(uni == successors_of(*m, int(w), reg.at("or2")));
    }
  }
}

TEST_CASE("language box expansion") {
  OperatorRegistry reg(2);
  FiniteLanguage rev;
  rev.n = 2;
  rev.words = {"12", "21"};
  reg.add(OperatorSpec::make_lang("rev", rev));
  FiniteLanguage one;
  one.n = 2;
  one.words = {"1"};
  reg.add(OperatorSpec::make_lang("b1", one));
  reg.add(OperatorSpec::make_alt("A1", 1));
  reg.add(OperatorSpec::make_bool("keep", TruthTable::or_of(2, {1, 2})));

  OperatorRegistry out = expansion_registry(reg);
  REQUIRE(out.names() == std::vector<std::string>{"keep", "r1", "r2"});

  REQUIRE(print(expand_language_box(parse("[rev]p", reg), reg)) ==
          "~(~[r1][r2]p|~[r2][r1]p)");
  REQUIRE(print(expand_language_box(parse("[b1]p", reg), reg)) == "[r1]p");
  REQUIRE(print(expand_language_box(parse("[A1]p", reg), reg)) ==
          "~(~[r1]p|~[r2]p)");
  REQUIRE(print(expand_language_box(parse("[keep]~[b1]p", reg), reg)) ==
          "[keep]~[r1]p");

  SECTION("expanded formulas parse in the expansion registry") {
    Formula e = expand_language_box(parse("[rev][A1]p", reg), reg);
    REQUIRE(parse(print(e), out) == e);
  }

  SECTION("projection name collisions are rejected") {
    OperatorRegistry clash(2);
    clash.add(OperatorSpec::make_bool("r1", TruthTable::xor_of(2, {1, 2})));
    REQUIRE_THROWS_AS(expansion_registry(clash), Error);

    OperatorRegistry benign(2);
    benign.add(OperatorSpec::make_bool("r1", TruthTable::projection(2, 1)));
    REQUIRE(expansion_registry(benign).names() ==
            std::vector<std::string>{"r1", "r2"});
  }
}

TEST_CASE("language box expansion preserves satisfaction") {
  OperatorRegistry reg(2);
  reg.add(OperatorSpec::make_alt("A2", 2));
  FiniteLanguage mix;
  mix.n = 2;
  mix.words = {"1", "122", "21"};
  reg.add(OperatorSpec::make_lang("mix", mix));
  OperatorRegistry out = expansion_registry(reg);

  std::vector<Formula> corpus = {
      parse("[A2]p", reg),
      parse("[mix](p|q)", reg),
      parse("~[mix]~p", reg),
      parse("[A2][mix]p", reg),
  };
  std::mt19937 rng(77002);
  for (int round = 0; round < 100; ++round) {
    auto m = testing::make_random_model(rng, 2, 8, {"p", "q"});
    Evaluator orig(*m, reg);
    Evaluator expanded(*m, out);
    for (const Formula& phi : corpus) {
      Formula psi = expand_language_box(phi, reg);
      for (size_t w = 0; w < m->worlds.size(); ++w)
        REQUIRE(orig.satisfies(int(w), phi) ==
                expanded.satisfies(int(w), psi));
    }
  }
}

TEST_CASE("alternation registries") {
  SECTION("single index") {
    AlternationRegistries r = build_alternation_registries({2});
    REQUIRE(r.plain.names() == std::vector<std::string>{"A2"});
    REQUIRE(r.plus.names() == std::vector<std::string>{"A2", "b1", "b2"});
    REQUIRE(r.plain.at("A2").lang.words ==
            std::vector<std::string>{"12", "21"});
    REQUIRE(r.plus.at("b1").lang.words == std::vector<std::string>{"1"});
    REQUIRE(r.plus.at("b2").lang.words == std::vector<std::string>{"2"});
  }
  SECTION("empty index set gives the classical bimodal logic") {
    AlternationRegistries r = build_alternation_registries({});
    REQUIRE(r.plain.empty());
    REQUIRE(r.plus.names() == std::vector<std::string>{"b1", "b2"});
  }
  SECTION("duplicates and order are normalized") {
    AlternationRegistries r = build_alternation_registries({3, 1, 3});
    REQUIRE(r.plain.names() == std::vector<std::string>{"A1", "A3"});
  }
  SECTION("bad length") {
    REQUIRE_THROWS_AS(build_alternation_registries({0}), Error);
  }
}

TEST_CASE("alternating word laws") {
  for (int ell = 1; ell <= 12; ++ell) {
    // Block m of the concatenated word starts with the m-th symbol of s.
    for (const std::string& s : {"1", "2", "12", "21", "1122", "2121"}) {
      std::string w = altword(s, ell);
      REQUIRE(w.size() == s.size() * size_t(ell));
      for (size_t j = 1; j <= s.size(); ++j)
        REQUIRE(w[(j - 1) * ell] == s[j - 1]);
    }
    // The last symbol of one block: the start symbol iff the length is odd.
    for (char a : {'1', '2'}) {
      char other = a == '1' ? '2' : '1';
      REQUIRE(alternating_block(a, ell).back() == (ell % 2 == 1 ? a : other));
    }
    // Adjacent symbols inside a block always differ.
    std::string b = alternating_block('1', ell);
    for (size_t k = 0; k + 1 < b.size(); ++k) REQUIRE(b[k] != b[k + 1]);
  }
}

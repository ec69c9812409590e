#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "msl/poset.hpp"

using namespace msl;

namespace {

Poset chain(int n) {
  std::vector<std::string> el;
  std::set<std::pair<std::string, std::string>> pairs;
  for (int i = 0; i < n; ++i) el.push_back("s" + std::to_string(i + 1));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.insert({el[i], el[j]});
  return make_poset(el, pairs);
}

Poset antichain(int n) {
  std::vector<std::string> el;
  for (int i = 0; i < n; ++i) el.push_back("s" + std::to_string(i + 1));
  return make_poset(el, {});
}

Poset diamond() {
  return make_poset({"bot", "left", "right", "top"},
                    {{"bot", "left"},
                     {"bot", "right"},
                     {"bot", "top"},
                     {"left", "top"},
                     {"right", "top"}});
}

// random partial order: strict edges only from smaller to larger index,
// then transitively closed, so the result is always a valid poset
Poset random_poset(std::mt19937& rng, int n) {
  std::vector<std::string> el;
  for (int i = 0; i < n; ++i) el.push_back("e" + std::to_string(i + 1));
  std::vector<std::vector<bool>> lt(n, std::vector<bool>(n, false));
  std::uniform_int_distribution<int> coin(0, 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (coin(rng) == 0) lt[i][j] = true;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (lt[i][k] && lt[k][j]) lt[i][j] = true;
  std::set<std::pair<std::string, std::string>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (lt[i][j]) pairs.insert({el[i], el[j]});
  return make_poset(el, pairs);
}

}  // namespace

TEST_CASE("poset construction validates the order axioms") {
  Poset p = make_poset({"a", "b"}, {{"a", "b"}});
  CHECK(poset_leq(p, "a", "a"));  // reflexive closure added
  CHECK(poset_leq(p, "a", "b"));
  CHECK_FALSE(poset_leq(p, "b", "a"));

  CHECK_THROWS_AS(make_poset({"a", "b"}, {{"a", "b"}, {"b", "a"}}), Error);
  CHECK_THROWS_AS(make_poset({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}}),
                  Error);  // missing (a,c)
  CHECK_THROWS_AS(make_poset({"a", "a"}, {}), Error);
  CHECK_THROWS_AS(make_poset({"a"}, {{"a", "x"}}), Error);
  CHECK_THROWS_AS(make_poset({}, {}), Error);
}

TEST_CASE("topological order is stable for incomparable elements") {
  Poset p = make_poset({"z", "a", "m"}, {});
  CHECK(topological_order(p) == std::vector<std::string>{"z", "a", "m"});

  Poset q = make_poset({"top", "bot"}, {{"bot", "top"}});
  CHECK(topological_order(q) == std::vector<std::string>{"bot", "top"});

  CHECK(topological_order(diamond()) ==
        std::vector<std::string>{"bot", "left", "right", "top"});
}

TEST_CASE("single-step embedding arity grows logarithmically") {
  CHECK(embed_poset_singlestep(antichain(1)).k == 1);
  CHECK(embed_poset_singlestep(antichain(3)).k == 2);
  CHECK(embed_poset_singlestep(antichain(7)).k == 3);
  CHECK(embed_poset_singlestep(antichain(8)).k == 4);
}

TEST_CASE("single-step embedding of a chain nests the families") {
  SinglestepEmbedding em = embed_poset_singlestep(chain(3));
  const auto& f1 = em.f_family.at("s1");
  const auto& f2 = em.f_family.at("s2");
  const auto& f3 = em.f_family.at("s3");
  CHECK(std::includes(f2.begin(), f2.end(), f1.begin(), f1.end()));
  CHECK(std::includes(f3.begin(), f3.end(), f2.begin(), f2.end()));
  CHECK(f1.size() == em.k + 1u);
  CHECK(f3.size() == em.k + 3u);

  const auto& g1 = em.g_family.at("s1");
  CHECK(g1 == std::set<std::string>{"g1"});
  CHECK(em.g_family.at("s3") == std::set<std::string>{"g1", "g2", "g3"});
}

TEST_CASE("incomparable elements get incomparable families") {
  SinglestepEmbedding em = embed_poset_singlestep(antichain(3));
  for (const auto& s : em.poset.elements)
    for (const auto& t : em.poset.elements) {
      if (s == t) continue;
      CHECK(em.f_family.at(t).count(em.f_name.at(s)) == 0);
      CHECK(em.g_family.at(t).count(em.g_name.at(s)) == 0);
    }
}

TEST_CASE("embedding codes spell binary counting along the topo order") {
  SinglestepEmbedding em = embed_poset_singlestep(diamond());
  CHECK(em.code.at("bot") == 1);
  CHECK(em.code.at("left") == 2);
  CHECK(em.code.at("right") == 3);
  CHECK(em.code.at("top") == 4);
  CHECK(em.k == 3);

  // code 3 has registers {1,2}: f = r1 or r2, g = r1 xor r2
  CHECK(em.ops.at("f3").table == TruthTable::or_of(3, {1, 2}));
  CHECK(em.ops.at("g3").table == TruthTable::xor_of(3, {1, 2}));
}

TEST_CASE("single-bit codes collide with projections extensionally") {
  SinglestepEmbedding em = embed_poset_singlestep(antichain(1));
  CHECK(em.ops.at("f1").table == TruthTable::projection(1, 1));
  // the name keeps the family distinct even though the tables agree
  CHECK(em.f_family.at("s1") == std::set<std::string>{"f1", "r1"});
}

TEST_CASE("poset element guard") {
  std::vector<std::string> el;
  for (int i = 0; i < 17; ++i) el.push_back("e" + std::to_string(i));
  Poset big = make_poset(el, {});
  CHECK_THROWS_AS(embed_poset_singlestep(big), Error);
  CHECK_THROWS_AS(embed_poset_languages(big), Error);
}

TEST_CASE("language embedding index sets mirror the order") {
  LanguageEmbedding single = embed_poset_languages(antichain(1));
  CHECK(single.index_sets.at("s1") == std::set<int>{1});

  LanguageEmbedding pair = embed_poset_languages(antichain(2));
  CHECK(pair.index_sets.at("s1") == std::set<int>{1});
  CHECK(pair.index_sets.at("s2") == std::set<int>{2});

  LanguageEmbedding three = embed_poset_languages(chain(3));
  CHECK(three.index_sets.at("s1") == std::set<int>{1});
  CHECK(three.index_sets.at("s2") == std::set<int>{1, 2});
  CHECK(three.index_sets.at("s3") == std::set<int>{1, 2, 3});

  LanguageEmbedding d = embed_poset_languages(diamond());
  CHECK(d.index_sets.at("bot") == std::set<int>{1});
  CHECK(d.index_sets.at("left") == std::set<int>{1, 2});
  CHECK(d.index_sets.at("right") == std::set<int>{1, 3});
  CHECK(d.index_sets.at("top") == std::set<int>{1, 2, 3, 4});
}

TEST_CASE("element registries carry the alternation operators") {
  LanguageEmbedding em = embed_poset_languages(chain(2));
  AlternationRegistries top = element_registries(em, "s2");
  CHECK(top.plain.names() == std::vector<std::string>{"A1", "A2"});
  CHECK(top.plus.names() ==
        std::vector<std::string>{"A1", "A2", "b1", "b2"});
  AlternationRegistries bot = element_registries(em, "s1");
  CHECK(bot.plain.names() == std::vector<std::string>{"A1"});
  CHECK_THROWS_AS(element_registries(em, "nope"), Error);
}

TEST_CASE("random posets embed with both constructions") {
  std::mt19937 rng(42u);
  int comparable_pairs = 0;
  for (int trial = 0; trial < 50; ++trial) {
    Poset p = random_poset(rng, 5);
    SinglestepEmbedding se = embed_poset_singlestep(p);
    LanguageEmbedding le = embed_poset_languages(p);
    for (const auto& s : p.elements)
      for (const auto& t : p.elements) {
        bool below = poset_leq(p, s, t);
        if (below && s != t) ++comparable_pairs;
        bool f_sub = std::includes(
            se.f_family.at(t).begin(), se.f_family.at(t).end(),
            se.f_family.at(s).begin(), se.f_family.at(s).end());
        bool i_sub = std::includes(
            le.index_sets.at(t).begin(), le.index_sets.at(t).end(),
            le.index_sets.at(s).begin(), le.index_sets.at(s).end());
        REQUIRE(below == f_sub);
        REQUIRE(below == i_sub);
      }
  }
  CHECK(comparable_pairs > 100);  // the sweep must see real order structure
}

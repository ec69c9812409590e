#include <set>

#include "catch2/catch_amalgamated.hpp"
#include "helpers.hpp"
#include "msl/enumerate.hpp"

using namespace msl;

namespace {

OperatorRegistry one_box() {
  OperatorRegistry reg(1);
  reg.add(OperatorSpec::make_bool("r1", TruthTable::projection(1, 1)));
  return reg;
}

OperatorRegistry two_boxes() {
  OperatorRegistry reg(2);
  reg.add(OperatorSpec::make_bool("r1", TruthTable::projection(2, 1)));
  reg.add(OperatorSpec::make_bool("r2", TruthTable::projection(2, 2)));
  return reg;
}

std::vector<std::string> level_prints(FormulaEnumerator& en, int size) {
  std::vector<std::string> out;
  for (std::int32_t idx : en.level(size)) out.push_back(en.print_at(idx));
  return out;
}

}  // namespace

TEST_CASE("small levels are exactly the grammar") {
  OperatorRegistry reg = one_box();
  FormulaEnumerator en(reg, {"p"}, {4, 4});

  REQUIRE(level_prints(en, 1) == std::vector<std::string>{"p"});
  REQUIRE(level_prints(en, 2) == std::vector<std::string>{"[r1]p", "~p"});
  REQUIRE(level_prints(en, 3) ==
          std::vector<std::string>{"(p|p)", "[r1][r1]p", "[r1]~p", "~[r1]p",
                                   "~~p"});
  // ((|[|~ ordering also applies inside size 4
  std::vector<std::string> l4 = level_prints(en, 4);
  REQUIRE(l4.size() == 14);  // 5 negations + 5 boxes + 4 disjunctions
  REQUIRE(l4.front() == "([r1]p|p)");
  REQUIRE(l4.back() == "~~~p");
}

TEST_CASE("double negation pruning") {
  OperatorRegistry reg = one_box();
  FormulaEnumerator en(reg, {"p"}, {3, 3}, {true, 1000});
  REQUIRE(level_prints(en, 3) ==
          std::vector<std::string>{"(p|p)", "[r1][r1]p", "[r1]~p", "~[r1]p"});
}

TEST_CASE("counting oracle matches the enumerator") {
  // one unary box, one variable, size 3: five formulas, four without ~~
  REQUIRE(count_formulas(1, 1, {3, 3}, false)[3] == 5);
  REQUIRE(count_formulas(1, 1, {3, 3}, true)[3] == 4);
  REQUIRE(count_formulas(1, 1, {2, 2}, false)[2] == 2);
  REQUIRE(count_formulas(1, 1, {1, 1}, false)[1] == 1);

  for (bool prune : {false, true}) {
    for (int vars : {1, 2}) {
      for (int depth : {1, 2, 8}) {
        SizeBudget budget{7, depth};
        auto counts = count_formulas(vars, 2, budget, prune);
        OperatorRegistry reg = two_boxes();
        std::vector<std::string> names = {"p", "q"};
        names.resize(vars);
        FormulaEnumerator en(reg, names, budget, {prune, 2'000'000});
        for (int k = 1; k <= budget.max_size; ++k)
          REQUIRE(std::uint64_t(en.level(k).size()) == counts[k]);
      }
    }
  }
}

TEST_CASE("enumeration order is (size, print) and exhaustive") {
  OperatorRegistry reg = two_boxes();
  FormulaEnumerator en(reg, {"p", "q"}, {4, 4});
  int last_size = 0;
  std::string last_print;
  std::set<std::string> seen;
  en.for_each([&](int size, std::int32_t idx) {
    std::string s = en.print_at(idx);
    if (size == last_size) {
      REQUIRE(last_print < s);
    } else {
      REQUIRE(size == last_size + 1);
    }
    // print matches the real formula printer, parses back, size/depth agree
    Formula f = en.formula_at(idx);
    REQUIRE(print(f) == s);
    REQUIRE(f.size() == size);
    REQUIRE(f.modal_depth() == en.node(idx).depth);
    REQUIRE(parse(s, reg) == f);
    REQUIRE(seen.insert(s).second);
    last_size = size;
    last_print = s;
    return true;
  });
  REQUIRE(std::int64_t(seen.size()) == en.count_up_to(4));
}

TEST_CASE("depth budget prunes boxes only") {
  OperatorRegistry reg = one_box();
  FormulaEnumerator shallow(reg, {"p"}, {4, 1});
  FormulaEnumerator deep(reg, {"p"}, {4, 4});
  for (int k = 1; k <= 4; ++k) {
    for (std::int32_t idx : shallow.level(k))
      REQUIRE(shallow.node(idx).depth <= 1);
    // every depth<=1 formula of the deep enumerator appears in the shallow one
    std::set<std::string> shallow_set;
    for (std::int32_t idx : shallow.level(k))
      shallow_set.insert(shallow.print_at(idx));
    for (std::int32_t idx : deep.level(k)) {
      if (deep.node(idx).depth <= 1)
        REQUIRE(shallow_set.count(deep.print_at(idx)) == 1);
      else
        REQUIRE(shallow_set.count(deep.print_at(idx)) == 0);
    }
  }
}

TEST_CASE("node cap guards runaway enumeration") {
  OperatorRegistry reg = two_boxes();
  FormulaEnumerator en(reg, {"p", "q"}, {12, 12}, {false, 500});
  REQUIRE_THROWS_AS(en.level(12), Error);
}

TEST_CASE("arena evaluator agrees with the model evaluator") {
  OperatorRegistry reg = two_boxes();
  FormulaEnumerator en(reg, {"p", "q"}, {5, 5});
  std::mt19937 rng(5150);
  for (int round = 0; round < 10; ++round) {
    auto m = testing::make_random_model(rng, 2, 5, {"p", "q"});
    ArenaEvaluator arena(*m, reg);
    Evaluator ev(*m, reg);
    en.for_each([&](int, std::int32_t idx) {
      REQUIRE(arena.sat(en, idx) == ev.sat_set(en.formula_at(idx)));
      return true;
    });
  }
}

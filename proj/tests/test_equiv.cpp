#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "msl/equiv.hpp"
#include "msl/formula.hpp"
#include "msl/kripke.hpp"
#include "msl/operators.hpp"

#include "helpers.hpp"

using namespace msl;

namespace {

OperatorRegistry base_registry() {
  OperatorRegistry reg(2);
  reg.add(OperatorSpec::make_bool("r1", TruthTable::projection(2, 1)));
  reg.add(OperatorSpec::make_bool("r2", TruthTable::projection(2, 2)));
  reg.add(OperatorSpec::make_bool("or2", TruthTable::or_of(2, {1, 2})));
  reg.add(OperatorSpec::make_bool("and2", TruthTable::and_of(2, {1, 2})));
  return reg;
}

OperatorRegistry lang_registry() {
  OperatorRegistry reg = base_registry();
  reg.add(OperatorSpec::make_alt("A1", 1));
  reg.add(OperatorSpec::make_lang("w12", FiniteLanguage{2, {"12"}}));
  return reg;
}

OperatorRegistry ill_behaved_registry() {
  OperatorRegistry reg(2);
  reg.add(OperatorSpec::make_bool("r1", TruthTable::projection(2, 1)));
  reg.add(OperatorSpec::make_bool("r2", TruthTable::projection(2, 2)));
  reg.add(OperatorSpec::make_bool("bad", TruthTable::from_bits(2, "1001")));
  return reg;
}

// random formula of exactly the requested size with modal depth at most
// depth_allow, over variable p and the given box operators
Formula random_formula(std::mt19937& rng, int size, int depth_allow,
                       const std::vector<std::string>& ops) {
  if (size == 1) return Formula::var("p");
  std::vector<int> menu;  // 0 = not, 1 = box, 2 = or
  menu.push_back(0);
  if (depth_allow > 0) menu.push_back(1);
  if (size >= 3) menu.push_back(2);
  int pick = menu[std::uniform_int_distribution<int>(
      0, int(menu.size()) - 1)(rng)];
  switch (pick) {
    case 0:
      return Formula::negation(
          random_formula(rng, size - 1, depth_allow, ops));
    case 1: {
      int op = std::uniform_int_distribution<int>(0, int(ops.size()) - 1)(rng);
      return Formula::box(ops[op],
                          random_formula(rng, size - 1, depth_allow - 1, ops));
    }
    default: {
      int left = std::uniform_int_distribution<int>(1, size - 2)(rng);
      return Formula::disjunction(
          random_formula(rng, left, depth_allow, ops),
          random_formula(rng, size - 1 - left, depth_allow, ops));
    }
  }
}

int distinct_subformulas(const Formula& a, const Formula& b) {
  std::set<std::string> subs;
  detail::collect_subformula_prints(a, subs);
  detail::collect_subformula_prints(b, subs);
  return int(subs.size());
}

}  // namespace

TEST_CASE("a decomposable box equals the conjunction of its parts") {
  OperatorRegistry reg = base_registry();
  Formula a = parse("[or2]p", reg);
  Formula b = parse("~(~[r1]p|~[r2]p)", reg);
  EquivResult r = equivalent(a, b, reg);
  CHECK(r.route == "exact");
  CHECK(r.verdict == Verdict::Equivalent);
}

TEST_CASE("double negation is equivalent to the formula itself") {
  OperatorRegistry reg = base_registry();
  EquivResult r = equivalent(parse("p", reg), parse("~~p", reg), reg);
  CHECK(r.verdict == Verdict::Equivalent);
}

TEST_CASE("boxes over different relations are inequivalent") {
  OperatorRegistry reg = base_registry();
  Formula a = parse("[r1]p", reg);
  Formula b = parse("[r2]p", reg);
  EquivResult r = equivalent(a, b, reg);
  REQUIRE(r.verdict == Verdict::Inequivalent);
  REQUIRE(r.countermodel.has_value());
  const PointedModel& pm = *r.countermodel;
  CHECK(pm.model->worlds.size() <= 3);
  CHECK(satisfies(*pm.model, pm.world, a, reg) !=
        satisfies(*pm.model, pm.world, b, reg));
}

TEST_CASE("conjunction box differs from disjunction decomposition") {
  OperatorRegistry reg = base_registry();
  Formula a = parse("[and2]p", reg);
  Formula b = parse("~(~[r1]p|~[r2]p)", reg);
  EquivResult r = equivalent(a, b, reg);
  REQUIRE(r.verdict == Verdict::Inequivalent);
  const PointedModel& pm = *r.countermodel;
  CHECK(satisfies(*pm.model, pm.world, a, reg) !=
        satisfies(*pm.model, pm.world, b, reg));
}

TEST_CASE("tautologies over different variables are equivalent") {
  OperatorRegistry reg = base_registry();
  EquivResult r = equivalent(parse("(p|~p)", reg), parse("(q|~q)", reg), reg);
  CHECK(r.verdict == Verdict::Equivalent);
}

TEST_CASE("distinct variables are inequivalent") {
  OperatorRegistry reg = base_registry();
  EquivResult r = equivalent(parse("p", reg), parse("q", reg), reg);
  REQUIRE(r.verdict == Verdict::Inequivalent);
  const PointedModel& pm = *r.countermodel;
  CHECK(pm.model->worlds.size() == 1);
}

TEST_CASE("language boxes are decided through their expansion") {
  OperatorRegistry reg = lang_registry();

  SECTION("alternation box of depth one") {
    EquivResult r = equivalent(parse("[A1]p", reg),
                               parse("~(~[r1]p|~[r2]p)", reg), reg);
    CHECK(r.route == "exact");
    CHECK(r.verdict == Verdict::Equivalent);
  }

  SECTION("single word box equals its chain") {
    EquivResult r =
        equivalent(parse("[w12]p", reg), parse("[r1][r2]p", reg), reg);
    CHECK(r.verdict == Verdict::Equivalent);
  }

  SECTION("a reversed chain is different") {
    Formula a = parse("[w12]p", reg);
    Formula b = parse("[r2][r1]p", reg);
    EquivResult r = equivalent(a, b, reg);
    REQUIRE(r.verdict == Verdict::Inequivalent);
    const PointedModel& pm = *r.countermodel;
    CHECK(satisfies(*pm.model, pm.world, a, reg) !=
          satisfies(*pm.model, pm.world, b, reg));
  }
}

TEST_CASE("ill-behaved operators fall back to the bounded route") {
  OperatorRegistry reg = ill_behaved_registry();

  SECTION("a separating tree model is found") {
    Formula a = parse("[bad]p", reg);
    Formula b = parse("p", reg);
    EquivResult r = equivalent(a, b, reg);
    CHECK(r.route == "bounded");
    REQUIRE(r.verdict == Verdict::Inequivalent);
    const PointedModel& pm = *r.countermodel;
    CHECK(satisfies(*pm.model, pm.world, a, reg) !=
          satisfies(*pm.model, pm.world, b, reg));
  }

  SECTION("no countermodel within bounds stays unknown") {
    Formula a = parse("[bad]p", reg);
    Formula b = parse("~~[bad]p", reg);
    EquivResult r = equivalent(a, b, reg);
    CHECK(r.route == "bounded");
    CHECK(r.verdict == Verdict::UnknownWithinBounds);
  }

  SECTION("propositional pairs are still decided exactly") {
    EquivResult r = equivalent(parse("p", reg), parse("~~p", reg), reg);
    CHECK(r.verdict == Verdict::Equivalent);
  }

  SECTION("an unused ill-behaved operator does not force the fallback") {
    EquivResult r =
        equivalent(parse("[r1]p", reg), parse("[r2]p", reg), reg);
    CHECK(r.route == "exact");
    CHECK(r.verdict == Verdict::Inequivalent);
  }
}

TEST_CASE("exact route rejects unexpanded or ill-behaved input") {
  OperatorRegistry reg = lang_registry();
  CHECK_THROWS_AS(
      exact_equivalent(parse("[A1]p", reg), parse("p", reg), reg), Error);
  OperatorRegistry bad = ill_behaved_registry();
  CHECK_THROWS_AS(
      exact_equivalent(parse("[bad]p", bad), parse("p", bad), bad), Error);
}

TEST_CASE("exact and bounded routes agree on random pairs") {
  OperatorRegistry reg(2);
  reg.add(OperatorSpec::make_bool("r1", TruthTable::projection(2, 1)));
  reg.add(OperatorSpec::make_bool("r2", TruthTable::projection(2, 2)));
  std::vector<std::string> ops = {"r1", "r2"};

  std::mt19937 rng(20260819u);
  std::uniform_int_distribution<int> size_dist(1, 6);
  int inequivalent_seen = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Formula a = random_formula(rng, size_dist(rng), 1, ops);
    Formula b = random_formula(rng, size_dist(rng), 1, ops);

    EquivResult ex = exact_equivalent(a, b, reg);

    BoundedConfig cfg;
    cfg.branching = std::max(1, distinct_subformulas(a, b));
    cfg.max_worlds = cfg.branching + 1;
    cfg.model_cap = 2'000'000;
    EquivResult bo = bounded_equivalent(a, b, reg, cfg);

    INFO("pair " << trial << ": " << print(a) << " vs " << print(b));
    REQUIRE(bo.verdict != Verdict::UnknownWithinBounds);
    REQUIRE(bo.verdict == ex.verdict);

    if (ex.verdict == Verdict::Inequivalent) {
      ++inequivalent_seen;
      const PointedModel& pe = *ex.countermodel;
      REQUIRE(satisfies(*pe.model, pe.world, a, reg) !=
              satisfies(*pe.model, pe.world, b, reg));
      const PointedModel& pb = *bo.countermodel;
      REQUIRE(satisfies(*pb.model, pb.world, a, reg) !=
              satisfies(*pb.model, pb.world, b, reg));
    }
  }
  CHECK(inequivalent_seen > 50);  // the sweep must exercise both verdicts
}

TEST_CASE("inequivalence verdicts carry checked countermodels") {
  OperatorRegistry reg = base_registry();
  std::vector<std::string> ops = {"r1", "r2", "or2", "and2"};
  std::mt19937 rng(7u);
  std::uniform_int_distribution<int> size_dist(1, 7);
  int found = 0;
  for (int trial = 0; trial < 120; ++trial) {
    Formula a = random_formula(rng, size_dist(rng), 2, ops);
    Formula b = random_formula(rng, size_dist(rng), 2, ops);
    EquivResult r = equivalent(a, b, reg);
    if (r.verdict != Verdict::Inequivalent) continue;
    ++found;
    const PointedModel& pm = *r.countermodel;
    REQUIRE(satisfies(*pm.model, pm.world, a, reg) !=
            satisfies(*pm.model, pm.world, b, reg));
  }
  CHECK(found > 40);
}

TEST_CASE("nested boxes keep exact verdicts at depth two") {
  OperatorRegistry reg = base_registry();
  Formula a = parse("[or2][or2]p", reg);
  Formula b = parse("~(~[r1]~(~[r1]p|~[r2]p)|~[r2]~(~[r1]p|~[r2]p))", reg);
  EquivResult r = equivalent(a, b, reg);
  CHECK(r.verdict == Verdict::Equivalent);

  Formula c = parse("~(~[r1][r1]p|~[r2][r2]p)", reg);
  EquivResult r2 = equivalent(a, c, reg);
  REQUIRE(r2.verdict == Verdict::Inequivalent);
}

#pragma once

// Exhaustive formula enumeration in (size, print order), the backbone of the
// minimality searches and the bisimulation probe. Formulas live in a compact
// arena; printing and comparison stream characters so levels with millions of
// entries never materialize strings.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "msl/core.hpp"
#include "msl/formula.hpp"
#include "msl/kripke.hpp"
#include "msl/operators.hpp"

namespace msl {

// Closed-form counts of core formulas by size, split by root connective and
// modal depth. Independent of the enumerator, so the two can cross-check.
// Saturates at 2^63 rather than overflowing.
inline std::vector<std::uint64_t> count_formulas(int var_count,
                                                 int box_op_count,
                                                 SizeBudget budget,
                                                 bool prune_double_negation) {
  validate(budget);
  constexpr std::uint64_t kCap = std::uint64_t(1) << 63;
  auto sat_add = [](std::uint64_t a, std::uint64_t b) {
    return (a >= kCap || b >= kCap || a + b >= kCap) ? kCap : a + b;
  };
  auto sat_mul = [](std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) return std::uint64_t(0);
    return (a >= kCap || b >= kCap || a > (kCap - 1) / b) ? kCap : a * b;
  };
  int ks = budget.max_size, kd = budget.max_depth;
  // c[k][d][kind], kind indexed by FKind order Var,Not,Or,Box
  std::vector c(ks + 1, std::vector(kd + 1, std::vector<std::uint64_t>(4, 0)));
  if (ks >= 1) c[1][0][0] = var_count;
  for (int k = 2; k <= ks; ++k)
    for (int d = 0; d <= kd; ++d) {
      for (int kind = 0; kind < 4; ++kind) {
        if (prune_double_negation && kind == 1) continue;
        c[k][d][1] = sat_add(c[k][d][1], c[k - 1][d][kind]);
      }
      if (d >= 1)
        for (int kind = 0; kind < 4; ++kind)
          c[k][d][3] = sat_add(
              c[k][d][3], sat_mul(box_op_count, c[k - 1][d - 1][kind]));
      for (int i = 1; i <= k - 2; ++i) {
        int j = k - 1 - i;
        auto total = [&](int size, int depth) {
          std::uint64_t t = 0;
          for (int kind = 0; kind < 4; ++kind)
            t = sat_add(t, c[size][depth][kind]);
          return t;
        };
        // left depth d, right depth <= d; plus left < d, right == d
        std::uint64_t right_le = 0, left_lt = 0;
        for (int e = 0; e <= d; ++e) right_le = sat_add(right_le, total(j, e));
        for (int e = 0; e < d; ++e) left_lt = sat_add(left_lt, total(i, e));
        c[k][d][2] = sat_add(c[k][d][2], sat_mul(total(i, d), right_le));
        c[k][d][2] = sat_add(c[k][d][2], sat_mul(left_lt, total(j, d)));
      }
    }
  std::vector<std::uint64_t> totals(ks + 1, 0);
  for (int k = 1; k <= ks; ++k)
    for (int d = 0; d <= kd; ++d)
      for (int kind = 0; kind < 4; ++kind)
        totals[k] = sat_add(totals[k], c[k][d][kind]);
  return totals;
}

struct EnumerationOptions {
  bool prune_double_negation = false;
  std::uint64_t node_cap = 8'000'000;
};

class FormulaEnumerator {
 public:
  struct Node {
    FKind kind = FKind::Var;
    std::int16_t sym = -1;   // var index (Var) or operator index (Box)
    std::int32_t a = -1;     // child / left child
    std::int32_t b = -1;     // right child
    std::int16_t depth = 0;  // modal depth
    std::int16_t size = 0;
  };

  FormulaEnumerator(const OperatorRegistry& reg, std::vector<std::string> vars,
                    SizeBudget budget, EnumerationOptions opt = {})
      : reg_(reg), vars_(std::move(vars)), budget_(budget), opt_(opt) {
    validate(budget_);
    std::sort(vars_.begin(), vars_.end());
    vars_.erase(std::unique(vars_.begin(), vars_.end()), vars_.end());
    require(!vars_.empty(), "enumeration needs at least one variable");
    for (const auto& v : vars_)
      require(valid_name(v), "bad variable name '" + v + "'");
    op_names_ = reg_.names();
    levels_.resize(budget_.max_size + 1);
    built_.assign(budget_.max_size + 1, false);
  }

  const OperatorRegistry& registry() const { return reg_; }
  const std::vector<std::string>& variables() const { return vars_; }
  const SizeBudget& budget() const { return budget_; }

  // Sorted arena indices of the formulas with exactly this size.
  const std::vector<std::int32_t>& level(int size) {
    require(size >= 1 && size <= budget_.max_size,
            "size outside the enumeration budget");
    for (int k = 1; k <= size; ++k) ensure_level(k);
    return levels_[size];
  }

  std::int64_t count_up_to(int size) {
    std::int64_t c = 0;
    for (int k = 1; k <= size; ++k) c += std::int64_t(level(k).size());
    return c;
  }

  const Node& node(std::int32_t idx) const { return arena_[idx]; }

  Formula formula_at(std::int32_t idx) const {
    const Node& n = arena_[idx];
    switch (n.kind) {
      case FKind::Var: return Formula::var(vars_[n.sym]);
      case FKind::Not: return Formula::negation(formula_at(n.a));
      case FKind::Or:
        return Formula::disjunction(formula_at(n.a), formula_at(n.b));
      case FKind::Box: return Formula::box(op_names_[n.sym], formula_at(n.a));
    }
    fail("corrupt arena node");
  }

  std::string print_at(std::int32_t idx) const {
    std::string out;
    PrintCursor c(*this, idx);
    for (int ch = c.next(); ch >= 0; ch = c.next())
      out.push_back(char(ch));
    return out;
  }

  // Visit every formula within the budget in (size, print) order. The visitor
  // receives (size, arena index) and returns false to stop early.
  template <class F>
  void for_each(F&& f) {
    for (int k = 1; k <= budget_.max_size; ++k)
      for (std::int32_t idx : level(k))
        if (!f(k, idx)) return;
  }

  // Streaming printer over arena nodes.
  class PrintCursor {
   public:
    PrintCursor(const FormulaEnumerator& en, std::int32_t root) : en_(en) {
      stack_.push_back({root, 0});
    }
    // Next character, or -1 when exhausted.
    int next() {
      while (!stack_.empty()) {
        Frame f = stack_.back();
        const Node& n = en_.arena_[f.node];
        switch (n.kind) {
          case FKind::Var: {
            const std::string& s = en_.vars_[n.sym];
            if (f.phase < int(s.size())) {
              ++stack_.back().phase;
              return s[f.phase];
            }
            stack_.pop_back();
            break;
          }
          case FKind::Not:
            if (f.phase == 0) {
              stack_.back().phase = 1;
              return '~';
            }
            stack_.pop_back();
            stack_.push_back({n.a, 0});
            break;
          case FKind::Or:
            if (f.phase == 0) {
              stack_.back().phase = 1;
              return '(';
            }
            if (f.phase == 1) {
              stack_.back().phase = 2;
              stack_.push_back({n.a, 0});
              break;
            }
            if (f.phase == 2) {
              stack_.back().phase = 3;
              return '|';
            }
            if (f.phase == 3) {
              stack_.back().phase = 4;
              stack_.push_back({n.b, 0});
              break;
            }
            stack_.pop_back();
            return ')';
          case FKind::Box: {
            const std::string& s = en_.op_names_[n.sym];
            if (f.phase == 0) {
              stack_.back().phase = 1;
              return '[';
            }
            if (f.phase <= int(s.size())) {
              ++stack_.back().phase;
              return s[f.phase - 1];
            }
            stack_.pop_back();
            stack_.push_back({n.a, 0});
            return ']';
          }
        }
      }
      return -1;
    }

   private:
    struct Frame {
      std::int32_t node;
      int phase;
    };
    const FormulaEnumerator& en_;
    std::vector<Frame> stack_;
  };

  bool print_less(std::int32_t lhs, std::int32_t rhs) const {
    PrintCursor a(*this, lhs), b(*this, rhs);
    for (;;) {
      int x = a.next(), y = b.next();
      if (x != y) return x < y;
      if (x < 0) return false;
    }
  }

 private:
  void ensure_level(int k) {
    if (built_[k]) return;
    built_[k] = true;
    std::vector<std::int32_t>& out = levels_[k];
    auto push = [&](Node n) {
      require(arena_.size() < opt_.node_cap,
              "enumeration exceeds the node cap");
      n.size = std::int16_t(k);
      out.push_back(std::int32_t(arena_.size()));
      arena_.push_back(n);
    };
    if (k == 1) {
      for (std::int16_t v = 0; v < std::int16_t(vars_.size()); ++v)
        push({FKind::Var, v, -1, -1, 0, 0});
      // variables are sorted already
      return;
    }
    for (std::int32_t c : levels_[k - 1]) {
      if (opt_.prune_double_negation && arena_[c].kind == FKind::Not) continue;
      push({FKind::Not, -1, c, -1, arena_[c].depth, 0});
    }
    for (std::int16_t op = 0; op < std::int16_t(op_names_.size()); ++op)
      for (std::int32_t c : levels_[k - 1]) {
        if (arena_[c].depth + 1 > budget_.max_depth) continue;
        push({FKind::Box, op, c, -1, std::int16_t(arena_[c].depth + 1), 0});
      }
    for (int i = 1; i <= k - 2; ++i) {
      int j = k - 1 - i;
      for (std::int32_t a : levels_[i])
        for (std::int32_t b : levels_[j])
          push({FKind::Or, -1, a, b,
                std::max(arena_[a].depth, arena_[b].depth), 0});
    }
    std::sort(out.begin(), out.end(),
              [this](std::int32_t x, std::int32_t y) {
                return print_less(x, y);
              });
  }

  const OperatorRegistry& reg_;
  std::vector<std::string> vars_;
  std::vector<std::string> op_names_;
  SizeBudget budget_;
  EnumerationOptions opt_;
  std::vector<Node> arena_;
  std::vector<std::vector<std::int32_t>> levels_;
  std::vector<bool> built_;
};

// Satisfaction sets for arena formulas on one model, memoized by arena index.
// Arena indices are append-only, so the cache never goes stale.
class ArenaEvaluator {
 public:
  ArenaEvaluator(const KripkeModel& m, const OperatorRegistry& reg)
      : m_(m), ev_(m, reg) {}

  const WorldSet& sat(const FormulaEnumerator& en, std::int32_t idx) {
    if (idx < std::int32_t(memo_.size()) && done_[idx]) return memo_[idx];
    if (idx >= std::int32_t(memo_.size())) {
      memo_.resize(idx + 1, WorldSet(m_.worlds.size()));
      done_.resize(idx + 1, false);
    }
    const FormulaEnumerator::Node& n = en.node(idx);
    WorldSet r(m_.worlds.size());
    switch (n.kind) {
      case FKind::Var: {
        auto it = m_.valuation.find(en.variables()[n.sym]);
        if (it != m_.valuation.end()) r = it->second;
        break;
      }
      case FKind::Not: r = ~sat(en, n.a); break;
      case FKind::Or: r = sat(en, n.a) | sat(en, n.b); break;
      case FKind::Box: {
        const auto& succ =
            ev_.successor_table(en.registry().names()[n.sym]);
        const WorldSet& inner = sat(en, n.a);
        for (size_t w = 0; w < m_.worlds.size(); ++w)
          if (succ[w].is_subset_of(inner)) r.set(w);
        break;
      }
    }
    memo_[idx] = std::move(r);
    done_[idx] = true;
    return memo_[idx];
  }

  bool satisfies(const FormulaEnumerator& en, std::int32_t idx, int w) {
    return sat(en, idx).test(w);
  }

 private:
  const KripkeModel& m_;
  Evaluator ev_;
  std::vector<WorldSet> memo_;
  std::vector<bool> done_;
};

}  // namespace msl

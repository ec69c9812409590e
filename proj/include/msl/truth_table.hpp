#pragma once

// Boolean successor selection functions as explicit truth tables.
//
// An edge type is the {0,1}^n vector saying which of the n accessibility
// relations contain a given ordered world pair. Types are packed into an
// unsigned index with register 1 as the most significant bit, so for n=2 the
// table string "0111" lists f(00) f(01) f(10) f(11) and denotes r1 OR r2.

#include <string>
#include <vector>

#include "msl/core.hpp"

namespace msl {

using EdgeType = unsigned;

// Bit of register j (1-based) inside a type index, r1 most significant.
inline bool type_bit(EdgeType type, int j, int n) {
  return (type >> (n - j)) & 1u;
}

struct TruthTable {
  int n = 0;
  std::vector<bool> bits;  // size 1<<n, indexed by edge type

  bool eval(EdgeType type) const { return bits[type]; }
  bool well_behaved() const { return !bits[0]; }  // f(0,...,0) = 0

  std::string bit_string() const {
    std::string s(bits.size(), '0');
    for (size_t i = 0; i < bits.size(); ++i)
      if (bits[i]) s[i] = '1';
    return s;
  }

  static TruthTable constant(int n, bool v) {
    TruthTable t;
    t.n = n;
    t.bits.assign(size_t(1) << n, v);
    return t;
  }

  static TruthTable from_bits(int n, const std::string& s) {
    require(n >= 1 && n <= 30, "truth table arity out of range");
    require(s.size() == (size_t(1) << n),
            "truth table '" + s + "' needs " +
                std::to_string(size_t(1) << n) + " bits for arity " +
                std::to_string(n));
    TruthTable t = constant(n, false);
    for (size_t i = 0; i < s.size(); ++i) {
      require(s[i] == '0' || s[i] == '1', "truth table bits must be 0/1");
      t.bits[i] = s[i] == '1';
    }
    return t;
  }

  static TruthTable projection(int n, int j) {
    require(j >= 1 && j <= n, "projection register out of range");
    TruthTable t = constant(n, false);
    for (EdgeType type = 0; type < (1u << n); ++type)
      t.bits[type] = type_bit(type, j, n);
    return t;
  }

  // Disjunction / exclusive-or of the listed registers (1-based).
  static TruthTable or_of(int n, const std::vector<int>& regs) {
    TruthTable t = constant(n, false);
    for (EdgeType type = 0; type < (1u << n); ++type)
      for (int j : regs)
        if (type_bit(type, j, n)) {
          t.bits[type] = true;
          break;
        }
    return t;
  }

  static TruthTable xor_of(int n, const std::vector<int>& regs) {
    TruthTable t = constant(n, false);
    for (EdgeType type = 0; type < (1u << n); ++type) {
      bool v = false;
      for (int j : regs) v ^= type_bit(type, j, n);
      t.bits[type] = v;
    }
    return t;
  }

  static TruthTable and_of(int n, const std::vector<int>& regs) {
    TruthTable t = constant(n, false);
    for (EdgeType type = 0; type < (1u << n); ++type) {
      bool v = true;
      for (int j : regs) v = v && type_bit(type, j, n);
      t.bits[type] = v;
    }
    return t;
  }
};

inline bool operator==(const TruthTable& a, const TruthTable& b) {
  return a.n == b.n && a.bits == b.bits;
}

// Pointwise implication f <= g.
inline bool leq(const TruthTable& f, const TruthTable& g) {
  require(f.n == g.n, "arity mismatch in leq");
  for (size_t i = 0; i < f.bits.size(); ++i)
    if (f.bits[i] && !g.bits[i]) return false;
  return true;
}

inline TruthTable or_tables(const TruthTable& a, const TruthTable& b) {
  require(a.n == b.n, "arity mismatch in or_tables");
  TruthTable t = a;
  for (size_t i = 0; i < t.bits.size(); ++i)
    t.bits[i] = t.bits[i] || b.bits[i];
  return t;
}

// Edge type as a readable tuple, e.g. "(1,0)".
inline std::string type_string(EdgeType type, int n) {
  std::string s = "(";
  for (int j = 1; j <= n; ++j) {
    if (j > 1) s += ",";
    s += type_bit(type, j, n) ? '1' : '0';
  }
  return s + ")";
}

}  // namespace msl

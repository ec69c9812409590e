#pragma once

// Shared error type, guard limits and a few helpers used across the library.

#include <cstdint>
#include <stdexcept>
#include <string>

namespace msl {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

[[noreturn]] inline void fail(const std::string& msg) { throw Error(msg); }

inline void require(bool cond, const std::string& msg) {
  if (!cond) fail(msg);
}

// Hard limits that keep desk-scale experiments from exploding. Every guard can
// be lifted with --unsafe-large on the command line (sets unlimited()).
struct Limits {
  int max_class_members = 6;      // |A| + |B| for closed-tree enumeration
  int max_enum_model_worlds = 8;  // per model, closed-tree enumeration
  std::uint64_t max_pow = 4096;   // 2^i (alternation) and t^i (single step)
  int max_poset_elements = 16;
  int max_arity = 8;              // relations per model / operator arity
  std::uint64_t max_universe_worlds = 200000;  // combined single-step universe

  static Limits unlimited() {
    Limits l;
    l.max_class_members = 1 << 20;
    l.max_enum_model_worlds = 1 << 20;
    l.max_pow = UINT64_MAX;
    l.max_poset_elements = 1 << 20;
    l.max_arity = 30;
    l.max_universe_worlds = UINT64_MAX;
    return l;
  }
};

// Enumeration and search limits: formula size in nodes, box-nesting depth.
struct SizeBudget {
  int max_size = 1;
  int max_depth = 1;
};

inline void validate(const SizeBudget& b) {
  require(b.max_size >= 1 && b.max_depth >= 1, "size budget bounds must be >= 1");
}

// Identifier charset shared by variables, operator names and world ids.
inline bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}

}  // namespace msl

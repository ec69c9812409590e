#pragma once

// Finite languages over the alphabet {1..n}, used as multi-step modal
// operators: [L]phi abbreviates the conjunction over all words s in L of
// Box_{s_1} ... Box_{s_k} phi. Words are stored as digit strings ("12", "2").

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "msl/core.hpp"

namespace msl {

struct FiniteLanguage {
  int n = 2;                       // alphabet {1..n}
  std::vector<std::string> words;  // sorted, deduplicated, nonempty

  void normalize() {
    require(n >= 1 && n <= 9, "language alphabet out of range");
    require(!words.empty(), "language must be nonempty");
    for (const auto& w : words) {
      require(!w.empty(), "language words must be nonempty");
      for (char c : w)
        require(c >= '1' && c < char('1' + n),
                "word '" + w + "' uses a symbol outside {1.." +
                    std::to_string(n) + "}");
    }
    std::sort(words.begin(), words.end());
    words.erase(std::unique(words.begin(), words.end()), words.end());
  }
};

inline bool operator==(const FiniteLanguage& a, const FiniteLanguage& b) {
  return a.n == b.n && a.words == b.words;
}

inline bool length_uniform(const FiniteLanguage& l) {
  for (const auto& w : l.words)
    if (w.size() != l.words.front().size()) return false;
  return true;
}

// Common word length of a length-uniform language.
inline int dcard(const FiniteLanguage& l) {
  require(length_uniform(l), "dcard requires a length-uniform language");
  return static_cast<int>(l.words.front().size());
}

inline FiniteLanguage concat(const FiniteLanguage& a, const FiniteLanguage& b) {
  require(a.n == b.n, "alphabet mismatch in concat");
  FiniteLanguage r;
  r.n = a.n;
  for (const auto& u : a.words)
    for (const auto& v : b.words) r.words.push_back(u + v);
  r.normalize();
  return r;
}

// The alternating block of length ell starting with symbol c ('1' or '2').
inline std::string alternating_block(char c, int ell) {
  require(c == '1' || c == '2', "alternation symbol must be 1 or 2");
  require(ell >= 1, "alternation length must be positive");
  std::string w;
  for (int k = 0; k < ell; ++k)
    w += (k % 2 == 0) ? c : (c == '1' ? '2' : '1');
  return w;
}

// a^ell_s: one alternating block per symbol of s, the m-th starting with s_m.
inline std::string altword(const std::string& s, int ell) {
  require(!s.empty(), "altword needs a nonempty block string");
  std::string w;
  for (char c : s) w += alternating_block(c, ell);
  return w;
}

// A_ell = { a^ell_1, a^ell_2 }, the two alternating words of length ell.
inline FiniteLanguage alt_language(int ell) {
  FiniteLanguage l;
  l.n = 2;
  l.words = {alternating_block('1', ell), alternating_block('2', ell)};
  l.normalize();
  return l;
}

// Recognize alternation shape regardless of how the operator was declared.
inline std::optional<int> alternation_length(const FiniteLanguage& l) {
  if (l.n != 2 || l.words.size() != 2 || !length_uniform(l)) return std::nullopt;
  int ell = dcard(l);
  if (l == alt_language(ell)) return ell;
  return std::nullopt;
}

}  // namespace msl

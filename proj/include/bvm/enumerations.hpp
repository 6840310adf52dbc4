#pragma once

#include <string>
#include <vector>

#include "bvm/error.hpp"

namespace bvm {

/// An enumeration of a size-n model at scale K: a surjection
/// {0..K-1} -> {0..n-1}, stored as its value array.
using Enumeration = std::vector<int>;

/// Fibre discipline. Balanced: every fibre has exactly K/n indices (the
/// finite stand-in for "every fibre infinite", making the symmetric group act
/// transitively on the enumerations of each model modulo automorphisms).
/// Unbalanced: all surjections.
enum class Mode { Balanced, Unbalanced };

inline std::string to_string(Mode mode) {
  return mode == Mode::Balanced ? "balanced" : "unbalanced";
}

inline Mode parse_mode(const std::string& s) {
  if (s == "balanced") return Mode::Balanced;
  if (s == "unbalanced") return Mode::Unbalanced;
  throw Error("unknown mode '" + s + "' (expected balanced or unbalanced)");
}

namespace detail {

inline void gen_enumerations(int n, int K, Mode mode, int quota,
                             Enumeration& prefix, std::vector<int>& counts,
                             int missing, std::vector<Enumeration>& out) {
  int pos = static_cast<int>(prefix.size());
  if (pos == K) {
    out.push_back(prefix);
    return;
  }
  int remaining = K - pos;
  for (int v = 0; v < n; ++v) {
    if (mode == Mode::Balanced && counts[v] == quota) continue;
    int missing_after = missing - (counts[v] == 0 ? 1 : 0);
    if (missing_after > remaining - 1) continue;  // cannot reach surjectivity
    prefix.push_back(v);
    ++counts[v];
    gen_enumerations(n, K, mode, quota, prefix, counts, missing_after, out);
    --counts[v];
    prefix.pop_back();
  }
}

}  // namespace detail

/// All enumerations of a size-n model at scale K under the given mode, in
/// lexicographic order. Balanced mode requires n | K.
inline std::vector<Enumeration> enumerate_enumerations(int n, int K, Mode mode) {
  if (n < 1) throw Error("model size must be positive");
  if (K < 1) throw Error("K must be positive");
  if (mode == Mode::Balanced && K % n != 0)
    throw Error("balanced mode requires K divisible by the model size (K=" +
                std::to_string(K) + ", n=" + std::to_string(n) + ")");
  std::vector<Enumeration> out;
  Enumeration prefix;
  prefix.reserve(K);
  std::vector<int> counts(n, 0);
  detail::gen_enumerations(n, K, mode, K / n, prefix, counts, n, out);
  return out;
}

}  // namespace bvm

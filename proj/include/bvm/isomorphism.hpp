#pragma once

#include <vector>

#include "bvm/structure.hpp"

namespace bvm {

namespace detail {

inline bool iso_leaf_check(const Signature& sig, const Structure& a,
                           const Structure& b, const std::vector<int>& perm) {
  int n = a.size;
  for (size_t r = 0; r < sig.relations.size(); ++r) {
    int arity = sig.relations[r].second;
    std::vector<int> tuple(arity, 0), image(arity);
    do {
      for (int i = 0; i < arity; ++i) image[i] = perm[tuple[i]];
      if (a.relations[r][tuple_rank(tuple, n)] !=
          b.relations[r][tuple_rank(image, n)])
        return false;
    } while (next_tuple(tuple, n));
  }
  for (size_t f = 0; f < sig.functions.size(); ++f) {
    int arity = sig.functions[f].second;
    std::vector<int> tuple(arity, 0), image(arity);
    do {
      for (int i = 0; i < arity; ++i) image[i] = perm[tuple[i]];
      if (perm[a.functions[f][tuple_rank(tuple, n)]] !=
          b.functions[f][tuple_rank(image, n)])
        return false;
    } while (next_tuple(tuple, n));
  }
  for (size_t c = 0; c < a.constants.size(); ++c)
    if (perm[a.constants[c]] != b.constants[c]) return false;
  return true;
}

inline void iso_extend(const Signature& sig, const Structure& a, const Structure& b,
                       std::vector<int>& perm, std::vector<bool>& used, int pos,
                       std::vector<std::vector<int>>& out) {
  int n = a.size;
  if (pos == n) {
    if (iso_leaf_check(sig, a, b, perm)) out.push_back(perm);
    return;
  }
  for (int j = 0; j < n; ++j) {
    if (used[j]) continue;
    bool ok = true;
    // Cheap pruning: unary relation membership and constant correspondence
    // must already match for the pair (pos, j).
    for (size_t r = 0; ok && r < sig.relations.size(); ++r)
      if (sig.relations[r].second == 1 && a.relations[r][pos] != b.relations[r][j])
        ok = false;
    for (size_t c = 0; ok && c < a.constants.size(); ++c)
      if ((a.constants[c] == pos) != (b.constants[c] == j)) ok = false;
    if (!ok) continue;
    perm[pos] = j;
    used[j] = true;
    iso_extend(sig, a, b, perm, used, pos + 1, out);
    used[j] = false;
  }
}

}  // namespace detail

/// All isomorphisms a -> b as permutation image arrays, found by backtracking
/// over bijections; empty when the structures are not isomorphic or differ in
/// size. Ordered lexicographically by image array.
inline std::vector<std::vector<int>> find_isomorphisms(const Signature& sig,
                                                       const Structure& a,
                                                       const Structure& b) {
  std::vector<std::vector<int>> out;
  if (a.size != b.size) return out;
  std::vector<int> perm(a.size, 0);
  std::vector<bool> used(a.size, false);
  detail::iso_extend(sig, a, b, perm, used, 0, out);
  return out;
}

inline std::vector<std::vector<int>> automorphisms(const Signature& sig,
                                                   const Structure& m) {
  return find_isomorphisms(sig, m, m);
}

}  // namespace bvm

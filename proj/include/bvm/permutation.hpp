#pragma once

#include <numeric>
#include <string>
#include <vector>

#include "bvm/error.hpp"

// Permutations of {0..K-1} as image arrays: p.image[i] is where i goes.

namespace bvm {

struct Permutation {
  std::vector<int> image;

  int degree() const { return static_cast<int>(image.size()); }
  int operator()(int i) const { return image[i]; }

  bool operator==(const Permutation& o) const { return image == o.image; }
  bool operator!=(const Permutation& o) const { return !(*this == o); }
};

inline Permutation identity_permutation(int K) {
  Permutation p;
  p.image.resize(K);
  std::iota(p.image.begin(), p.image.end(), 0);
  return p;
}

inline Permutation permutation_from_image(std::vector<int> image) {
  std::vector<bool> seen(image.size(), false);
  for (int v : image) {
    if (v < 0 || v >= static_cast<int>(image.size()) || seen[v])
      throw Error("image array is not a permutation");
    seen[v] = true;
  }
  return Permutation{std::move(image)};
}

/// (a * b)(i) = a(b(i)): apply b first.
inline Permutation compose(const Permutation& a, const Permutation& b) {
  if (a.degree() != b.degree()) throw Error("permutation degrees differ");
  Permutation c;
  c.image.resize(a.image.size());
  for (size_t i = 0; i < c.image.size(); ++i) c.image[i] = a.image[b.image[i]];
  return c;
}

inline Permutation inverse(const Permutation& p) {
  Permutation q;
  q.image.resize(p.image.size());
  for (size_t i = 0; i < p.image.size(); ++i) q.image[p.image[i]] = static_cast<int>(i);
  return q;
}

/// Cycle notation, e.g. "(0 1)(2 4 3)"; the identity prints as "()".
inline std::string print(const Permutation& p) {
  std::string out;
  std::vector<bool> seen(p.image.size(), false);
  for (size_t start = 0; start < p.image.size(); ++start) {
    if (seen[start] || p.image[start] == static_cast<int>(start)) continue;
    out += '(';
    size_t i = start;
    bool first = true;
    while (!seen[i]) {
      seen[i] = true;
      if (!first) out += ' ';
      out += std::to_string(i);
      first = false;
      i = static_cast<size_t>(p.image[i]);
    }
    out += ')';
  }
  if (out.empty()) out = "()";
  return out;
}

/// Generators of the symmetric group on {0..K-1}: the transposition (0 1)
/// and the K-cycle (0 1 ... K-1). For K = 2 the two coincide and the list
/// is deduplicated to the single swap.
inline std::vector<Permutation> symmetric_generators(int K) {
  if (K < 2) throw Error("generators need K >= 2");
  std::vector<Permutation> gens;
  Permutation swap01 = identity_permutation(K);
  swap01.image[0] = 1;
  swap01.image[1] = 0;
  gens.push_back(swap01);
  Permutation cycle = identity_permutation(K);
  for (int i = 0; i < K; ++i) cycle.image[i] = (i + 1) % K;
  if (cycle != gens.front()) gens.push_back(cycle);
  return gens;
}

/// Smallest permutation list that generates all of S_K, allowing K < 2.
inline std::vector<Permutation> generator_set(int K) {
  return K < 2 ? std::vector<Permutation>{} : symmetric_generators(K);
}

/// Extend a partial injective index map (from, to) to a full permutation:
/// unmapped sources in ascending order go to unused targets in ascending
/// order. Repeated consistent pairs are allowed.
inline Permutation extend_partial(int K, const std::vector<std::pair<int, int>>& pairs) {
  std::vector<int> image(K, -1), hit(K, 0);
  for (auto [from, to] : pairs) {
    if (from < 0 || from >= K || to < 0 || to >= K)
      throw Error("partial map index out of range");
    if (image[from] == to) continue;
    if (image[from] != -1 || hit[to])
      throw Error("partial map is not injective");
    image[from] = to;
    hit[to] = 1;
  }
  std::vector<int> free_targets;
  for (int t = 0; t < K; ++t)
    if (!hit[t]) free_targets.push_back(t);
  size_t next = 0;
  for (int s = 0; s < K; ++s)
    if (image[s] == -1) image[s] = free_targets[next++];
  return Permutation{std::move(image)};
}

}  // namespace bvm

#pragma once

#include <vector>

#include "bvm/permutation.hpp"
#include "bvm/space.hpp"

// Action of the symmetric group S_K on the space: pi sends the class of
// (M, alpha) to the class of (M, alpha . pi^-1). Re-indexing commutes with
// evaluation: pi applied to the value of f at xi equals the value of f at
// (pi(xi_1), ..., pi(xi_n)).

namespace bvm {

/// Per-point index map of the action of pi.
inline std::vector<int> point_map(const Space& space, const Permutation& pi) {
  if (pi.degree() != space.K()) throw Error("permutation degree differs from K");
  Permutation inv = inverse(pi);
  std::vector<int> map(space.point_count());
  Enumeration beta(space.K());
  for (size_t p = 0; p < space.point_count(); ++p) {
    const Point& pt = space.point(p);
    for (int i = 0; i < space.K(); ++i) beta[i] = pt.enumeration[inv.image[i]];
    map[p] = space.canonical_point(pt.model, beta);
  }
  return map;
}

/// Image of a single point under the action of pi.
inline size_t apply_permutation(const Space& space, const Permutation& pi,
                                size_t point_index) {
  if (pi.degree() != space.K()) throw Error("permutation degree differs from K");
  if (point_index >= space.point_count()) throw Error("point index out of range");
  const Point& pt = space.point(point_index);
  Permutation inv = inverse(pi);
  Enumeration beta(space.K());
  for (int i = 0; i < space.K(); ++i) beta[i] = pt.enumeration[inv.image[i]];
  return static_cast<size_t>(space.canonical_point(pt.model, beta));
}

/// Image of a clopen set under a precomputed point map.
inline ClopenSet apply_permutation(const std::vector<int>& map, const ClopenSet& s) {
  if (map.size() != s.universe()) throw Error("point map and clopen set disagree");
  ClopenSet out(s.universe());
  for (size_t p = 0; p < map.size(); ++p)
    if (s.test(p)) out.set(static_cast<size_t>(map[p]));
  return out;
}

/// Image of a clopen set under the action of pi.
inline ClopenSet apply_permutation(const Space& space, const Permutation& pi,
                                   const ClopenSet& s) {
  return apply_permutation(point_map(space, pi), s);
}

/// pi applied entrywise to an index tuple.
inline std::vector<int> apply_to_indices(const Permutation& pi,
                                         const std::vector<int>& xi) {
  std::vector<int> out(xi.size());
  for (size_t i = 0; i < xi.size(); ++i) out[i] = pi.image[xi[i]];
  return out;
}

}  // namespace bvm

#pragma once

#include <algorithm>
#include <vector>

#include "bvm/predicate.hpp"

// Atoms of the Boolean algebra of extensional invariant predicates of a
// fixed arity. A predicate is a subset of (point, tuple) pairs; closure
// under single-position equality moves captures extensionality and closure
// under the generator moves captures invariance, so the atoms are exactly
// the classes of the equivalence generated by those moves. Computed with a
// union-find over all pairs.

namespace bvm {

inline std::vector<Predicate> invariant_atoms(const Space& space, int arity,
                                              size_t pair_cap = 8000000) {
  if (arity < 0) throw Error("atom arity must be non-negative");
  const size_t P = space.point_count();
  const size_t cells = predicate_cells(space.K(), arity);
  if (P == 0) return {};
  if (cells > pair_cap / P)
    throw Error("atom computation exceeds the resource cap of " +
                std::to_string(pair_cap) + " (point, tuple) pairs");
  const size_t total = P * cells;

  std::vector<uint32_t> parent(total), size(total, 1);
  for (size_t i = 0; i < total; ++i) parent[i] = static_cast<uint32_t>(i);
  auto find = [&](uint32_t i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  };
  auto unite = [&](size_t a, size_t b) {
    uint32_t ra = find(static_cast<uint32_t>(a));
    uint32_t rb = find(static_cast<uint32_t>(b));
    if (ra == rb) return;
    if (size[ra] < size[rb]) std::swap(ra, rb);
    parent[rb] = ra;
    size[ra] += size[rb];
  };

  // Pair id: tuple-major, rank(m) * P + point.
  std::vector<std::vector<int>> maps;
  std::vector<std::vector<int>> perms;
  for (const Permutation& pi : generator_set(space.K())) {
    maps.push_back(point_map(space, pi));
    perms.push_back(pi.image);
  }

  // For each point, the least index enumerating the same element: linking
  // every position to that representative closes all equality moves.
  std::vector<std::vector<int>> least_same(P, std::vector<int>(space.K()));
  for (size_t p = 0; p < P; ++p) {
    const Enumeration& alpha = space.point(p).enumeration;
    std::vector<int> first_of_value(
        *std::max_element(alpha.begin(), alpha.end()) + 1, -1);
    for (int i = 0; i < space.K(); ++i) {
      if (first_of_value[alpha[i]] < 0) first_of_value[alpha[i]] = i;
      least_same[p][i] = first_of_value[alpha[i]];
    }
  }

  std::vector<int> m(arity, 0);
  size_t rank = 0;
  std::vector<int> moved(arity);
  do {
    for (size_t p = 0; p < P; ++p) {
      size_t id = rank * P + p;
      for (size_t g = 0; g < maps.size(); ++g) {
        for (int i = 0; i < arity; ++i) moved[i] = perms[g][m[i]];
        unite(id, detail::tuple_rank_base(moved, space.K()) * P +
                      static_cast<size_t>(maps[g][p]));
      }
      for (int pos = 0; pos < arity; ++pos) {
        int rep = least_same[p][m[pos]];
        if (rep == m[pos]) continue;
        size_t stride = predicate_cells(space.K(), arity - 1 - pos);
        size_t rank2 = rank - static_cast<size_t>(m[pos]) * stride +
                       static_cast<size_t>(rep) * stride;
        unite(id, rank2 * P + p);
      }
    }
    ++rank;
  } while (detail::next_tuple(m, space.K()));

  // Collect classes in order of least pair id.
  std::vector<long> atom_of(total, -1);
  std::vector<Predicate> atoms;
  for (size_t id = 0; id < total; ++id) {
    uint32_t root = find(static_cast<uint32_t>(id));
    if (atom_of[root] < 0) {
      atom_of[root] = static_cast<long>(atoms.size());
      atoms.push_back(empty_predicate(space, arity));
    }
    atoms[static_cast<size_t>(atom_of[root])].table[id / P].set(id % P);
  }
  return atoms;
}

}  // namespace bvm

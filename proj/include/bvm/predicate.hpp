#pragma once

#include <string>
#include <vector>

#include "bvm/action.hpp"
#include "bvm/space.hpp"

// Predicates at scale K: maps p from K^n index tuples into the clopen
// algebra, stored as a dense table in lexicographic tuple order.
//
// The two structural properties of interest:
//   extensional:  p(m) /\ [[m = m']] <= p(m') for all tuples m, m'
//   invariant:    pi(p(m)) = p(pi(m)) for every permutation pi of {0..K-1}
// Extensionality is checked one position at a time (single-position moves
// chain to arbitrary pairs), invariance on a generating set of permutations.

namespace bvm {

struct Predicate {
  int arity = 0;
  int K = 0;
  std::vector<ClopenSet> table;

  bool operator==(const Predicate& o) const {
    return arity == o.arity && K == o.K && table == o.table;
  }
  bool operator!=(const Predicate& o) const { return !(*this == o); }
};

namespace detail {

inline size_t tuple_rank_base(const std::vector<int>& t, int base) {
  size_t r = 0;
  for (int v : t) r = r * static_cast<size_t>(base) + static_cast<size_t>(v);
  return r;
}

inline std::vector<int> unrank_tuple_base(size_t rank, int base, int arity) {
  std::vector<int> t(arity);
  for (int i = arity - 1; i >= 0; --i) {
    t[i] = static_cast<int>(rank % static_cast<size_t>(base));
    rank /= static_cast<size_t>(base);
  }
  return t;
}

}  // namespace detail

inline size_t predicate_cells(int K, int arity) {
  size_t cells = 1;
  for (int i = 0; i < arity; ++i) cells *= static_cast<size_t>(K);
  return cells;
}

inline void validate_predicate(const Space& space, const Predicate& p) {
  if (p.arity < 0) throw Error("predicate arity must be non-negative");
  if (p.K != space.K()) throw Error("predicate K differs from the space");
  if (p.table.size() != predicate_cells(p.K, p.arity))
    throw Error("predicate table size does not match K^arity");
  for (const ClopenSet& s : p.table)
    if (s.universe() != space.point_count())
      throw Error("predicate entry is a clopen set over a different space");
}

inline Predicate empty_predicate(const Space& space, int arity) {
  if (arity < 0) throw Error("predicate arity must be non-negative");
  Predicate p;
  p.arity = arity;
  p.K = space.K();
  p.table.assign(predicate_cells(p.K, arity), space.empty_clopen());
  return p;
}

inline const ClopenSet& predicate_at(const Predicate& p, const std::vector<int>& m) {
  if (static_cast<int>(m.size()) != p.arity)
    throw Error("tuple length differs from predicate arity");
  for (int v : m)
    if (v < 0 || v >= p.K) throw Error("tuple index out of range");
  return p.table[detail::tuple_rank_base(m, p.K)];
}

/// The predicate m |-> [[f(m)]] induced by a formula whose free-variable
/// slots all lie within the given arity.
inline Predicate predicate_from_formula(const Space& space, const Formula& f,
                                        int arity) {
  for (const detail::SlotVar& sv : detail::resolve_slots(f))
    if (sv.slot > arity)
      throw Error("free variable '" + sv.name + "' needs index slot " +
                  std::to_string(sv.slot) + ", arity is " + std::to_string(arity));
  Predicate p = empty_predicate(space, arity);
  std::vector<int> m(arity, 0);
  size_t rank = 0;
  do {
    p.table[rank++] = space.evaluate(f, m);
  } while (detail::next_tuple(m, space.K()));
  return p;
}

inline Predicate complement(const Predicate& p) {
  Predicate q = p;
  for (ClopenSet& s : q.table) s = ~s;
  return q;
}

// ---------------------------------------------------------------------------
// Extensionality

struct ExtensionalityReport {
  bool extensional = true;
  // Witness of failure: a point in p(m) /\ [[m = m']] missing from p(m').
  std::vector<int> m;
  std::vector<int> m_prime;
  long point = -1;
};

inline ExtensionalityReport check_extensionality(const Space& space,
                                                 const Predicate& p) {
  validate_predicate(space, p);
  ExtensionalityReport report;
  if (p.arity == 0) return report;
  std::vector<int> m(p.arity, 0);
  size_t rank = 0;
  do {
    const ClopenSet& here = p.table[rank];
    if (!here.empty()) {
      for (int pos = 0; pos < p.arity; ++pos) {
        size_t stride = predicate_cells(p.K, p.arity - 1 - pos);
        size_t base = rank - static_cast<size_t>(m[pos]) * stride;
        for (int v = 0; v < p.K; ++v) {
          if (v == m[pos]) continue;
          ClopenSet moved = here & space.eq_clopen(m[pos], v);
          size_t rank2 = base + static_cast<size_t>(v) * stride;
          if (!moved.is_subset_of(p.table[rank2])) {
            ClopenSet leak = moved & ~p.table[rank2];
            report.extensional = false;
            report.m = m;
            report.m_prime = m;
            report.m_prime[pos] = v;
            report.point = leak.first();
            return report;
          }
        }
      }
    }
    ++rank;
  } while (detail::next_tuple(m, p.K));
  return report;
}

// ---------------------------------------------------------------------------
// Invariance

struct InvarianceReport {
  bool invariant = true;
  // Lexicographically least witness of failure: the first permutation in the
  // supplied list and the first tuple m with pi(p(m)) != p(pi(m)), plus a
  // point in the symmetric difference.
  size_t permutation_index = 0;
  Permutation permutation;
  std::vector<int> m;
  long point = -1;
};

/// Invariance against a list of permutations; the default list generates the
/// whole symmetric group, so passing it decides invariance under all of S_K.
inline InvarianceReport check_invariance(const Space& space, const Predicate& p,
                                         const std::vector<Permutation>& perms) {
  validate_predicate(space, p);
  InvarianceReport report;
  for (size_t g = 0; g < perms.size(); ++g) {
    const Permutation& pi = perms[g];
    std::vector<int> map = point_map(space, pi);
    std::vector<int> m(p.arity, 0);
    size_t rank = 0;
    do {
      ClopenSet moved = apply_permutation(map, p.table[rank]);
      std::vector<int> pim = apply_to_indices(pi, m);
      const ClopenSet& there = p.table[detail::tuple_rank_base(pim, p.K)];
      if (moved != there) {
        report.invariant = false;
        report.permutation_index = g;
        report.permutation = pi;
        report.m = m;
        report.point = (moved ^ there).first();
        return report;
      }
      ++rank;
    } while (detail::next_tuple(m, p.K));
  }
  return report;
}

inline InvarianceReport check_invariance(const Space& space, const Predicate& p) {
  return check_invariance(space, p, generator_set(space.K()));
}

}  // namespace bvm

#pragma once

#include <set>
#include <string>
#include <vector>

#include "bvm/structure.hpp"

namespace bvm {

/// The complete description of a structure over a covering tuple of elements:
/// a formula chi(x1..xk) such that for any structure N over the same
/// signature and elements b1..bk of N,
///
///   N |= chi(b)  iff  there is an isomorphism M -> N sending elems to b.
///
/// Built from: every signed relation fact on position tuples, the function
/// graphs and constants (positive facts), the equality/inequality pattern
/// among positions, and the domain-closure clause `all v (v = x1 | ...)`.
/// `elems` must list every element of M at least once; repetitions are
/// allowed and show up as positive equalities. The closure variable is the
/// first of y, y1, y2, ... not contained in `avoid`.
inline Formula complete_description(const Signature& sig, const Structure& m,
                                    const std::vector<int>& elems,
                                    const std::set<std::string>& avoid = {}) {
  if (elems.empty()) throw Error("complete_description: empty element tuple");
  std::vector<bool> covered(m.size, false);
  for (int e : elems) {
    if (e < 0 || e >= m.size)
      throw Error("complete_description: element outside the domain");
    covered[e] = true;
  }
  for (int a = 0; a < m.size; ++a)
    if (!covered[a])
      throw Error("complete_description: element " + std::to_string(a) +
                  " not covered by the tuple");

  const int k = static_cast<int>(elems.size());
  auto x = [](int position) { return var("x" + std::to_string(position + 1)); };
  auto least_position = [&](int element) {
    for (int j = 0; j < k; ++j)
      if (elems[j] == element) return j;
    throw Error("complete_description: uncovered element");  // unreachable
  };

  std::vector<Formula> conjuncts;

  // Signed relation facts over all position tuples.
  for (size_t r = 0; r < sig.relations.size(); ++r) {
    int arity = sig.relations[r].second;
    std::vector<int> positions(arity, 0);
    do {
      std::vector<int> tuple(arity);
      std::vector<Term> args(arity);
      for (int i = 0; i < arity; ++i) {
        tuple[i] = elems[positions[i]];
        args[i] = x(positions[i]);
      }
      Formula fact = atom(sig.relations[r].first, args);
      bool holds = m.relations[r][detail::tuple_rank(tuple, m.size)] != 0;
      conjuncts.push_back(holds ? fact : neg(fact));
    } while (detail::next_tuple(positions, k));
  }

  // Function graphs: f(x_i1..x_ia) = x_j with j the least position holding
  // the value. Negative graph facts follow from these plus the inequalities.
  for (size_t f = 0; f < sig.functions.size(); ++f) {
    int arity = sig.functions[f].second;
    std::vector<int> positions(arity, 0);
    do {
      std::vector<int> tuple(arity);
      std::vector<Term> args(arity);
      for (int i = 0; i < arity; ++i) {
        tuple[i] = elems[positions[i]];
        args[i] = x(positions[i]);
      }
      int value = m.functions[f][detail::tuple_rank(tuple, m.size)];
      conjuncts.push_back(eq(app(sig.functions[f].first, args), x(least_position(value))));
    } while (detail::next_tuple(positions, k));
  }

  // Constants.
  for (size_t c = 0; c < sig.constants.size(); ++c)
    conjuncts.push_back(eq(cnst(sig.constants[c]), x(least_position(m.constants[c]))));

  // Equality/inequality pattern among positions.
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      Formula e = eq(x(i), x(j));
      conjuncts.push_back(elems[i] == elems[j] ? e : neg(e));
    }

  // Domain closure.
  std::string closure_var = "y";
  for (int suffix = 1; avoid.count(closure_var); ++suffix)
    closure_var = "y" + std::to_string(suffix);
  std::vector<Formula> options;
  for (int j = 0; j < k; ++j) options.push_back(eq(var(closure_var), x(j)));
  conjuncts.push_back(forall(closure_var, disj(options)));

  return conj(conjuncts);
}

}  // namespace bvm

#pragma once

#include <algorithm>
#include <vector>

#include "bvm/isomorphism.hpp"
#include "bvm/structure.hpp"
#include "bvm/theory.hpp"

namespace bvm {

/// All models of a theory up to isomorphism, sizes 1..n_max, in canonical
/// order (increasing structure encoding), with their automorphism groups.
struct ModelClass {
  Theory theory;
  int n_max = 0;
  std::vector<Structure> structures;
  std::vector<std::vector<std::vector<int>>> automorphisms;
};

namespace detail {

/// Raw (labelled) candidate count for domain size n; saturates at cap+1.
inline size_t raw_candidate_count(const Signature& sig, int n, size_t cap) {
  auto mul_pow = [&](size_t acc, size_t base, size_t exp) {
    for (size_t i = 0; i < exp; ++i) {
      if (acc > cap / base + 1) return cap + 1;
      acc *= base;
    }
    return acc;
  };
  size_t count = 1;
  for (const auto& [name, arity] : sig.relations)
    count = mul_pow(count, 2, pow_size(n, arity));
  for (const auto& [name, arity] : sig.functions)
    count = mul_pow(count, static_cast<size_t>(n), pow_size(n, arity));
  count = mul_pow(count, static_cast<size_t>(n), sig.constants.size());
  return count;
}

/// Odometer over all labelled structures of size n, in increasing encoding
/// order (the encoding tail is treated as a mixed-radix counter with the
/// rightmost digit least significant).
class StructureOdometer {
 public:
  StructureOdometer(const Signature& sig, int n) : sig_(sig), n_(n) {
    for (const auto& [name, arity] : sig.relations)
      sizes_rel_.push_back(pow_size(n, arity));
    for (const auto& [name, arity] : sig.functions)
      sizes_fun_.push_back(pow_size(n, arity));
    current_.size = n;
    for (size_t cells : sizes_rel_) current_.relations.emplace_back(cells, 0);
    for (size_t cells : sizes_fun_) current_.functions.emplace_back(cells, 0);
    current_.constants.assign(sig.constants.size(), 0);
    done_ = false;
  }

  bool done() const { return done_; }
  const Structure& current() const { return current_; }

  void advance() {
    // Increment from the least significant digit: constants, then function
    // tables, then relation bitmaps, rightmost cell first.
    for (int c = static_cast<int>(current_.constants.size()) - 1; c >= 0; --c) {
      if (++current_.constants[c] < n_) return;
      current_.constants[c] = 0;
    }
    for (int f = static_cast<int>(current_.functions.size()) - 1; f >= 0; --f)
      for (int i = static_cast<int>(sizes_fun_[f]) - 1; i >= 0; --i) {
        if (++current_.functions[f][i] < n_) return;
        current_.functions[f][i] = 0;
      }
    for (int r = static_cast<int>(current_.relations.size()) - 1; r >= 0; --r)
      for (int i = static_cast<int>(sizes_rel_[r]) - 1; i >= 0; --i) {
        if (++current_.relations[r][i] < 2) return;
        current_.relations[r][i] = 0;
      }
    done_ = true;
  }

 private:
  const Signature& sig_;
  int n_;
  std::vector<size_t> sizes_rel_, sizes_fun_;
  Structure current_;
  bool done_;
};

inline bool satisfies_axioms(const Theory& theory, const Structure& m) {
  for (const Formula& axiom : theory.axioms)
    if (!evaluate_classical(theory.sig, m, axiom, {})) return false;
  return true;
}

/// True when the structure's encoding is minimal within its isomorphism
/// class, i.e. it is the canonical representative.
inline bool is_canonical(const Signature& sig, const Structure& m) {
  std::vector<int> perm(m.size);
  for (int i = 0; i < m.size; ++i) perm[i] = i;
  std::vector<int> base = encode(m);
  while (std::next_permutation(perm.begin(), perm.end()))
    if (encode(relabel(sig, m, perm)) < base) return false;
  return true;
}

}  // namespace detail

constexpr size_t kDefaultCandidateCap = 1000000;

/// Enumerate all models of the theory with 1 <= size <= n_max, up to
/// isomorphism, keeping the least-encoding representative of each class.
/// Errors when the raw labelled candidate count exceeds the cap.
inline ModelClass enumerate_models(const Theory& theory, int n_max,
                                   size_t cap = kDefaultCandidateCap) {
  if (n_max < 1) throw Error("n_max must be at least 1");
  validate(theory.sig);

  size_t total = 0;
  for (int n = 1; n <= n_max; ++n) {
    total += detail::raw_candidate_count(theory.sig, n, cap);
    if (total > cap)
      throw Error("resource cap exceeded: more than " + std::to_string(cap) +
                  " raw structure candidates up to size " + std::to_string(n_max));
  }

  ModelClass out;
  out.theory = theory;
  out.n_max = n_max;
  for (int n = 1; n <= n_max; ++n) {
    for (detail::StructureOdometer odo(theory.sig, n); !odo.done(); odo.advance()) {
      const Structure& m = odo.current();
      if (!detail::satisfies_axioms(theory, m)) continue;
      if (!detail::is_canonical(theory.sig, m)) continue;
      out.structures.push_back(m);
      out.automorphisms.push_back(automorphisms(theory.sig, m));
    }
  }
  return out;
}

}  // namespace bvm

#pragma once

#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "bvm/description.hpp"
#include "bvm/predicate.hpp"

// Synthesis of defining formulas. Given an extensional invariant predicate
// p of arity n, produce a formula psi (free variables y for n=1, y1..yn
// otherwise) whose value matches p on every index tuple.
//
// The pipeline mirrors the structure of the definability argument:
//
//   eq_alpha_formula     the equality pattern an enumeration imposes on a
//                        chosen index tuple, as a conjunction of equations;
//   local_formula        at a point (M, alpha) inside a target clopen U,
//                        a description delta with witness indices xi whose
//                        basic clopen U_delta = [[delta]](xi, eta0) contains
//                        the point and sits inside U;
//   zeta_witness         the index-relocation construction certifying that
//                        delta's satisfying assignments can be re-indexed
//                        onto the pattern of (xi, eta0) by a permutation;
//   eta_cover            for one tuple eta0: local data whose basic clopens
//                        cover p(eta0), each closed existentially to a
//                        formula psi_i with U_i <= [[psi_i(eta0)]] and, for
//                        invariant extensional p at balanced scale,
//                        [[psi_i(eta)]] <= p(eta) for every eta;
//   global_family        the union of those families over all eta0, with
//                        duplicate formula texts removed;
//   synthesize_definition families for p and its complement, greedy finite
//                        subcovers of the (point, tuple) incidences, the
//                        disjunction of the selected members for p, and an
//                        exact entry-by-entry verification.
//
// Containment of [[psi_i(eta)]] in p(eta) can genuinely fail in unbalanced
// mode (a predicate may count fibre sizes, which no formula sees); such
// leaks are recorded as violations and surface as verified=false, never as
// exceptions.

namespace bvm {

namespace detail {

inline std::string csv(const std::vector<int>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

/// Predicate slot variable names: bare y for unary, y1..yn otherwise.
inline std::string slot_var_name(int t, int n) {
  return n == 1 ? "y" : "y" + std::to_string(t + 1);
}

}  // namespace detail

/// The equality pattern of alpha on (xi, eta0) as a formula: x_i = x_j for
/// i < j with alpha(xi_i) = alpha(xi_j), then x_i = y_t for alpha(xi_i) =
/// alpha(eta0_t), i outermost. Empty conjunction is `true`.
inline Formula eq_alpha_formula(const Enumeration& alpha, const std::vector<int>& xi,
                                const std::vector<int>& eta0) {
  const int K = static_cast<int>(alpha.size());
  for (int i : xi)
    if (i < 0 || i >= K) throw Error("index out of range");
  for (int i : eta0)
    if (i < 0 || i >= K) throw Error("index out of range");
  const int n = static_cast<int>(eta0.size());
  std::vector<Formula> conjuncts;
  for (size_t i = 0; i < xi.size(); ++i)
    for (size_t j = i + 1; j < xi.size(); ++j)
      if (alpha[xi[i]] == alpha[xi[j]])
        conjuncts.push_back(eq(var("x" + std::to_string(i + 1)),
                               var("x" + std::to_string(j + 1))));
  for (size_t i = 0; i < xi.size(); ++i)
    for (int t = 0; t < n; ++t)
      if (alpha[xi[i]] == alpha[eta0[t]])
        conjuncts.push_back(eq(var("x" + std::to_string(i + 1)),
                               var(detail::slot_var_name(t, n))));
  return conj(conjuncts);
}

// ---------------------------------------------------------------------------
// Index relocation

struct ZetaResult {
  bool ok = false;
  std::vector<int> zeta;
  int exhausted_element = -1;  // element whose fibre ran out, when that failed
  std::string reason;
};

/// Find indices zeta with beta(zeta_i) = b_i such that (zeta, eta) carries
/// exactly the equality pattern of (xi, eta0). Choices forced by the pattern
/// are taken (xi_i repeating an earlier xi_j forces zeta_j; xi_i equal to
/// some eta0_t forces eta_t); every free choice takes the least index of the
/// required fibre not yet used and distinct from the eta indices. Fails when
/// a fibre is exhausted (finite-scale artifact) or when the pattern of
/// (eta, eta0) itself makes relocation impossible; a final exact check
/// guards both.
inline ZetaResult zeta_witness(const Enumeration& beta, const std::vector<int>& b,
                               const std::vector<int>& eta, const std::vector<int>& xi,
                               const std::vector<int>& eta0) {
  const int K = static_cast<int>(beta.size());
  ZetaResult r;
  if (b.size() != xi.size() || eta.size() != eta0.size()) {
    r.reason = "tuple lengths disagree";
    return r;
  }
  for (int i : xi)
    if (i < 0 || i >= K) throw Error("index out of range");
  for (int i : eta0)
    if (i < 0 || i >= K) throw Error("index out of range");
  for (int i : eta)
    if (i < 0 || i >= K) throw Error("index out of range");

  std::vector<bool> taken(K, false);
  for (int t : eta) taken[t] = true;
  std::vector<int> zeta;
  for (size_t i = 0; i < xi.size(); ++i) {
    int choice = -1;
    for (size_t j = 0; j < i && choice < 0; ++j)
      if (xi[j] == xi[i]) choice = zeta[j];
    for (size_t t = 0; t < eta0.size() && choice < 0; ++t)
      if (eta0[t] == xi[i]) choice = eta[t];
    if (choice < 0) {
      for (int h = 0; h < K; ++h)
        if (!taken[h] && beta[h] == b[i]) {
          choice = h;
          taken[h] = true;
          break;
        }
      if (choice < 0) {
        r.exhausted_element = b[i];
        r.reason = "no unused index enumerates element " + std::to_string(b[i]);
        return r;
      }
    }
    zeta.push_back(choice);
  }

  // Exact check: values match and the pattern is reproduced.
  for (size_t i = 0; i < zeta.size(); ++i)
    if (beta[zeta[i]] != b[i]) {
      r.reason = "forced index " + std::to_string(zeta[i]) +
                 " does not enumerate element " + std::to_string(b[i]);
      return r;
    }
  std::vector<int> got = zeta, want = xi;
  got.insert(got.end(), eta.begin(), eta.end());
  want.insert(want.end(), eta0.begin(), eta0.end());
  for (size_t a = 0; a < got.size(); ++a)
    for (size_t c = a + 1; c < got.size(); ++c)
      if ((got[a] == got[c]) != (want[a] == want[c])) {
        r.reason = "index pattern cannot be reproduced at positions " +
                   std::to_string(a) + "," + std::to_string(c);
        return r;
      }
  r.ok = true;
  r.zeta = std::move(zeta);
  return r;
}

// ---------------------------------------------------------------------------
// Local descriptions

struct LocalDatum {
  Formula delta;            // free variables x1..xk and the slot variables
  std::vector<int> xi;      // witness indices for x1..xk
  std::vector<int> eta0;    // target tuple for the slot variables
  ClopenSet u_delta;        // [[delta]] at (xi, eta0)
};

namespace detail {

/// [[delta]] at (xi, eta0): slot variables are renamed into the x family
/// after the witness block, then everything evaluates through one tuple.
inline ClopenSet basic_clopen(const Space& space, const Formula& delta,
                              const std::vector<int>& xi,
                              const std::vector<int>& eta0) {
  const int k = static_cast<int>(xi.size());
  const int n = static_cast<int>(eta0.size());
  Formula renamed = delta;
  for (int t = 0; t < n; ++t)
    renamed = subst_free(renamed, slot_var_name(t, n),
                         "x" + std::to_string(k + t + 1));
  std::vector<int> indices = xi;
  indices.insert(indices.end(), eta0.begin(), eta0.end());
  return space.evaluate(renamed, indices);
}

inline Formula close_existentially(const Formula& delta, int k) {
  Formula out = delta;
  for (int i = k; i >= 1; --i) out = exists("x" + std::to_string(i), out);
  return out;
}

struct LocalParts {
  std::vector<int> elems;     // elements in first-occurrence order
  std::vector<int> xi;        // least index of each element's fibre
  std::vector<int> slot_pos;  // position of each slot value among elems
};

inline LocalParts local_parts(const Point& pt, int K, const std::vector<int>& eta0,
                              int model_size) {
  LocalParts parts;
  std::vector<int> pos_of_value(model_size, -1);
  for (int i = 0; i < K; ++i) {
    int v = pt.enumeration[i];
    if (pos_of_value[v] < 0) {
      pos_of_value[v] = static_cast<int>(parts.elems.size());
      parts.elems.push_back(v);
      parts.xi.push_back(i);
    }
  }
  for (int t : eta0) parts.slot_pos.push_back(pos_of_value[pt.enumeration[t]]);
  return parts;
}

inline std::set<std::string> slot_avoid(int n) {
  std::set<std::string> avoid;
  for (int t = 0; t < n; ++t) avoid.insert(slot_var_name(t, n));
  return avoid;
}

}  // namespace detail

/// A description of the point localized to a target clopen U: delta is the
/// complete description of the point's model over one representative index
/// per fibre, conjoined with the equality pattern binding the slot
/// variables. Its basic clopen contains the point and lies inside U. When
/// the fibre-representative form is too coarse for that inclusion (possible
/// when U is not a value of an invariant extensional predicate), the
/// description falls back to listing every index, which pins the point
/// exactly.
inline LocalDatum local_formula(const Space& space, size_t point_index,
                                const std::vector<int>& eta0, const ClopenSet& U) {
  if (point_index >= space.point_count()) throw Error("point index out of range");
  if (U.universe() != space.point_count())
    throw Error("clopen set belongs to a different space");
  if (eta0.empty()) throw Error("target tuple must not be empty");
  for (int t : eta0)
    if (t < 0 || t >= space.K()) throw Error("index out of range");
  if (!U.test(point_index)) throw Error("point lies outside the target clopen");

  const Point& pt = space.point(point_index);
  const Structure& M = space.models().structures[pt.model];
  const Signature& sig = space.models().theory.sig;
  const int n = static_cast<int>(eta0.size());
  std::set<std::string> avoid = detail::slot_avoid(n);

  detail::LocalParts parts = detail::local_parts(pt, space.K(), eta0, M.size);
  LocalDatum datum{
      land(complete_description(sig, M, parts.elems, avoid),
           eq_alpha_formula(pt.enumeration, parts.xi, eta0)),
      parts.xi, eta0, space.empty_clopen()};
  datum.u_delta = detail::basic_clopen(space, datum.delta, datum.xi, eta0);
  if (datum.u_delta.is_subset_of(U)) return datum;

  // Fallback: describe every index position; the basic clopen becomes the
  // point's singleton.
  std::vector<int> all_indices(space.K());
  for (int i = 0; i < space.K(); ++i) all_indices[i] = i;
  std::vector<int> full_elems(pt.enumeration.begin(), pt.enumeration.end());
  LocalDatum full{
      land(complete_description(sig, M, full_elems, avoid),
           eq_alpha_formula(pt.enumeration, all_indices, eta0)),
      all_indices, eta0, space.empty_clopen()};
  full.u_delta = detail::basic_clopen(space, full.delta, full.xi, eta0);
  if (!full.u_delta.test(point_index) || !full.u_delta.is_subset_of(U))
    throw Error("local description failed to localize the point");
  return full;
}

// ---------------------------------------------------------------------------
// Covers

struct CoverItem {
  size_t source_point;
  LocalDatum datum;
  Formula psi;  // existential closure of datum.delta
};

struct EtaCover {
  std::vector<CoverItem> items;
  std::vector<std::string> violations;
  size_t violation_count = 0;
};

namespace detail {

inline void note_violation(std::vector<std::string>& violations, size_t& count,
                           const std::string& text) {
  ++count;
  if (violations.size() < 64) violations.push_back(text);
}

}  // namespace detail

/// Cover of p(eta0) by basic clopens of local descriptions, one per point
/// of p(eta0) up to duplicate (formula, witness-indices) pairs. Each item
/// also carries the existential closure psi_i; the containment of
/// [[psi_i(eta)]] in p(eta) is checked for every eta and failures are
/// recorded as violations (they arise for non-invariant predicates and in
/// unbalanced mode).
inline EtaCover eta_cover(const Space& space, const Predicate& p,
                          const std::vector<int>& eta0) {
  validate_predicate(space, p);
  if (static_cast<int>(eta0.size()) != p.arity)
    throw Error("tuple length differs from predicate arity");
  const ClopenSet& U = p.table[detail::tuple_rank_base(eta0, p.K)];

  EtaCover cover;
  std::set<std::string> seen;
  for (size_t idx : U.indices()) {
    LocalDatum datum = local_formula(space, idx, eta0, U);
    Formula psi = detail::close_existentially(datum.delta,
                                              static_cast<int>(datum.xi.size()));
    std::string key = print(psi) + "\x1f" + detail::csv(datum.xi);
    if (seen.count(key)) continue;
    seen.insert(key);

    size_t item_index = cover.items.size();
    if (!datum.u_delta.is_subset_of(space.evaluate(psi, eta0)))
      detail::note_violation(cover.violations, cover.violation_count,
                             "member " + std::to_string(item_index) +
                                 ": basic clopen escapes the closure's value "
                                 "at the source tuple");
    std::vector<int> eta(p.arity, 0);
    size_t rank = 0;
    do {
      ClopenSet val = space.evaluate(psi, eta);
      if (!val.is_subset_of(p.table[rank]))
        detail::note_violation(cover.violations, cover.violation_count,
                               "member " + std::to_string(item_index) +
                                   " exceeds the predicate at tuple (" +
                                   detail::csv(eta) + "), point " +
                                   std::to_string((val & ~p.table[rank]).first()));
      ++rank;
    } while (detail::next_tuple(eta, p.K));

    cover.items.push_back({idx, std::move(datum), std::move(psi)});
  }
  return cover;
}

// ---------------------------------------------------------------------------
// Global family

struct FamilyMember {
  Formula psi;
  size_t source_point;
  std::vector<int> source_tuple;
};

struct Family {
  std::vector<FamilyMember> members;
  std::vector<std::string> violations;
  size_t violation_count = 0;
};

/// All per-tuple cover formulas over every tuple, deduplicated by formula
/// text, in discovery order (tuples by rank, points ascending). The member
/// text depends only on (model, first-occurrence element order, slot
/// representative positions), so members are built once per such shape.
inline Family global_family_detailed(const Space& space, const Predicate& p) {
  validate_predicate(space, p);
  if (p.arity < 1) throw Error("family construction needs arity at least 1");
  Family family;
  const ModelClass& mc = space.models();
  std::set<std::string> seen;

  std::vector<int> m(p.arity, 0);
  size_t rank = 0;
  do {
    for (size_t idx : p.table[rank].indices()) {
      const Point& pt = space.point(idx);
      const Structure& M = mc.structures[pt.model];
      detail::LocalParts parts = detail::local_parts(pt, space.K(), m, M.size);
      std::string key = std::to_string(pt.model) + "|" + detail::csv(parts.elems) +
                        "|" + detail::csv(parts.slot_pos);
      if (seen.count(key)) continue;
      seen.insert(key);

      Formula delta =
          land(complete_description(mc.theory.sig, M, parts.elems,
                                    detail::slot_avoid(p.arity)),
               eq_alpha_formula(pt.enumeration, parts.xi, m));
      Formula psi = detail::close_existentially(
          delta, static_cast<int>(parts.elems.size()));

      size_t member_index = family.members.size();
      std::vector<int> eta(p.arity, 0);
      size_t rank2 = 0;
      do {
        ClopenSet val = space.evaluate(psi, eta);
        if (!val.is_subset_of(p.table[rank2]))
          detail::note_violation(family.violations, family.violation_count,
                                 "member " + std::to_string(member_index) +
                                     " exceeds the predicate at tuple (" +
                                     detail::csv(eta) + "), point " +
                                     std::to_string((val & ~p.table[rank2]).first()));
        ++rank2;
      } while (detail::next_tuple(eta, p.K));
      if (!space.evaluate(psi, m).test(idx))
        detail::note_violation(family.violations, family.violation_count,
                               "member " + std::to_string(member_index) +
                                   " does not cover its source pair");

      family.members.push_back({std::move(psi), idx, m});
    }
    ++rank;
  } while (detail::next_tuple(m, p.K));
  return family;
}

inline std::vector<Formula> global_family(const Space& space, const Predicate& p) {
  std::vector<Formula> out;
  for (FamilyMember& member : global_family_detailed(space, p).members)
    out.push_back(std::move(member.psi));
  return out;
}

// ---------------------------------------------------------------------------
// Verification and synthesis

struct VerifyReport {
  bool matches = true;
  std::vector<int> tuple;
  long point = -1;
  bool excess = false;  // true: the formula holds where the predicate does not
  std::vector<uint8_t> tuple_ok;  // per tuple rank
};

/// Compare the value of a formula against a predicate entry by entry.
inline VerifyReport verify_definition(const Space& space, const Predicate& p,
                                      const Formula& f) {
  validate_predicate(space, p);
  Predicate q = predicate_from_formula(space, f, p.arity);
  VerifyReport report;
  report.tuple_ok.assign(q.table.size(), 1);
  std::vector<int> m(p.arity, 0);
  size_t rank = 0;
  do {
    ClopenSet diff = q.table[rank] ^ p.table[rank];
    if (!diff.empty()) {
      report.tuple_ok[rank] = 0;
      if (report.matches) {
        report.matches = false;
        report.tuple = m;
        report.point = diff.first();
        report.excess = q.table[rank].test(static_cast<size_t>(report.point));
      }
    }
    ++rank;
  } while (detail::next_tuple(m, p.K));
  return report;
}

struct SynthesisResult {
  int arity = 0;
  bool verified = false;
  Formula psi = falsity();
  std::vector<FamilyMember> psi_family;  // family for p
  std::vector<FamilyMember> phi_family;  // family for the complement
  std::vector<size_t> psi_selected;      // greedy cover picks, in pick order
  std::vector<size_t> phi_selected;
  std::vector<uint8_t> tuple_ok;  // per tuple rank: value matches p there
  std::vector<std::string> violations;
  size_t violation_count = 0;
  bool has_defect = false;
  std::vector<int> defect_tuple;
  long defect_point = -1;
  bool defect_excess = false;  // true: psi holds where p does not
};

namespace detail {

/// Greedy set cover of the (point, tuple) incidences of `target` using the
/// members' values clipped to the target; ties break toward the earliest
/// member. Coverage of every target pair by its own source member makes the
/// cover complete whenever the members' source checks passed.
inline std::vector<size_t> greedy_cover(const Space& space, const Predicate& target,
                                        const std::vector<FamilyMember>& members,
                                        std::vector<std::string>& violations,
                                        size_t& violation_count) {
  const size_t P = space.point_count();
  const size_t cells = target.table.size();
  ClopenSet uncovered(P * cells);
  for (size_t rank = 0; rank < cells; ++rank)
    for (size_t idx : target.table[rank].indices()) uncovered.set(rank * P + idx);

  std::vector<ClopenSet> coverage;
  coverage.reserve(members.size());
  for (const FamilyMember& member : members) {
    ClopenSet cov(P * cells);
    std::vector<int> eta(target.arity, 0);
    size_t rank = 0;
    do {
      ClopenSet val = space.evaluate(member.psi, eta) & target.table[rank];
      for (size_t idx : val.indices()) cov.set(rank * P + idx);
      ++rank;
    } while (next_tuple(eta, target.K));
    coverage.push_back(std::move(cov));
  }

  std::vector<size_t> selected;
  while (!uncovered.empty()) {
    size_t best = 0, best_count = 0;
    for (size_t i = 0; i < coverage.size(); ++i) {
      size_t c = (coverage[i] & uncovered).count();
      if (c > best_count) {
        best_count = c;
        best = i;
      }
    }
    if (best_count == 0) {
      note_violation(violations, violation_count,
                     "cover stalled with " + std::to_string(uncovered.count()) +
                         " pairs uncovered");
      break;
    }
    selected.push_back(best);
    uncovered &= ~coverage[best];
  }
  return selected;
}

}  // namespace detail

/// Full synthesis: families for the predicate and its complement, greedy
/// finite subcovers of both incidence sets (so every (point, tuple) pair is
/// covered by one side), the disjunction of the selected members for p, and
/// an exact verification. Requires an extensional invariant predicate.
inline SynthesisResult synthesize_definition(const Space& space, const Predicate& p) {
  validate_predicate(space, p);
  if (p.arity < 1) throw Error("synthesis needs arity at least 1");
  ExtensionalityReport ext = check_extensionality(space, p);
  if (!ext.extensional)
    throw Error("predicate is not extensional (fails from tuple (" +
                detail::csv(ext.m) + ") to (" + detail::csv(ext.m_prime) +
                ") at point " + std::to_string(ext.point) +
                "); only extensional predicates have defining formulas");
  InvarianceReport inv = check_invariance(space, p);
  if (!inv.invariant)
    throw Error("predicate is not invariant (permutation " + print(inv.permutation) +
                " at tuple (" + detail::csv(inv.m) + "), point " +
                std::to_string(inv.point) +
                "); only invariant predicates have defining formulas");

  SynthesisResult result;
  result.arity = p.arity;

  Family fam_p = global_family_detailed(space, p);
  result.psi_family = std::move(fam_p.members);
  for (const std::string& v : fam_p.violations)
    detail::note_violation(result.violations, result.violation_count, v);
  result.violation_count += fam_p.violation_count - fam_p.violations.size();

  Predicate q = complement(p);
  Family fam_q = global_family_detailed(space, q);
  result.phi_family = std::move(fam_q.members);
  for (const std::string& v : fam_q.violations)
    detail::note_violation(result.violations, result.violation_count,
                           "complement " + v);
  result.violation_count += fam_q.violation_count - fam_q.violations.size();

  result.psi_selected = detail::greedy_cover(space, p, result.psi_family,
                                             result.violations,
                                             result.violation_count);
  result.phi_selected = detail::greedy_cover(space, q, result.phi_family,
                                             result.violations,
                                             result.violation_count);

  std::vector<Formula> parts;
  for (size_t i : result.psi_selected) parts.push_back(result.psi_family[i].psi);
  result.psi = disj(parts);

  VerifyReport check = verify_definition(space, p, result.psi);
  result.verified = check.matches;
  result.tuple_ok = std::move(check.tuple_ok);
  if (!check.matches) {
    result.has_defect = true;
    result.defect_tuple = check.tuple;
    result.defect_point = check.point;
    result.defect_excess = check.excess;
  }
  return result;
}

}  // namespace bvm

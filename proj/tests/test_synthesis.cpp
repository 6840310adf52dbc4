// Definability machinery: equality-pattern formulas, index relocation,
// local descriptions, per-tuple covers, global families, greedy selection,
// and the end-to-end synthesis round trip — including the negative control
// where an invariant predicate admits no defining formula at this scale.

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "bvm/bvm.hpp"
#include "support/helpers.hpp"

using testsupport::make_space;

namespace {

bvm::Predicate formula_predicate(const bvm::Space& space,
                                 const std::string& text, int arity) {
  return bvm::predicate_from_formula(
      space, bvm::parse_formula(text, space.models().theory.sig), arity);
}

// Union of a subset of atoms, chosen by bitmask.
bvm::Predicate atom_union(const bvm::Space& space,
                          const std::vector<bvm::Predicate>& atoms,
                          unsigned mask) {
  bvm::Predicate out = bvm::empty_predicate(space, atoms[0].arity);
  for (size_t i = 0; i < atoms.size(); ++i)
    if (mask & (1u << i))
      for (size_t rank = 0; rank < out.table.size(); ++rank)
        out.table[rank] = out.table[rank] | atoms[i].table[rank];
  return out;
}

// The unbalanced-mode control: membership at eta depends on the size of the
// enumeration fibre through eta, which no formula can see.
bvm::Predicate fibre_size_predicate(const bvm::Space& space) {
  bvm::Predicate q = bvm::empty_predicate(space, 1);
  for (int eta = 0; eta < space.K(); ++eta) {
    for (size_t i = 0; i < space.point_count(); ++i) {
      const bvm::Point& pt = space.point(i);
      int hits = 0;
      for (int v : pt.enumeration)
        if (v == pt.enumeration[eta]) ++hits;
      if (hits == 1) q.table[eta].set(i);
    }
  }
  return q;
}

}  // namespace

TEST_CASE("equality-pattern formulas enumerate matching index pairs") {
  bvm::Enumeration alpha = {0, 0, 1, 1};
  CHECK(bvm::print(bvm::eq_alpha_formula(alpha, {0, 1, 2}, {3})) ==
        "x1 = x2 & x3 = y");
  // injective on the chosen indices: empty conjunction
  CHECK(bvm::print(bvm::eq_alpha_formula(alpha, {0, 2}, {})) == "true");
  bvm::Enumeration constant = {0, 0, 0};
  CHECK(bvm::print(bvm::eq_alpha_formula(constant, {0, 1}, {2})) ==
        "x1 = x2 & x1 = y & x2 = y");
  // n-ary slots use y1..yn
  CHECK(bvm::print(bvm::eq_alpha_formula(alpha, {0}, {1, 2})) ==
        "x1 = y1");
  CHECK_THROWS_AS(bvm::eq_alpha_formula(alpha, {4}, {0}), bvm::Error);
}

TEST_CASE("index relocation finds least witnesses with the exact pattern") {
  bvm::Enumeration beta = {0, 0, 1, 1};

  SECTION("free choices take the least unused index off the eta set") {
    bvm::ZetaResult r = bvm::zeta_witness(beta, {0, 1}, {2}, {0, 2}, {3});
    REQUIRE(r.ok);
    CHECK(r.zeta == std::vector<int>{0, 3});
  }

  SECTION("a slot equality forces the eta index") {
    // xi_1 = eta0_1 pattern forces zeta_1 = eta_1
    bvm::ZetaResult r = bvm::zeta_witness(beta, {1}, {2}, {3}, {3});
    REQUIRE(r.ok);
    CHECK(r.zeta == std::vector<int>{2});
  }

  SECTION("a repeated xi index forces the repeat in zeta") {
    bvm::ZetaResult r = bvm::zeta_witness(beta, {0, 0}, {3}, {0, 0}, {3});
    REQUIRE(r.ok);
    CHECK(r.zeta == std::vector<int>{0, 0});
  }

  SECTION("fibre exhaustion is reported with the failing element") {
    // need two distinct indices carrying element 0 beyond the eta index, but
    // the fibre has only two members and one is consumed by eta
    bvm::Enumeration thin = {0, 0, 1, 1};
    bvm::ZetaResult r = bvm::zeta_witness(thin, {0, 0}, {0}, {1, 2}, {3});
    REQUIRE(!r.ok);
    CHECK(r.exhausted_element == 0);
    CHECK(!r.reason.empty());
  }
}

TEST_CASE("local descriptions pin the point inside the target clopen") {
  auto space = make_space(testsupport::kUnaryTheory, 2, 4);

  SECTION("membership and inclusion for predicate values") {
    bvm::Predicate p = formula_predicate(*space, "r(y)", 1);
    for (int eta0 = 0; eta0 < 4; ++eta0) {
      const bvm::ClopenSet& U = bvm::predicate_at(p, {eta0});
      for (size_t idx : U.indices()) {
        bvm::LocalDatum datum = bvm::local_formula(*space, idx, {eta0}, U);
        INFO("point " << idx << " eta0 " << eta0
                      << " delta: " << bvm::print(datum.delta));
        CHECK(datum.u_delta.test(idx));
        CHECK(datum.u_delta.is_subset_of(U));
        CHECK(datum.eta0 == std::vector<int>{eta0});
      }
    }
  }

  SECTION("a singleton target is matched exactly") {
    for (size_t idx = 0; idx < space->point_count(); ++idx) {
      bvm::ClopenSet U = space->empty_clopen();
      U.set(idx);
      bvm::LocalDatum datum = bvm::local_formula(*space, idx, {0}, U);
      CHECK(datum.u_delta == U);
    }
  }

  SECTION("the full space is always a valid target") {
    bvm::ClopenSet X = space->full_clopen();
    for (size_t idx = 0; idx < space->point_count(); ++idx) {
      bvm::LocalDatum datum = bvm::local_formula(*space, idx, {0}, X);
      CHECK(datum.u_delta.test(idx));
    }
  }

  SECTION("a point outside the target is rejected") {
    bvm::ClopenSet U = space->empty_clopen();
    U.set(0);
    CHECK_THROWS_AS(bvm::local_formula(*space, 1, {0}, U), bvm::Error);
  }
}

TEST_CASE("relocation moves every satisfying point into the basic clopen") {
  // the literal orbit property of local descriptions, checked exhaustively
  auto space = make_space(testsupport::kUnaryTheory, 2, 4);
  const bvm::Signature& sig = space->models().theory.sig;
  bvm::Predicate p = formula_predicate(*space, "r(y)", 1);

  for (int eta0 = 0; eta0 < 4; ++eta0) {
    const bvm::ClopenSet& U = bvm::predicate_at(p, {eta0});
    for (size_t idx : U.indices()) {
      bvm::LocalDatum datum = bvm::local_formula(*space, idx, {eta0}, U);
      const int k = static_cast<int>(datum.xi.size());

      for (size_t other = 0; other < space->point_count(); ++other) {
        const bvm::Point& pt = space->point(other);
        const bvm::Structure& N = space->models().structures[pt.model];
        // enumerate every (b, c) with N |= delta(b, c)
        std::vector<int> assignment(k + 1, 0);
        for (;;) {
          std::map<std::string, int> asgn;
          for (int i = 0; i < k; ++i)
            asgn["x" + std::to_string(i + 1)] = assignment[i];
          asgn["y"] = assignment[k];
          if (bvm::evaluate_classical(sig, N, datum.delta, asgn)) {
            for (int eta = 0; eta < 4; ++eta) {
              if (pt.enumeration[eta] != assignment[k]) continue;
              std::vector<int> b(assignment.begin(), assignment.begin() + k);
              bvm::ZetaResult z =
                  bvm::zeta_witness(pt.enumeration, b, {eta}, datum.xi, {eta0});
              REQUIRE(z.ok);
              std::vector<std::pair<int, int>> pairs;
              for (int i = 0; i < k; ++i) pairs.push_back({z.zeta[i], datum.xi[i]});
              pairs.push_back({eta, eta0});
              bvm::Permutation pi = bvm::extend_partial(4, pairs);
              size_t moved = bvm::apply_permutation(*space, pi, other);
              INFO("point " << other << " eta " << eta << " -> " << moved);
              CHECK(datum.u_delta.test(moved));
            }
          }
          // odometer over domain values
          int i = 0;
          for (; i <= k; ++i) {
            if (++assignment[i] < N.size) break;
            assignment[i] = 0;
          }
          if (i > k) break;
        }
      }
    }
  }
}

TEST_CASE("per-tuple covers satisfy the three containments") {
  auto space = make_space(testsupport::kUnaryTheory, 2, 4);
  bvm::Predicate p = formula_predicate(*space, "r(y)", 1);

  for (int eta0 = 0; eta0 < 4; ++eta0) {
    bvm::EtaCover cover = bvm::eta_cover(*space, p, {eta0});
    CHECK(cover.violations.empty());
    CHECK(cover.violation_count == 0);

    bvm::ClopenSet target = bvm::predicate_at(p, {eta0});
    bvm::ClopenSet basics = space->empty_clopen();
    bvm::ClopenSet closures = space->empty_clopen();
    for (const bvm::CoverItem& item : cover.items) {
      // the basic clopen sits under the closure's value at the source tuple
      bvm::ClopenSet at_eta0 = space->evaluate(item.psi, {eta0});
      CHECK(item.datum.u_delta.is_subset_of(at_eta0));
      basics = basics | item.datum.u_delta;
      closures = closures | at_eta0;
      // and the closure never leaks out of the predicate anywhere
      for (int eta = 0; eta < 4; ++eta)
        CHECK(space->evaluate(item.psi, {eta})
                  .is_subset_of(bvm::predicate_at(p, {eta})));
    }
    CHECK(basics == target);    // the basic clopens cover the value
    CHECK(closures == target);  // hence the closures recover it exactly
  }
}

TEST_CASE("the empty predicate yields an empty family") {
  auto space = make_space(testsupport::kUnaryTheory, 2, 4);
  bvm::Predicate none = bvm::empty_predicate(*space, 1);
  bvm::Family family = bvm::global_family_detailed(*space, none);
  CHECK(family.members.empty());
  CHECK(family.violations.empty());
}

TEST_CASE("global families recover the predicate at every tuple") {
  auto space = make_space(testsupport::kUnaryTheory, 2, 4);
  for (const char* text : {"r(y)", "~r(y)", "r(y1) & r(y2)", "y1 = y2"}) {
    int arity = std::string(text).find("y1") != std::string::npos ? 2 : 1;
    bvm::Predicate p = formula_predicate(*space, text, arity);
    bvm::Family family = bvm::global_family_detailed(*space, p);
    INFO("predicate: " << text << " members: " << family.members.size());
    CHECK(family.violations.empty());

    std::vector<int> eta(arity, 0);
    size_t rank = 0;
    do {
      bvm::ClopenSet u = space->empty_clopen();
      for (const bvm::FamilyMember& member : family.members)
        u = u | space->evaluate(member.psi, eta);
      CHECK(u == p.table[rank]);
      ++rank;
    } while (bvm::detail::next_tuple(eta, 4));
  }
}

TEST_CASE("the family builder matches the concatenated per-tuple covers") {
  auto space = make_space(testsupport::kUnaryTheory, 2, 4);
  for (const char* text : {"r(y)", "~r(y) & ex u r(u)"}) {
    bvm::Predicate p = formula_predicate(*space, text, 1);
    bvm::Family fast = bvm::global_family_detailed(*space, p);

    std::set<std::string> via_builder;
    for (const bvm::FamilyMember& member : fast.members)
      via_builder.insert(bvm::print(member.psi));
    CHECK(via_builder.size() == fast.members.size());  // no duplicate texts

    std::set<std::string> via_covers;
    for (int eta0 = 0; eta0 < 4; ++eta0) {
      bvm::EtaCover cover = bvm::eta_cover(*space, p, {eta0});
      for (const bvm::CoverItem& item : cover.items)
        via_covers.insert(bvm::print(item.psi));
    }
    INFO("predicate: " << text);
    CHECK(via_builder == via_covers);
  }
}

TEST_CASE("synthesis round-trips formula-defined predicates") {
  auto space = make_space(testsupport::kUnaryTheory, 2, 4);
  for (const char* text :
       {"r(y)", "~r(y)", "r(y) | all u all w u = w", "ex u (r(u) & ~(u = y))"}) {
    bvm::Predicate p = formula_predicate(*space, text, 1);
    bvm::SynthesisResult result = bvm::synthesize_definition(*space, p);
    INFO("predicate: " << text << " psi: " << bvm::print(result.psi));
    CHECK(result.verified);
    CHECK(result.violations.empty());
    CHECK(!result.has_defect);
    bvm::VerifyReport check = bvm::verify_definition(*space, p, result.psi);
    CHECK(check.matches);
  }
}

TEST_CASE("synthesized definitions agree with hand-written equivalents") {
  auto space = make_space(testsupport::kUnaryTheory, 2, 4);
  const bvm::Signature& sig = space->models().theory.sig;

  // membership: r at the slot in size-2 models, everything in size-1 models
  bvm::Predicate p = formula_predicate(*space, "r(y) | all u all w u = w", 1);
  bvm::SynthesisResult result = bvm::synthesize_definition(*space, p);
  REQUIRE(result.verified);

  bvm::Formula hand = bvm::parse_formula("r(y) | all u all w u = w", sig);
  CHECK(bvm::verify_definition(*space, p, hand).matches);

  // the synthesized text also defines the hand-built table and vice versa
  bvm::Predicate from_psi = bvm::predicate_from_formula(*space, result.psi, 1);
  CHECK(from_psi == p);
}

TEST_CASE("verification reports the least mismatch with direction") {
  auto space = make_space(testsupport::kUnaryTheory, 2, 4);
  bvm::Predicate p = formula_predicate(*space, "r(y)", 1);
  const bvm::Signature& sig = space->models().theory.sig;

  bvm::VerifyReport good = bvm::verify_definition(*space, p, bvm::parse_formula("r(y)", sig));
  CHECK(good.matches);
  CHECK(std::count(good.tuple_ok.begin(), good.tuple_ok.end(), 1) == 4);

  bvm::VerifyReport bad =
      bvm::verify_definition(*space, p, bvm::parse_formula("~r(y)", sig));
  REQUIRE(!bad.matches);
  CHECK(bad.tuple == std::vector<int>{0});
  CHECK(bad.point == 0);
  CHECK(bad.excess);  // the formula holds at a point the predicate excludes
}

TEST_CASE("atom unions synthesize and verify across both arities") {
  auto space = make_space(testsupport::kUnaryTheory, 2, 4);

  SECTION("every union of value-1 atoms") {
    std::vector<bvm::Predicate> atoms = bvm::invariant_atoms(*space, 1);
    REQUIRE(atoms.size() == 6);
    for (unsigned mask = 0; mask < 64; ++mask) {
      bvm::Predicate p = atom_union(*space, atoms, mask);
      bvm::SynthesisResult result = bvm::synthesize_definition(*space, p);
      INFO("mask " << mask << " psi: " << bvm::print(result.psi));
      CHECK(result.verified);
      CHECK(bvm::verify_definition(*space, p, result.psi).matches);
    }
  }

  SECTION("sampled unions of value-2 atoms") {
    std::vector<bvm::Predicate> atoms = bvm::invariant_atoms(*space, 2);
    REQUIRE(atoms.size() == 10);
    std::mt19937_64 rng(0xa70a2u);
    for (int trial = 0; trial < 60; ++trial) {
      unsigned mask = static_cast<unsigned>(rng() % 1024);
      bvm::Predicate p = atom_union(*space, atoms, mask);
      bvm::SynthesisResult result = bvm::synthesize_definition(*space, p);
      INFO("mask " << mask);
      CHECK(result.verified);
    }
  }
}

TEST_CASE("synthesis refuses tables that fail the preconditions") {
  auto space = make_space(testsupport::kUnaryTheory, 2, 4);

  SECTION("not extensional") {
    bvm::Predicate p = bvm::empty_predicate(*space, 1);
    p.table[0] = space->full_clopen();  // depends on the index itself
    CHECK_THROWS_WITH(bvm::synthesize_definition(*space, p),
                      Catch::Matchers::ContainsSubstring("extensional"));
  }

  SECTION("extensional but not invariant") {
    // a single (point, value) incidence at a rigid model: extensional by
    // construction, but the group moves the point elsewhere
    bvm::Predicate p = bvm::empty_predicate(*space, 1);
    size_t rigid_point = 5;  // first point of the one-automorphism model
    REQUIRE(space->models()
                .automorphisms[space->point(rigid_point).model]
                .size() == 1);
    for (int eta = 0; eta < 4; ++eta)
      if (space->point(rigid_point).enumeration[eta] == 0)
        p.table[eta].set(rigid_point);
    REQUIRE(bvm::check_extensionality(*space, p).extensional);
    REQUIRE(!bvm::check_invariance(*space, p).invariant);
    CHECK_THROWS_WITH(bvm::synthesize_definition(*space, p),
                      Catch::Matchers::ContainsSubstring("invariant"));
  }

  SECTION("arity zero") {
    bvm::Predicate p;
    p.arity = 0;
    p.K = 4;
    p.table = {space->full_clopen()};
    CHECK_THROWS_AS(bvm::synthesize_definition(*space, p), bvm::Error);
  }
}

TEST_CASE("the fibre-size control stays invariant but unverifiable") {
  auto space =
      make_space(testsupport::kUnaryTheory, 2, 4, bvm::Mode::Unbalanced);
  REQUIRE(space->point_count() == 30);
  bvm::Predicate q = fibre_size_predicate(*space);

  CHECK(bvm::check_extensionality(*space, q).extensional);
  CHECK(bvm::check_invariance(*space, q).invariant);

  bvm::SynthesisResult result = bvm::synthesize_definition(*space, q);
  CHECK(!result.verified);
  CHECK(result.has_defect);
  CHECK(!result.violations.empty());
  // the defect names a genuine discrepancy
  bvm::Predicate from_psi = bvm::predicate_from_formula(*space, result.psi, 1);
  size_t rank = bvm::detail::tuple_rank_base(result.defect_tuple, 4);
  bool in_formula = from_psi.table[rank].test(result.defect_point);
  bool in_predicate = q.table[rank].test(result.defect_point);
  CHECK(in_formula != in_predicate);
  CHECK(result.defect_excess == (in_formula && !in_predicate));

  // whereas the same table on the balanced space is a plain atom union story:
  // every balanced fibre has size 2, so the predicate there is empty
  auto balanced = make_space(testsupport::kUnaryTheory, 2, 4);
  bvm::Predicate all_two = fibre_size_predicate(*balanced);
  for (const bvm::ClopenSet& cell : all_two.table) CHECK(cell.count() == 0);
}

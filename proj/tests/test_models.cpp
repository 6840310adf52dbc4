// Model enumeration against a brute-force census: every structure over the
// signature is generated raw, filtered by the axioms, and grouped into
// isomorphism classes by explicit permutation action. The enumerator must
// return exactly one representative per class, canonical and with the right
// automorphism group.

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "bvm/bvm.hpp"
#include "support/helpers.hpp"

namespace {

using bvm::Structure;

// Independent permutation action on structures (the oracle's own, written
// against the raw tables rather than the library's isomorphism search).
Structure permute(const bvm::Signature& sig, const Structure& m,
                  const std::vector<int>& theta) {
  Structure out;
  out.size = m.size;
  for (size_t r = 0; r < sig.relations.size(); ++r) {
    int arity = sig.relations[r].second;
    std::vector<uint8_t> table(m.relations[r].size(), 0);
    std::vector<int> t(arity, 0);
    size_t rank = 0;
    do {
      std::vector<int> image(arity);
      for (int i = 0; i < arity; ++i) image[i] = theta[t[i]];
      size_t image_rank = 0;
      for (int i = 0; i < arity; ++i)
        image_rank = image_rank * m.size + image[i];
      table[image_rank] = m.relations[r][rank];
      ++rank;
    } while (bvm::detail::next_tuple(t, m.size));
    out.relations.push_back(std::move(table));
  }
  for (size_t fi = 0; fi < sig.functions.size(); ++fi) {
    // Unary functions only in this suite: g(theta(x)) = theta(f(x)).
    REQUIRE(sig.functions[fi].second == 1);
    std::vector<int> table(m.size, 0);
    for (int x = 0; x < m.size; ++x) table[theta[x]] = theta[m.functions[fi][x]];
    out.functions.push_back(std::move(table));
  }
  for (int c : m.constants) out.constants.push_back(theta[c]);
  return out;
}

std::string encoding_key(const Structure& m) {
  std::string s = std::to_string(m.size) + ";";
  for (const auto& table : m.relations) {
    for (uint8_t v : table) s += char('0' + v);
    s += ';';
  }
  for (const auto& table : m.functions) {
    for (int v : table) s += std::to_string(v) + ",";
    s += ';';
  }
  for (int c : m.constants) s += std::to_string(c) + ",";
  return s;
}

std::vector<std::vector<int>> all_permutations(int n) {
  std::vector<int> theta(n);
  for (int i = 0; i < n; ++i) theta[i] = i;
  std::vector<std::vector<int>> out;
  do {
    out.push_back(theta);
  } while (std::next_permutation(theta.begin(), theta.end()));
  return out;
}

std::string orbit_min_encoding(const bvm::Signature& sig, const Structure& m) {
  std::string best;
  for (const auto& theta : all_permutations(m.size)) {
    std::string e = encoding_key(permute(sig, m, theta));
    if (best.empty() || e < best) best = e;
  }
  return best;
}

// All structures of exactly size n over the signature, raw (no axioms, no
// isomorphism collapse), generated by an odometer over the tables.
std::vector<Structure> raw_structures(const bvm::Signature& sig, int n) {
  std::vector<size_t> widths;  // cells per table
  for (const auto& rel : sig.relations) {
    size_t cells = 1;
    for (int i = 0; i < rel.second; ++i) cells *= n;
    widths.push_back(cells);
  }
  size_t rel_cells = 0;
  for (size_t w : widths) rel_cells += w;
  size_t fn_cells = 0;
  for (const auto& fn : sig.functions) {
    REQUIRE(fn.second == 1);
    fn_cells += n;
  }
  std::vector<Structure> out;
  std::vector<int> odo(rel_cells + fn_cells + sig.constants.size(), 0);
  for (;;) {
    Structure m;
    m.size = n;
    size_t pos = 0;
    for (size_t w : widths) {
      std::vector<uint8_t> table(w);
      for (size_t i = 0; i < w; ++i) table[i] = static_cast<uint8_t>(odo[pos++]);
      m.relations.push_back(std::move(table));
    }
    for (size_t fi = 0; fi < sig.functions.size(); ++fi) {
      std::vector<int> table(n);
      for (int i = 0; i < n; ++i) table[i] = odo[pos++];
      m.functions.push_back(std::move(table));
    }
    for (size_t ci = 0; ci < sig.constants.size(); ++ci)
      m.constants.push_back(odo[pos++]);
    out.push_back(std::move(m));

    // advance the odometer; relation cells are bits, the rest count to n-1
    size_t i = 0;
    for (; i < odo.size(); ++i) {
      int limit = i < rel_cells ? 2 : n;
      if (++odo[i] < limit) break;
      odo[i] = 0;
    }
    if (i == odo.size()) break;
  }
  return out;
}

bool satisfies(const bvm::Theory& theory, const Structure& m) {
  for (const bvm::Formula& axiom : theory.axioms)
    if (!bvm::evaluate_classical(theory.sig, m, axiom, {})) return false;
  return true;
}

// Distinct isomorphism classes of axiom-satisfying structures of size n,
// keyed by orbit-minimal encoding.
std::set<std::string> census(const bvm::Theory& theory, int n) {
  std::set<std::string> classes;
  for (const Structure& m : raw_structures(theory.sig, n))
    if (satisfies(theory, m)) classes.insert(orbit_min_encoding(theory.sig, m));
  return classes;
}

void check_against_census(const std::string& theory_text, int n_max,
                          const std::vector<size_t>& per_size) {
  bvm::Theory theory = bvm::parse_theory(theory_text);
  bvm::ModelClass models = bvm::enumerate_models(theory, n_max);

  std::set<std::string> expected;
  size_t expected_total = 0;
  for (int n = 1; n <= n_max; ++n) {
    std::set<std::string> classes = census(theory, n);
    CHECK(classes.size() == per_size[n - 1]);
    expected_total += classes.size();
    expected.insert(classes.begin(), classes.end());
  }
  REQUIRE(models.structures.size() == expected_total);

  std::set<std::string> got;
  for (const Structure& m : models.structures) {
    CHECK(satisfies(theory, m));
    got.insert(orbit_min_encoding(theory.sig, m));
  }
  CHECK(got == expected);  // one representative per class, none missed
}

}  // namespace

TEST_CASE("unary relation models match the brute-force census") {
  check_against_census(testsupport::kUnaryTheory, 2, {2, 3});
}

TEST_CASE("graph models match the brute-force census") {
  check_against_census(testsupport::kGraphTheory, 3, {1, 2, 4});
}

TEST_CASE("pointed function models match the brute-force census") {
  check_against_census(testsupport::kPointedTheory, 2, {2, 16});
}

TEST_CASE("unary models arrive in frozen canonical order") {
  bvm::Theory theory = bvm::parse_theory(testsupport::kUnaryTheory);
  bvm::ModelClass models = bvm::enumerate_models(theory, 2);
  REQUIRE(models.structures.size() == 5);
  const std::vector<int> sizes = {1, 1, 2, 2, 2};
  const std::vector<std::vector<uint8_t>> tables = {
      {0}, {1}, {0, 0}, {0, 1}, {1, 1}};
  for (size_t i = 0; i < 5; ++i) {
    CHECK(models.structures[i].size == sizes[i]);
    CHECK(models.structures[i].relations[0] == tables[i]);
  }
}

TEST_CASE("automorphism lists are the full stabilizer groups") {
  for (const char* text : {testsupport::kUnaryTheory, testsupport::kGraphTheory,
                           testsupport::kPointedTheory}) {
    bvm::Theory theory = bvm::parse_theory(text);
    int n_max = text == testsupport::kGraphTheory ? 3 : 2;
    bvm::ModelClass models = bvm::enumerate_models(theory, n_max);
    for (size_t i = 0; i < models.structures.size(); ++i) {
      const Structure& m = models.structures[i];
      std::set<std::vector<int>> expected;
      for (const auto& theta : all_permutations(m.size))
        if (encoding_key(permute(theory.sig, m, theta)) == encoding_key(m))
          expected.insert(theta);
      std::set<std::vector<int>> got(models.automorphisms[i].begin(),
                                     models.automorphisms[i].end());
      INFO("theory " << text << " model " << i);
      CHECK(got == expected);
    }
  }
}

TEST_CASE("unary automorphism group orders are frozen") {
  bvm::Theory theory = bvm::parse_theory(testsupport::kUnaryTheory);
  bvm::ModelClass models = bvm::enumerate_models(theory, 2);
  std::vector<size_t> orders;
  for (const auto& auts : models.automorphisms) orders.push_back(auts.size());
  CHECK(orders == std::vector<size_t>{1, 1, 2, 1, 2});
}

TEST_CASE("graph axioms hold in every enumerated model") {
  bvm::Theory theory = bvm::parse_theory(testsupport::kGraphTheory);
  bvm::ModelClass models = bvm::enumerate_models(theory, 3);
  REQUIRE(models.structures.size() == 7);
  for (const Structure& m : models.structures) {
    for (const bvm::Formula& axiom : theory.axioms)
      CHECK(bvm::evaluate_classical(theory.sig, m, axiom, {}));
  }
}

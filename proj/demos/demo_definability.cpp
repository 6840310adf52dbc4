// Walkthrough: build the space of enumerated models for a single unary
// relation, evaluate a few formulas, check a predicate's structural
// properties, and synthesize a defining formula with its certificate.

#include <cstdio>
#include <string>
#include <vector>

#include "bvm/bvm.hpp"

namespace {

std::string join(const std::vector<int>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(v[i]);
  }
  return out;
}

}  // namespace

int main() {
  // One unary relation r, no axioms: five models up to isomorphism at
  // sizes 1 and 2.
  bvm::Theory theory = bvm::parse_theory("relation r 1\n");
  bvm::ModelClass models = bvm::enumerate_models(theory, 2);
  std::printf("models up to isomorphism (sizes 1..2): %zu\n",
              models.structures.size());
  for (size_t i = 0; i < models.structures.size(); ++i) {
    const bvm::Structure& m = models.structures[i];
    std::string r_elems;
    for (int a = 0; a < m.size; ++a)
      if (m.relations[0][a]) r_elems += (r_elems.empty() ? "" : " ") +
                                        std::to_string(a);
    std::printf("  model %zu: size %d, r = {%s}, |Aut| = %zu\n", i, m.size,
                r_elems.c_str(), models.automorphisms[i].size());
  }

  // The space at scale K=4 with balanced fibres: one point per class of
  // (model, enumeration) pairs under isomorphism.
  bvm::Space space(std::move(models), 4, bvm::Mode::Balanced);
  std::printf("\nspace: K=%d, %zu points, hash %s\n", space.K(),
              space.point_count(), space.hash().c_str());
  for (size_t p = 0; p < space.point_count(); ++p)
    std::printf("  point %2zu: model %d, enumeration [%s]\n", p,
                space.point(p).model, join(space.point(p).enumeration).c_str());

  // Formulas evaluate to clopen subsets of the space.
  const bvm::Signature& sig = space.models().theory.sig;
  for (const char* text : {"r(x1)", "x1 = x2", "ex u r(u)"}) {
    bvm::Formula f = bvm::parse_formula(text, sig);
    std::vector<int> xi;
    for (int slot = 0; slot < 2; ++slot)
      if (bvm::print(f).find("x" + std::to_string(slot + 1)) !=
          std::string::npos)
        xi.push_back(slot);
    bvm::ClopenSet value = space.evaluate(f, xi);
    std::printf("\n[[%s]] at (%s): %zu of %zu points\n", text,
                join(xi).c_str(), value.count(), space.point_count());
  }

  // The predicate eta |-> [[r(y)]](eta) is extensional and invariant, so it
  // has a defining formula; synthesize one and print the certificate.
  bvm::Predicate p = bvm::predicate_from_formula(
      space, bvm::parse_formula("r(y)", sig), 1);
  std::printf("\npredicate [[r(y)]]: extensional = %s, invariant = %s\n",
              bvm::check_extensionality(space, p).extensional ? "yes" : "no",
              bvm::check_invariance(space, p).invariant ? "yes" : "no");

  std::printf("invariant atoms at arity 1: %zu\n",
              bvm::invariant_atoms(space, 1).size());

  bvm::SynthesisResult res = bvm::synthesize_definition(space, p);
  std::printf("\nsynthesis: verified = %s\n", res.verified ? "yes" : "no");
  std::printf("family sizes: %zu for the predicate, %zu for its complement\n",
              res.psi_family.size(), res.phi_family.size());
  std::printf("selected members: [%s]\n",
              [&] {
                std::string out;
                for (size_t i : res.psi_selected)
                  out += (out.empty() ? "" : " ") + std::to_string(i);
                return out;
              }()
                  .c_str());
  std::printf("\ndefining formula:\n  %s\n", bvm::print(res.psi).c_str());

  bvm::VerifyReport check = bvm::verify_definition(space, p, res.psi);
  std::printf("\nindependent verification: %s\n",
              check.matches ? "matches on every tuple" : "MISMATCH");
  return check.matches && res.verified ? 0 : 1;
}

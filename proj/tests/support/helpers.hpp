#pragma once

// Shared fixtures for the test suite: canned theory texts, space builders,
// and a deterministic random formula generator used by the law batteries.

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "bvm/bvm.hpp"

namespace testsupport {

inline const char* kUnaryTheory = "relation r 1\n";

inline const char* kGraphTheory =
    "relation e 2\n"
    "axiom all x ~e(x, x)\n"
    "axiom all x all y (e(x, y) -> e(y, x))\n";

inline const char* kPointedTheory =
    "relation r 1\n"
    "function f 1\n"
    "constant c\n";

inline std::unique_ptr<bvm::Space> make_space(
    const std::string& theory_text, int n_max, int K,
    bvm::Mode mode = bvm::Mode::Balanced) {
  bvm::Theory theory = bvm::parse_theory(theory_text);
  bvm::ModelClass models = bvm::enumerate_models(theory, n_max);
  return std::make_unique<bvm::Space>(std::move(models), K, mode);
}

// Random formulas over a signature with free variables drawn from the slots
// x1..x<max_slot>. Raw engine draws reduced by modulo keep the corpus stable
// across platforms. Bound variables are u0, u1, ... so they never collide
// with the slot families.
class FormulaGen {
 public:
  FormulaGen(uint64_t seed, bvm::Signature sig, int max_slot)
      : rng_(seed), sig_(std::move(sig)), max_slot_(max_slot) {}

  // One formula with the given connective depth and quantifier budget.
  bvm::Formula formula(int depth, int quantifier_budget) {
    bound_.clear();
    next_bound_ = 0;
    return gen(depth, quantifier_budget);
  }

 private:
  std::mt19937_64 rng_;
  bvm::Signature sig_;
  int max_slot_ = 1;
  std::vector<std::string> bound_;
  int next_bound_ = 0;

  uint64_t draw(uint64_t n) { return rng_() % n; }

  bvm::Term term(int fuel) {
    for (;;) {
      switch (draw(4)) {
        case 0:
          return bvm::var("x" + std::to_string(1 + draw(max_slot_)));
        case 1:
          if (!bound_.empty()) return bvm::var(bound_[draw(bound_.size())]);
          break;
        case 2:
          if (!sig_.constants.empty())
            return bvm::cnst(sig_.constants[draw(sig_.constants.size())]);
          break;
        default:
          if (!sig_.functions.empty() && fuel > 0) {
            const auto& fn = sig_.functions[draw(sig_.functions.size())];
            std::vector<bvm::Term> args;
            for (int i = 0; i < fn.second; ++i) args.push_back(term(fuel - 1));
            return bvm::app(fn.first, std::move(args));
          }
          break;
      }
    }
  }

  bvm::Formula atomic() {
    switch (draw(3)) {
      case 0:
        if (!sig_.relations.empty()) {
          const auto& rel = sig_.relations[draw(sig_.relations.size())];
          std::vector<bvm::Term> args;
          for (int i = 0; i < rel.second; ++i) args.push_back(term(1));
          return bvm::atom(rel.first, std::move(args));
        }
        [[fallthrough]];
      case 1:
        return bvm::eq(term(1), term(1));
      default:
        return draw(2) ? bvm::truth() : bvm::falsity();
    }
  }

  bvm::Formula gen(int depth, int quantifier_budget) {
    if (depth <= 0) return atomic();
    uint64_t limit = quantifier_budget > 0 ? 10 : 8;
    switch (draw(limit)) {
      case 0:
      case 1:
        return atomic();
      case 2:
        return bvm::neg(gen(depth - 1, quantifier_budget));
      case 3:
        return bvm::land(gen(depth - 1, quantifier_budget),
                         gen(depth - 1, quantifier_budget));
      case 4:
        return bvm::lor(gen(depth - 1, quantifier_budget),
                        gen(depth - 1, quantifier_budget));
      case 5:
        return bvm::implies(gen(depth - 1, quantifier_budget),
                            gen(depth - 1, quantifier_budget));
      case 6:
        return bvm::iff(gen(depth - 1, quantifier_budget),
                        gen(depth - 1, quantifier_budget));
      case 7:
        return atomic();
      default: {
        std::string name = "u" + std::to_string(next_bound_++);
        bound_.push_back(name);
        bvm::Formula body = gen(depth - 1, quantifier_budget - 1);
        bound_.pop_back();
        return draw(2) ? bvm::forall(name, body) : bvm::exists(name, body);
      }
    }
  }
};

// All K^arity tuples in rank order.
inline std::vector<std::vector<int>> all_tuples(int K, int arity) {
  std::vector<std::vector<int>> out;
  std::vector<int> m(arity, 0);
  do {
    out.push_back(m);
  } while (bvm::detail::next_tuple(m, K));
  return out;
}

}  // namespace testsupport

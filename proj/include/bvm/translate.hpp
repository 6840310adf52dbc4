#pragma once

#include <set>
#include <string>
#include <vector>

#include "bvm/signature.hpp"
#include "bvm/structure.hpp"

// Translation of formulas with function and constant symbols into a purely
// relational companion signature, where each n-ary function f becomes an
// (n+1)-ary graph relation f(args.., value) and each constant c a unary
// relation c(value). Classical evaluation of a formula in M agrees with
// evaluation of its translation in relationalize(M); the translation is the
// identity on formulas that are already relational.

namespace bvm {

/// Companion signature: original relations plus one graph relation per
/// function and per constant (same names, arity+1 resp. 1).
inline Signature relational_signature(const Signature& sig) {
  Signature out;
  out.relations = sig.relations;
  for (const auto& [name, arity] : sig.functions)
    out.relations.emplace_back(name, arity + 1);
  for (const std::string& name : sig.constants)
    out.relations.emplace_back(name, 1);
  return out;
}

/// The same domain with function and constant tables replaced by their
/// graphs as relation tables.
inline Structure relationalize(const Signature& sig, const Structure& m) {
  Structure out;
  out.size = m.size;
  out.relations = m.relations;
  for (size_t f = 0; f < sig.functions.size(); ++f) {
    int arity = sig.functions[f].second;
    size_t cells = detail::pow_size(m.size, arity + 1);
    std::vector<uint8_t> graph(cells, 0);
    std::vector<int> tuple(arity, 0);
    do {
      std::vector<int> extended = tuple;
      extended.push_back(m.functions[f][detail::tuple_rank(tuple, m.size)]);
      graph[detail::tuple_rank(extended, m.size)] = 1;
    } while (detail::next_tuple(tuple, m.size));
    out.relations.push_back(std::move(graph));
  }
  for (int c : m.constants) {
    std::vector<uint8_t> graph(m.size, 0);
    graph[c] = 1;
    out.relations.push_back(std::move(graph));
  }
  return out;
}

namespace detail {

class Translator {
 public:
  explicit Translator(const Formula& f) { collect_names(f, used_); }

  Formula run(const Formula& f) {
    switch (f->kind) {
      case FormulaKind::True:
      case FormulaKind::False:
        return f;
      case FormulaKind::Atom: {
        conjuncts_.clear();
        exvars_.clear();
        std::vector<Term> args;
        for (const Term& t : f->terms) args.push_back(var(reduce(t)));
        conjuncts_.push_back(atom(f->name, std::move(args)));
        return wrap();
      }
      case FormulaKind::Equal:
        return run_equality(f->terms[0], f->terms[1]);
      case FormulaKind::Not:
        return neg(run(f.child_a()));
      case FormulaKind::And:
        return land(run(f.child_a()), run(f.child_b()));
      case FormulaKind::Or:
        return lor(run(f.child_a()), run(f.child_b()));
      case FormulaKind::Implies:
        return implies(run(f.child_a()), run(f.child_b()));
      case FormulaKind::Iff:
        return iff(run(f.child_a()), run(f.child_b()));
      case FormulaKind::Forall:
        return forall(f->name, run(f.child_a()));
      case FormulaKind::Exists:
        return exists(f->name, run(f.child_a()));
    }
    throw Error("corrupt formula");
  }

 private:
  Formula run_equality(const Term& lhs, const Term& rhs) {
    if (lhs->kind == TermKind::Var && rhs->kind == TermKind::Var)
      return eq(lhs, rhs);
    conjuncts_.clear();
    exvars_.clear();
    if (rhs->kind == TermKind::Var) {
      graph_root(lhs, rhs->name);
    } else if (lhs->kind == TermKind::Var) {
      graph_root(rhs, lhs->name);
    } else {
      std::string target = fresh();
      exvars_.push_back(target);
      graph_root(lhs, target);
      graph_root(rhs, target);
    }
    return wrap();
  }

  /// Fold accumulated conjuncts and close over the fresh variables,
  /// outermost = first created.
  Formula wrap() {
    Formula body = conj(conjuncts_);
    for (auto it = exvars_.rbegin(); it != exvars_.rend(); ++it)
      body = exists(*it, body);
    return body;
  }

  /// Emit the graph atom tying `t` (an application or constant) to `target`.
  void graph_root(const Term& t, const std::string& target) {
    if (t->kind == TermKind::Const) {
      conjuncts_.push_back(atom(t->name, {var(target)}));
      return;
    }
    std::vector<Term> args;
    for (const Term& s : t->args) args.push_back(var(reduce(s)));
    args.push_back(var(target));
    conjuncts_.push_back(atom(t->name, std::move(args)));
  }

  /// Reduce a term to a variable, emitting graph conjuncts for every
  /// application or constant encountered.
  std::string reduce(const Term& t) {
    if (t->kind == TermKind::Var) return t->name;
    std::string w = fresh();
    if (t->kind == TermKind::Const) {
      conjuncts_.push_back(atom(t->name, {var(w)}));
    } else {
      std::vector<Term> args;
      for (const Term& s : t->args) args.push_back(var(reduce(s)));
      args.push_back(var(w));
      conjuncts_.push_back(atom(t->name, std::move(args)));
    }
    exvars_.push_back(w);
    return w;
  }

  std::string fresh() {
    for (;;) {
      std::string w = "w" + std::to_string(++counter_);
      if (!used_.count(w)) {
        used_.insert(w);
        return w;
      }
    }
  }

  std::set<std::string> used_;
  std::vector<Formula> conjuncts_;
  std::vector<std::string> exvars_;
  int counter_ = 0;
};

}  // namespace detail

/// Rewrite every function application and constant into graph-relation atoms
/// under existential quantifiers. Free variables are preserved; atoms of the
/// result contain variables only.
inline Formula translate_to_relational(const Formula& f, const Signature& sig) {
  (void)sig;  // the AST distinguishes symbol kinds already
  return detail::Translator(f).run(f);
}

}  // namespace bvm

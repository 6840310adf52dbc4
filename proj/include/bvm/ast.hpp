#pragma once

#include <algorithm>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bvm/error.hpp"

// First-order terms and formulas as immutable shared trees.
//
// Scoping invariant maintained by the quantifier constructors: on any
// root-to-leaf path each bound variable is introduced by exactly one
// quantifier. `forall`/`exists` freshen conflicting inner binders on
// construction, so formulas built through this interface always satisfy it.

namespace bvm {

class Term;
using TermPtr = std::shared_ptr<const class TermNode>;

enum class TermKind { Var, Const, App };

class TermNode {
 public:
  TermKind kind;
  std::string name;
  std::vector<Term> args;  // nonempty only for App
};

class Term {
 public:
  Term() = default;
  explicit Term(TermPtr node) : node_(std::move(node)) {}
  const TermNode& operator*() const { return *node_; }
  const TermNode* operator->() const { return node_.get(); }
  bool valid() const { return node_ != nullptr; }

 private:
  TermPtr node_;
};

inline Term var(std::string name) {
  return Term(std::make_shared<TermNode>(TermNode{TermKind::Var, std::move(name), {}}));
}
inline Term cnst(std::string name) {
  return Term(std::make_shared<TermNode>(TermNode{TermKind::Const, std::move(name), {}}));
}
inline Term app(std::string name, std::vector<Term> args) {
  if (args.empty()) throw Error("function application needs at least one argument");
  return Term(std::make_shared<TermNode>(
      TermNode{TermKind::App, std::move(name), std::move(args)}));
}

inline bool operator==(const Term& a, const Term& b) {
  if (a->kind != b->kind || a->name != b->name) return false;
  if (a->args.size() != b->args.size()) return false;
  for (size_t i = 0; i < a->args.size(); ++i)
    if (!(a->args[i] == b->args[i])) return false;
  return true;
}
inline bool operator!=(const Term& a, const Term& b) { return !(a == b); }

enum class FormulaKind {
  True, False, Atom, Equal, Not, And, Or, Implies, Iff, Forall, Exists
};

class Formula;
using FormulaPtr = std::shared_ptr<const class FormulaNode>;

class FormulaNode {
 public:
  FormulaKind kind;
  std::string name;          // Atom: relation symbol; Forall/Exists: bound variable
  std::vector<Term> terms;   // Atom: arguments; Equal: the two sides
  FormulaPtr a, b;           // children (Not/quantifiers use a only)
};

class Formula {
 public:
  Formula() = default;
  explicit Formula(FormulaPtr node) : node_(std::move(node)) {}
  const FormulaNode& operator*() const { return *node_; }
  const FormulaNode* operator->() const { return node_.get(); }
  bool valid() const { return node_ != nullptr; }
  FormulaPtr ptr() const { return node_; }

  Formula child_a() const { return Formula(node_->a); }
  Formula child_b() const { return Formula(node_->b); }

 private:
  FormulaPtr node_;
};

inline bool operator==(const Formula& x, const Formula& y) {
  if (x->kind != y->kind || x->name != y->name) return false;
  if (x->terms.size() != y->terms.size()) return false;
  for (size_t i = 0; i < x->terms.size(); ++i)
    if (!(x->terms[i] == y->terms[i])) return false;
  const bool xa = x->a != nullptr, ya = y->a != nullptr;
  const bool xb = x->b != nullptr, yb = y->b != nullptr;
  if (xa != ya || xb != yb) return false;
  if (xa && !(x.child_a() == y.child_a())) return false;
  if (xb && !(x.child_b() == y.child_b())) return false;
  return true;
}
inline bool operator!=(const Formula& x, const Formula& y) { return !(x == y); }

namespace detail {

inline Formula make(FormulaKind k, std::string name, std::vector<Term> terms,
                    Formula a = {}, Formula b = {}) {
  return Formula(std::make_shared<FormulaNode>(
      FormulaNode{k, std::move(name), std::move(terms), a.ptr(), b.ptr()}));
}

inline void collect_term_names(const Term& t, std::set<std::string>& out) {
  out.insert(t->name);
  for (const Term& s : t->args) collect_term_names(s, out);
}

/// Every identifier occurring anywhere in the formula (variables, symbols,
/// binders). Used to pick fresh binder names.
inline void collect_names(const Formula& f, std::set<std::string>& out) {
  if (!f->name.empty()) out.insert(f->name);
  for (const Term& t : f->terms) collect_term_names(t, out);
  if (f->a) collect_names(f.child_a(), out);
  if (f->b) collect_names(f.child_b(), out);
}

inline bool binds(const Formula& f, const std::string& v) {
  if ((f->kind == FormulaKind::Forall || f->kind == FormulaKind::Exists) &&
      f->name == v)
    return true;
  if (f->a && binds(f.child_a(), v)) return true;
  if (f->b && binds(f.child_b(), v)) return true;
  return false;
}

inline Term subst_term(const Term& t, const std::string& from, const std::string& to) {
  switch (t->kind) {
    case TermKind::Var:
      return t->name == from ? var(to) : t;
    case TermKind::Const:
      return t;
    case TermKind::App: {
      std::vector<Term> args;
      args.reserve(t->args.size());
      for (const Term& s : t->args) args.push_back(subst_term(s, from, to));
      return app(t->name, std::move(args));
    }
  }
  throw Error("corrupt term");
}

/// Rename free occurrences of variable `from` to `to`. Only called with `to`
/// fresh and with no binder of `from` below, so capture cannot occur.
inline Formula subst_free(const Formula& f, const std::string& from, const std::string& to) {
  std::vector<Term> terms;
  terms.reserve(f->terms.size());
  for (const Term& t : f->terms) terms.push_back(subst_term(t, from, to));
  if ((f->kind == FormulaKind::Forall || f->kind == FormulaKind::Exists) &&
      f->name == from)
    return f;  // shadowed below this point
  Formula a = f->a ? subst_free(f.child_a(), from, to) : Formula{};
  Formula b = f->b ? subst_free(f.child_b(), from, to) : Formula{};
  return make(f->kind, f->name, std::move(terms), a, b);
}

inline std::string fresh_name(const std::string& base, std::set<std::string>& used) {
  for (int i = 1;; ++i) {
    std::string candidate = base + std::to_string(i);
    if (!used.count(candidate)) {
      used.insert(candidate);
      return candidate;
    }
  }
}

/// Rename every binder of `v` inside `f` (bottom-up) so that a new outer
/// binder of `v` introduces it exactly once on every path.
inline Formula rename_binders(const Formula& f, const std::string& v,
                              std::set<std::string>& used) {
  Formula a = f->a ? rename_binders(f.child_a(), v, used) : Formula{};
  Formula b = f->b ? rename_binders(f.child_b(), v, used) : Formula{};
  Formula out = make(f->kind, f->name, f->terms, a, b);
  if ((f->kind == FormulaKind::Forall || f->kind == FormulaKind::Exists) &&
      f->name == v) {
    std::string nv = fresh_name(v, used);
    Formula body = subst_free(out.child_a(), v, nv);
    return make(f->kind, nv, {}, body);
  }
  return out;
}

inline Formula quantify(FormulaKind k, std::string v, Formula body) {
  if (!body.valid()) throw Error("quantifier over empty body");
  if (detail::binds(body, v)) {
    std::set<std::string> used;
    detail::collect_names(body, used);
    used.insert(v);
    body = detail::rename_binders(body, v, used);
  }
  return make(k, std::move(v), {}, body);
}

}  // namespace detail

inline Formula truth() { return detail::make(FormulaKind::True, "", {}); }
inline Formula falsity() { return detail::make(FormulaKind::False, "", {}); }
inline Formula atom(std::string rel, std::vector<Term> args) {
  return detail::make(FormulaKind::Atom, std::move(rel), std::move(args));
}
inline Formula eq(Term lhs, Term rhs) {
  return detail::make(FormulaKind::Equal, "", {std::move(lhs), std::move(rhs)});
}
inline Formula neg(Formula f) { return detail::make(FormulaKind::Not, "", {}, f); }
inline Formula land(Formula f, Formula g) {
  return detail::make(FormulaKind::And, "", {}, f, g);
}
inline Formula lor(Formula f, Formula g) {
  return detail::make(FormulaKind::Or, "", {}, f, g);
}
inline Formula implies(Formula f, Formula g) {
  return detail::make(FormulaKind::Implies, "", {}, f, g);
}
inline Formula iff(Formula f, Formula g) {
  return detail::make(FormulaKind::Iff, "", {}, f, g);
}
inline Formula forall(std::string v, Formula body) {
  return detail::quantify(FormulaKind::Forall, std::move(v), body);
}
inline Formula exists(std::string v, Formula body) {
  return detail::quantify(FormulaKind::Exists, std::move(v), body);
}

/// Left-fold conjunction; the empty conjunction is `true`.
inline Formula conj(const std::vector<Formula>& fs) {
  if (fs.empty()) return truth();
  Formula out = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) out = land(out, fs[i]);
  return out;
}

/// Left-fold disjunction; the empty disjunction is `false`.
inline Formula disj(const std::vector<Formula>& fs) {
  if (fs.empty()) return falsity();
  Formula out = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) out = lor(out, fs[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Free variables, in first-occurrence order.

namespace detail {

inline void free_vars_term(const Term& t, const std::vector<std::string>& bound,
                           std::vector<std::string>& out) {
  if (t->kind == TermKind::Var) {
    if (std::find(bound.begin(), bound.end(), t->name) == bound.end() &&
        std::find(out.begin(), out.end(), t->name) == out.end())
      out.push_back(t->name);
    return;
  }
  for (const Term& s : t->args) free_vars_term(s, bound, out);
}

inline void free_vars_rec(const Formula& f, std::vector<std::string>& bound,
                          std::vector<std::string>& out) {
  for (const Term& t : f->terms) free_vars_term(t, bound, out);
  if (f->kind == FormulaKind::Forall || f->kind == FormulaKind::Exists) {
    bound.push_back(f->name);
    free_vars_rec(f.child_a(), bound, out);
    bound.pop_back();
    return;
  }
  if (f->a) free_vars_rec(f.child_a(), bound, out);
  if (f->b) free_vars_rec(f.child_b(), bound, out);
}

}  // namespace detail

inline std::vector<std::string> free_variables(const Formula& f) {
  std::vector<std::string> bound, out;
  detail::free_vars_rec(f, bound, out);
  return out;
}

// ---------------------------------------------------------------------------
// Printing. Output is exactly the concrete grammar the parser accepts, with
// parentheses chosen so that parsing the result rebuilds the same tree.

namespace detail {

inline void print_term(const Term& t, std::string& out) {
  out += t->name;
  if (t->kind == TermKind::App) {
    out += '(';
    for (size_t i = 0; i < t->args.size(); ++i) {
      if (i) out += ", ";
      print_term(t->args[i], out);
    }
    out += ')';
  }
}

// Precedence levels: Iff 1, Implies 2, Or 3, And 4, atoms/unary 5.
inline int prec(FormulaKind k) {
  switch (k) {
    case FormulaKind::Iff: return 1;
    case FormulaKind::Implies: return 2;
    case FormulaKind::Or: return 3;
    case FormulaKind::And: return 4;
    default: return 5;
  }
}

inline void print_rec(const Formula& f, std::string& out);

inline void print_child(const Formula& f, int min_prec, std::string& out) {
  bool parens = prec(f->kind) < min_prec ||
                f->kind == FormulaKind::Forall || f->kind == FormulaKind::Exists;
  if (parens) {
    out += '(';
    print_rec(f, out);
    out += ')';
  } else {
    print_rec(f, out);
  }
}

inline void print_rec(const Formula& f, std::string& out) {
  switch (f->kind) {
    case FormulaKind::True: out += "true"; return;
    case FormulaKind::False: out += "false"; return;
    case FormulaKind::Atom:
      out += f->name;
      out += '(';
      for (size_t i = 0; i < f->terms.size(); ++i) {
        if (i) out += ", ";
        print_term(f->terms[i], out);
      }
      out += ')';
      return;
    case FormulaKind::Equal:
      print_term(f->terms[0], out);
      out += " = ";
      print_term(f->terms[1], out);
      return;
    case FormulaKind::Not: {
      out += '~';
      Formula c = f.child_a();
      // Bare operand only where re-parsing cannot extend it: relation atoms,
      // constants true/false, and nested negations.
      if (c->kind == FormulaKind::Atom || c->kind == FormulaKind::True ||
          c->kind == FormulaKind::False || c->kind == FormulaKind::Not) {
        print_rec(c, out);
      } else {
        out += '(';
        print_rec(c, out);
        out += ')';
      }
      return;
    }
    case FormulaKind::And:
      print_child(f.child_a(), 4, out);
      out += " & ";
      print_child(f.child_b(), 5, out);
      return;
    case FormulaKind::Or:
      print_child(f.child_a(), 3, out);
      out += " | ";
      print_child(f.child_b(), 4, out);
      return;
    case FormulaKind::Implies:
      print_child(f.child_a(), 3, out);
      out += " -> ";
      print_child(f.child_b(), 2, out);
      return;
    case FormulaKind::Iff:
      print_child(f.child_a(), 1, out);
      out += " <-> ";
      print_child(f.child_b(), 2, out);
      return;
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
      out += f->kind == FormulaKind::Forall ? "all " : "ex ";
      out += f->name;
      out += ' ';
      Formula body = f.child_a();
      // Quantifier scope extends maximally right, so a bare body is always
      // re-parsed correctly; parenthesize anything that is not itself an
      // atom, a negation, or another quantifier, purely for readability.
      if (body->kind == FormulaKind::Atom || body->kind == FormulaKind::Equal ||
          body->kind == FormulaKind::True || body->kind == FormulaKind::False ||
          body->kind == FormulaKind::Not || body->kind == FormulaKind::Forall ||
          body->kind == FormulaKind::Exists) {
        print_rec(body, out);
      } else {
        out += '(';
        print_rec(body, out);
        out += ')';
      }
      return;
    }
  }
}

}  // namespace detail

inline std::string print(const Term& t) {
  std::string out;
  detail::print_term(t, out);
  return out;
}

inline std::string print(const Formula& f) {
  std::string out;
  detail::print_rec(f, out);
  return out;
}

}  // namespace bvm

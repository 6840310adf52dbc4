#pragma once

#include <map>
#include <string>
#include <vector>

#include "bvm/ast.hpp"
#include "bvm/signature.hpp"

// Finite structures for a signature, and classical (Tarskian) evaluation.
//
// A structure over domain {0, ..., size-1} stores one table per symbol,
// parallel to the signature's symbol lists:
//   - relation of arity a: bitmap of size^a bytes in lexicographic tuple
//     order (leftmost coordinate most significant),
//   - function of arity a: value table of size^a entries in the same order,
//   - constant: a single element.

namespace bvm {

struct Structure {
  int size = 0;
  std::vector<std::vector<uint8_t>> relations;
  std::vector<std::vector<int>> functions;
  std::vector<int> constants;
};

namespace detail {

inline size_t pow_size(int base, int exp) {
  size_t out = 1;
  for (int i = 0; i < exp; ++i) out *= static_cast<size_t>(base);
  return out;
}

/// Rank of a tuple in lexicographic order, leftmost coordinate most
/// significant.
inline size_t tuple_rank(const std::vector<int>& tuple, int base) {
  size_t rank = 0;
  for (int v : tuple) rank = rank * static_cast<size_t>(base) + static_cast<size_t>(v);
  return rank;
}

/// Advance a tuple over {0..base-1}^k in lexicographic order; false at wrap.
inline bool next_tuple(std::vector<int>& tuple, int base) {
  for (int i = static_cast<int>(tuple.size()) - 1; i >= 0; --i) {
    if (++tuple[i] < base) return true;
    tuple[i] = 0;
  }
  return false;
}

}  // namespace detail

/// Flat integer encoding: size, relation bitmaps, function tables, constants.
/// Lexicographic comparison of encodings defines the canonical structure
/// order; the canonical representative of an isomorphism class is the
/// structure with the least encoding.
inline std::vector<int> encode(const Structure& m) {
  std::vector<int> out;
  out.push_back(m.size);
  for (const auto& table : m.relations)
    for (uint8_t b : table) out.push_back(b);
  for (const auto& table : m.functions)
    for (int v : table) out.push_back(v);
  for (int c : m.constants) out.push_back(c);
  return out;
}

/// The image of a structure under a relabeling of its domain.
inline Structure relabel(const Signature& sig, const Structure& m,
                         const std::vector<int>& perm) {
  Structure out;
  out.size = m.size;
  out.relations.resize(m.relations.size());
  out.functions.resize(m.functions.size());
  out.constants.resize(m.constants.size());
  for (size_t r = 0; r < sig.relations.size(); ++r) {
    int arity = sig.relations[r].second;
    size_t cells = detail::pow_size(m.size, arity);
    out.relations[r].assign(cells, 0);
    std::vector<int> tuple(arity, 0), image(arity);
    do {
      for (int i = 0; i < arity; ++i) image[i] = perm[tuple[i]];
      out.relations[r][detail::tuple_rank(image, m.size)] =
          m.relations[r][detail::tuple_rank(tuple, m.size)];
    } while (detail::next_tuple(tuple, m.size));
  }
  for (size_t f = 0; f < sig.functions.size(); ++f) {
    int arity = sig.functions[f].second;
    size_t cells = detail::pow_size(m.size, arity);
    out.functions[f].assign(cells, 0);
    std::vector<int> tuple(arity, 0), image(arity);
    do {
      for (int i = 0; i < arity; ++i) image[i] = perm[tuple[i]];
      out.functions[f][detail::tuple_rank(image, m.size)] =
          perm[m.functions[f][detail::tuple_rank(tuple, m.size)]];
    } while (detail::next_tuple(tuple, m.size));
  }
  for (size_t c = 0; c < m.constants.size(); ++c)
    out.constants[c] = perm[m.constants[c]];
  return out;
}

// ---------------------------------------------------------------------------
// Classical evaluation.

namespace detail {

/// Variable environment as a stack of (name, element) bindings; lookup scans
/// from the back so quantifier bindings shadow outer ones.
struct Env {
  std::vector<std::pair<const std::string*, int>> frames;

  int lookup(const std::string& name) const {
    for (auto it = frames.rbegin(); it != frames.rend(); ++it)
      if (*it->first == name) return it->second;
    throw Error("unassigned free variable '" + name + "'");
  }
};

inline int eval_term(const Signature& sig, const Structure& m, const Term& t,
                     const Env& env) {
  switch (t->kind) {
    case TermKind::Var:
      return env.lookup(t->name);
    case TermKind::Const: {
      int c = sig.constant_index(t->name);
      if (c < 0) throw Error("constant '" + t->name + "' not in signature");
      return m.constants[c];
    }
    case TermKind::App: {
      int f = sig.function_index(t->name);
      if (f < 0) throw Error("function '" + t->name + "' not in signature");
      std::vector<int> args(t->args.size());
      for (size_t i = 0; i < t->args.size(); ++i)
        args[i] = eval_term(sig, m, t->args[i], env);
      return m.functions[f][tuple_rank(args, m.size)];
    }
  }
  throw Error("corrupt term");
}

inline bool eval_rec(const Signature& sig, const Structure& m, const Formula& f,
                     Env& env) {
  switch (f->kind) {
    case FormulaKind::True: return true;
    case FormulaKind::False: return false;
    case FormulaKind::Atom: {
      int r = sig.relation_index(f->name);
      if (r < 0) throw Error("relation '" + f->name + "' not in signature");
      std::vector<int> args(f->terms.size());
      for (size_t i = 0; i < f->terms.size(); ++i)
        args[i] = eval_term(sig, m, f->terms[i], env);
      return m.relations[r][tuple_rank(args, m.size)] != 0;
    }
    case FormulaKind::Equal:
      return eval_term(sig, m, f->terms[0], env) ==
             eval_term(sig, m, f->terms[1], env);
    case FormulaKind::Not:
      return !eval_rec(sig, m, f.child_a(), env);
    case FormulaKind::And:
      return eval_rec(sig, m, f.child_a(), env) && eval_rec(sig, m, f.child_b(), env);
    case FormulaKind::Or:
      return eval_rec(sig, m, f.child_a(), env) || eval_rec(sig, m, f.child_b(), env);
    case FormulaKind::Implies:
      return !eval_rec(sig, m, f.child_a(), env) || eval_rec(sig, m, f.child_b(), env);
    case FormulaKind::Iff:
      return eval_rec(sig, m, f.child_a(), env) == eval_rec(sig, m, f.child_b(), env);
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
      bool all = f->kind == FormulaKind::Forall;
      Formula body = f.child_a();
      env.frames.emplace_back(&f->name, 0);
      for (int a = 0; a < m.size; ++a) {
        env.frames.back().second = a;
        bool v = eval_rec(sig, m, body, env);
        if (v != all) {
          env.frames.pop_back();
          return !all;
        }
      }
      env.frames.pop_back();
      return all;
    }
  }
  throw Error("corrupt formula");
}

}  // namespace detail

/// Tarskian truth of f in m under the given assignment of free variables.
/// Unassigned free variables are an error.
inline bool evaluate_classical(const Signature& sig, const Structure& m,
                               const Formula& f,
                               const std::map<std::string, int>& assignment) {
  detail::Env env;
  for (const auto& [name, value] : assignment) {
    if (value < 0 || value >= m.size)
      throw Error("assignment for '" + name + "' outside the domain");
    env.frames.emplace_back(&name, value);
  }
  return detail::eval_rec(sig, m, f, env);
}

}  // namespace bvm

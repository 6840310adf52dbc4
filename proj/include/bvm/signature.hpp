#pragma once

#include <map>
#include <string>
#include <vector>

#include "bvm/error.hpp"

namespace bvm {

/// A finite first-order signature: relation and function symbols with
/// positive arities, plus constant symbols. Names are pairwise distinct
/// across all three kinds and must not collide with the reserved variable
/// families x1, x2, ... and y, y1, y2, ... used by synthesized formulas.
struct Signature {
  std::vector<std::pair<std::string, int>> relations;
  std::vector<std::pair<std::string, int>> functions;
  std::vector<std::string> constants;

  int relation_index(const std::string& name) const {
    for (size_t i = 0; i < relations.size(); ++i)
      if (relations[i].first == name) return static_cast<int>(i);
    return -1;
  }
  int function_index(const std::string& name) const {
    for (size_t i = 0; i < functions.size(); ++i)
      if (functions[i].first == name) return static_cast<int>(i);
    return -1;
  }
  int constant_index(const std::string& name) const {
    for (size_t i = 0; i < constants.size(); ++i)
      if (constants[i] == name) return static_cast<int>(i);
    return -1;
  }
  bool has_symbol(const std::string& name) const {
    return relation_index(name) >= 0 || function_index(name) >= 0 ||
           constant_index(name) >= 0;
  }
};

namespace detail {

inline bool valid_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

inline bool reserved_word(const std::string& s) {
  return s == "all" || s == "ex" || s == "true" || s == "false";
}

/// Names matching the reserved variable families: x<digits>, y, y<digits>.
inline bool reserved_variable_name(const std::string& s) {
  if (s == "y") return true;
  if (s.size() < 2 || (s[0] != 'x' && s[0] != 'y')) return false;
  for (size_t i = 1; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace detail

inline void validate(const Signature& sig) {
  std::map<std::string, int> seen;
  auto check_name = [&](const std::string& name) {
    if (!detail::valid_identifier(name))
      throw Error("invalid symbol name '" + name + "'");
    if (detail::reserved_word(name))
      throw Error("symbol name '" + name + "' is a reserved word");
    if (detail::reserved_variable_name(name))
      throw Error("symbol name '" + name + "' collides with the reserved variable families");
    if (seen[name]++)
      throw Error("duplicate symbol name '" + name + "'");
  };
  for (const auto& [name, arity] : sig.relations) {
    check_name(name);
    if (arity < 1) throw Error("relation '" + name + "' must have positive arity");
  }
  for (const auto& [name, arity] : sig.functions) {
    check_name(name);
    if (arity < 1) throw Error("function '" + name + "' must have positive arity");
  }
  for (const std::string& name : sig.constants) check_name(name);
}

}  // namespace bvm

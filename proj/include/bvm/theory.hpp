#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bvm/parser.hpp"
#include "bvm/signature.hpp"

namespace bvm {

/// A signature together with a finite list of closed axioms.
struct Theory {
  Signature sig;
  std::vector<Formula> axioms;
};

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

}  // namespace detail

/// Parse a line-oriented theory description:
///
///   relation <name> <arity>
///   function <name> <arity>
///   constant <name>
///   axiom <formula>
///   # comment
///
/// Declarations may appear in any order relative to axioms; axioms are parsed
/// against the complete signature and must be closed.
inline Theory parse_theory(const std::string& text) {
  Theory theory;
  std::vector<std::pair<std::string, int>> axiom_lines;  // (text, line number)

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::vector<std::string> words = detail::split_ws(line);
    if (words.empty()) continue;
    const std::string& head = words[0];
    auto fail = [&](const std::string& msg) -> void {
      throw Error("theory line " + std::to_string(lineno) + ": " + msg);
    };
    if (head == "relation" || head == "function") {
      if (words.size() != 3) fail("expected '" + head + " <name> <arity>'");
      int arity = 0;
      try {
        arity = std::stoi(words[2]);
      } catch (...) {
        fail("arity '" + words[2] + "' is not a number");
      }
      if (head == "relation")
        theory.sig.relations.emplace_back(words[1], arity);
      else
        theory.sig.functions.emplace_back(words[1], arity);
    } else if (head == "constant") {
      if (words.size() != 2) fail("expected 'constant <name>'");
      theory.sig.constants.push_back(words[1]);
    } else if (head == "axiom") {
      size_t at = line.find("axiom");
      axiom_lines.emplace_back(line.substr(at + 5), lineno);
    } else {
      fail("unknown directive '" + head + "'");
    }
  }

  validate(theory.sig);
  for (const auto& [formula_text, axiom_lineno] : axiom_lines) {
    Formula f;
    try {
      f = parse_formula(formula_text, theory.sig);
    } catch (const ParseError& e) {
      throw Error("theory line " + std::to_string(axiom_lineno) + ": " + e.what());
    }
    if (!free_variables(f).empty())
      throw Error("theory line " + std::to_string(axiom_lineno) +
                  ": axiom must be closed, free variable '" +
                  free_variables(f)[0] + "'");
    theory.axioms.push_back(f);
  }
  return theory;
}

inline Theory load_theory(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open theory file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_theory(buf.str());
}

}  // namespace bvm

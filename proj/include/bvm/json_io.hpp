#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bvm/atoms.hpp"
#include "bvm/synthesis.hpp"

// JSON serialization of every artifact the command-line tool emits or
// consumes. All objects use insertion-ordered keys and deterministic member
// order, so equal inputs produce byte-identical output.

namespace bvm {

using Json = nlohmann::ordered_json;

inline Json signature_json(const Signature& sig) {
  Json j;
  j["relations"] = Json::array();
  for (const auto& [name, arity] : sig.relations)
    j["relations"].push_back(Json::array({name, arity}));
  j["functions"] = Json::array();
  for (const auto& [name, arity] : sig.functions)
    j["functions"].push_back(Json::array({name, arity}));
  j["constants"] = sig.constants;
  return j;
}

inline Json structure_json(const Signature& sig, const Structure& m) {
  Json j;
  j["size"] = m.size;
  Json rels = Json::object();
  for (size_t r = 0; r < sig.relations.size(); ++r) {
    Json tuples = Json::array();
    int arity = sig.relations[r].second;
    std::vector<int> t(arity, 0);
    size_t rank = 0;
    do {
      if (m.relations[r][rank]) tuples.push_back(t);
      ++rank;
    } while (detail::next_tuple(t, m.size));
    rels[sig.relations[r].first] = std::move(tuples);
  }
  j["relations"] = std::move(rels);
  Json funcs = Json::object();
  for (size_t f = 0; f < sig.functions.size(); ++f)
    funcs[sig.functions[f].first] = m.functions[f];
  j["functions"] = std::move(funcs);
  Json consts = Json::object();
  for (size_t c = 0; c < sig.constants.size(); ++c)
    consts[sig.constants[c]] = m.constants[c];
  j["constants"] = std::move(consts);
  return j;
}

inline Json models_json(const ModelClass& mc) {
  Json j;
  j["signature"] = signature_json(mc.theory.sig);
  Json axioms = Json::array();
  for (const Formula& a : mc.theory.axioms) axioms.push_back(print(a));
  j["axioms"] = std::move(axioms);
  j["n_max"] = mc.n_max;
  j["count"] = mc.structures.size();
  Json models = Json::array();
  for (size_t i = 0; i < mc.structures.size(); ++i) {
    Json mj = structure_json(mc.theory.sig, mc.structures[i]);
    Json entry;
    entry["index"] = i;
    entry.update(mj);
    entry["automorphisms"] = mc.automorphisms[i].size();
    models.push_back(std::move(entry));
  }
  j["models"] = std::move(models);
  return j;
}

inline Json space_json(const Space& space) {
  Json j;
  j["K"] = space.K();
  j["mode"] = to_string(space.mode());
  j["space_hash"] = space.hash();
  j["model_count"] = space.models().structures.size();
  j["point_count"] = space.point_count();
  Json points = Json::array();
  for (size_t p = 0; p < space.point_count(); ++p) {
    Json pj;
    pj["index"] = p;
    pj["model"] = space.point(p).model;
    pj["enumeration"] = space.point(p).enumeration;
    points.push_back(std::move(pj));
  }
  j["points"] = std::move(points);
  return j;
}

inline Json eval_json(const Space& space, const Formula& f,
                      const std::vector<int>& xi, const ClopenSet& value) {
  Json j;
  j["formula"] = print(f);
  j["xi"] = xi;
  j["space_hash"] = space.hash();
  j["count"] = value.count();
  j["points"] = value.indices();
  return j;
}

inline std::string tuple_key(const std::vector<int>& t) {
  std::string key;
  for (size_t i = 0; i < t.size(); ++i) {
    if (i) key += ',';
    key += std::to_string(t[i]);
  }
  return key;
}

inline Json predicate_json(const Space& space, const Predicate& p) {
  validate_predicate(space, p);
  Json j;
  j["arity"] = p.arity;
  j["K"] = p.K;
  j["space_hash"] = space.hash();
  Json entries = Json::object();
  std::vector<int> m(p.arity, 0);
  size_t rank = 0;
  do {
    if (!p.table[rank].empty()) entries[tuple_key(m)] = p.table[rank].indices();
    ++rank;
  } while (detail::next_tuple(m, p.K));
  j["entries"] = std::move(entries);
  return j;
}

inline Predicate predicate_from_json(const Space& space, const Json& j) {
  if (!j.is_object() || !j.contains("arity") || !j.contains("K") ||
      !j.contains("space_hash") || !j.contains("entries"))
    throw Error("predicate file needs arity, K, space_hash and entries");
  Predicate p;
  p.arity = j.at("arity").get<int>();
  p.K = j.at("K").get<int>();
  if (p.arity < 0) throw Error("predicate arity must be non-negative");
  if (p.K != space.K())
    throw Error("predicate was built for K=" + std::to_string(p.K) +
                ", the space has K=" + std::to_string(space.K()));
  if (j.at("space_hash").get<std::string>() != space.hash())
    throw Error("predicate space_hash does not match this space; "
                "rebuild the predicate for the same theory, n_max, K and mode");
  p.table.assign(predicate_cells(p.K, p.arity), ClopenSet(space.point_count()));
  for (const auto& [key, arr] : j.at("entries").items()) {
    std::vector<int> m;
    size_t pos = 0;
    while (!key.empty() && pos <= key.size()) {
      size_t comma = key.find(',', pos);
      std::string part = key.substr(pos, comma == std::string::npos
                                             ? std::string::npos
                                             : comma - pos);
      if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
        throw Error("bad tuple key '" + key + "' in predicate file");
      m.push_back(std::stoi(part));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (static_cast<int>(m.size()) != p.arity)
      throw Error("tuple key '" + key + "' does not match arity " +
                  std::to_string(p.arity));
    for (int v : m)
      if (v < 0 || v >= p.K)
        throw Error("tuple key '" + key + "' has an index outside 0.." +
                    std::to_string(p.K - 1));
    ClopenSet& cell = p.table[detail::tuple_rank_base(m, p.K)];
    for (const auto& e : arr) {
      size_t idx = e.get<size_t>();
      if (idx >= space.point_count())
        throw Error("predicate file names point " + std::to_string(idx) +
                    ", the space has " + std::to_string(space.point_count()));
      cell.set(idx);
    }
  }
  return p;
}

inline Json extensionality_json(const ExtensionalityReport& r) {
  Json j;
  j["extensional"] = r.extensional;
  if (!r.extensional) {
    Json w;
    w["m"] = r.m;
    w["m_prime"] = r.m_prime;
    w["point"] = r.point;
    j["witness"] = std::move(w);
  }
  return j;
}

inline Json invariance_json(const InvarianceReport& r) {
  Json j;
  j["invariant"] = r.invariant;
  if (!r.invariant) {
    Json w;
    w["permutation_index"] = r.permutation_index;
    w["permutation"] = print(r.permutation);
    w["m"] = r.m;
    w["point"] = r.point;
    j["witness"] = std::move(w);
  }
  return j;
}

inline Json invariance_report_json(const Space& space, const Predicate& p,
                                   const std::vector<Permutation>& perms) {
  Json j;
  j["arity"] = p.arity;
  j["K"] = p.K;
  j["space_hash"] = space.hash();
  j["permutations_checked"] = perms.size();
  ExtensionalityReport ext = check_extensionality(space, p);
  InvarianceReport inv = check_invariance(space, p, perms);
  j["extensionality"] = extensionality_json(ext);
  j["invariance"] = invariance_json(inv);
  return j;
}

inline Json invariance_report_json(const Space& space, const Predicate& p) {
  return invariance_report_json(space, p, generator_set(space.K()));
}

inline Json atoms_json(const Space& space, int arity,
                       const std::vector<Predicate>& atoms) {
  Json j;
  j["arity"] = arity;
  j["K"] = space.K();
  j["space_hash"] = space.hash();
  j["count"] = atoms.size();
  Json list = Json::array();
  for (size_t a = 0; a < atoms.size(); ++a) {
    Json aj;
    aj["index"] = a;
    size_t pairs = 0;
    for (const ClopenSet& s : atoms[a].table) pairs += s.count();
    aj["pairs"] = pairs;
    Json entries = Json::object();
    std::vector<int> m(arity, 0);
    size_t rank = 0;
    do {
      if (!atoms[a].table[rank].empty())
        entries[tuple_key(m)] = atoms[a].table[rank].indices();
      ++rank;
    } while (detail::next_tuple(m, space.K()));
    aj["entries"] = std::move(entries);
    list.push_back(std::move(aj));
  }
  j["atoms"] = std::move(list);
  return j;
}

inline Json family_json(const std::vector<FamilyMember>& members) {
  Json family = Json::array();
  for (const FamilyMember& member : members) {
    Json mj;
    mj["psi"] = print(member.psi);
    mj["source_point"] = member.source_point;
    mj["source_tuple"] = member.source_tuple;
    family.push_back(std::move(mj));
  }
  return family;
}

inline Json synthesis_json(const Space& space, const SynthesisResult& r) {
  Json j;
  j["arity"] = r.arity;
  j["K"] = space.K();
  j["space_hash"] = space.hash();
  j["verified"] = r.verified;
  j["psi"] = print(r.psi);
  j["family_size"] = r.psi_family.size();
  j["complement_family_size"] = r.phi_family.size();
  j["family"] = family_json(r.psi_family);
  j["complement_family"] = family_json(r.phi_family);
  j["selected"] = r.psi_selected;
  j["complement_selected"] = r.phi_selected;
  Json verification = Json::object();
  std::vector<int> m(r.arity, 0);
  size_t rank = 0;
  do {
    verification[tuple_key(m)] = static_cast<bool>(r.tuple_ok[rank]);
    ++rank;
  } while (detail::next_tuple(m, space.K()));
  j["verification"] = std::move(verification);
  j["violation_count"] = r.violation_count;
  j["violations"] = r.violations;
  if (r.has_defect) {
    Json d;
    d["tuple"] = r.defect_tuple;
    d["point"] = r.defect_point;
    d["excess"] = r.defect_excess;
    j["defect"] = std::move(d);
  }
  return j;
}

inline Json verify_json(const Space& space, const Predicate& p, const Formula& f,
                        const VerifyReport& r) {
  Json j;
  j["formula"] = print(f);
  j["arity"] = p.arity;
  j["K"] = space.K();
  j["space_hash"] = space.hash();
  j["matches"] = r.matches;
  Json verification = Json::object();
  std::vector<int> m(p.arity, 0);
  size_t rank = 0;
  do {
    verification[tuple_key(m)] = static_cast<bool>(r.tuple_ok[rank]);
    ++rank;
  } while (detail::next_tuple(m, space.K()));
  j["verification"] = std::move(verification);
  if (!r.matches) {
    Json d;
    d["tuple"] = r.tuple;
    d["point"] = r.point;
    d["excess"] = r.excess;
    j["mismatch"] = std::move(d);
  }
  return j;
}

inline Json conservativity_json(const ConservativityReport& r) {
  Json j;
  j["sentence_count"] = r.outcomes.size();
  j["all_agree"] = r.all_agree;
  Json list = Json::array();
  for (const SentenceOutcome& o : r.outcomes) {
    Json oj;
    oj["sentence"] = print(o.sentence);
    oj["holds_in_all_models"] = o.holds_in_all_models;
    oj["bvm_full"] = o.bvm_full;
    oj["agree"] = o.agree;
    list.push_back(std::move(oj));
  }
  j["sentences"] = std::move(list);
  return j;
}

inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw Error("cannot parse '" + path + "' as JSON: " + e.what());
  }
  return j;
}

}  // namespace bvm

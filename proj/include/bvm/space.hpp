#pragma once

#include <algorithm>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "bvm/clopen.hpp"
#include "bvm/enumerations.hpp"
#include "bvm/model_enum.hpp"

// The space of enumerated models at scale K. A point is an equivalence class
// of pairs (M, alpha) with M a model of the class and alpha an enumeration
// {0..K-1} ->> |M|; (M, alpha) ~ (N, beta) iff some isomorphism theta: M -> N
// has beta = theta . alpha. Since the model class keeps one representative
// per isomorphism class, a point is (model index, orbit of alpha under the
// model's automorphism group), represented by the lexicographically least
// enumeration in the orbit. Formulas evaluate to clopen subsets of the
// space; at this finite scale the clopen algebra is the full powerset.

namespace bvm {

struct Point {
  int model;
  Enumeration enumeration;
};

namespace detail {

/// Binding of a formula's free variables to 1-based slots of the index tuple
/// xi. Free variables must all come from one reserved family: x1, x2, ...
/// (slot = subscript) or y, y1, y2, ... (y counts as y1).
struct SlotVar {
  std::string name;
  int slot;
};

inline bool parse_family_var(const std::string& v, char family, int& slot) {
  if (family == 'y' && v == "y") {
    slot = 1;
    return true;
  }
  if (v.size() < 2 || v[0] != family) return false;
  if (v[1] == '0') return false;
  int value = 0;
  for (size_t i = 1; i < v.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(v[i]))) return false;
    value = value * 10 + (v[i] - '0');
  }
  slot = value;
  return true;
}

inline std::vector<SlotVar> resolve_slots(const Formula& f) {
  std::vector<SlotVar> out;
  char family = 0;
  for (const std::string& v : free_variables(f)) {
    int slot = 0;
    char fam = 0;
    if (parse_family_var(v, 'x', slot))
      fam = 'x';
    else if (parse_family_var(v, 'y', slot))
      fam = 'y';
    else
      throw Error("free variable '" + v +
                  "' has no index slot (use the x1,x2,.. or y,y1,.. family)");
    if (family && fam != family)
      throw Error("free variables mix the x and y families");
    family = fam;
    for (const SlotVar& sv : out)
      if (sv.slot == slot)
        throw Error("free variables '" + sv.name + "' and '" + v +
                    "' denote the same index slot");
    out.push_back({v, slot});
  }
  return out;
}

inline uint64_t fnv1a(const std::string& data, uint64_t h = 1469598103934665603ull) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace detail

class Space {
 public:
  Space(ModelClass models, int K, Mode mode)
      : models_(std::move(models)), K_(K), mode_(mode) {
    if (K_ < 1) throw Error("K must be positive");
    for (const Structure& m : models_.structures) {
      if (m.size > K_)
        throw Error("K=" + std::to_string(K_) + " is smaller than a model of size " +
                    std::to_string(m.size));
      if (mode_ == Mode::Balanced && K_ % m.size != 0)
        throw Error("balanced mode requires K divisible by every model size; size " +
                    std::to_string(m.size) + " does not divide K=" + std::to_string(K_));
    }
    build_points();
    build_eq_clopens();
    compute_hash();
  }

  Space(const Space&) = delete;
  Space& operator=(const Space&) = delete;

  const ModelClass& models() const { return models_; }
  int K() const { return K_; }
  Mode mode() const { return mode_; }
  size_t point_count() const { return points_.size(); }
  const Point& point(size_t i) const { return points_[i]; }
  const std::string& hash() const { return hash_; }

  ClopenSet empty_clopen() const { return ClopenSet(points_.size()); }
  ClopenSet full_clopen() const { return ClopenSet::full(points_.size()); }

  /// The clopen where indices i and j enumerate the same element.
  const ClopenSet& eq_clopen(int i, int j) const {
    if (i < 0 || i >= K_ || j < 0 || j >= K_) throw Error("index out of range");
    return eq_clopens_[static_cast<size_t>(i) * K_ + j];
  }

  /// Least enumeration in the automorphism orbit of alpha.
  Enumeration canonical_enumeration(int model, const Enumeration& alpha) const {
    check_enumeration(model, alpha);
    const auto& auts = models_.automorphisms[model];
    Enumeration best = alpha;
    Enumeration candidate(alpha.size());
    for (const auto& theta : auts) {
      for (size_t i = 0; i < alpha.size(); ++i) candidate[i] = theta[alpha[i]];
      if (candidate < best) best = candidate;
    }
    return best;
  }

  /// Point index of the class of (model, alpha).
  int canonical_point(int model, const Enumeration& alpha) const {
    Enumeration canon = canonical_enumeration(model, alpha);
    auto it = std::lower_bound(
        points_.begin(), points_.end(), std::make_pair(model, canon),
        [](const Point& p, const std::pair<int, Enumeration>& key) {
          return p.model != key.first ? p.model < key.first
                                      : p.enumeration < key.second;
        });
    if (it == points_.end() || it->model != model || it->enumeration != canon)
      throw Error("enumeration does not belong to this space");
    return static_cast<int>(it - points_.begin());
  }

  /// Evaluate a formula to a clopen set: the points (M, alpha) where
  /// M |= f(alpha(xi)), with free variable slots bound through xi.
  /// Memoized per space, keyed on (printed formula, xi).
  ClopenSet evaluate(const Formula& f, const std::vector<int>& xi) const {
    std::vector<detail::SlotVar> slots = detail::resolve_slots(f);
    for (int v : xi)
      if (v < 0 || v >= K_) throw Error("xi index out of range");
    for (const detail::SlotVar& sv : slots)
      if (sv.slot > static_cast<int>(xi.size()))
        throw Error("free variable '" + sv.name + "' needs index slot " +
                    std::to_string(sv.slot) + ", xi has " +
                    std::to_string(xi.size()) + " entries");

    std::string key = print(f);
    key += '\x1f';
    for (int v : xi) {
      key += std::to_string(v);
      key += ',';
    }
    {
      std::lock_guard<std::mutex> lock(memo_mutex_);
      auto it = memo_.find(key);
      if (it != memo_.end()) return it->second;
    }

    ClopenSet out = evaluate_uncached(f, xi, slots);
    {
      std::lock_guard<std::mutex> lock(memo_mutex_);
      memo_.emplace(std::move(key), out);
    }
    return out;
  }

 private:
  void check_enumeration(int model, const Enumeration& alpha) const {
    if (model < 0 || model >= static_cast<int>(models_.structures.size()))
      throw Error("model index out of range");
    int n = models_.structures[model].size;
    if (static_cast<int>(alpha.size()) != K_)
      throw Error("enumeration length differs from K");
    std::vector<bool> hit(n, false);
    for (int v : alpha) {
      if (v < 0 || v >= n) throw Error("enumeration value outside the domain");
      hit[v] = true;
    }
    for (bool h : hit)
      if (!h) throw Error("enumeration is not surjective");
  }

  void build_points() {
    for (size_t mi = 0; mi < models_.structures.size(); ++mi) {
      int n = models_.structures[mi].size;
      for (Enumeration& alpha : enumerate_enumerations(n, K_, mode_)) {
        // Keep exactly the orbit-least enumerations; the list arrives in
        // lexicographic order, so points end up canonically sorted.
        if (canonical_enumeration_raw(static_cast<int>(mi), alpha) == alpha)
          points_.push_back({static_cast<int>(mi), std::move(alpha)});
      }
    }
  }

  Enumeration canonical_enumeration_raw(int model, const Enumeration& alpha) const {
    const auto& auts = models_.automorphisms[model];
    Enumeration best = alpha;
    Enumeration candidate(alpha.size());
    for (const auto& theta : auts) {
      for (size_t i = 0; i < alpha.size(); ++i) candidate[i] = theta[alpha[i]];
      if (candidate < best) best = candidate;
    }
    return best;
  }

  void build_eq_clopens() {
    eq_clopens_.reserve(static_cast<size_t>(K_) * K_);
    for (int i = 0; i < K_; ++i)
      for (int j = 0; j < K_; ++j) {
        ClopenSet s(points_.size());
        for (size_t p = 0; p < points_.size(); ++p)
          if (points_[p].enumeration[i] == points_[p].enumeration[j]) s.set(p);
        eq_clopens_.push_back(std::move(s));
      }
  }

  void compute_hash() {
    std::string data = "sig:";
    for (const auto& [name, arity] : models_.theory.sig.relations)
      data += "R" + name + "/" + std::to_string(arity) + ";";
    for (const auto& [name, arity] : models_.theory.sig.functions)
      data += "F" + name + "/" + std::to_string(arity) + ";";
    for (const std::string& name : models_.theory.sig.constants)
      data += "C" + name + ";";
    data += "axioms:";
    for (const Formula& axiom : models_.theory.axioms) data += print(axiom) + ";";
    data += "n_max=" + std::to_string(models_.n_max);
    data += ";K=" + std::to_string(K_);
    data += ";mode=" + to_string(mode_);
    data += ";structures:";
    for (const Structure& m : models_.structures) {
      for (int v : encode(m)) data += std::to_string(v) + ",";
      data += ";";
    }
    data += "points=" + std::to_string(points_.size());
    uint64_t h = detail::fnv1a(data);
    static const char* hex = "0123456789abcdef";
    hash_.clear();
    for (int i = 15; i >= 0; --i) hash_ += hex[(h >> (4 * i)) & 0xf];
  }

  ClopenSet evaluate_uncached(const Formula& f, const std::vector<int>& xi,
                              const std::vector<detail::SlotVar>& slots) const {
    const size_t k = slots.size();
    const Signature& sig = models_.theory.sig;

    // Truth of f depends on a point only through (model, values at the used
    // indices), so evaluate once per model and value tuple, then fill.
    std::vector<std::vector<uint8_t>> tables(models_.structures.size());
    for (size_t mi = 0; mi < models_.structures.size(); ++mi) {
      const Structure& m = models_.structures[mi];
      size_t cells = detail::pow_size(m.size, static_cast<int>(k));
      tables[mi].resize(cells);
      detail::Env env;
      for (const detail::SlotVar& sv : slots) env.frames.emplace_back(&sv.name, 0);
      std::vector<int> tuple(k, 0);
      size_t rank = 0;
      do {
        for (size_t i = 0; i < k; ++i) env.frames[i].second = tuple[i];
        tables[mi][rank++] = detail::eval_rec(sig, m, f, env) ? 1 : 0;
      } while (detail::next_tuple(tuple, m.size));
    }

    ClopenSet out(points_.size());
    for (size_t p = 0; p < points_.size(); ++p) {
      const Point& pt = points_[p];
      int n = models_.structures[pt.model].size;
      size_t rank = 0;
      for (size_t i = 0; i < k; ++i)
        rank = rank * n + static_cast<size_t>(pt.enumeration[xi[slots[i].slot - 1]]);
      if (tables[pt.model][rank]) out.set(p);
    }
    return out;
  }

  ModelClass models_;
  int K_;
  Mode mode_;
  std::vector<Point> points_;
  std::vector<ClopenSet> eq_clopens_;
  std::string hash_;
  mutable std::mutex memo_mutex_;
  mutable std::unordered_map<std::string, ClopenSet> memo_;
};

/// The clopen value of a formula at an index tuple.
inline ClopenSet evaluate_bvm(const Space& space, const Formula& f,
                              const std::vector<int>& xi) {
  return space.evaluate(f, xi);
}

// ---------------------------------------------------------------------------
// Conservativity: a sentence holds in every model of the class iff its value
// is the whole space.

struct SentenceOutcome {
  Formula sentence;
  bool holds_in_all_models;
  bool bvm_full;
  bool agree;
};

struct ConservativityReport {
  std::vector<SentenceOutcome> outcomes;
  bool all_agree = true;
};

inline ConservativityReport conservativity_report(const Space& space,
                                                  const std::vector<Formula>& sentences) {
  ConservativityReport report;
  const ModelClass& mc = space.models();
  for (const Formula& sigma : sentences) {
    if (!free_variables(sigma).empty())
      throw Error("conservativity check needs closed sentences, '" +
                  print(sigma) + "' has free variables");
    SentenceOutcome outcome{sigma, true, false, false};
    for (const Structure& m : mc.structures)
      if (!evaluate_classical(mc.theory.sig, m, sigma, {})) {
        outcome.holds_in_all_models = false;
        break;
      }
    outcome.bvm_full = space.evaluate(sigma, {}) == space.full_clopen();
    outcome.agree = outcome.holds_in_all_models == outcome.bvm_full;
    report.all_agree = report.all_agree && outcome.agree;
    report.outcomes.push_back(std::move(outcome));
  }
  return report;
}

}  // namespace bvm

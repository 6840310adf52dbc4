#pragma once

#include <cstdint>
#include <vector>

#include "bvm/error.hpp"

namespace bvm {

/// A clopen subset of a finite space: a bitset over point indices. At this
/// scale the clopen algebra is the full powerset, so every Boolean operation
/// is total.
class ClopenSet {
 public:
  ClopenSet() = default;
  explicit ClopenSet(size_t universe)
      : universe_(universe), words_((universe + 63) / 64, 0) {}

  static ClopenSet full(size_t universe) {
    ClopenSet s(universe);
    for (auto& w : s.words_) w = ~uint64_t{0};
    s.trim();
    return s;
  }

  size_t universe() const { return universe_; }

  void set(size_t i, bool value = true) {
    check_index(i);
    if (value)
      words_[i >> 6] |= uint64_t{1} << (i & 63);
    else
      words_[i >> 6] &= ~(uint64_t{1} << (i & 63));
  }

  bool test(size_t i) const {
    check_index(i);
    return (words_[i >> 6] >> (i & 63)) & 1;
  }

  size_t count() const {
    size_t n = 0;
    for (uint64_t w : words_) n += static_cast<size_t>(__builtin_popcountll(w));
    return n;
  }

  bool empty() const {
    for (uint64_t w : words_)
      if (w) return false;
    return true;
  }

  ClopenSet operator&(const ClopenSet& o) const {
    ClopenSet out = checked_copy(o);
    for (size_t i = 0; i < words_.size(); ++i) out.words_[i] = words_[i] & o.words_[i];
    return out;
  }
  ClopenSet operator|(const ClopenSet& o) const {
    ClopenSet out = checked_copy(o);
    for (size_t i = 0; i < words_.size(); ++i) out.words_[i] = words_[i] | o.words_[i];
    return out;
  }
  ClopenSet operator^(const ClopenSet& o) const {
    ClopenSet out = checked_copy(o);
    for (size_t i = 0; i < words_.size(); ++i) out.words_[i] = words_[i] ^ o.words_[i];
    return out;
  }
  ClopenSet operator~() const {
    ClopenSet out(universe_);
    for (size_t i = 0; i < words_.size(); ++i) out.words_[i] = ~words_[i];
    out.trim();
    return out;
  }
  ClopenSet& operator|=(const ClopenSet& o) { return *this = *this | o; }
  ClopenSet& operator&=(const ClopenSet& o) { return *this = *this & o; }

  bool is_subset_of(const ClopenSet& o) const {
    check_universe(o);
    for (size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }

  bool operator==(const ClopenSet& o) const {
    return universe_ == o.universe_ && words_ == o.words_;
  }
  bool operator!=(const ClopenSet& o) const { return !(*this == o); }

  /// Lowest member index, or -1 when empty.
  long first() const {
    for (size_t i = 0; i < words_.size(); ++i)
      if (words_[i])
        return static_cast<long>(i * 64 + static_cast<size_t>(__builtin_ctzll(words_[i])));
    return -1;
  }

  std::vector<size_t> indices() const {
    std::vector<size_t> out;
    out.reserve(count());
    for (size_t i = 0; i < words_.size(); ++i) {
      uint64_t w = words_[i];
      while (w) {
        out.push_back(i * 64 + static_cast<size_t>(__builtin_ctzll(w)));
        w &= w - 1;
      }
    }
    return out;
  }

 private:
  void check_index(size_t i) const {
    if (i >= universe_) throw Error("clopen index out of range");
  }
  void check_universe(const ClopenSet& o) const {
    if (universe_ != o.universe_)
      throw Error("clopen sets over different spaces");
  }
  ClopenSet checked_copy(const ClopenSet& o) const {
    check_universe(o);
    return ClopenSet(universe_);
  }
  void trim() {
    if (universe_ % 64 && !words_.empty())
      words_.back() &= (uint64_t{1} << (universe_ % 64)) - 1;
  }

  size_t universe_ = 0;
  std::vector<uint64_t> words_;
};

}  // namespace bvm

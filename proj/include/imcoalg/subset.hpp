#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <iterator>
#include <vector>

namespace imcoalg {

using Index = std::size_t;

/// A set of element indices drawn from a fixed universe {0, ..., n-1}.
///
/// Stored as a packed bitset. Iteration is in increasing index order and the
/// total order compares the sets as binary numbers (bit i has weight 2^i), so
/// sorting a list of subsets sorts it "by member bitmask".
class Subset {
 public:
  class iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = Index;
    using difference_type = std::ptrdiff_t;
    using pointer = const Index*;
    using reference = Index;

    iterator() = default;
    iterator(const Subset* owner, Index pos) : owner_(owner), pos_(pos) { seek(); }

    Index operator*() const { return pos_; }
    iterator& operator++() {
      ++pos_;
      seek();
      return *this;
    }
    iterator operator++(int) {
      iterator old = *this;
      ++*this;
      return old;
    }
    friend bool operator==(const iterator& a, const iterator& b) { return a.pos_ == b.pos_; }

   private:
    void seek() {
      const std::size_t n = owner_->universe_;
      while (pos_ < n) {
        const std::uint64_t w = owner_->words_[pos_ / 64] >> (pos_ % 64);
        if (w != 0) {
          pos_ += static_cast<Index>(std::countr_zero(w));
          return;
        }
        pos_ = (pos_ / 64 + 1) * 64;
      }
      pos_ = n;
    }

    const Subset* owner_ = nullptr;
    Index pos_ = 0;
  };

  Subset() = default;
  explicit Subset(std::size_t universe) : universe_(universe), words_((universe + 63) / 64, 0) {}
  Subset(std::size_t universe, std::initializer_list<Index> members) : Subset(universe) {
    for (Index i : members) insert(i);
  }
  template <class Range>
  static Subset of(std::size_t universe, const Range& members) {
    Subset s(universe);
    for (Index i : members) s.insert(i);
    return s;
  }
  static Subset full(std::size_t universe) {
    Subset s(universe);
    for (Index i = 0; i < universe; ++i) s.insert(i);
    return s;
  }
  /// Bits of `mask` name the members; the universe must not exceed 64.
  static Subset from_mask(std::size_t universe, std::uint64_t mask) {
    Subset s(universe);
    if (universe > 0) s.words_[0] = universe == 64 ? mask : (mask & ((std::uint64_t{1} << universe) - 1));
    return s;
  }

  std::size_t universe() const { return universe_; }
  bool contains(Index i) const { return i < universe_ && ((words_[i / 64] >> (i % 64)) & 1U); }
  void insert(Index i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  void erase(Index i) { words_[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }
  void clear() { std::fill(words_.begin(), words_.end(), std::uint64_t{0}); }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool empty() const {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
  }
  std::uint64_t mask() const { return words_.empty() ? 0 : words_[0]; }

  bool is_subset_of(const Subset& other) const {
    for (std::size_t k = 0; k < words_.size(); ++k)
      if (words_[k] & ~other.words_[k]) return false;
    return true;
  }
  bool intersects(const Subset& other) const {
    for (std::size_t k = 0; k < words_.size(); ++k)
      if (words_[k] & other.words_[k]) return true;
    return false;
  }

  Subset& operator&=(const Subset& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= o.words_[k];
    return *this;
  }
  Subset& operator|=(const Subset& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= o.words_[k];
    return *this;
  }
  Subset& operator-=(const Subset& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= ~o.words_[k];
    return *this;
  }
  friend Subset operator&(Subset a, const Subset& b) { return a &= b; }
  friend Subset operator|(Subset a, const Subset& b) { return a |= b; }
  friend Subset operator-(Subset a, const Subset& b) { return a -= b; }

  Subset complement() const { return full(universe_) - *this; }

  std::vector<Index> members() const { return {begin(), end()}; }

  iterator begin() const { return iterator(this, 0); }
  iterator end() const { return iterator(this, universe_); }

  friend bool operator==(const Subset& a, const Subset& b) = default;
  friend std::strong_ordering operator<=>(const Subset& a, const Subset& b) {
    if (a.universe_ != b.universe_) return a.universe_ <=> b.universe_;
    for (std::size_t k = a.words_.size(); k-- > 0;)
      if (a.words_[k] != b.words_[k]) return a.words_[k] <=> b.words_[k];
    return std::strong_ordering::equal;
  }

  std::size_t hash() const {
    std::size_t h = universe_ * 0x9e3779b97f4a7c15ULL;
    for (auto w : words_) h = (h ^ std::hash<std::uint64_t>{}(w)) * 0x100000001b3ULL;
    return h;
  }

 private:
  std::size_t universe_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace imcoalg

template <>
struct std::hash<imcoalg::Subset> {
  std::size_t operator()(const imcoalg::Subset& s) const { return s.hash(); }
};

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "subset.hpp"

namespace imcoalg {

/// A finite partially ordered set with labelled elements.
///
/// Elements are the indices 0..size()-1. The order is stored as one upset row
/// and one downset row per element, so principal upsets are O(1) lookups.
class Poset {
 public:
  enum class Mode { covers, full };

  Poset() = default;

  /// Builds a poset from label pairs (a, b) read as a <= b.
  ///
  /// With Mode::covers the order is the reflexive-transitive closure of the
  /// pairs. With Mode::full the pairs must already be transitive (the diagonal
  /// is implied); nothing is repaired.
  static Poset make(std::vector<std::string> labels,
                    const std::vector<std::pair<std::string, std::string>>& pairs,
                    Mode mode = Mode::covers) {
    if (labels.empty()) throw Error(ErrorKind::InvalidArgument, "a poset needs at least one element");
    std::map<std::string, Index> index;
    for (Index i = 0; i < labels.size(); ++i)
      if (!index.emplace(labels[i], i).second) throw Error(ErrorKind::DuplicateLabel, labels[i]);
    const std::size_t n = labels.size();
    std::vector<Subset> up(n, Subset(n));
    for (Index i = 0; i < n; ++i) up[i].insert(i);
    for (const auto& [a, b] : pairs) {
      auto ia = index.find(a);
      auto ib = index.find(b);
      if (ia == index.end()) throw Error(ErrorKind::UnknownLabel, a);
      if (ib == index.end()) throw Error(ErrorKind::UnknownLabel, b);
      up[ia->second].insert(ib->second);
    }
    if (mode == Mode::covers) {
      // Warshall on rows.
      for (Index k = 0; k < n; ++k)
        for (Index i = 0; i < n; ++i)
          if (up[i].contains(k)) up[i] |= up[k];
    }
    return from_rows(std::move(labels), std::move(up));
  }

  /// `up[i]` is the set {j : i <= j}. Verifies reflexivity, antisymmetry and
  /// transitivity; labels must be distinct.
  static Poset from_rows(std::vector<std::string> labels, std::vector<Subset> up) {
    const std::size_t n = labels.size();
    if (up.size() != n) throw Error(ErrorKind::InvalidArgument, "row count differs from label count");
    {
      std::vector<std::string> sorted = labels;
      std::sort(sorted.begin(), sorted.end());
      auto dup = std::adjacent_find(sorted.begin(), sorted.end());
      if (dup != sorted.end()) throw Error(ErrorKind::DuplicateLabel, *dup);
    }
    for (Index i = 0; i < n; ++i) {
      if (up[i].universe() != n) throw Error(ErrorKind::InvalidArgument, "row universe mismatch");
      if (!up[i].contains(i)) throw Error(ErrorKind::InvalidArgument, "order is not reflexive at " + labels[i]);
    }
    for (Index i = 0; i < n; ++i)
      for (Index j : up[i])
        if (j != i && up[j].contains(i))
          throw Error(ErrorKind::NotAntisymmetric, labels[i] + " and " + labels[j] + " lie on a cycle");
    for (Index i = 0; i < n; ++i)
      for (Index j : up[i])
        if (!up[j].is_subset_of(up[i])) {
          Index k = *(up[j] - up[i]).begin();
          throw Error(ErrorKind::NotTransitive,
                      labels[i] + " <= " + labels[j] + " <= " + labels[k] + " but not " + labels[i] + " <= " + labels[k]);
        }
    return Poset(std::move(labels), std::move(up));
  }

  std::size_t size() const { return labels_.size(); }
  const std::string& label(Index i) const { return labels_[i]; }
  const std::vector<std::string>& labels() const { return labels_; }

  std::optional<Index> find(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) return std::nullopt;
    return static_cast<Index>(it - labels_.begin());
  }
  Index index(const std::string& label) const {
    if (auto i = find(label)) return *i;
    throw Error(ErrorKind::UnknownLabel, label);
  }

  bool leq(Index i, Index j) const { return up_[i].contains(j); }
  /// The principal upset of i.
  const Subset& up(Index i) const { return up_[i]; }
  /// The principal downset of i.
  const Subset& down(Index i) const { return down_[i]; }

  /// Pairs (i, j) with i < j and nothing strictly between.
  std::vector<std::pair<Index, Index>> covers() const {
    std::vector<std::pair<Index, Index>> out;
    for (Index i = 0; i < size(); ++i)
      for (Index j : up_[i]) {
        if (j == i) continue;
        bool direct = true;
        for (Index k : up_[i])
          if (k != i && k != j && leq(k, j)) {
            direct = false;
            break;
          }
        if (direct) out.emplace_back(i, j);
      }
    return out;
  }

  friend bool operator==(const Poset& a, const Poset& b) {
    return a.labels_ == b.labels_ && a.up_ == b.up_;
  }

 private:
  Poset(std::vector<std::string> labels, std::vector<Subset> up)
      : labels_(std::move(labels)), up_(std::move(up)), down_(labels_.size(), Subset(labels_.size())) {
    for (Index i = 0; i < size(); ++i)
      for (Index j : up_[i]) down_[j].insert(i);
  }

  std::vector<std::string> labels_;
  std::vector<Subset> up_;
  std::vector<Subset> down_;
};

using PosetRef = std::shared_ptr<const Poset>;

inline PosetRef share(Poset p) { return std::make_shared<const Poset>(std::move(p)); }

/// A total function between the carriers of two posets.
class PosetMap {
 public:
  PosetMap() = default;
  PosetMap(PosetRef source, PosetRef target, std::vector<Index> image)
      : source_(std::move(source)), target_(std::move(target)), image_(std::move(image)) {
    if (image_.size() != source_->size())
      throw Error(ErrorKind::InvalidArgument, "map is not total on its source");
    for (Index v : image_)
      if (v >= target_->size()) throw Error(ErrorKind::InvalidArgument, "map value outside target");
  }

  const PosetRef& source() const { return source_; }
  const PosetRef& target() const { return target_; }
  const std::vector<Index>& image() const { return image_; }
  Index operator()(Index x) const { return image_[x]; }

  friend bool operator==(const PosetMap& a, const PosetMap& b) {
    return a.image_ == b.image_ && *a.source_ == *b.source_ && *a.target_ == *b.target_;
  }

 private:
  PosetRef source_;
  PosetRef target_;
  std::vector<Index> image_;
};

// ---------------------------------------------------------------------------
// Standard small posets.

inline Poset chain(std::size_t n, const std::string& prefix = "c") {
  std::vector<std::string> labels;
  std::vector<std::pair<std::string, std::string>> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    labels.push_back(prefix + std::to_string(i));
    if (i > 0) pairs.emplace_back(labels[i - 1], labels[i]);
  }
  return Poset::make(std::move(labels), pairs);
}

inline Poset antichain(std::size_t n, const std::string& prefix = "a") {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(prefix + std::to_string(i));
  return Poset::make(std::move(labels), {});
}

inline Poset one_point(const std::string& label = "*") { return Poset::make({label}, {}); }

// ---------------------------------------------------------------------------
// Maps.

inline PosetMap identity_map(const PosetRef& p) {
  std::vector<Index> img(p->size());
  std::iota(img.begin(), img.end(), Index{0});
  return PosetMap(p, p, std::move(img));
}

inline PosetMap constant_map(const PosetRef& source, const PosetRef& target, Index value) {
  return PosetMap(source, target, std::vector<Index>(source->size(), value));
}

/// The unique map to a fresh one-point poset.
inline PosetMap terminal_map(const PosetRef& source) {
  return constant_map(source, share(one_point()), 0);
}

/// g after f.
inline PosetMap compose(const PosetMap& g, const PosetMap& f) {
  std::vector<Index> img(f.source()->size());
  for (Index x = 0; x < img.size(); ++x) img[x] = g(f(x));
  return PosetMap(f.source(), g.target(), std::move(img));
}

inline bool is_monotone(const PosetMap& f) {
  const Poset& src = *f.source();
  const Poset& dst = *f.target();
  for (Index x = 0; x < src.size(); ++x)
    for (Index y : src.up(x))
      if (!dst.leq(f(x), f(y))) return false;
  return true;
}

/// Monotone and: f(x) <= y implies y = f(x') for some x' >= x.
inline bool is_pmorphism(const PosetMap& f) {
  if (!is_monotone(f)) return false;
  const Poset& src = *f.source();
  const Poset& dst = *f.target();
  for (Index x = 0; x < src.size(); ++x) {
    Subset reached(dst.size());
    for (Index x2 : src.up(x)) reached.insert(f(x2));
    if (!dst.up(f(x)).is_subset_of(reached)) return false;
  }
  return true;
}

inline bool is_surjective(const PosetMap& f) {
  Subset hit(f.target()->size());
  for (Index v : f.image()) hit.insert(v);
  return hit.count() == f.target()->size();
}

// ---------------------------------------------------------------------------
// Subsets.

inline Subset principal_up(const Poset& p, Index x) { return p.up(x); }

inline Subset up_closure(const Poset& p, const Subset& s) {
  Subset out(p.size());
  for (Index x : s) out |= p.up(x);
  return out;
}

inline Subset down_closure(const Poset& p, const Subset& s) {
  Subset out(p.size());
  for (Index x : s) out |= p.down(x);
  return out;
}

inline bool is_upset(const Poset& p, const Subset& s) { return up_closure(p, s) == s; }

/// The member below every other member, if there is one. The empty set has no root.
inline std::optional<Index> root_of(const Poset& p, const Subset& s) {
  for (Index x : s)
    if (s.is_subset_of(p.up(x))) return x;
  return std::nullopt;
}

inline Subset direct_image(const PosetMap& f, const Subset& s) {
  Subset out(f.target()->size());
  for (Index x : s) out.insert(f(x));
  return out;
}

inline Subset preimage(const PosetMap& f, const Subset& s) {
  Subset out(f.source()->size());
  for (Index x = 0; x < f.source()->size(); ++x)
    if (s.contains(f(x))) out.insert(x);
  return out;
}

/// S is g-open: for s in S and b >= s there is s' in S with s <= s' and g(s') = g(b).
inline bool is_g_open(const Subset& s, const PosetMap& g) {
  const Poset& x = *g.source();
  for (Index a : s) {
    Subset reachable(g.target()->size());
    for (Index a2 : s & x.up(a)) reachable.insert(g(a2));
    for (Index b : x.up(a))
      if (!reachable.contains(g(b))) return false;
  }
  return true;
}

/// f: X -> Y is open relative to g: Y -> Z: whenever f(a) <= b there is
/// a' >= a with g(f(a')) = g(b).
inline bool relative_open(const PosetMap& f, const PosetMap& g) {
  if (!(*f.target() == *g.source()))
    throw Error(ErrorKind::InvalidArgument, "relative_open: f's target is not g's source");
  const Poset& x = *f.source();
  const Poset& y = *f.target();
  for (Index a = 0; a < x.size(); ++a) {
    Subset reachable(g.target()->size());
    for (Index a2 : x.up(a)) reachable.insert(g(f(a2)));
    for (Index b : y.up(f(a)))
      if (!reachable.contains(g(b))) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Constructions.

/// Componentwise order on pairs; element (i, j) has index i * |Q| + j.
inline Poset product(const Poset& p, const Poset& q) {
  const std::size_t n = p.size() * q.size();
  std::vector<std::string> labels;
  labels.reserve(n);
  std::vector<Subset> up(n, Subset(n));
  for (Index i = 0; i < p.size(); ++i)
    for (Index j = 0; j < q.size(); ++j) labels.push_back("(" + p.label(i) + "," + q.label(j) + ")");
  for (Index i = 0; i < p.size(); ++i)
    for (Index j = 0; j < q.size(); ++j)
      for (Index i2 : p.up(i))
        for (Index j2 : q.up(j)) up[i * q.size() + j].insert(i2 * q.size() + j2);
  return Poset::from_rows(std::move(labels), std::move(up));
}

/// All upsets of p, sorted by member bitmask. Throws StageTooLarge past `cap`.
inline std::vector<Subset> enumerate_upsets(const Poset& p, std::size_t cap = std::size_t{1} << 20) {
  const std::size_t n = p.size();
  // Decide elements from the top of a linear extension down: x may join the
  // upset only once everything strictly above it already has.
  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return p.down(a).count() > p.down(b).count(); });
  std::vector<Subset> out;
  Subset current(n);
  auto rec = [&](auto&& self, std::size_t k) -> void {
    if (k == n) {
      if (out.size() >= cap) throw Error(ErrorKind::StageTooLarge, "more than " + std::to_string(cap) + " upsets");
      out.push_back(current);
      return;
    }
    const Index x = order[k];
    self(self, k + 1);
    Subset above = p.up(x);
    above.erase(x);
    if (above.is_subset_of(current)) {
      current.insert(x);
      self(self, k + 1);
      current.erase(x);
    }
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end());
  return out;
}

/// Brute-force order isomorphism test (label-blind); fine for small posets.
inline std::optional<std::vector<Index>> find_isomorphism(const Poset& p, const Poset& q) {
  const std::size_t n = p.size();
  if (q.size() != n) return std::nullopt;
  std::vector<Index> image(n);
  Subset used(n);
  auto rec = [&](auto&& self, Index i) -> bool {
    if (i == n) return true;
    for (Index c = 0; c < n; ++c) {
      if (used.contains(c)) continue;
      if (p.up(i).count() != q.up(c).count() || p.down(i).count() != q.down(c).count()) continue;
      bool ok = true;
      for (Index j = 0; j < i && ok; ++j)
        ok = p.leq(i, j) == q.leq(c, image[j]) && p.leq(j, i) == q.leq(image[j], c);
      if (!ok) continue;
      image[i] = c;
      used.insert(c);
      if (self(self, i + 1)) return true;
      used.erase(c);
    }
    return false;
  };
  if (rec(rec, 0)) return image;
  return std::nullopt;
}

inline bool is_isomorphic(const Poset& p, const Poset& q) { return find_isomorphism(p, q).has_value(); }

/// Renders a subset as "{a,b}" using the poset's labels.
inline std::string format_subset(const Poset& p, const Subset& s) {
  std::string out = "{";
  bool first = true;
  for (Index i : s) {
    if (!first) out += ",";
    out += p.label(i);
    first = false;
  }
  return out + "}";
}

}  // namespace imcoalg

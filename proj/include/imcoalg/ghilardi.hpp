#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "enumerate.hpp"
#include "functor.hpp"
#include "poset.hpp"

namespace imcoalg {

struct ComplexLimits {
  std::size_t max_stage = 5000;               // elements per stage
  std::size_t max_depth = 4;                  // stages above the base
  std::uint64_t max_candidates = 1ULL << 22;  // subsets examined while building one stage
};

/// P_g(X): the finite, rooted, g-open subsets of g.source(), ordered by
/// reverse inclusion, together with the root map back to X.
struct RootedStage {
  PosetRef poset;
  PosetMap root;
  std::vector<Subset> members;  // element k of `poset` is the subset members[k] of X
};

namespace detail {

inline std::string stage_label(const std::vector<std::string>& parts, Index id) {
  std::string s = "{";
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (k) s += ",";
    s += parts[k];
    if (s.size() > 80) return "#" + std::to_string(id);
  }
  return s + "}";
}

}  // namespace detail

/// Enumerates every nonempty subset of X that is rooted and g-open.
///
/// Rooted subsets are generated root by root (a subset rooted at x lives
/// inside ↑x), then each candidate is filtered through root_of and is_g_open.
inline RootedStage build_p_g(const PosetMap& g, const ComplexLimits& limits = {}) {
  const Poset& x = *g.source();
  std::vector<Subset> kept;
  std::uint64_t examined = 0;
  for (Index r = 0; r < x.size(); ++r) {
    Subset above = x.up(r);
    above.erase(r);
    const std::vector<Index> free = above.members();
    if (free.size() >= 63 || (std::uint64_t{1} << free.size()) > limits.max_candidates - examined)
      throw Error(ErrorKind::StageTooLarge, "rooted subsets above " + x.label(r) + " exceed the candidate budget");
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << free.size()); ++m) {
      ++examined;
      Subset s(x.size());
      s.insert(r);
      for (std::size_t k = 0; k < free.size(); ++k)
        if ((m >> k) & 1U) s.insert(free[k]);
      if (!root_of(x, s) || !is_g_open(s, g)) continue;
      if (kept.size() >= limits.max_stage)
        throw Error(ErrorKind::StageTooLarge, "stage exceeds " + std::to_string(limits.max_stage) + " elements");
      kept.push_back(std::move(s));
    }
  }
  std::sort(kept.begin(), kept.end());
  const std::size_t n = kept.size();
  std::vector<std::string> labels;
  std::vector<Subset> rows(n, Subset(n));
  std::vector<Index> roots;
  for (Index k = 0; k < n; ++k) {
    std::vector<std::string> parts;
    for (Index e : kept[k]) parts.push_back(x.label(e));
    labels.push_back(detail::stage_label(parts, k));
    roots.push_back(*root_of(x, kept[k]));
    for (Index j = 0; j < n; ++j)
      if (kept[j].is_subset_of(kept[k])) rows[k].insert(j);
  }
  RootedStage out;
  out.poset = share(Poset::from_rows(std::move(labels), std::move(rows)));
  out.root = PosetMap(out.poset, g.source(), std::move(roots));
  out.members = std::move(kept);
  return out;
}

/// The g-discrete complex truncated at a fixed depth.
///
/// Stage 0 is g.target(), stage 1 is g.source() and r_1 = g. For i >= 2,
/// stage i is P_{r_{i-1}}(stage i-1) and r_i sends an element to its root.
/// Elements of stages i >= 2 are stored as sorted lists of stage-(i-1) ids.
///
/// A complex is either built completely (every stage enumerated) or lazily,
/// in which case stages >= 2 only hold the elements interned so far. Every
/// interned element is validated first, so both kinds agree on what they hold.
class Complex {
 public:
  static Complex build(const PosetMap& g, std::size_t depth, ComplexLimits limits = {}) {
    Complex cx(g, depth, limits);
    for (std::size_t i = 2; i <= depth; ++i) {
      const PosetMap r = i == 2 ? g : cx.root_map(i - 1);
      RootedStage rs = build_p_g(r, limits);
      Stage& st = cx.stages_[i - 2];
      for (Index k = 0; k < rs.members.size(); ++k) {
        st.members.push_back(rs.members[k].members());
        st.roots.push_back(rs.root(k));
        st.lookup.emplace(st.members.back(), k);
      }
      st.poset = rs.poset;
      st.complete = true;
    }
    return cx;
  }

  static Complex lazy(const PosetMap& g, std::size_t depth, ComplexLimits limits = {}) {
    return Complex(g, depth, limits);
  }

  std::size_t depth() const { return depth_; }
  const PosetMap& base_map() const { return g_; }
  const Poset& base() const { return *g_.source(); }
  const ComplexLimits& limits() const { return limits_; }
  bool terminal() const { return g_.target()->size() == 1; }
  bool complete(std::size_t i) const { return i < 2 || stage(i).complete; }

  std::size_t stage_size(std::size_t i) const {
    if (i == 0) return g_.target()->size();
    if (i == 1) return g_.source()->size();
    return stage(i).members.size();
  }

  const std::vector<Index>& members(std::size_t i, Index id) const { return stage(i).members.at(id); }

  /// r_i applied to an element of stage i (i >= 1).
  Index root(std::size_t i, Index id) const {
    if (i == 1) return g_(id);
    return stage(i).roots.at(id);
  }

  /// The stage-i order: the given posets on stages 0 and 1, reverse inclusion above.
  bool leq(std::size_t i, Index a, Index b) const {
    if (i == 0) return g_.target()->leq(a, b);
    if (i == 1) return g_.source()->leq(a, b);
    const auto& ma = members(i, a);
    const auto& mb = members(i, b);
    return std::includes(ma.begin(), ma.end(), mb.begin(), mb.end());
  }

  /// Whether a sorted, duplicate-free list of stage-(i-1) ids is a rooted,
  /// r_{i-1}-open subset, i.e. an element of stage i.
  ///
  /// For i >= 3 the elements above s in stage i-1 are exactly the valid
  /// subsets of s, and their roots are exactly the members of s (each member
  /// t roots the part of s above t). Openness therefore reduces to: for every
  /// s in S and t in s some s' in S with s' ⊆ s has root t.
  bool is_valid(std::size_t i, const std::vector<Index>& cand) const {
    check_stage_index(i);
    if (i < 2 || cand.empty()) return false;
    if (!std::is_sorted(cand.begin(), cand.end()) || std::adjacent_find(cand.begin(), cand.end()) != cand.end())
      return false;
    const std::size_t prev = i - 1;
    for (Index s : cand)
      if (s >= stage_size(prev)) return false;
    bool rooted = false;
    for (Index s : cand) {
      if (std::all_of(cand.begin(), cand.end(), [&](Index t) { return leq(prev, s, t); })) {
        rooted = true;
        break;
      }
    }
    if (!rooted) return false;
    if (i == 2) {
      const Poset& x = base();
      for (Index s : cand) {
        Subset reachable(g_.target()->size());
        for (Index s2 : cand)
          if (x.leq(s, s2)) reachable.insert(g_(s2));
        for (Index b : x.up(s))
          if (!reachable.contains(g_(b))) return false;
      }
      return true;
    }
    for (Index s : cand) {
      for (Index t : members(prev, s)) {
        bool witnessed = false;
        for (Index s2 : cand)
          if (root(prev, s2) == t && leq(prev, s, s2)) {
            witnessed = true;
            break;
          }
        if (!witnessed) return false;
      }
    }
    return true;
  }

  std::optional<Index> find(std::size_t i, const std::vector<Index>& cand) const {
    const Stage& st = stage(i);
    auto it = st.lookup.find(cand);
    if (it == st.lookup.end()) return std::nullopt;
    return it->second;
  }

  /// Looks the element up, adding it to a lazy stage if it is valid.
  /// Returns nullopt when `cand` is not an element of stage i.
  std::optional<Index> intern(std::size_t i, std::vector<Index> cand) {
    check_stage_index(i);
    if (i < 2) throw Error(ErrorKind::InvalidArgument, "stages 0 and 1 are fixed");
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    if (auto hit = find(i, cand)) return hit;
    Stage& st = stages_[i - 2];
    if (st.complete || !is_valid(i, cand)) return std::nullopt;
    if (st.members.size() >= limits_.max_stage)
      throw Error(ErrorKind::StageTooLarge, "stage " + std::to_string(i) + " exceeds " +
                                                std::to_string(limits_.max_stage) + " elements");
    Index root_id = cand.front();
    for (Index s : cand)
      if (std::all_of(cand.begin(), cand.end(), [&](Index t) { return leq(i - 1, s, t); })) {
        root_id = s;
        break;
      }
    const Index id = st.members.size();
    st.members.push_back(cand);
    st.roots.push_back(root_id);
    st.lookup.emplace(std::move(cand), id);
    return id;
  }

  /// The compatible sequence c_0..c_i ending in element `id` of stage i.
  std::vector<Index> tower(std::size_t i, Index id) const {
    std::vector<Index> out(i + 1);
    out[i] = id;
    for (std::size_t k = i; k > 0; --k) out[k - 1] = root(k, out[k]);
    return out;
  }

  /// Elements of a complete stage i whose root is r.
  std::vector<Index> with_root(std::size_t i, Index r) const {
    std::vector<Index> out;
    for (Index id = 0; id < stage_size(i); ++id)
      if (root(i, id) == r) out.push_back(id);
    return out;
  }

  PosetRef stage_poset(std::size_t i) const {
    check_stage_index(i);
    if (i == 0) return g_.target();
    if (i == 1) return g_.source();
    const Stage& st = stage(i);
    if (!st.poset) {
      const std::size_t n = st.members.size();
      std::vector<std::string> labels;
      std::vector<Subset> rows(n, Subset(n));
      for (Index a = 0; a < n; ++a) {
        labels.push_back(label(i, a));
        for (Index b = 0; b < n; ++b)
          if (leq(i, a, b)) rows[a].insert(b);
      }
      st.poset = share(Poset::from_rows(std::move(labels), std::move(rows)));
    }
    return st.poset;
  }

  /// r_i as a map of posets (i >= 1).
  PosetMap root_map(std::size_t i) const {
    if (i == 1) return g_;
    std::vector<Index> img(stage_size(i));
    for (Index id = 0; id < img.size(); ++id) img[id] = root(i, id);
    return PosetMap(stage_poset(i), stage_poset(i - 1), std::move(img));
  }

  std::string label(std::size_t i, Index id) const {
    if (i == 0) return g_.target()->label(id);
    if (i == 1) return g_.source()->label(id);
    const Stage& st = stage(i);
    if (st.poset) return st.poset->label(id);
    std::vector<std::string> parts;
    for (Index m : members(i, id)) parts.push_back(label(i - 1, m));
    return detail::stage_label(parts, id);
  }

 private:
  struct Stage {
    std::vector<std::vector<Index>> members;
    std::vector<Index> roots;
    std::map<std::vector<Index>, Index> lookup;
    bool complete = false;
    mutable PosetRef poset;
  };

  Complex(const PosetMap& g, std::size_t depth, ComplexLimits limits)
      : g_(g), depth_(depth), limits_(limits), stages_(depth >= 2 ? depth - 1 : 0) {
    if (depth < 1) throw Error(ErrorKind::InvalidArgument, "a complex has depth at least 1");
    if (depth > limits.max_depth)
      throw Error(ErrorKind::InvalidArgument,
                  "depth " + std::to_string(depth) + " exceeds the cap " + std::to_string(limits.max_depth));
    if (!is_monotone(g)) throw Error(ErrorKind::NotMonotone, "the base map of a complex must be monotone");
  }

  void check_stage_index(std::size_t i) const {
    if (i > depth_) throw Error(ErrorKind::InvalidArgument, "stage " + std::to_string(i) + " beyond complex depth");
  }
  const Stage& stage(std::size_t i) const {
    check_stage_index(i);
    return stages_.at(i - 2);
  }

  PosetMap g_;
  std::size_t depth_;
  ComplexLimits limits_;
  std::vector<Stage> stages_;
};

/// Same as Complex::build.
inline Complex build_complex(const PosetMap& g, std::size_t depth, ComplexLimits limits = {}) {
  return Complex::build(g, depth, limits);
}

/// Pushes an element of stage i of `from` through h : stage1(from) -> stage1(to),
/// level by level (direct image on member lists). Both complexes must be
/// over terminal maps. Returns nullopt if some image is not a stage element.
inline std::optional<Index> map_element(const PosetMap& h, const Complex& from, std::size_t i, Index id,
                                        Complex& to) {
  if (i == 0) return Index{0};
  if (i == 1) return h(id);
  std::vector<Index> img;
  for (Index m : from.members(i, id)) {
    auto v = map_element(h, from, i - 1, m, to);
    if (!v) return std::nullopt;
    img.push_back(*v);
  }
  return to.intern(i, std::move(img));
}

// ---------------------------------------------------------------------------
// Tower maps and the lifting of monotone maps.

/// Coordinates f_0..f_n of a map into the truncated limit: coords[i][x] is an
/// element of stage i. Coordinate 1 is the base map into stage 1.
struct TowerMap {
  PosetRef source;
  std::vector<std::vector<Index>> coords;

  std::size_t depth() const { return coords.empty() ? 0 : coords.size() - 1; }
  const std::vector<Index>& coordinate(std::size_t i) const { return coords.at(i); }
  std::vector<Index> at(Index x) const {
    std::vector<Index> t;
    for (const auto& c : coords) t.push_back(c[x]);
    return t;
  }
  friend bool operator==(const TowerMap&, const TowerMap&) = default;
};

/// Coordinates are monotone and r_i(f_i(x)) = f_{i-1}(x).
inline bool is_tower_map(const TowerMap& t, const Complex& cx) {
  const Poset& x = *t.source;
  for (std::size_t i = 0; i <= t.depth(); ++i) {
    for (Index a = 0; a < x.size(); ++a) {
      if (i > 0 && cx.root(i, t.coords[i][a]) != t.coords[i - 1][a]) return false;
      for (Index b : x.up(a))
        if (!cx.leq(i, t.coords[i][a], t.coords[i][b])) return false;
    }
  }
  return true;
}

/// Lifts a monotone f : X -> Y along the terminal complex over Y:
/// f_1 = f and f_{i+1}(x) = f_i[↑x]. Coordinate 0 is the constant map.
inline TowerMap lift_map(const PosetMap& f, Complex& cx, std::size_t depth) {
  if (!is_monotone(f)) throw Error(ErrorKind::NotMonotone, "only monotone maps lift");
  if (!cx.terminal()) throw Error(ErrorKind::InvalidArgument, "lifting needs the terminal complex");
  if (!(*f.target() == cx.base())) throw Error(ErrorKind::InvalidArgument, "map target differs from the complex base");
  if (depth > cx.depth()) throw Error(ErrorKind::InvalidArgument, "lift deeper than the complex");
  const Poset& x = *f.source();
  TowerMap t;
  t.source = f.source();
  t.coords.push_back(std::vector<Index>(x.size(), 0));
  if (depth >= 1) t.coords.push_back(f.image());
  for (std::size_t i = 2; i <= depth; ++i) {
    std::vector<Index> next(x.size());
    for (Index a = 0; a < x.size(); ++a) {
      std::vector<Index> img;
      for (Index b : x.up(a)) img.push_back(t.coords[i - 1][b]);
      auto id = cx.intern(i, img);
      if (!id)
        throw Error(ErrorKind::LiftOutsideStage,
                    "f_" + std::to_string(i - 1) + "[↑" + x.label(a) + "] is not in stage " + std::to_string(i));
      next[a] = *id;
    }
    t.coords.push_back(std::move(next));
  }
  return t;
}

namespace detail {

// Elements of stage n lying above `top` (coordinatewise towers above it).
inline std::vector<Index> elements_above(Complex& cx, std::size_t n, Index top) {
  std::vector<Index> above;
  if (n <= 1) {
    for (Index c = 0; c < cx.stage_size(n); ++c)
      if (cx.leq(n, top, c)) above.push_back(c);
    return above;
  }
  // Above `top` in stage n are exactly the valid sublists of its members.
  const auto mem = cx.members(n, top);
  if (mem.size() > 20) throw Error(ErrorKind::EnumerationTooLarge, "element has too many members");
  for (std::uint64_t m = 1; m < (std::uint64_t{1} << mem.size()); ++m) {
    std::vector<Index> cand;
    for (std::size_t k = 0; k < mem.size(); ++k)
      if ((m >> k) & 1U) cand.push_back(mem[k]);
    if (auto id = cx.intern(n, cand)) above.push_back(*id);
  }
  return above;
}

// Some x' >= a has t_i(x') = y_i for i <= n.
inline bool realised_above(const TowerMap& t, Index a, const std::vector<Index>& y, std::size_t n) {
  for (Index a2 : t.source->up(a)) {
    bool same = true;
    for (std::size_t i = 0; i <= n && same; ++i) same = t.coords[i][a2] == y[i];
    if (same) return true;
  }
  return false;
}

}  // namespace detail

/// The back condition at level n, read off stage n+1: whenever an element c
/// of stage n+1 lies above t_{n+1}(x), some x' >= x has t_i(x') = c_i for
/// all i <= n. Needs t.depth() > n.
///
/// A tower of depth n above t(x) that has no extension above t_{n+1}(x)
/// extends to no limit element above t(x), so it is not tested; see
/// check_truncated_towers_realised for the check that does test it.
inline bool check_limit_pmorphism(const TowerMap& t, Complex& cx, std::size_t n) {
  if (n + 1 > t.depth()) throw Error(ErrorKind::InvalidArgument, "level n is read off coordinate n+1");
  for (Index a = 0; a < t.source->size(); ++a)
    for (Index c : detail::elements_above(cx, n + 1, t.coords[n + 1][a]))
      if (!detail::realised_above(t, a, cx.tower(n + 1, c), n)) return false;
  return true;
}

/// The back condition at every level the tower map supports.
inline bool check_limit_pmorphism(const TowerMap& t, Complex& cx) {
  for (std::size_t n = 0; n < t.depth(); ++n)
    if (!check_limit_pmorphism(t, cx, n)) return false;
  return true;
}

/// Whether every tower of depth n lying above t(x) is t(x') for some x' >= x,
/// including towers that do not extend upward above t(x). Lifts can fail
/// this (the identity on a 2-chain does at n = 2), so it is not the
/// p-morphism condition of the limit.
inline bool check_truncated_towers_realised(const TowerMap& t, Complex& cx, std::size_t n) {
  if (n > t.depth()) throw Error(ErrorKind::InvalidArgument, "check deeper than the tower map");
  for (Index a = 0; a < t.source->size(); ++a)
    for (Index c : detail::elements_above(cx, n, t.coords[n][a]))
      if (!detail::realised_above(t, a, cx.tower(n, c), n)) return false;
  return true;
}

/// Every tower map X -> (complete complex) with the given coordinate 1.
inline std::vector<TowerMap> enumerate_tower_maps(const PosetMap& f, const Complex& cx, std::size_t depth,
                                                  std::size_t cap = 100000) {
  const Poset& x = *f.source();
  for (std::size_t i = 2; i <= depth; ++i)
    if (!cx.complete(i)) throw Error(ErrorKind::InvalidArgument, "tower enumeration needs a complete complex");
  std::vector<TowerMap> out;
  TowerMap t;
  t.source = f.source();
  t.coords.push_back(std::vector<Index>(x.size(), 0));
  t.coords.push_back(f.image());
  if (depth <= 1) {
    t.coords.resize(depth + 1);
    out.push_back(t);
    return out;
  }
  for (std::size_t i = 2; i <= depth; ++i) t.coords.push_back(std::vector<Index>(x.size(), 0));
  auto rec = [&](auto&& self, std::size_t i, Index a) -> void {
    if (a == x.size()) {
      if (i == depth) {
        if (out.size() >= cap) throw Error(ErrorKind::EnumerationTooLarge, "too many tower maps");
        out.push_back(t);
      } else {
        self(self, i + 1, 0);
      }
      return;
    }
    for (Index c : cx.with_root(i, t.coords[i - 1][a])) {
      bool ok = true;
      for (Index b = 0; b < a && ok; ++b) {
        if (x.leq(b, a)) ok = cx.leq(i, t.coords[i][b], c);
        if (ok && x.leq(a, b)) ok = cx.leq(i, c, t.coords[i][b]);
      }
      if (!ok) continue;
      t.coords[i][a] = c;
      self(self, i, a + 1);
    }
  };
  rec(rec, 2, 0);
  return out;
}

struct AdjunctionReport {
  std::size_t monotone_maps = 0;
  std::size_t lifts_restricting_to_f = 0;
  std::size_t lifts_passing_pmorphism = 0;
  std::size_t tower_maps_examined = 0;
  std::size_t tower_maps_passing = 0;
  std::vector<std::string> counterexamples;

  bool verified() const {
    return counterexamples.empty() && lifts_restricting_to_f == monotone_maps &&
           lifts_passing_pmorphism == monotone_maps && tower_maps_passing == monotone_maps;
  }
};

/// Checks the bijection between monotone maps X -> Y and p-morphic tower
/// maps X -> (complex over Y) at the given depth: every lift restricts to
/// its base map, is p-morphic at every level below `depth`, and is the only
/// such tower map over it.
inline AdjunctionReport check_adjunction(const PosetRef& x, const PosetRef& y, std::size_t depth,
                                         ComplexLimits limits = {}, std::size_t max_maps = 100000) {
  double total = 1;
  for (std::size_t i = 0; i < x->size(); ++i) total *= static_cast<double>(y->size());
  if (total > static_cast<double>(max_maps)) throw Error(ErrorKind::EnumerationTooLarge, "|Y|^|X| exceeds the cap");
  Complex cx = Complex::build(terminal_map(y), depth, limits);
  AdjunctionReport report;
  auto describe = [&](const PosetMap& f) {
    std::string s = "[";
    for (Index a = 0; a < x->size(); ++a) s += (a ? "," : "") + x->label(a) + "->" + y->label(f(a));
    return s + "]";
  };
  for (const PosetMap& f : monotone_maps(x, y)) {
    ++report.monotone_maps;
    TowerMap lifted = lift_map(f, cx, depth);
    if (depth >= 1 && lifted.coords[1] == f.image()) ++report.lifts_restricting_to_f;
    else report.counterexamples.push_back("lift does not restrict to " + describe(f));
    if (check_limit_pmorphism(lifted, cx)) ++report.lifts_passing_pmorphism;
    else report.counterexamples.push_back("lift of " + describe(f) + " is not p-morphic");
    for (const TowerMap& t : enumerate_tower_maps(f, cx, depth)) {
      ++report.tower_maps_examined;
      if (!check_limit_pmorphism(t, cx)) continue;
      ++report.tower_maps_passing;
      if (!(t == lifted)) report.counterexamples.push_back("second p-morphic tower map over " + describe(f));
    }
  }
  return report;
}

/// F applied to P, then the terminal complex over F(P) to the given depth:
/// the depth-truncated intuitionistic lifting of F at P.
struct LiftedValue {
  FunctorValue value;
  Complex complex;
};

template <PosetEndofunctor F>
LiftedValue intuitionistic_lift(const F& functor, const PosetRef& p, std::size_t depth, ComplexLimits limits = {}) {
  FunctorValue v = functor.apply(p);
  Complex cx = Complex::build(terminal_map(v.poset), depth, limits);
  return LiftedValue{std::move(v), std::move(cx)};
}

/// The lifted functor on a map h : P -> Q, restricted to the truncated
/// complexes: F(h) at stage 1, direct image on member lists above.
template <PosetEndofunctor F>
std::vector<std::vector<Index>> intuitionistic_lift_map(const F& functor, const PosetMap& h, const LiftedValue& from,
                                                        LiftedValue& to) {
  PosetMap fh = functor.map(h, from.value, to.value);
  std::vector<std::vector<Index>> out;
  for (std::size_t i = 0; i <= from.complex.depth(); ++i) {
    std::vector<Index> level;
    for (Index id = 0; id < from.complex.stage_size(i); ++id) {
      auto v = map_element(fh, from.complex, i, id, to.complex);
      if (!v) throw Error(ErrorKind::LiftOutsideStage, "image leaves stage " + std::to_string(i));
      level.push_back(*v);
    }
    out.push_back(std::move(level));
  }
  return out;
}

}  // namespace imcoalg

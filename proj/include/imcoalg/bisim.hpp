#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "frames.hpp"
#include "ghilardi.hpp"
#include "logic.hpp"
#include "modal_frame.hpp"

namespace imcoalg {

/// A relation between the carriers of two modal frames, stored as rows
/// left element -> set of related right elements.
class Bisimulation {
 public:
  Bisimulation(ModalFrame left, ModalFrame right)
      : left_(std::move(left)), right_(std::move(right)), rows_(left_.size(), Subset(right_.size())) {}

  Bisimulation(ModalFrame left, ModalFrame right, const std::vector<std::pair<Index, Index>>& pairs)
      : Bisimulation(std::move(left), std::move(right)) {
    for (auto [x, y] : pairs) insert(x, y);
  }

  static Bisimulation full(ModalFrame left, ModalFrame right) {
    Bisimulation b(std::move(left), std::move(right));
    for (auto& row : b.rows_) row = Subset::full(b.right_.size());
    return b;
  }

  static Bisimulation identity(const ModalFrame& f) {
    Bisimulation b(f, f);
    for (Index x = 0; x < f.size(); ++x) b.insert(x, x);
    return b;
  }

  const ModalFrame& left() const { return left_; }
  const ModalFrame& right() const { return right_; }
  bool related(Index x, Index y) const { return rows_[x].contains(y); }
  const Subset& row(Index x) const { return rows_[x]; }
  void insert(Index x, Index y) {
    if (x >= left_.size() || y >= right_.size()) throw Error(ErrorKind::InvalidArgument, "pair out of range");
    rows_[x].insert(y);
  }
  void erase(Index x, Index y) { rows_[x].erase(y); }
  void clear() {
    for (auto& r : rows_) r.clear();
  }

  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& r : rows_) n += r.count();
    return n;
  }

  /// Pairs in lexicographic index order.
  std::vector<std::pair<Index, Index>> pairs() const {
    std::vector<std::pair<Index, Index>> out;
    for (Index x = 0; x < rows_.size(); ++x)
      for (Index y : rows_[x]) out.emplace_back(x, y);
    return out;
  }

  bool is_subset_of(const Bisimulation& o) const {
    for (Index x = 0; x < rows_.size(); ++x)
      if (!rows_[x].is_subset_of(o.rows_[x])) return false;
    return true;
  }

  Bisimulation united(const Bisimulation& o) const {
    Bisimulation b = *this;
    for (Index x = 0; x < rows_.size(); ++x) b.rows_[x] |= o.rows_[x];
    return b;
  }

  friend bool operator==(const Bisimulation& a, const Bisimulation& b) { return a.rows_ == b.rows_; }

 private:
  ModalFrame left_;
  ModalFrame right_;
  std::vector<Subset> rows_;
};

namespace detail {

// The four clauses at one pair; S ranges over ≤ and R.
inline bool pair_satisfies_clauses(const Bisimulation& b, Index x, Index y) {
  const ModalFrame& l = b.left();
  const ModalFrame& r = b.right();
  auto forth = [&](const Subset& sx, const Subset& sy) {
    for (Index x2 : sx)
      if (!b.row(x2).intersects(sy)) return false;
    return true;
  };
  auto back = [&](const Subset& sx, const Subset& sy) {
    for (Index y2 : sy) {
      bool found = false;
      for (Index x2 : sx)
        if (b.related(x2, y2)) {
          found = true;
          break;
        }
      if (!found) return false;
    }
    return true;
  };
  const Subset& ux = l.poset().up(x);
  const Subset& uy = r.poset().up(y);
  return forth(ux, uy) && back(ux, uy) && forth(l.successors(x), r.successors(y)) &&
         back(l.successors(x), r.successors(y));
}

// Only the clauses for ≤.
inline bool pair_satisfies_order_clauses(const Bisimulation& b, Index x, Index y) {
  const Subset& uy = b.right().poset().up(y);
  for (Index x2 : b.left().poset().up(x))
    if (!b.row(x2).intersects(uy)) return false;
  for (Index y2 : uy) {
    bool found = false;
    for (Index x2 : b.left().poset().up(x))
      if (b.related(x2, y2)) found = true;
    if (!found) return false;
  }
  return true;
}

}  // namespace detail

/// Forth and back for both ≤ and R at every pair.
inline bool is_box_bisimulation(const Bisimulation& b) {
  for (Index x = 0; x < b.left().size(); ++x)
    for (Index y : b.row(x))
      if (!detail::pair_satisfies_clauses(b, x, y)) return false;
  return true;
}

/// Greatest fixpoint: start from the full relation and delete the first
/// violating pair (in index order) per scan until none is left.
inline Bisimulation largest_bisimulation(const ModalFrame& a, const ModalFrame& b) {
  Bisimulation rel = Bisimulation::full(a, b);
  while (true) {
    std::optional<std::pair<Index, Index>> bad;
    for (auto [x, y] : rel.pairs())
      if (!detail::pair_satisfies_clauses(rel, x, y)) {
        bad = {x, y};
        break;
      }
    if (!bad) return rel;
    rel.erase(bad->first, bad->second);
  }
}

// ---------------------------------------------------------------------------
// Bisimulations as coalgebra spans.

/// The relation as a sub-poset of the product with the componentwise order,
/// together with both projections.
struct BisimulationSpan {
  PosetRef carrier;
  std::vector<std::pair<Index, Index>> pairs;
  PosetMap left;
  PosetMap right;
};

inline BisimulationSpan bisimulation_span(const Bisimulation& b) {
  auto pairs = b.pairs();
  const Poset& pl = b.left().poset();
  const Poset& pr = b.right().poset();
  std::vector<std::string> labels;
  std::vector<Subset> rows(pairs.size(), Subset(pairs.size()));
  for (Index i = 0; i < pairs.size(); ++i) {
    labels.push_back("(" + pl.label(pairs[i].first) + "," + pr.label(pairs[i].second) + ")");
    for (Index j = 0; j < pairs.size(); ++j)
      if (pl.leq(pairs[i].first, pairs[j].first) && pr.leq(pairs[i].second, pairs[j].second)) rows[i].insert(j);
  }
  PosetRef carrier = share(Poset::from_rows(std::move(labels), std::move(rows)));
  std::vector<Index> li, ri;
  for (auto [x, y] : pairs) {
    li.push_back(x);
    ri.push_back(y);
  }
  PosetMap l(carrier, b.left().base(), std::move(li));
  PosetMap r(carrier, b.right().base(), std::move(ri));
  return BisimulationSpan{carrier, std::move(pairs), std::move(l), std::move(r)};
}

/// The mediating structure on the span: (x, y) ↦ (R[x] × R[y]) ∩ B.
inline ModalFrame span_frame(const Bisimulation& b, const BisimulationSpan& s) {
  std::vector<Subset> rows(s.pairs.size(), Subset(s.pairs.size()));
  for (Index i = 0; i < s.pairs.size(); ++i)
    for (Index j = 0; j < s.pairs.size(); ++j)
      if (b.left().related(s.pairs[i].first, s.pairs[j].first) &&
          b.right().related(s.pairs[i].second, s.pairs[j].second))
        rows[i].insert(j);
  return ModalFrame(s.carrier, std::move(rows));
}

/// Equips B with the mediating coalgebra structure, lifts it and both frames
/// to `depth`, and checks that both projection squares commute on every
/// coordinate. Throws ProjectionNotPMorphism if a projection is not a
/// p-morphism, since B is then not an object of the category.
inline bool coalgebraic_bisim_check(const Bisimulation& b, std::size_t depth, ComplexLimits limits = {}) {
  if (b.size() == 0) return true;
  BisimulationSpan s = bisimulation_span(b);
  if (!is_pmorphism(s.left)) throw Error(ErrorKind::ProjectionNotPMorphism, "left projection");
  if (!is_pmorphism(s.right)) throw Error(ErrorKind::ProjectionNotPMorphism, "right projection");
  LiftedMap lb = frame_to_lifted(span_frame(b, s), depth, limits);
  LiftedMap ll = frame_to_lifted(b.left(), depth, limits);
  LiftedMap lr = frame_to_lifted(b.right(), depth, limits);
  return coalgebra_square_commutes(s.left, lb, ll, depth) && coalgebra_square_commutes(s.right, lb, lr, depth);
}

/// Same check with lifted frames supplied by the caller (for reuse across
/// many relations between the same two frames).
inline bool coalgebraic_bisim_check(const Bisimulation& b, std::size_t depth, LiftedMap& left, LiftedMap& right,
                                    ComplexLimits limits = {}) {
  if (b.size() == 0) return true;
  BisimulationSpan s = bisimulation_span(b);
  if (!is_pmorphism(s.left)) throw Error(ErrorKind::ProjectionNotPMorphism, "left projection");
  if (!is_pmorphism(s.right)) throw Error(ErrorKind::ProjectionNotPMorphism, "right projection");
  LiftedMap lb = frame_to_lifted(span_frame(b, s), depth, limits);
  return coalgebra_square_commutes(s.left, lb, left, depth) && coalgebra_square_commutes(s.right, lb, right, depth);
}

/// What the coalgebraic check needs besides the two relations R: the span,
/// Up of its carrier with a lazy complex, and Up of both projections into the
/// Up of each side. Depends only on the two posets and the pairs of B, so
/// one preparation serves every pair of frames over the same posets.
struct PreparedSpan {
  BisimulationSpan span;
  FunctorValue up;
  std::shared_ptr<Complex> complex;
  PosetMap up_left;
  PosetMap up_right;
};

/// Throws ProjectionNotPMorphism as coalgebraic_bisim_check does; B must be non-empty.
inline PreparedSpan prepare_span(const Bisimulation& b, const FunctorValue& left_up, const FunctorValue& right_up,
                                 std::size_t depth, ComplexLimits limits = {}) {
  if (b.size() == 0) throw Error(ErrorKind::InvalidArgument, "empty relation has no span to prepare");
  BisimulationSpan s = bisimulation_span(b);
  if (!is_pmorphism(s.left)) throw Error(ErrorKind::ProjectionNotPMorphism, "left projection");
  if (!is_pmorphism(s.right)) throw Error(ErrorKind::ProjectionNotPMorphism, "right projection");
  FunctorValue up = up_functor(s.carrier);
  auto cx = up_complex(up, depth, limits);
  PosetMap hl = up_functor_map(s.left, up, left_up);
  PosetMap hr = up_functor_map(s.right, up, right_up);
  return PreparedSpan{std::move(s), std::move(up), std::move(cx), std::move(hl), std::move(hr)};
}

/// The coalgebraic check against a prepared span. The Up coordinate is
/// compared first; the span is lifted further only when it agrees.
inline bool coalgebraic_bisim_check(const Bisimulation& b, const PreparedSpan& p, std::size_t depth,
                                    const LiftedMap& left, const LiftedMap& right) {
  const BisimulationSpan& s = p.span;
  const std::size_t n = s.pairs.size();
  std::vector<Index> up_coord(n);
  for (Index i = 0; i < n; ++i) {
    Subset row(n);
    for (Index j = 0; j < n; ++j)
      if (b.left().related(s.pairs[i].first, s.pairs[j].first) &&
          b.right().related(s.pairs[i].second, s.pairs[j].second))
        row.insert(j);
    up_coord[i] = p.up.upset_index(row);
    if (p.up_left(up_coord[i]) != left.tower.coords[1][s.left(i)] ||
        p.up_right(up_coord[i]) != right.tower.coords[1][s.right(i)])
      return false;
  }
  if (depth <= 1) return true;
  TowerMap t = lift_map(PosetMap(s.carrier, p.up.poset, std::move(up_coord)), *p.complex, depth);
  for (Index i = 0; i < n; ++i)
    for (std::size_t level = 2; level <= depth; ++level) {
      auto l = map_element(p.up_left, *p.complex, level, t.coords[level][i], *left.complex);
      auto r = map_element(p.up_right, *p.complex, level, t.coords[level][i], *right.complex);
      if (!l || *l != left.tower.coords[level][s.left(i)] || !r || *r != right.tower.coords[level][s.right(i)])
        return false;
    }
  return true;
}

// ---------------------------------------------------------------------------
// Bisimulations and truth.

/// Related points satisfy the same letters. Both models must declare the same letters.
inline bool compatible_valuations(const Bisimulation& b, const Model& a, const Model& c) {
  if (a.valuation().size() != c.valuation().size()) return false;
  for (const auto& [letter, va] : a.valuation()) {
    auto it = c.valuation().find(letter);
    if (it == c.valuation().end()) return false;
    for (auto [x, y] : b.pairs())
      if (va.contains(x) != it->second.contains(y)) return false;
  }
  return true;
}

/// Whether x in `a` and y in `c` agree on every formula in the list. (x, y)
/// must lie in the largest bisimulation of the underlying frames, and the
/// valuations must be compatible with it.
inline bool bisimilarity_preserves_truth(const Model& a, Index x, const Model& c, Index y,
                                         const std::vector<Formula>& formulas) {
  Bisimulation b = largest_bisimulation(a.frame(), c.frame());
  if (!b.related(x, y)) throw Error(ErrorKind::InvalidArgument, "points are not bisimilar");
  if (!compatible_valuations(b, a, c)) throw Error(ErrorKind::IncompatibleValuations, "valuations differ on related points");
  for (const Formula& f : formulas)
    if (truth_set(a, f).contains(x) != truth_set(c, f).contains(y)) return false;
  return true;
}

/// A pair of truth sets realised by one formula on both models at once.
struct JointTruth {
  Subset left;
  Subset right;
  Formula witness;
};

/// Every distinct pair (‖φ‖ in a, ‖φ‖ in c) for formulas φ of depth at most
/// `depth` over the shared letters, each with a witness of least depth.
/// Formulas with equal truth-set pairs are interchangeable inside any
/// context, so closing the atom pairs under the connectives level by level
/// reaches exactly the pairs of all formulas up to that depth.
inline std::vector<JointTruth> joint_truth_sets(const Model& a, const Model& c, std::size_t depth) {
  std::vector<JointTruth> out;
  std::set<std::pair<Subset, Subset>> seen;
  auto add = [&](Subset l, Subset r, Formula w) {
    if (seen.emplace(l, r).second) out.push_back(JointTruth{std::move(l), std::move(r), std::move(w)});
  };
  for (const auto& [letter, v] : a.valuation()) add(v, c.value(letter), Formula::var(letter));
  add(Subset::full(a.frame().size()), Subset::full(c.frame().size()), Formula::top());
  add(Subset(a.frame().size()), Subset(c.frame().size()), Formula::bot());
  const Poset& pa = a.frame().poset();
  const Poset& pc = c.frame().poset();
  for (std::size_t d = 1; d <= depth; ++d) {
    const std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i)
      add(box_op(a.frame(), out[i].left), box_op(c.frame(), out[i].right), Formula::box(out[i].witness));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const JointTruth s = out[i];
        const JointTruth t = out[j];
        add(s.left & t.left, s.right & t.right, Formula::conj(s.witness, t.witness));
        add(s.left | t.left, s.right | t.right, Formula::disj(s.witness, t.witness));
        add(heyting_impl(pa, s.left, t.left), heyting_impl(pc, s.right, t.right), Formula::impl(s.witness, t.witness));
      }
  }
  return out;
}

/// A formula of depth at most `depth` true at exactly one of x, y, if any.
inline std::optional<Formula> distinguishing_formula(const Model& a, Index x, const Model& c, Index y,
                                                     std::size_t depth) {
  for (const JointTruth& j : joint_truth_sets(a, c, depth))
    if (j.left.contains(x) != j.right.contains(y)) return j.witness;
  return std::nullopt;
}

/// Random valuations on both frames that are compatible with b: each letter
/// starts from a random seed set and is closed upward and across b until stable.
template <class Rng>
std::pair<Model, Model> random_compatible_models(const Bisimulation& b, const std::vector<std::string>& letters,
                                                 Rng& rng, double density = 0.2) {
  const Poset& pl = b.left().poset();
  const Poset& pr = b.right().poset();
  std::bernoulli_distribution coin(density);
  std::map<std::string, Subset> vl, vr;
  for (const auto& letter : letters) {
    Subset l(pl.size()), r(pr.size());
    for (Index x = 0; x < pl.size(); ++x)
      if (coin(rng)) l.insert(x);
    for (Index y = 0; y < pr.size(); ++y)
      if (coin(rng)) r.insert(y);
    while (true) {
      Subset l2 = up_closure(pl, l);
      Subset r2 = up_closure(pr, r);
      for (auto [x, y] : b.pairs()) {
        if (l2.contains(x)) r2.insert(y);
        if (r2.contains(y)) l2.insert(x);
      }
      if (l2 == l && r2 == r) break;
      l = std::move(l2);
      r = std::move(r2);
    }
    vl.emplace(letter, l);
    vr.emplace(letter, r);
  }
  return {Model(b.left(), std::move(vl)), Model(b.right(), std::move(vr))};
}

}  // namespace imcoalg

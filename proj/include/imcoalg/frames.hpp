#pragma once

#include <memory>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "enumerate.hpp"
#include "functor.hpp"
#include "ghilardi.hpp"
#include "heyting.hpp"
#include "modal_frame.hpp"

namespace imcoalg {

// ---------------------------------------------------------------------------
// Mix law.

/// A pair (x, z) that ≤∘R∘≤ demands but R lacks, if any.
///
/// The law R = ≤∘R∘≤ holds iff R is closed under both
///   x ≤ y, yRz  ⟹ xRz     and     xRy, y ≤ z  ⟹ xRz.
inline std::optional<std::pair<Index, Index>> mix_law_violation(const ModalFrame& f) {
  const Poset& p = f.poset();
  for (Index x = 0; x < f.size(); ++x) {
    Subset need = up_closure(p, f.successors(x));
    for (Index y : p.up(x)) need |= f.successors(y);
    Subset missing = need - f.successors(x);
    if (!missing.empty()) return std::make_pair(x, *missing.begin());
  }
  return std::nullopt;
}

inline bool check_mix_law(const ModalFrame& f) { return !mix_law_violation(f).has_value(); }

/// The least relation ≤∘R∘≤ containing R.
inline ModalFrame mix_closure(const ModalFrame& f) {
  const Poset& p = f.poset();
  std::vector<Subset> rows(f.size(), Subset(f.size()));
  for (Index x = 0; x < f.size(); ++x)
    for (Index y : p.up(x)) rows[x] |= up_closure(p, f.successors(y));
  return ModalFrame(f.base(), std::move(rows));
}

// ---------------------------------------------------------------------------
// Frames as coalgebras.

/// A monotone map X -> (Up(X), ⊇).
struct UpMap {
  FunctorValue up;
  PosetMap map;

  const Subset& value(Index x) const { return up.upsets[map(x)]; }
};

/// x ↦ R[x]. Requires the mix law.
inline UpMap frame_to_upmap(const ModalFrame& f, const FunctorValue& up) {
  if (auto v = mix_law_violation(f))
    throw Error(ErrorKind::MixLawViolation,
                "missing " + f.poset().label(v->first) + " R " + f.poset().label(v->second));
  std::vector<Index> img(f.size());
  for (Index x = 0; x < f.size(); ++x) img[x] = up.upset_index(f.successors(x));
  return UpMap{up, PosetMap(f.base(), up.poset, std::move(img))};
}

inline UpMap frame_to_upmap(const ModalFrame& f) { return frame_to_upmap(f, up_functor(f.base())); }

/// Builds the UpMap x ↦ values[x]; each value must be an upset.
inline UpMap upmap_from_values(const PosetRef& base, const std::vector<Subset>& values) {
  FunctorValue up = up_functor(base);
  std::vector<Index> img;
  for (const Subset& v : values) {
    auto i = up.find_upset(v);
    if (!i) throw Error(ErrorKind::ValueNotUpset, format_subset(*base, v));
    img.push_back(*i);
  }
  PosetMap map(base, up.poset, std::move(img));
  return UpMap{std::move(up), std::move(map)};
}

/// xRy ⟺ y ∈ m(x).
inline ModalFrame upmap_to_frame(const UpMap& m) {
  if (!is_monotone(m.map)) throw Error(ErrorKind::NotMonotone, "coalgebra map is not monotone into (Up, ⊇)");
  const PosetRef& base = m.map.source();
  std::vector<Subset> rows;
  for (Index x = 0; x < base->size(); ++x) {
    if (!is_upset(*base, m.value(x))) throw Error(ErrorKind::ValueNotUpset, base->label(x));
    rows.push_back(m.value(x));
  }
  return ModalFrame(base, std::move(rows));
}

/// The lifted coalgebra X -> truncated P_G(Up(X)).
struct LiftedMap {
  FunctorValue up;
  std::shared_ptr<Complex> complex;
  TowerMap tower;
};

inline std::shared_ptr<Complex> up_complex(const FunctorValue& up, std::size_t depth, ComplexLimits limits = {}) {
  return std::make_shared<Complex>(Complex::lazy(terminal_map(up.poset), depth, limits));
}

inline LiftedMap frame_to_lifted(const ModalFrame& f, const FunctorValue& up, std::shared_ptr<Complex> cx,
                                 std::size_t depth) {
  UpMap m = frame_to_upmap(f, up);
  TowerMap t = lift_map(m.map, *cx, depth);
  return LiftedMap{up, std::move(cx), std::move(t)};
}

inline LiftedMap frame_to_lifted(const ModalFrame& f, std::size_t depth, ComplexLimits limits = {}) {
  FunctorValue up = up_functor(f.base());
  auto cx = up_complex(up, depth, limits);
  return frame_to_lifted(f, up, std::move(cx), depth);
}

/// Projection of a lifted coalgebra to its Up coordinate.
inline UpMap lifted_to_upmap(const LiftedMap& l) {
  return UpMap{l.up, PosetMap(l.tower.source, l.up.poset, l.tower.coordinate(1))};
}

/// p-morphism for ≤ and for R.
inline bool is_modal_pmorphism(const PosetMap& f, const ModalFrame& a, const ModalFrame& b) {
  if (!is_pmorphism(f)) return false;
  for (Index x = 0; x < a.size(); ++x) {
    // forth: f[R[x]] ⊆ R[f x]; back: R[f x] ⊆ f[R[x]].
    if (direct_image(f, a.successors(x)) != b.successors(f(x))) return false;
  }
  return true;
}

/// Whether f is a coalgebra morphism between the lifted coalgebras, checked on
/// every coordinate up to `depth`: Up(f) pushed levelwise through the source
/// tower must land on the target tower at f(x). Maps that are not
/// p-morphisms are not morphisms of the underlying category. The first
/// overload takes h = Up(f) precomputed and assumes f is a p-morphism.
inline bool coalgebra_square_commutes(const PosetMap& f, const PosetMap& h, const LiftedMap& a, const LiftedMap& b,
                                      std::size_t depth) {
  for (Index x = 0; x < f.source()->size(); ++x)
    for (std::size_t i = 0; i <= depth; ++i) {
      auto img = map_element(h, *a.complex, i, a.tower.coords[i][x], *b.complex);
      if (!img || *img != b.tower.coords[i][f(x)]) return false;
    }
  return true;
}

inline bool coalgebra_square_commutes(const PosetMap& f, const LiftedMap& a, const LiftedMap& b, std::size_t depth) {
  if (!is_pmorphism(f)) return false;
  return coalgebra_square_commutes(f, up_functor_map(f, a.up, b.up), a, b, depth);
}

inline bool check_coalgebra_morphism(const PosetMap& f, const ModalFrame& a, const ModalFrame& b, std::size_t depth,
                                     ComplexLimits limits = {}) {
  if (!is_pmorphism(f)) return false;
  LiftedMap la = frame_to_lifted(a, depth, limits);
  LiftedMap lb = frame_to_lifted(b, depth, limits);
  return coalgebra_square_commutes(f, la, lb, depth);
}

// ---------------------------------------------------------------------------
// Frame generators.

/// Every relation on p satisfying the mix law (brute force over all relations).
inline std::vector<ModalFrame> all_mix_law_frames(const PosetRef& p) {
  const std::size_t n = p->size();
  if (n * n > 20) throw Error(ErrorKind::EnumerationTooLarge, "relations on more than 4 elements");
  std::vector<ModalFrame> out;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << (n * n)); ++bits) {
    std::vector<Subset> rows(n, Subset(n));
    for (Index x = 0; x < n; ++x)
      for (Index y = 0; y < n; ++y)
        if ((bits >> (x * n + y)) & 1U) rows[x].insert(y);
    ModalFrame f(p, std::move(rows));
    if (check_mix_law(f)) out.push_back(std::move(f));
  }
  return out;
}

/// A random relation, then mix-closed.
template <class Rng>
ModalFrame random_frame(const PosetRef& p, Rng& rng, double density = 0.2) {
  std::bernoulli_distribution coin(density);
  std::vector<Subset> rows(p->size(), Subset(p->size()));
  for (Index x = 0; x < p->size(); ++x)
    for (Index y = 0; y < p->size(); ++y)
      if (coin(rng)) rows[x].insert(y);
  return mix_closure(ModalFrame(p, std::move(rows)));
}

// ---------------------------------------------------------------------------
// Neighbourhood frames.

enum class NbhdMode { lax, strict };

/// A poset with a set of upsets N(x) at every point. Each N(x) is stored as a
/// family over the index space of Up(base).
class NbhdFrame {
 public:
  NbhdFrame(PosetRef base, std::vector<std::vector<Subset>> nbhds) : up_(up_functor(base)) {
    if (nbhds.size() != base->size()) throw Error(ErrorKind::InvalidArgument, "one neighbourhood set per element");
    for (const auto& sets : nbhds) {
      Subset fam(up_.upsets.size());
      for (const Subset& a : sets) {
        auto i = up_.find_upset(a);
        if (!i) throw Error(ErrorKind::ValueNotUpset, format_subset(*base, a));
        fam.insert(*i);
      }
      families_.push_back(std::move(fam));
    }
  }

  NbhdFrame(FunctorValue up, std::vector<Subset> families) : up_(std::move(up)), families_(std::move(families)) {}

  const PosetRef& base() const { return up_.base; }
  const FunctorValue& up() const { return up_; }
  std::size_t size() const { return families_.size(); }
  /// Indices into up().upsets.
  const Subset& family(Index x) const { return families_[x]; }
  bool contains(Index x, const Subset& upset) const {
    auto i = up_.find_upset(upset);
    return i && families_[x].contains(*i);
  }

  /// Lax: x ≤ y ⟹ N(x) ⊆ N(y). Strict additionally asks each N(x) to be
  /// upward closed in (Up, ⊇), i.e. closed under shrinking to smaller upsets.
  bool is_valid(NbhdMode mode = NbhdMode::lax) const {
    const Poset& p = *base();
    for (Index x = 0; x < size(); ++x)
      for (Index y : p.up(x))
        if (!families_[x].is_subset_of(families_[y])) return false;
    if (mode == NbhdMode::strict) {
      for (Index x = 0; x < size(); ++x)
        for (Index a : families_[x])
          for (Index b = 0; b < up_.upsets.size(); ++b)
            if (up_.upsets[b].is_subset_of(up_.upsets[a]) && !families_[x].contains(b)) return false;
    }
    return true;
  }

 private:
  FunctorValue up_;
  std::vector<Subset> families_;
};

enum class TestSets { all_subsets, upsets };

/// a' ∈ N'(f(x)) ⟺ f⁻¹(a') ∈ N(x) for every x and every a' ⊆ X'. With
/// TestSets::upsets, a' ranges over the upsets of X' only.
inline bool is_nbhd_morphism(const PosetMap& f, const NbhdFrame& a, const NbhdFrame& b,
                             TestSets sets = TestSets::all_subsets) {
  const std::size_t n = b.base()->size();
  std::vector<Subset> tested;
  if (sets == TestSets::upsets) {
    tested = b.up().upsets;
  } else {
    if (n > 20) throw Error(ErrorKind::EnumerationTooLarge, "too many subsets of the target");
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) tested.push_back(Subset::from_mask(n, m));
  }
  for (Index x = 0; x < a.size(); ++x)
    for (const Subset& t : tested)
      if (b.contains(f(x), t) != a.contains(x, preimage(f, t))) return false;
  return true;
}

/// x ↦ N(x) as a map X -> PowUp(X).
inline PosetMap nbhd_to_coalgebra(const NbhdFrame& n, const FunctorValue& pow, NbhdMode mode = NbhdMode::lax) {
  if (!n.is_valid(mode)) throw Error(ErrorKind::NotNeighbourhoodFrame, "N is not monotone (or not closed, strict mode)");
  std::vector<Index> img;
  for (Index x = 0; x < n.size(); ++x) img.push_back(family_index(n.family(x)));
  PosetMap m(n.base(), pow.poset, std::move(img));
  if (!is_monotone(m)) throw Error(ErrorKind::NotMonotone, "neighbourhood map");
  return m;
}

inline NbhdFrame coalgebra_to_nbhd(const PosetMap& m, const FunctorValue& pow) {
  if (!is_monotone(m)) throw Error(ErrorKind::NotMonotone, "coalgebra map is not monotone into PowUp");
  std::vector<Subset> fams;
  for (Index x = 0; x < m.source()->size(); ++x) fams.push_back(pow.families[m(x)]);
  FunctorValue up;
  up.tag = FunctorTag::Up;
  up.base = pow.base;
  up.upsets = pow.upsets;
  up.poset = up_functor(pow.base).poset;
  return NbhdFrame(std::move(up), std::move(fams));
}

enum class FamilyAction { direct_image, preimage };

/// PowUp(f) ∘ N = N' ∘ f, with PowUp acting on maps as chosen.
inline bool nbhd_square_commutes(const PosetMap& f, const NbhdFrame& a, const NbhdFrame& b,
                                 FamilyAction action = FamilyAction::direct_image) {
  FunctorValue pa = pow_up_functor(a.base());
  FunctorValue pb = pow_up_functor(b.base());
  PosetMap ca = nbhd_to_coalgebra(a, pa);
  PosetMap cb = nbhd_to_coalgebra(b, pb);
  PosetMap pf = action == FamilyAction::direct_image ? pow_up_functor_map(f, pa, pb) : pow_up_preimage_map(f, pa, pb);
  for (Index x = 0; x < a.size(); ++x)
    if (pf(ca(x)) != cb(f(x))) return false;
  return true;
}

/// The neighbourhood coalgebra lifted into the truncated P_G(PowUp(X)).
inline TowerMap nbhd_to_lifted(const NbhdFrame& n, std::size_t depth, ComplexLimits limits = {}) {
  FunctorValue pow = pow_up_functor(n.base());
  PosetMap m = nbhd_to_coalgebra(n, pow);
  Complex cx = Complex::lazy(terminal_map(pow.poset), depth, limits);
  return lift_map(m, cx, depth);
}

/// Every lax neighbourhood frame on p (monotone maps into PowUp(p)).
inline std::vector<NbhdFrame> all_nbhd_frames(const PosetRef& p, NbhdMode mode = NbhdMode::lax) {
  FunctorValue pow = pow_up_functor(p);
  std::vector<NbhdFrame> out;
  for (const PosetMap& m : monotone_maps(p, pow.poset)) {
    NbhdFrame n = coalgebra_to_nbhd(m, pow);
    if (n.is_valid(mode)) out.push_back(std::move(n));
  }
  return out;
}

}  // namespace imcoalg

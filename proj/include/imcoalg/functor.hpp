#pragma once

#include <concepts>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "poset.hpp"

namespace imcoalg {

enum class FunctorTag { Identity, Up, PowUp, Composite };

constexpr const char* to_string(FunctorTag t) {
  switch (t) {
    case FunctorTag::Identity: return "Id";
    case FunctorTag::Up: return "Up";
    case FunctorTag::PowUp: return "PowUp";
    case FunctorTag::Composite: return "Composite";
  }
  return "?";
}

/// The value F(P) of an endofunctor on posets, with enough provenance to map
/// its elements back to subsets of the base.
///
///  - Up:    element i is the upset `upsets[i]`; i <= j iff upsets[i] ⊇ upsets[j].
///  - PowUp: element i is the family `families[i]` of indices into `upsets`;
///           i <= j iff families[i] ⊆ families[j].
///  - Composite: `parts` holds the intermediate values, innermost first.
struct FunctorValue {
  FunctorTag tag = FunctorTag::Identity;
  PosetRef base;
  PosetRef poset;
  std::vector<Subset> upsets;
  std::vector<Subset> families;
  std::vector<std::shared_ptr<const FunctorValue>> parts;

  std::optional<Index> find_upset(const Subset& u) const {
    if (lookup_.empty())
      for (Index i = 0; i < upsets.size(); ++i) lookup_.emplace(upsets[i], i);
    auto it = lookup_.find(u);
    if (it == lookup_.end()) return std::nullopt;
    return it->second;
  }
  Index upset_index(const Subset& u) const {
    if (auto i = find_upset(u)) return *i;
    throw Error(ErrorKind::ValueNotUpset, "not an upset of the base: " + format_subset(*base, u));
  }

 private:
  mutable std::unordered_map<Subset, Index> lookup_;
};

inline FunctorValue up_functor(const PosetRef& p, std::size_t cap = std::size_t{1} << 16) {
  FunctorValue v;
  v.tag = FunctorTag::Up;
  v.base = p;
  v.upsets = enumerate_upsets(*p, cap);
  const std::size_t n = v.upsets.size();
  std::vector<std::string> labels;
  std::vector<Subset> rows(n, Subset(n));
  for (Index i = 0; i < n; ++i) {
    labels.push_back(format_subset(*p, v.upsets[i]));
    for (Index j = 0; j < n; ++j)
      if (v.upsets[j].is_subset_of(v.upsets[i])) rows[i].insert(j);
  }
  v.poset = share(Poset::from_rows(std::move(labels), std::move(rows)));
  return v;
}

/// Up on maps: U goes to the upward closure of f[U]. Requires f monotone.
inline PosetMap up_functor_map(const PosetMap& f, const FunctorValue& from, const FunctorValue& to) {
  if (!is_monotone(f)) throw Error(ErrorKind::NotMonotone, "Up(f) needs a monotone f");
  std::vector<Index> img(from.upsets.size());
  for (Index i = 0; i < img.size(); ++i)
    img[i] = to.upset_index(up_closure(*f.target(), direct_image(f, from.upsets[i])));
  return PosetMap(from.poset, to.poset, std::move(img));
}

inline PosetMap up_functor_map(const PosetMap& f) {
  return up_functor_map(f, up_functor(f.source()), up_functor(f.target()));
}

/// All sets of upsets of p, ordered by inclusion. The family count is
/// 2^|Up(p)|, so `max_upsets` bounds the inner universe.
inline FunctorValue pow_up_functor(const PosetRef& p, std::size_t max_upsets = 12) {
  FunctorValue v;
  v.tag = FunctorTag::PowUp;
  v.base = p;
  v.upsets = enumerate_upsets(*p);
  const std::size_t k = v.upsets.size();
  if (k > max_upsets)
    throw Error(ErrorKind::StageTooLarge, "PowUp over " + std::to_string(k) + " upsets exceeds the cap");
  const std::size_t n = std::size_t{1} << k;
  std::vector<std::string> labels;
  std::vector<Subset> rows(n, Subset(n));
  for (std::uint64_t m = 0; m < n; ++m) {
    v.families.push_back(Subset::from_mask(k, m));
    std::string label = "{";
    bool first = true;
    for (Index i : v.families.back()) {
      if (!first) label += " ";
      label += format_subset(*p, v.upsets[i]);
      first = false;
    }
    labels.push_back(label + "}");
    for (std::uint64_t m2 = 0; m2 < n; ++m2)
      if ((m & ~m2) == 0) rows[m].insert(m2);
  }
  v.poset = share(Poset::from_rows(std::move(labels), std::move(rows)));
  return v;
}

inline Index family_index(const Subset& family) { return static_cast<Index>(family.mask()); }

/// PowUp on maps by direct image: A goes to { up(f[a]) : a in A }.
inline PosetMap pow_up_functor_map(const PosetMap& f, const FunctorValue& from, const FunctorValue& to) {
  if (!is_monotone(f)) throw Error(ErrorKind::NotMonotone, "PowUp(f) needs a monotone f");
  std::vector<Index> upset_img(from.upsets.size());
  for (Index i = 0; i < upset_img.size(); ++i)
    upset_img[i] = to.upset_index(up_closure(*f.target(), direct_image(f, from.upsets[i])));
  std::vector<Index> img(from.families.size());
  for (Index a = 0; a < img.size(); ++a) {
    Subset fam(to.upsets.size());
    for (Index i : from.families[a]) fam.insert(upset_img[i]);
    img[a] = family_index(fam);
  }
  return PosetMap(from.poset, to.poset, std::move(img));
}

/// The inverse-image action on families: A goes to { a' : f^-1(a') in A }.
/// This is the action under which a square of families commutes exactly when
/// f satisfies the neighbourhood morphism condition.
inline PosetMap pow_up_preimage_map(const PosetMap& f, const FunctorValue& from, const FunctorValue& to) {
  if (!is_monotone(f)) throw Error(ErrorKind::NotMonotone, "preimage action needs a monotone f");
  std::vector<Index> pre(to.upsets.size());
  for (Index j = 0; j < pre.size(); ++j) pre[j] = from.upset_index(preimage(f, to.upsets[j]));
  std::vector<Index> img(from.families.size());
  for (Index a = 0; a < img.size(); ++a) {
    Subset fam(to.upsets.size());
    for (Index j = 0; j < pre.size(); ++j)
      if (from.families[a].contains(pre[j])) fam.insert(j);
    img[a] = family_index(fam);
  }
  return PosetMap(from.poset, to.poset, std::move(img));
}

// ---------------------------------------------------------------------------
// Functor objects, so constructions can be parameterised by the endofunctor.

template <class F>
concept PosetEndofunctor = requires(const F& fn, const PosetRef& p, const PosetMap& m, const FunctorValue& v) {
  { fn.apply(p) } -> std::same_as<FunctorValue>;
  { fn.map(m, v, v) } -> std::same_as<PosetMap>;
  { fn.name() } -> std::convertible_to<std::string>;
};

struct IdentityFunctor {
  FunctorValue apply(const PosetRef& p) const {
    FunctorValue v;
    v.tag = FunctorTag::Identity;
    v.base = p;
    v.poset = p;
    return v;
  }
  PosetMap map(const PosetMap& f, const FunctorValue&, const FunctorValue&) const { return f; }
  std::string name() const { return "Id"; }
};

struct UpFunctor {
  FunctorValue apply(const PosetRef& p) const { return up_functor(p); }
  PosetMap map(const PosetMap& f, const FunctorValue& a, const FunctorValue& b) const {
    return up_functor_map(f, a, b);
  }
  std::string name() const { return "Up"; }
};

struct PowUpFunctor {
  FunctorValue apply(const PosetRef& p) const { return pow_up_functor(p); }
  PosetMap map(const PosetMap& f, const FunctorValue& a, const FunctorValue& b) const {
    return pow_up_functor_map(f, a, b);
  }
  std::string name() const { return "PowUp"; }
};

/// Outer after Inner.
template <PosetEndofunctor Outer, PosetEndofunctor Inner>
struct Composed {
  Outer outer;
  Inner inner;

  FunctorValue apply(const PosetRef& p) const {
    auto first = std::make_shared<const FunctorValue>(inner.apply(p));
    auto second = std::make_shared<const FunctorValue>(outer.apply(first->poset));
    FunctorValue v;
    v.tag = FunctorTag::Composite;
    v.base = p;
    v.poset = second->poset;
    v.parts = {first, second};
    return v;
  }
  PosetMap map(const PosetMap& f, const FunctorValue& a, const FunctorValue& b) const {
    PosetMap inner_map = inner.map(f, *a.parts[0], *b.parts[0]);
    return outer.map(inner_map, *a.parts[1], *b.parts[1]);
  }
  std::string name() const { return outer.name() + "." + inner.name(); }
};

static_assert(PosetEndofunctor<UpFunctor>);
static_assert(PosetEndofunctor<Composed<UpFunctor, UpFunctor>>);

}  // namespace imcoalg

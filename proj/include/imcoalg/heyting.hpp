#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "functor.hpp"
#include "modal_frame.hpp"
#include "poset.hpp"

namespace imcoalg {

/// Heyting implication on upsets: {x : ↑x ∩ a ⊆ b}, computed as the
/// complement of ↓(a ∖ b).
inline Subset heyting_impl(const Poset& p, const Subset& a, const Subset& b) {
  return down_closure(p, a - b).complement();
}

/// Box_R U = {x : R[x] ⊆ U}.
inline Subset box_op(const ModalFrame& f, const Subset& u) {
  Subset out(f.size());
  for (Index x = 0; x < f.size(); ++x)
    if (f.successors(x).is_subset_of(u)) out.insert(x);
  return out;
}

/// The upsets of a finite poset as a Heyting algebra.
///
/// Elements are addressed by their index in `carrier()` (sorted by bitmask,
/// so 0 is always the empty upset). Meet, join and implication are tabulated
/// when the carrier is small enough; otherwise they are computed on demand.
class UpsetAlgebra {
 public:
  static constexpr std::size_t kTableLimit = 512;

  explicit UpsetAlgebra(PosetRef base) : value_(up_functor(base)) {
    const std::size_t n = size();
    if (n <= kTableLimit) {
      meet_.resize(n * n);
      join_.resize(n * n);
      impl_.resize(n * n);
      for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) {
          meet_[i * n + j] = static_cast<std::uint32_t>(compute_meet(i, j));
          join_[i * n + j] = static_cast<std::uint32_t>(compute_join(i, j));
          impl_[i * n + j] = static_cast<std::uint32_t>(compute_impl(i, j));
        }
    }
  }

  const Poset& base() const { return *value_.base; }
  const PosetRef& base_ref() const { return value_.base; }
  std::size_t size() const { return value_.upsets.size(); }
  const std::vector<Subset>& carrier() const { return value_.upsets; }
  const Subset& element(Index i) const { return value_.upsets[i]; }
  Index index_of(const Subset& u) const { return value_.upset_index(u); }
  bool tabulated() const { return !meet_.empty(); }

  Index bottom() const { return index_of(Subset(base().size())); }
  Index top() const { return index_of(Subset::full(base().size())); }

  Index meet(Index a, Index b) const { return tabulated() ? meet_[a * size() + b] : compute_meet(a, b); }
  Index join(Index a, Index b) const { return tabulated() ? join_[a * size() + b] : compute_join(a, b); }
  Index implies(Index a, Index b) const { return tabulated() ? impl_[a * size() + b] : compute_impl(a, b); }
  bool leq(Index a, Index b) const { return element(a).is_subset_of(element(b)); }

  /// Join-irreducible elements (w.r.t. union), ordered by reverse inclusion so
  /// that the principal upset of x corresponds to x.
  Poset join_irreducibles() const {
    std::vector<Index> ji;
    for (Index i = 0; i < size(); ++i) {
      if (element(i).empty()) continue;
      // i is join-irreducible iff the union of the elements strictly below it is not i.
      Subset below(base().size());
      for (Index j = 0; j < size(); ++j)
        if (j != i && element(j).is_subset_of(element(i))) below |= element(j);
      if (below != element(i)) ji.push_back(i);
    }
    std::vector<std::string> labels;
    std::vector<Subset> rows(ji.size(), Subset(ji.size()));
    for (Index a = 0; a < ji.size(); ++a) {
      labels.push_back(format_subset(base(), element(ji[a])));
      for (Index b = 0; b < ji.size(); ++b)
        if (element(ji[b]).is_subset_of(element(ji[a]))) rows[a].insert(b);
    }
    return Poset::from_rows(std::move(labels), std::move(rows));
  }

 private:
  Index compute_meet(Index a, Index b) const { return index_of(element(a) & element(b)); }
  Index compute_join(Index a, Index b) const { return index_of(element(a) | element(b)); }
  Index compute_impl(Index a, Index b) const { return index_of(heyting_impl(base(), element(a), element(b))); }

  FunctorValue value_;
  std::vector<std::uint32_t> meet_, join_, impl_;
};

inline Poset join_irreducibles(const UpsetAlgebra& a) { return a.join_irreducibles(); }

}  // namespace imcoalg

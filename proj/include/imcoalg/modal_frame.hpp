#pragma once

#include <string>
#include <utility>
#include <vector>

#include "poset.hpp"

namespace imcoalg {

/// A poset with an extra binary relation R, stored as successor rows R[x].
/// Nothing about R is checked here; see check_mix_law in frames.hpp.
class ModalFrame {
 public:
  ModalFrame() = default;
  ModalFrame(PosetRef base, std::vector<Subset> successors)
      : base_(std::move(base)), succ_(std::move(successors)) {
    if (succ_.size() != base_->size()) throw Error(ErrorKind::InvalidArgument, "one successor row per element");
    for (const auto& row : succ_)
      if (row.universe() != base_->size()) throw Error(ErrorKind::InvalidArgument, "successor row universe mismatch");
  }

  /// Empty relation.
  explicit ModalFrame(PosetRef base) : ModalFrame(base, std::vector<Subset>(base->size(), Subset(base->size()))) {}

  static ModalFrame from_pairs(PosetRef base, const std::vector<std::pair<Index, Index>>& pairs) {
    ModalFrame f(std::move(base));
    for (auto [x, y] : pairs) f.succ_[x].insert(y);
    return f;
  }

  static ModalFrame from_labels(PosetRef base, const std::vector<std::pair<std::string, std::string>>& pairs) {
    ModalFrame f(base);
    for (const auto& [a, b] : pairs) f.succ_[base->index(a)].insert(base->index(b));
    return f;
  }

  const PosetRef& base() const { return base_; }
  const Poset& poset() const { return *base_; }
  std::size_t size() const { return base_->size(); }
  bool related(Index x, Index y) const { return succ_[x].contains(y); }
  const Subset& successors(Index x) const { return succ_[x]; }
  const std::vector<Subset>& rows() const { return succ_; }

  std::vector<std::pair<Index, Index>> pairs() const {
    std::vector<std::pair<Index, Index>> out;
    for (Index x = 0; x < size(); ++x)
      for (Index y : succ_[x]) out.emplace_back(x, y);
    return out;
  }

  friend bool operator==(const ModalFrame& a, const ModalFrame& b) {
    return *a.base_ == *b.base_ && a.succ_ == b.succ_;
  }

 private:
  PosetRef base_;
  std::vector<Subset> succ_;
};

}  // namespace imcoalg

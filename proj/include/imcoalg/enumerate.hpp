#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "poset.hpp"

namespace imcoalg {

/// Labels "a", "b", ... (then "e26", ... past the alphabet).
inline std::vector<std::string> letter_labels(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(i < 26 ? std::string(1, static_cast<char>('a' + i)) : "e" + std::to_string(i));
  return out;
}

namespace detail {

// Upper-triangular strict order bits -> rows; returns false if not transitive.
inline bool rows_from_bits(std::size_t n, std::uint64_t bits, std::vector<Subset>& rows) {
  rows.assign(n, Subset(n));
  std::size_t k = 0;
  for (Index i = 0; i < n; ++i) {
    rows[i].insert(i);
    for (Index j = i + 1; j < n; ++j, ++k)
      if ((bits >> k) & 1U) rows[i].insert(j);
  }
  for (Index i = 0; i < n; ++i)
    for (Index j : rows[i])
      if (!rows[j].is_subset_of(rows[i])) return false;
  return true;
}

inline std::vector<bool> canonical_key(std::size_t n, const std::vector<Subset>& rows) {
  std::vector<Index> perm(n);
  std::iota(perm.begin(), perm.end(), Index{0});
  std::vector<bool> best;
  do {
    std::vector<bool> key;
    key.reserve(n * n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) key.push_back(rows[perm[i]].contains(perm[j]));
    if (best.empty() || key < best) best = std::move(key);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace detail

/// One representative of every isomorphism class of n-element posets, labelled
/// with letters. Counts are 1, 1, 2, 5, 16, 63 for n = 0..5.
inline std::vector<PosetRef> posets_up_to_iso(std::size_t n) {
  if (n > 6) throw Error(ErrorKind::EnumerationTooLarge, "posets_up_to_iso is limited to 6 elements");
  const std::size_t pairs = n * (n - (n > 0 ? 1 : 0)) / 2;
  std::set<std::vector<bool>> seen;
  std::vector<PosetRef> out;
  std::vector<Subset> rows;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << pairs); ++bits) {
    if (!detail::rows_from_bits(n, bits, rows)) continue;
    if (!seen.insert(detail::canonical_key(n, rows)).second) continue;
    out.push_back(share(Poset::from_rows(letter_labels(n), rows)));
  }
  return out;
}

/// All posets with 1..max_size elements, up to isomorphism, smallest first.
inline std::vector<PosetRef> posets_up_to(std::size_t max_size) {
  std::vector<PosetRef> out;
  for (std::size_t n = 1; n <= max_size; ++n) {
    auto level = posets_up_to_iso(n);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

/// Calls `visit` with every total function source -> target (as an image vector).
inline void for_each_function(std::size_t source_size, std::size_t target_size,
                              const std::function<void(const std::vector<Index>&)>& visit,
                              std::size_t cap = 10'000'000) {
  double total = 1;
  for (std::size_t i = 0; i < source_size; ++i) total *= static_cast<double>(target_size);
  if (total > static_cast<double>(cap)) throw Error(ErrorKind::EnumerationTooLarge, "too many functions to enumerate");
  if (target_size == 0 && source_size > 0) return;
  std::vector<Index> img(source_size, 0);
  while (true) {
    visit(img);
    std::size_t k = 0;
    while (k < source_size && ++img[k] == target_size) img[k++] = 0;
    if (k == source_size) return;
  }
}

inline std::vector<PosetMap> all_maps(const PosetRef& source, const PosetRef& target) {
  std::vector<PosetMap> out;
  for_each_function(source->size(), target->size(),
                    [&](const std::vector<Index>& img) { out.emplace_back(source, target, img); });
  return out;
}

inline std::vector<PosetMap> monotone_maps(const PosetRef& source, const PosetRef& target) {
  std::vector<PosetMap> out;
  for_each_function(source->size(), target->size(), [&](const std::vector<Index>& img) {
    PosetMap f(source, target, img);
    if (is_monotone(f)) out.push_back(std::move(f));
  });
  return out;
}

/// A random poset: each pair i < j is related with probability `density`,
/// then closed transitively. Labels are letters.
template <class Rng>
Poset random_poset(std::size_t n, double density, Rng& rng) {
  std::bernoulli_distribution coin(density);
  std::vector<Subset> rows(n, Subset(n));
  for (Index i = 0; i < n; ++i) {
    rows[i].insert(i);
    for (Index j = i + 1; j < n; ++j)
      if (coin(rng)) rows[i].insert(j);
  }
  for (Index i = n; i-- > 0;)
    for (Index j : Subset(rows[i]))
      if (j != i) rows[i] |= rows[j];
  return Poset::from_rows(letter_labels(n), std::move(rows));
}

/// A random upset: members sampled independently, then closed upward.
template <class Rng>
Subset random_upset(const Poset& p, Rng& rng, double density = 0.3) {
  std::bernoulli_distribution coin(density);
  Subset s(p.size());
  for (Index i = 0; i < p.size(); ++i)
    if (coin(rng)) s.insert(i);
  return up_closure(p, s);
}

}  // namespace imcoalg

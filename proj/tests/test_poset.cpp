#include <gtest/gtest.h>

#include <random>

#include "imcoalg/enumerate.hpp"
#include "imcoalg/poset.hpp"

using namespace imcoalg;

namespace {

PosetRef two_chain() { return share(Poset::make({"a", "b"}, {{"a", "b"}})); }
PosetRef two_antichain() { return share(Poset::make({"a", "b"}, {})); }

Subset set_of(const Poset& p, std::initializer_list<const char*> labels) {
  Subset s(p.size());
  for (const char* l : labels) s.insert(p.index(l));
  return s;
}

// Number of antichains, counted directly over all subsets.
std::size_t count_antichains(const Poset& p) {
  std::size_t n = 0;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << p.size()); ++m) {
    Subset s = Subset::from_mask(p.size(), m);
    bool ok = true;
    for (Index a : s)
      for (Index b : s)
        if (a != b && p.leq(a, b)) ok = false;
    n += ok;
  }
  return n;
}

}  // namespace

TEST(MakePoset, CoversGiveTwoChain) {
  Poset p = Poset::make({"a", "b"}, {{"a", "b"}});
  EXPECT_TRUE(p.leq(0, 1));
  EXPECT_FALSE(p.leq(1, 0));
  EXPECT_TRUE(p.leq(0, 0));
}

TEST(MakePoset, NoPairsGiveAntichain) {
  Poset p = Poset::make({"a", "b"}, {});
  EXPECT_FALSE(p.leq(0, 1));
  EXPECT_FALSE(p.leq(1, 0));
}

TEST(MakePoset, CycleIsRejected) {
  try {
    Poset::make({"a", "b"}, {{"a", "b"}, {"b", "a"}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotAntisymmetric);
  }
}

TEST(MakePoset, FullModeRejectsIntransitiveInput) {
  try {
    Poset::make({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}}, Poset::Mode::full);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotTransitive);
  }
}

TEST(MakePoset, DuplicateAndUnknownLabels) {
  try {
    Poset::make({"a", "a"}, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DuplicateLabel);
  }
  try {
    Poset::make({"a"}, {{"a", "z"}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnknownLabel);
  }
}

TEST(MakePoset, CoversModeIsTransitiveClosure) {
  std::mt19937 rng(7);
  for (int round = 0; round < 200; ++round) {
    const std::size_t n = 1 + rng() % 6;
    auto labels = letter_labels(n);
    std::vector<std::pair<std::string, std::string>> pairs;
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j)
        if (rng() % 3 == 0) pairs.emplace_back(labels[i], labels[j]);
    Poset p = Poset::make(labels, pairs);
    // Oracle: repeated relational composition until stable.
    std::vector<std::vector<bool>> r(n, std::vector<bool>(n));
    for (Index i = 0; i < n; ++i) r[i][i] = true;
    for (auto& [a, b] : pairs) r[p.index(a)][p.index(b)] = true;
    bool changed = true;
    while (changed) {
      changed = false;
      for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
          for (Index k = 0; k < n; ++k)
            if (r[i][j] && r[j][k] && !r[i][k]) r[i][k] = changed = true;
    }
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) ASSERT_EQ(p.leq(i, j), r[i][j]);
  }
}

TEST(Maps, Monotonicity) {
  auto c = two_chain();
  EXPECT_TRUE(is_monotone(identity_map(c)));
  EXPECT_TRUE(is_monotone(constant_map(c, c, 1)));
  EXPECT_FALSE(is_monotone(PosetMap(c, c, {1, 0})));
}

TEST(Maps, PMorphisms) {
  auto c = two_chain();
  EXPECT_TRUE(is_pmorphism(identity_map(c)));
  EXPECT_TRUE(is_pmorphism(terminal_map(two_antichain())));
  auto pt = share(one_point("a"));
  EXPECT_FALSE(is_pmorphism(PosetMap(pt, c, {0})));
  EXPECT_TRUE(is_pmorphism(PosetMap(pt, c, {1})));
}

TEST(Maps, PMorphismsAreMonotone) {
  auto ps = posets_up_to(3);
  auto four = posets_up_to_iso(4);
  ps.insert(ps.end(), four.begin(), four.end());
  for (const auto& p : ps)
    for (const auto& q : ps) {
      if (p->size() + q->size() > 7) continue;
      for (const auto& f : all_maps(p, q)) {
        if (is_pmorphism(f)) {
          ASSERT_TRUE(is_monotone(f));
        }
      }
    }
}

TEST(Subsets, UpClosure) {
  auto c = two_chain();
  EXPECT_EQ(up_closure(*c, set_of(*c, {"a"})), set_of(*c, {"a", "b"}));
  EXPECT_EQ(up_closure(*c, Subset(2)), Subset(2));
  EXPECT_EQ(up_closure(*c, Subset::full(2)), Subset::full(2));
  EXPECT_EQ(principal_up(*c, 1), set_of(*c, {"b"}));
}

TEST(Subsets, Roots) {
  auto c = two_chain();
  auto a = two_antichain();
  EXPECT_EQ(root_of(*c, set_of(*c, {"a", "b"})), Index{0});
  EXPECT_FALSE(root_of(*a, set_of(*a, {"a", "b"})).has_value());
  EXPECT_EQ(root_of(*a, set_of(*a, {"b"})), Index{1});
  EXPECT_FALSE(root_of(*c, Subset(2)).has_value());
}

TEST(Subsets, RootIsUniqueMemberBelowAll) {
  for (const auto& p : posets_up_to(5))
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << p->size()); ++m) {
      Subset s = Subset::from_mask(p->size(), m);
      std::size_t below_all = 0;
      for (Index x : s) below_all += s.is_subset_of(p->up(x));
      auto r = root_of(*p, s);
      ASSERT_EQ(r.has_value(), below_all == 1);
      if (r) {
        ASSERT_TRUE(s.contains(*r));
        ASSERT_TRUE(s.is_subset_of(p->up(*r)));
      }
    }
}

TEST(Subsets, GOpen) {
  auto c = two_chain();
  EXPECT_TRUE(is_g_open(set_of(*c, {"a"}), terminal_map(c)));
  EXPECT_FALSE(is_g_open(set_of(*c, {"a"}), identity_map(c)));
  EXPECT_TRUE(is_g_open(set_of(*c, {"a", "b"}), identity_map(c)));
}

TEST(Subsets, EverySubsetIsOpenForTerminalMaps) {
  for (const auto& p : posets_up_to(4))
    for (std::uint64_t m = 1; m < (std::uint64_t{1} << p->size()); ++m)
      ASSERT_TRUE(is_g_open(Subset::from_mask(p->size(), m), terminal_map(p)));
}

TEST(Maps, RelativeOpenness) {
  auto c = two_chain();
  auto pt = share(one_point());
  EXPECT_TRUE(relative_open(constant_map(c, c, 0), constant_map(c, pt, 0)));
  EXPECT_TRUE(relative_open(identity_map(c), identity_map(c)));
  EXPECT_FALSE(relative_open(constant_map(c, c, 0), identity_map(c)));
}

TEST(Maps, RelativeOpennessAgainstIdentityIsPMorphism) {
  for (const auto& p : posets_up_to(3))
    for (const auto& q : posets_up_to(3))
      for (const auto& f : monotone_maps(p, q))
        ASSERT_EQ(relative_open(f, identity_map(q)), is_pmorphism(f));
}

TEST(Product, Examples) {
  auto c = two_chain();
  EXPECT_TRUE(is_isomorphic(product(one_point(), *c), *c));
  Poset sq = product(*c, *c);
  EXPECT_EQ(sq.size(), 4u);
  EXPECT_TRUE(sq.leq(sq.index("(a,a)"), sq.index("(a,b)")));
  EXPECT_TRUE(sq.leq(sq.index("(a,b)"), sq.index("(b,b)")));
  EXPECT_FALSE(sq.leq(sq.index("(a,b)"), sq.index("(b,a)")));
  EXPECT_TRUE(is_isomorphic(product(*two_antichain(), *two_antichain()), antichain(4)));
}

TEST(Upsets, Examples) {
  auto c = two_chain();
  auto ups = enumerate_upsets(*c);
  ASSERT_EQ(ups.size(), 3u);
  EXPECT_EQ(ups[0], Subset(2));
  EXPECT_EQ(ups[1], set_of(*c, {"a"}).complement());
  EXPECT_EQ(ups[2], Subset::full(2));
  EXPECT_EQ(enumerate_upsets(*two_antichain()).size(), 4u);
  EXPECT_EQ(enumerate_upsets(one_point()).size(), 2u);
}

TEST(Upsets, CountEqualsAntichainCount) {
  for (const auto& p : posets_up_to(5)) {
    auto ups = enumerate_upsets(*p);
    ASSERT_EQ(ups.size(), count_antichains(*p));
    for (const auto& u : ups) ASSERT_TRUE(is_upset(*p, u));
  }
}

TEST(Enumerate, PosetCounts) {
  const std::size_t expected[] = {1, 1, 2, 5, 16, 63};
  for (std::size_t n = 0; n <= 5; ++n) EXPECT_EQ(posets_up_to_iso(n).size(), expected[n]) << n;
}

TEST(Enumerate, RepresentativesArePairwiseNonIsomorphic) {
  auto ps = posets_up_to_iso(4);
  for (std::size_t i = 0; i < ps.size(); ++i)
    for (std::size_t j = i + 1; j < ps.size(); ++j) ASSERT_FALSE(is_isomorphic(*ps[i], *ps[j]));
}

TEST(Enumerate, MonotoneMapCount) {
  // Monotone self-maps of a 3-chain are the non-decreasing sequences: C(5,3) = 10.
  EXPECT_EQ(monotone_maps(share(chain(3)), share(chain(3))).size(), 10u);
}

TEST(Covers, ChainAndDiamond) {
  EXPECT_EQ(chain(4).covers().size(), 3u);
  EXPECT_EQ(product(chain(2), chain(2)).covers().size(), 4u);
}

#include <gtest/gtest.h>

#include <random>

#include "imcoalg/bisim.hpp"
#include "imcoalg/enumerate.hpp"

using namespace imcoalg;

namespace {

PosetRef two_chain() { return share(Poset::make({"a", "b"}, {{"a", "b"}})); }

// The four clauses written out pair by pair, S ranging over ≤ and R.
bool clauses_by_hand(const Bisimulation& b) {
  const ModalFrame& l = b.left();
  const ModalFrame& r = b.right();
  auto s_left = [&](int s, Index x, Index x2) { return s == 0 ? l.poset().leq(x, x2) : l.related(x, x2); };
  auto s_right = [&](int s, Index y, Index y2) { return s == 0 ? r.poset().leq(y, y2) : r.related(y, y2); };
  for (auto [x, y] : b.pairs())
    for (int s = 0; s < 2; ++s) {
      for (Index x2 = 0; x2 < l.size(); ++x2) {
        if (!s_left(s, x, x2)) continue;
        bool ok = false;
        for (Index y2 = 0; y2 < r.size(); ++y2)
          if (s_right(s, y, y2) && b.related(x2, y2)) ok = true;
        if (!ok) return false;
      }
      for (Index y2 = 0; y2 < r.size(); ++y2) {
        if (!s_right(s, y, y2)) continue;
        bool ok = false;
        for (Index x2 = 0; x2 < l.size(); ++x2)
          if (s_left(s, x, x2) && b.related(x2, y2)) ok = true;
        if (!ok) return false;
      }
    }
  return true;
}

Bisimulation relation_from_bits(const ModalFrame& l, const ModalFrame& r, std::uint64_t bits) {
  Bisimulation b(l, r);
  for (Index x = 0; x < l.size(); ++x)
    for (Index y = 0; y < r.size(); ++y)
      if ((bits >> (x * r.size() + y)) & 1U) b.insert(x, y);
  return b;
}

}  // namespace

TEST(BoxBisimulation, Examples) {
  auto c = two_chain();
  ModalFrame f = ModalFrame::from_labels(c, {{"a", "b"}, {"b", "b"}});
  EXPECT_TRUE(is_box_bisimulation(Bisimulation::identity(f)));
  EXPECT_TRUE(is_box_bisimulation(Bisimulation(f, f)));
  EXPECT_FALSE(is_box_bisimulation(Bisimulation(f, f, {{0, 1}})));
}

TEST(BoxBisimulation, GraphOfModalPMorphism) {
  // a < b, a < c with R = {(a,b), (a,c), (b,b), (c,c)} onto the reflexive-top 2-chain.
  auto v = share(Poset::make({"a", "b", "c"}, {{"a", "b"}, {"a", "c"}}));
  ModalFrame src = ModalFrame::from_labels(v, {{"a", "b"}, {"a", "c"}, {"b", "b"}, {"c", "c"}});
  auto c = two_chain();
  ModalFrame dst = ModalFrame::from_labels(c, {{"a", "b"}, {"b", "b"}});
  PosetMap f(v, c, {0, 1, 1});
  ASSERT_TRUE(is_modal_pmorphism(f, src, dst));
  Bisimulation g(src, dst, {{0, 0}, {1, 1}, {2, 1}});
  EXPECT_TRUE(is_box_bisimulation(g));
  EXPECT_TRUE(clauses_by_hand(g));
  EXPECT_TRUE(g.is_subset_of(largest_bisimulation(src, dst)));
}

TEST(LargestBisimulation, Examples) {
  auto pt = share(one_point());
  ModalFrame loop = ModalFrame::from_pairs(pt, {{0, 0}});
  EXPECT_EQ(largest_bisimulation(loop, loop), Bisimulation::full(loop, loop));

  // 2-chain with R = ∅ against a reflexive point: every pair fails back on R.
  ModalFrame empty(two_chain());
  EXPECT_EQ(largest_bisimulation(empty, loop).size(), 0u);
  // Against an irreflexive point both pairs survive.
  EXPECT_EQ(largest_bisimulation(empty, ModalFrame(pt)), Bisimulation::full(empty, ModalFrame(pt)));
}

TEST(LargestBisimulation, ContainsIsomorphismGraph) {
  auto v = share(Poset::make({"a", "b", "c"}, {{"a", "b"}, {"a", "c"}}));
  ModalFrame f = ModalFrame::from_labels(v, {{"a", "b"}, {"b", "b"}});
  auto w = share(Poset::make({"z", "y", "x"}, {{"z", "y"}, {"z", "x"}}));
  ModalFrame g = ModalFrame::from_labels(w, {{"z", "y"}, {"y", "y"}});
  Bisimulation iso(f, g, {{0, 0}, {1, 1}, {2, 2}});
  ASSERT_TRUE(is_box_bisimulation(iso));
  EXPECT_TRUE(iso.is_subset_of(largest_bisimulation(f, g)));
}

TEST(LargestBisimulation, ExhaustiveContainmentAndUnion) {
  std::vector<ModalFrame> frames;
  for (const auto& p : posets_up_to(2))
    for (const auto& f : all_mix_law_frames(p)) frames.push_back(f);
  for (const auto& l : frames)
    for (const auto& r : frames) {
      Bisimulation big = largest_bisimulation(l, r);
      ASSERT_TRUE(is_box_bisimulation(big));
      std::vector<Bisimulation> found;
      const std::uint64_t total = std::uint64_t{1} << (l.size() * r.size());
      for (std::uint64_t bits = 0; bits < total; ++bits) {
        Bisimulation b = relation_from_bits(l, r, bits);
        bool is_bisim = is_box_bisimulation(b);
        ASSERT_EQ(is_bisim, clauses_by_hand(b));
        if (!is_bisim) continue;
        ASSERT_TRUE(b.is_subset_of(big));
        found.push_back(b);
      }
      for (const auto& a : found)
        for (const auto& b : found) ASSERT_TRUE(is_box_bisimulation(a.united(b)));
    }
}

TEST(Coalgebraic, Examples) {
  auto c = two_chain();
  ModalFrame f = ModalFrame::from_labels(c, {{"a", "b"}, {"b", "b"}});
  for (std::size_t d = 1; d <= 3; ++d) EXPECT_TRUE(coalgebraic_bisim_check(Bisimulation::identity(f), d));
  EXPECT_TRUE(coalgebraic_bisim_check(Bisimulation(f, f), 2));

  // ≤-clauses hold for the identity, the R-clauses do not.
  ModalFrame g = ModalFrame::from_labels(c, {{"b", "b"}, {"a", "b"}, {"a", "a"}});
  Bisimulation id(f, g, {{0, 0}, {1, 1}});
  ASSERT_FALSE(is_box_bisimulation(id));
  EXPECT_FALSE(coalgebraic_bisim_check(id, 1));

  try {
    coalgebraic_bisim_check(Bisimulation(f, f, {{0, 0}}), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ProjectionNotPMorphism);
  }
}

TEST(Coalgebraic, LargestBisimulationPasses) {
  std::mt19937 rng(5);
  for (int i = 0; i < 60; ++i) {
    auto p = share(random_poset(1 + rng() % 4, 0.4, rng));
    auto q = share(random_poset(1 + rng() % 4, 0.4, rng));
    ModalFrame a = random_frame(p, rng), b = random_frame(q, rng);
    ASSERT_TRUE(coalgebraic_bisim_check(largest_bisimulation(a, b), 2));
  }
}

TEST(Coalgebraic, AgreesWithRelationalOnTwoElementFrames) {
  std::vector<ModalFrame> frames;
  for (const auto& p : posets_up_to(2))
    for (const auto& f : all_mix_law_frames(p)) frames.push_back(f);
  for (const auto& l : frames)
    for (const auto& r : frames) {
      const std::uint64_t total = std::uint64_t{1} << (l.size() * r.size());
      for (std::uint64_t bits = 0; bits < total; ++bits) {
        Bisimulation b = relation_from_bits(l, r, bits);
        BisimulationSpan s = bisimulation_span(b);
        if (b.size() > 0 && (!is_pmorphism(s.left) || !is_pmorphism(s.right))) continue;
        for (std::size_t d = 1; d <= 2; ++d) ASSERT_EQ(coalgebraic_bisim_check(b, d), is_box_bisimulation(b));
      }
    }
}

TEST(SpanFrame, SatisfiesMixLawForBisimulations) {
  auto c = two_chain();
  ModalFrame f = ModalFrame::from_labels(c, {{"a", "b"}, {"b", "b"}});
  Bisimulation b = largest_bisimulation(f, f);
  BisimulationSpan s = bisimulation_span(b);
  EXPECT_TRUE(check_mix_law(span_frame(b, s)));
  EXPECT_EQ(s.carrier->label(0), "(a,a)");
}

TEST(Truth, IdentityAndIsomorphicFramesAgree) {
  std::mt19937 rng(9);
  const std::vector<std::string> letters{"p", "q"};
  auto v = share(Poset::make({"a", "b", "c"}, {{"a", "b"}, {"a", "c"}}));
  auto w = share(Poset::make({"z", "y", "x"}, {{"z", "y"}, {"z", "x"}}));
  ModalFrame f = ModalFrame::from_labels(v, {{"a", "b"}, {"a", "c"}, {"c", "c"}});
  ModalFrame g(w, f.rows());
  Model m = random_model(f, letters, rng);
  Model n(g, m.valuation());
  std::vector<Formula> sample;
  for (int i = 0; i < 200; ++i) sample.push_back(random_formula(letters, 4, rng));
  for (Index x = 0; x < 3; ++x) {
    EXPECT_TRUE(bisimilarity_preserves_truth(m, x, m, x, sample));
    EXPECT_TRUE(bisimilarity_preserves_truth(m, x, n, x, sample));
  }
}

TEST(Truth, Errors) {
  auto c = two_chain();
  ModalFrame f = ModalFrame::from_labels(c, {{"a", "b"}, {"b", "b"}});
  Model m(f, {{"p", Subset(2, {1})}});
  auto pt = share(one_point());
  Model n(ModalFrame::from_pairs(pt, {{0, 0}}), {{"p", Subset(1)}});
  // b and * are bisimilar, but p holds at b only.
  try {
    bisimilarity_preserves_truth(m, 1, n, 0, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IncompatibleValuations);
  }
  Model e(ModalFrame(c), {{"p", Subset(2)}});
  EXPECT_THROW(bisimilarity_preserves_truth(e, 0, n, 0, {}), Error);
}

TEST(Truth, NonBisimilarPointsAreDistinguished) {
  auto c = two_chain();
  ModalFrame empty(c);
  auto pt = share(one_point());
  Model m(empty, {{"p", Subset(2)}});
  Model n(ModalFrame::from_pairs(pt, {{0, 0}}), {{"p", Subset(1)}});
  auto d = distinguishing_formula(m, 0, n, 0, 1);
  ASSERT_TRUE(d.has_value());
  EXPECT_NE(truth_set(m, *d).contains(0), truth_set(n, *d).contains(0));
  // The enumerated formulas find a witness as well.
  bool found = false;
  for (const auto& f : enumerate_formulas({"p"}, 1))
    if (truth_set(m, f).contains(0) != truth_set(n, f).contains(0)) found = true;
  EXPECT_TRUE(found);
}

TEST(Truth, JointTruthSetsCoverEnumeratedFormulas) {
  std::mt19937 rng(13);
  for (int i = 0; i < 20; ++i) {
    auto p = share(random_poset(1 + rng() % 3, 0.4, rng));
    auto q = share(random_poset(1 + rng() % 3, 0.4, rng));
    Bisimulation b = largest_bisimulation(random_frame(p, rng), random_frame(q, rng));
    auto [m, n] = random_compatible_models(b, {"p"}, rng);
    ASSERT_TRUE(compatible_valuations(b, m, n));
    auto joint = joint_truth_sets(m, n, 2);
    std::set<std::pair<Subset, Subset>> pairs;
    for (const auto& j : joint) {
      pairs.emplace(j.left, j.right);
      ASSERT_EQ(truth_set(m, j.witness), j.left);
      ASSERT_EQ(truth_set(n, j.witness), j.right);
      ASSERT_LE(j.witness.depth(), 2u);
    }
    for (const auto& f : enumerate_formulas({"p"}, 2))
      ASSERT_TRUE(pairs.count({truth_set(m, f), truth_set(n, f)})) << print(f);
  }
}

#include <gtest/gtest.h>

#include <random>

#include "imcoalg/enumerate.hpp"
#include "imcoalg/frames.hpp"

using namespace imcoalg;

namespace {

PosetRef two_chain() { return share(Poset::make({"a", "b"}, {{"a", "b"}})); }

Subset set_of(const Poset& p, std::initializer_list<const char*> labels) {
  Subset s(p.size());
  for (const char* l : labels) s.insert(p.index(l));
  return s;
}

// The mix law straight from R = ≤∘R∘≤.
bool mix_law_by_composition(const ModalFrame& f) {
  const Poset& p = f.poset();
  for (Index x = 0; x < f.size(); ++x)
    for (Index z = 0; z < f.size(); ++z) {
      bool composed = false;
      for (Index u : p.up(x))
        for (Index v : f.successors(u))
          if (p.leq(v, z)) composed = true;
      if (composed != f.related(x, z)) return false;
    }
  return true;
}

bool is_serial(const ModalFrame& f) {
  for (Index x = 0; x < f.size(); ++x)
    if (f.successors(x).empty()) return false;
  return true;
}

}  // namespace

TEST(MixLaw, Examples) {
  auto c = two_chain();
  EXPECT_TRUE(check_mix_law(ModalFrame::from_labels(c, {{"a", "b"}, {"b", "b"}})));
  ModalFrame bad = ModalFrame::from_labels(c, {{"a", "a"}});
  EXPECT_FALSE(check_mix_law(bad));
  auto v = mix_law_violation(bad);
  ASSERT_TRUE(v.has_value());
  EXPECT_EQ(*v, std::make_pair(Index{0}, Index{1}));
  EXPECT_TRUE(check_mix_law(ModalFrame(c)));
}

TEST(MixLaw, AgreesWithCompositionAndUpMapCharacterisation) {
  for (const auto& p : posets_up_to(3)) {
    const std::size_t n = p->size();
    auto ups = up_functor(p);
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << (n * n)); ++bits) {
      std::vector<Subset> rows(n, Subset(n));
      for (Index x = 0; x < n; ++x)
        for (Index y = 0; y < n; ++y)
          if ((bits >> (x * n + y)) & 1U) rows[x].insert(y);
      ModalFrame f(p, rows);
      const bool law = check_mix_law(f);
      ASSERT_EQ(law, mix_law_by_composition(f));
      bool antitone_upsets = true;
      for (Index x = 0; x < n; ++x) {
        if (!is_upset(*p, rows[x])) antitone_upsets = false;
        for (Index y : p->up(x))
          if (!rows[y].is_subset_of(rows[x])) antitone_upsets = false;
      }
      ASSERT_EQ(law, antitone_upsets);
      ASSERT_TRUE(check_mix_law(mix_closure(f)));
    }
  }
}

TEST(UpMap, Examples) {
  auto c = two_chain();
  UpMap empty = frame_to_upmap(ModalFrame(c));
  for (Index x = 0; x < 2; ++x) EXPECT_TRUE(empty.value(x).empty());

  ModalFrame f = ModalFrame::from_labels(c, {{"a", "b"}, {"b", "b"}});
  UpMap m = frame_to_upmap(f);
  EXPECT_EQ(m.value(0), set_of(*c, {"b"}));
  EXPECT_EQ(m.value(1), set_of(*c, {"b"}));
  EXPECT_EQ(upmap_to_frame(m), f);

  auto a = share(antichain(3));
  std::vector<Subset> full(3, Subset::full(3));
  UpMap all = frame_to_upmap(ModalFrame(a, full));
  for (Index x = 0; x < 3; ++x) EXPECT_EQ(all.value(x), Subset::full(3));

  UpMap principal = upmap_from_values(c, {c->up(0), c->up(1)});
  ModalFrame le = upmap_to_frame(principal);
  for (Index x = 0; x < 2; ++x) EXPECT_EQ(le.successors(x), c->up(x));
}

TEST(UpMap, Errors) {
  auto c = two_chain();
  try {
    frame_to_upmap(ModalFrame::from_labels(c, {{"a", "a"}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MixLawViolation);
  }
  try {
    upmap_from_values(c, {set_of(*c, {"a"}), Subset(2)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ValueNotUpset);
  }
  // b ↦ {b}, a ↦ ∅ is not monotone into (Up, ⊇).
  UpMap m = upmap_from_values(c, {Subset(2), set_of(*c, {"b"})});
  try {
    upmap_to_frame(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotMonotone);
  }
}

TEST(UpMap, RoundTripExhaustive) {
  for (const auto& p : posets_up_to(3))
    for (const auto& f : all_mix_law_frames(p)) ASSERT_EQ(upmap_to_frame(frame_to_upmap(f)), f);
}

TEST(Lifted, Examples) {
  auto pt = share(one_point());
  LiftedMap l = frame_to_lifted(ModalFrame(pt), 3);
  for (std::size_t i = 0; i <= 3; ++i) EXPECT_EQ(l.tower.coordinate(i), (std::vector<Index>{0}));

  auto c = two_chain();
  ModalFrame f = ModalFrame::from_labels(c, {{"a", "b"}, {"b", "b"}});
  LiftedMap lf = frame_to_lifted(f, 2);
  // Both points map to {b}; f_2(a) = f_1[↑a] = {{b}} and likewise for b.
  EXPECT_EQ(lf.tower.coords[2][0], lf.tower.coords[2][1]);
  EXPECT_EQ(lf.complex->members(2, lf.tower.coords[2][0]).size(), 1u);
  EXPECT_EQ(lifted_to_upmap(lf).map, frame_to_upmap(f).map);
}

TEST(Lifted, ProjectionAndReliftingRoundTrip) {
  for (const auto& p : posets_up_to(3)) {
    FunctorValue up = up_functor(p);
    auto cx = up_complex(up, 3);
    for (const auto& f : all_mix_law_frames(p)) {
      LiftedMap l = frame_to_lifted(f, up, cx, 3);
      UpMap proj = lifted_to_upmap(l);
      ASSERT_EQ(proj.map, frame_to_upmap(f, up).map);
      ASSERT_EQ(lift_map(proj.map, *cx, 3), l.tower);
    }
  }
}

TEST(ModalPMorphism, Examples) {
  auto c = two_chain();
  ModalFrame f = ModalFrame::from_labels(c, {{"a", "b"}, {"b", "b"}});
  EXPECT_TRUE(is_modal_pmorphism(identity_map(c), f, f));

  auto pt = share(one_point());
  ModalFrame loop = ModalFrame::from_pairs(pt, {{0, 0}});
  for (const auto& p : posets_up_to(3))
    for (const auto& g : all_mix_law_frames(p))
      ASSERT_EQ(is_modal_pmorphism(terminal_map(p), g, ModalFrame(terminal_map(p).target(), loop.rows())),
                is_serial(g));

  EXPECT_FALSE(is_modal_pmorphism(terminal_map(c), f, ModalFrame(pt)));
}

TEST(CoalgebraMorphism, Examples) {
  auto c = two_chain();
  ModalFrame f = ModalFrame::from_labels(c, {{"a", "b"}, {"b", "b"}});
  EXPECT_TRUE(check_coalgebra_morphism(identity_map(c), f, f, 3));
  ModalFrame g = ModalFrame::from_labels(c, {{"a", "a"}, {"a", "b"}, {"b", "b"}});
  // Identity between different relations fails the square at coordinate 1.
  EXPECT_FALSE(check_coalgebra_morphism(identity_map(c), f, g, 1));
}

TEST(CoalgebraMorphism, AgreesWithModalPMorphismOnSmallFrames) {
  auto ps = posets_up_to(2);
  for (const auto& p : ps)
    for (const auto& q : ps) {
      auto fp = all_mix_law_frames(p);
      auto fq = all_mix_law_frames(q);
      for (const auto& a : fp)
        for (const auto& b : fq)
          for (const auto& m : all_maps(p, q))
            for (std::size_t d = 1; d <= 3; ++d)
              ASSERT_EQ(is_modal_pmorphism(m, a, b), check_coalgebra_morphism(m, a, b, d));
    }
}

TEST(Neighbourhood, PowUpSizes) {
  EXPECT_EQ(pow_up_functor(share(one_point())).poset->size(), 4u);
  EXPECT_EQ(pow_up_functor(two_chain()).poset->size(), 8u);
}

TEST(Neighbourhood, EmptyNeighbourhoodsGiveBottom) {
  auto c = two_chain();
  NbhdFrame n(c, {{}, {}});
  EXPECT_TRUE(n.is_valid(NbhdMode::strict));
  FunctorValue pow = pow_up_functor(c);
  PosetMap m = nbhd_to_coalgebra(n, pow);
  for (Index x = 0; x < 2; ++x) {
    EXPECT_EQ(m(x), 0u);
    for (Index y = 0; y < pow.poset->size(); ++y) EXPECT_TRUE(pow.poset->leq(m(x), y));
  }
}

TEST(Neighbourhood, ValidityModes) {
  auto c = two_chain();
  Subset b = set_of(*c, {"b"});
  // N(a) ⊆ N(b) holds; {b} ∈ N(b) without ∅ is not closed under shrinking.
  NbhdFrame n(c, {{}, {b}});
  EXPECT_TRUE(n.is_valid(NbhdMode::lax));
  EXPECT_FALSE(n.is_valid(NbhdMode::strict));
  NbhdFrame m(c, {{b}, {}});
  EXPECT_FALSE(m.is_valid(NbhdMode::lax));
  EXPECT_THROW(nbhd_to_coalgebra(m, pow_up_functor(c)), Error);
  EXPECT_THROW(NbhdFrame(c, {{set_of(*c, {"a"})}, {}}), Error);
}

TEST(Neighbourhood, CoalgebraRoundTrip) {
  for (const auto& p : posets_up_to(2)) {
    FunctorValue pow = pow_up_functor(p);
    for (const auto& n : all_nbhd_frames(p)) {
      PosetMap m = nbhd_to_coalgebra(n, pow);
      NbhdFrame back = coalgebra_to_nbhd(m, pow);
      for (Index x = 0; x < n.size(); ++x) ASSERT_EQ(back.family(x), n.family(x));
      TowerMap t = nbhd_to_lifted(n, 2);
      ASSERT_EQ(t.coordinate(1), m.image());
    }
  }
}

TEST(Neighbourhood, MorphismConditionOnTwoPoints) {
  // f : {x0, x1} (antichain) -> {*} with N(xi) = {{xi}} and N'(*) = {{*}}.
  auto a = share(antichain(2, "x"));
  auto pt = share(one_point());
  NbhdFrame src(a, {{Subset(2, {0})}, {Subset(2, {1})}});
  NbhdFrame dst(pt, {{Subset::full(1)}});
  PosetMap f = terminal_map(a);
  f = PosetMap(a, pt, f.image());
  // f^-1({*}) = {x0, x1} is not in N(x0), while {*} is in N'(*).
  EXPECT_FALSE(is_nbhd_morphism(f, src, dst));
  EXPECT_FALSE(is_nbhd_morphism(f, src, dst, TestSets::upsets));
  // Direct image sends {{x0}} to {{*}}, so that square commutes regardless.
  EXPECT_TRUE(nbhd_square_commutes(f, src, dst, FamilyAction::direct_image));
  EXPECT_FALSE(nbhd_square_commutes(f, src, dst, FamilyAction::preimage));

  NbhdFrame full(a, {{Subset::full(2)}, {Subset::full(2)}});
  EXPECT_TRUE(is_nbhd_morphism(f, full, dst));
  EXPECT_TRUE(nbhd_square_commutes(f, full, dst, FamilyAction::preimage));
}

#include <gtest/gtest.h>

#include <random>

#include "imcoalg/enumerate.hpp"
#include "imcoalg/freealg.hpp"

using namespace imcoalg;

namespace {

PosetRef two_chain() { return share(Poset::make({"a", "b"}, {{"a", "b"}})); }

// |X| times the size of stage d over Up(X), from the stage builder directly.
std::size_t first_layer_size(const PosetRef& x, std::size_t d) {
  FunctorValue up = up_functor(x);
  if (d == 1) return x->size() * up.poset->size();
  PosetMap g = terminal_map(up.poset);
  for (std::size_t i = 2; i < d; ++i) g = build_p_g(g).root;
  return x->size() * build_p_g(g).poset->size();
}

}  // namespace

TEST(GeneratorPoset, Examples) {
  EXPECT_EQ(generator_poset({}).size(), 1u);
  Poset one = generator_poset({"p"});
  ASSERT_EQ(one.size(), 2u);
  EXPECT_TRUE(one.leq(one.index("{p}"), one.index("{}")));
  EXPECT_FALSE(one.leq(one.index("{}"), one.index("{p}")));
  Poset two = generator_poset({"p", "q"});
  EXPECT_TRUE(is_isomorphic(two, product(chain(2), chain(2))));
  EXPECT_TRUE(two.leq(two.index("{p,q}"), two.index("{q}")));
  EXPECT_EQ(generator_poset({"p", "q", "r"}).size(), 8u);
  try {
    generator_poset({"p", "q", "r", "s"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::TooManyGenerators);
  }
}

TEST(FreeStages, StageZeroIsX) {
  auto c = two_chain();
  auto st = build_free_stages(c, 0, 1);
  ASSERT_EQ(st.size(), 1u);
  EXPECT_EQ(*st[0].poset, *c);
  EXPECT_EQ(st[0].projection, identity_map(c));
}

TEST(FreeStages, FirstLayerSizesMatchStageBuilder) {
  for (const auto& x : posets_up_to(2))
    for (std::size_t d = 1; d <= 2; ++d) ASSERT_EQ(build_free_stages(x, 1, d)[1].size(), first_layer_size(x, d));
  auto pt = share(one_point());
  EXPECT_EQ(build_free_stages(pt, 1, 1)[1].size(), 2u);
}

TEST(FreeStages, SizesAreGolden) {
  // Frozen from the first run; regression values.
  auto sizes = [](const PosetRef& x, std::size_t n, std::size_t d) {
    std::vector<std::size_t> out;
    for (const auto& s : build_free_stages(x, n, d)) out.push_back(s.size());
    return out;
  };
  auto pt = share(one_point());
  auto g1 = share(generator_poset({"p"}));
  EXPECT_EQ(sizes(pt, 2, 1), (std::vector<std::size_t>{1, 2, 3}));
  EXPECT_EQ(sizes(pt, 2, 2), (std::vector<std::size_t>{1, 3, 29}));
  EXPECT_EQ(sizes(g1, 2, 1), (std::vector<std::size_t>{2, 6, 20}));
  EXPECT_EQ(sizes(g1, 1, 2), (std::vector<std::size_t>{2, 14}));
}

TEST(FreeStages, OverflowNamesTheLayer) {
  try {
    build_free_stages(share(generator_poset({"p"})), 2, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::StageTooLarge);
    EXPECT_NE(std::string(e.what()).find("M_2"), std::string::npos);
  }
}

TEST(FreeStages, ProjectionAndRelationByFormula) {
  // At inner depth 1, C is an upset of M_k: π_{k+1}(x, U) = (x, ↑π_k[U]) and R_k[(x, U)] = U.
  for (const auto& x : posets_up_to(2)) {
    auto st = build_free_stages(x, 2, 1);
    for (std::size_t k = 1; k < st.size(); ++k) {
      const FreeStage& s = st[k];
      const std::size_t width = s.size() / x->size();
      for (Index z = 0; z < s.size(); ++z) {
        auto [a, c] = s.parts[z];
        ASSERT_EQ(z, a * width + c);
        const Subset& u = s.inner_up->upsets[c];
        ASSERT_EQ(s.relation[z], u);
        if (k == 1) {
          ASSERT_EQ(s.projection(z), a);
        } else {
          Subset img = up_closure(*st[k - 2].poset, direct_image(st[k - 1].projection, u));
          auto [a2, c2] = st[k - 1].parts[s.projection(z)];
          ASSERT_EQ(a2, a);
          ASSERT_EQ(st[k - 1].inner_up->upsets[c2], img);
        }
      }
    }
  }
}

TEST(FreeStages, PropertiesHold) {
  auto pt = share(one_point());
  for (std::size_t d = 1; d <= 2; ++d)
    for (const auto& s : build_free_stages(pt, 2, d)) EXPECT_TRUE(check_modal_stage_properties(s).passed());
  for (const auto& s : build_free_stages(share(generator_poset({"p"})), 2, 1))
    EXPECT_TRUE(check_modal_stage_properties(s).passed());
  for (const auto& x : posets_up_to(2))
    for (const auto& s : build_free_stages(x, 1, 2)) {
      ASSERT_TRUE(check_modal_stage_properties(s).passed());
      ASSERT_TRUE(is_pmorphism(s.projection));
    }
}

TEST(FreeStages, CorruptedRelationIsCaught) {
  auto st = build_free_stages(share(generator_poset({"p"})), 1, 1);
  FreeStage s = st[1];
  const Poset& below = *st[0].poset;
  // Drop a non-minimal member of some R[z]; the image stops being an upset.
  bool done = false;
  for (Index z = 0; z < s.size() && !done; ++z)
    for (Index y : s.relation[z])
      if ((below.down(y) & s.relation[z]).count() > 1) {
        s.relation[z].erase(y);
        done = true;
        break;
      }
  ASSERT_TRUE(done);
  StageReport r = check_modal_stage_properties(s);
  EXPECT_FALSE(r.passed());
  EXPECT_EQ(r.checks[1].name, "relation images are upsets");
  EXPECT_FALSE(r.checks[1].passed);
}

TEST(UniversalLift, EmptyRelation) {
  auto c = two_chain();
  ModalFrame f(c);
  auto st = build_free_stages(c, 2, 1);
  auto maps = universal_lift(identity_map(c), f, st);
  ASSERT_EQ(maps.size(), 3u);
  for (std::size_t k = 1; k < 3; ++k)
    for (Index y = 0; y < 2; ++y) EXPECT_TRUE(st[k].relation[maps[k](y)].empty());
  EXPECT_TRUE(check_universal_lift(f, st, maps).passed());
}

TEST(UniversalLift, HandComputedChain) {
  auto c = two_chain();
  ModalFrame f = ModalFrame::from_labels(c, {{"a", "b"}, {"b", "b"}});
  auto g = share(generator_poset({"p"}));
  PosetMap p(c, g, {g->index("{p}"), g->index("{}")});
  ASSERT_TRUE(is_pmorphism(p));
  auto st = build_free_stages(g, 1, 1);
  auto maps = universal_lift(p, f, st);
  // p̄(a) = p̄(b) = p[{b}] = {{}}.
  Subset top(2, {g->index("{}")});
  for (Index y = 0; y < 2; ++y) {
    auto [x, u] = st[1].parts[maps[1](y)];
    EXPECT_EQ(x, p(y));
    EXPECT_EQ(st[1].inner_up->upsets[u], top);
  }
  LiftReport r = check_universal_lift(f, st, maps);
  EXPECT_TRUE(r.monotone);
  EXPECT_TRUE(r.modal);
  EXPECT_TRUE(r.projections);
}

TEST(UniversalLift, PairingIsNotAPMorphismIntoTheProduct) {
  // a < b, R = {(a, b)}, p the isomorphism onto {p} < {}. p_1(a) = ({p}, {{}})
  // lies below ({p}, ∅), and the only y >= a over {p} is a itself.
  auto c = two_chain();
  ModalFrame f = ModalFrame::from_labels(c, {{"a", "b"}});
  auto g = share(generator_poset({"p"}));
  PosetMap p(c, g, {g->index("{p}"), g->index("{}")});
  for (std::size_t d = 1; d <= 2; ++d) {
    auto st = build_free_stages(g, 1, d);
    auto maps = universal_lift(p, f, st);
    EXPECT_TRUE(is_pmorphism(maps[0]));
    EXPECT_TRUE(is_monotone(maps[1]));
    EXPECT_FALSE(is_pmorphism(maps[1]));
    LiftReport r = check_universal_lift(f, st, maps);
    EXPECT_FALSE(r.pmorphisms);
    EXPECT_TRUE(r.modal && r.projections);
  }
}

TEST(UniversalLift, ReflexivePointLandsAtTheBottom) {
  // Over the 1-point base, M_1 is the 2-chain ({*}) < (∅); the reflexive
  // point goes to ({*}), which has a successor outside the image.
  auto pt = share(one_point());
  ModalFrame f = ModalFrame::from_labels(pt, {{"*", "*"}});
  auto st = build_free_stages(pt, 1, 1);
  ASSERT_EQ(st[1].size(), 2u);
  auto maps = universal_lift(identity_map(pt), f, st);
  const Index image = maps[1](0);
  EXPECT_EQ(st[1].relation[image], Subset(1, {0}));
  EXPECT_EQ(st[1].poset->up(image).count(), 2u);
  EXPECT_FALSE(is_pmorphism(maps[1]));
  EXPECT_TRUE(check_universal_lift(f, st, maps).modal);
}

TEST(UniversalLift, Errors) {
  auto c = two_chain();
  auto g = share(generator_poset({"p"}));
  ModalFrame f = ModalFrame::from_labels(c, {{"a", "b"}, {"b", "b"}});
  try {
    universal_lift(PosetMap(c, g, {1, 1}), f, 1, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotPMorphism);
  }
  try {
    universal_lift(identity_map(c), ModalFrame::from_labels(c, {{"a", "a"}}), 1, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MixLawViolation);
  }
}

TEST(UniversalLift, ModalConditionAndProjectionsOnRandomFrames) {
  std::mt19937 rng(41);
  auto g = share(generator_poset({"p"}));
  auto pt = share(one_point());
  auto st_g = build_free_stages(g, 2, 1);
  auto st_pt1 = build_free_stages(pt, 2, 1);
  auto st_pt2 = build_free_stages(pt, 2, 2);
  for (int i = 0; i < 60; ++i) {
    auto y = share(random_poset(1 + rng() % 4, 0.4, rng));
    ModalFrame f = random_frame(y, rng);
    for (const auto* st : {&st_pt1, &st_pt2}) {
      LiftReport r = check_universal_lift(f, *st, universal_lift(terminal_map(y), f, *st));
      ASSERT_TRUE(r.monotone && r.modal && r.projections) << r.counterexample;
    }
    for (const auto& p : all_maps(y, g)) {
      if (!is_pmorphism(p)) continue;
      LiftReport r = check_universal_lift(f, st_g, universal_lift(p, f, st_g));
      ASSERT_TRUE(r.monotone && r.modal && r.projections) << r.counterexample;
    }
  }
}

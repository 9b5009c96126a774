#include "support.hpp"

using namespace coarse;
using namespace coarse::testing;

namespace {
auto evens() -> Subset {
  return subset_predicate("evens", [](const GroupElement &x) { return x.nf[0] % 2 == 0; });
}
} // namespace

TEST(Translate, Examples) {
  EXPECT_EQ(translate(z(1), zfun({{0, 1}})), zfun({{1, 1}}));
  auto f = zfun({{3, 2}, {-1, 5}});
  EXPECT_EQ(translate(z(0), f), f);
  auto F2 = named_group("F2");
  auto a = el(F2, {1}), b = el(F2, {2});
  FinSupFun g(F2, Ring::integers(), 1);
  g.add(b, {Scalar(1)});
  g.add(F2.identity(), {Scalar(2)});
  FinSupFun expected(F2, Ring::integers(), 1);
  expected.add(F2.mul(a, b), {Scalar(1)});
  expected.add(a, {Scalar(2)});
  EXPECT_EQ(translate(a, g), expected);
}

TEST(Translate, IsAnAction) {
  Rng rng(7);
  for (const auto &name : {"Z", "F2", "Dinf", "D3"}) {
    auto G = named_group(name);
    for (int i = 0; i < 30; ++i) {
      auto f = random_function(rng, G, Ring::integers(), 2, 4);
      auto g1 = rng.pick(G.ball(2)), g2 = rng.pick(G.ball(2));
      EXPECT_EQ(translate(G.mul(g1, g2), f), translate(g1, translate(g2, f))) << name;
      EXPECT_EQ(translate(G.identity(), f), f);
    }
  }
}

TEST(Restrict, Examples) {
  auto f = zfun({{2, 1}, {3, 1}});
  EXPECT_EQ(restrict(evens(), f), zfun({{2, 1}}));
  EXPECT_TRUE(restrict(subset_none(), f).is_zero());
  EXPECT_EQ(restrict(subset_all(), f), f);
}

TEST(Restrict, IdempotentAndIntersects) {
  Rng rng(8);
  auto small = subset_word_length_at_most(Zgrp(), 2);
  for (int i = 0; i < 30; ++i) {
    auto f = random_function(rng, Zgrp(), Ring::integers(), 1, 6);
    EXPECT_EQ(restrict(evens(), restrict(evens(), f)), restrict(evens(), f));
    EXPECT_EQ(restrict(evens(), restrict(small, f)), restrict(subset_intersect(evens(), small), f));
  }
}

TEST(Pushforward, Examples) {
  EXPECT_EQ(pushforward(gallery_map("z-double"), zfun({{3, 1}, {5, 1}})), zfun({{6, 1}, {10, 1}}));
  EXPECT_EQ(pushforward(gallery_map("z-abs"), zfun({{-3, 1}, {3, 1}})), zfun({{3, 2}}));
  EXPECT_TRUE(pushforward(gallery_map("z-abs"), zfun({})).is_zero());
}

TEST(Pushforward, LinearAndFunctorial) {
  Rng rng(9);
  auto phi = gallery_map("z-triple");
  auto psi = gallery_map("z-abs");
  for (const auto &ring : {Ring::integers(), Ring::parse("Z/5"), Ring::parse("Q")})
    for (int i = 0; i < 30; ++i) {
      auto f = random_function(rng, Zgrp(), ring, 1, 5);
      auto g = random_function(rng, Zgrp(), ring, 1, 5);
      auto sum = f;
      sum += g.times(ring.make(Scalar(3)));
      auto rhs = pushforward(phi, f);
      rhs += pushforward(phi, g).times(ring.make(Scalar(3)));
      EXPECT_EQ(pushforward(phi, sum), rhs);
      EXPECT_EQ(pushforward(compose(psi, phi), f), pushforward(psi, pushforward(phi, f)));
    }
}

TEST(Pullback, Examples) {
  EXPECT_EQ(pullback(gallery_map("z-abs"), zfun({{3, 1}})), zfun({{3, 1}, {-3, 1}}));
  EXPECT_TRUE(pullback(gallery_map("z-double"), zfun({{3, 1}})).is_zero());
  auto f = zfun({{4, 2}, {-7, 1}});
  EXPECT_EQ(pullback(gallery_map("z-id"), f), f);
}

TEST(PullPush, Examples) {
  auto r1 = pull_push_identity(gallery_map("z-double"), zfun({{3, 1}}), 6);
  EXPECT_TRUE(r1.holds);
  EXPECT_EQ(r1.lhs, zfun({{3, 1}}));
  EXPECT_EQ(r1.cover, (std::set<GroupElement>{z(0)}));
  auto r2 = pull_push_identity(gallery_map("z-abs"), zfun({{2, 1}}), 6);
  EXPECT_TRUE(r2.holds);
  EXPECT_EQ(r2.lhs, zfun({{2, 1}, {-2, 1}}));
  EXPECT_EQ(r2.rhs, zfun({{2, 1}, {-2, 1}}));
  auto r3 = pull_push_identity(gallery_map("z-abs"), zfun({}), 6);
  EXPECT_TRUE(r3.holds);
  EXPECT_TRUE(r3.lhs.is_zero());
}

TEST(TranslatePush, Examples) {
  auto r1 = translate_push_identity(gallery_map("z-double"), z(2), zfun({{3, 1}}), 6);
  EXPECT_TRUE(r1.holds);
  EXPECT_EQ(r1.lhs, zfun({{8, 1}}));
  EXPECT_EQ(r1.rhs, zfun({{8, 1}}));
  auto phi = gallery_map("z-triple");
  auto f = zfun({{1, 1}, {-2, 4}});
  auto at_e = translate_push_identity(phi, z(0), f, 6);
  EXPECT_TRUE(at_e.holds);
  EXPECT_EQ(at_e.lhs, pushforward(phi, f));
  EXPECT_TRUE(translate_push_identity(phi, z(5), zfun({}), 6).lhs.is_zero());
}

TEST(OmegaPushforward, Examples) {
  auto om = omega(gallery_map("z-double"), 20);
  EXPECT_EQ(omega_pushforward(om, zfun({{4, 1}, {5, 1}})), zfun({{2, 2}}));
  EXPECT_EQ(omega_pushforward(om, zfun({{0, 1}})), zfun({{0, 1}}));
  EXPECT_TRUE(omega_pushforward(om, zfun({})).is_zero());
  EXPECT_THROW(omega_pushforward(om, zfun({{21, 1}})), PreconditionFailed);
}

TEST(ModuleImage, Examples) {
  auto gr = ModuleTag::parse("GroupRing");
  EXPECT_EQ(module_image_tag(gallery_map("z-double"), gr).tag, gr);
  auto img = module_image_tag(gallery_map("z2-const-z3"), gr);
  EXPECT_TRUE(img.span_is_full);
  for (const auto &t : {"Cf", "C0", "Lp:2"})
    EXPECT_EQ(module_image_tag(gallery_map("z-id"), ModuleTag::parse(t)).tag, ModuleTag::parse(t));
  EXPECT_THROW(module_image_tag(gallery_map("z-abs"), gr), PreconditionFailed);
}

TEST(PhiInvMembership, Examples) {
  auto Z2 = named_group("Z/2");
  FinSupFun f(named_group("Z/3"), Ring::integers(), 1);
  f.add(named_group("Z/3").identity(), {Scalar(1)});
  EXPECT_EQ(phi_inv_membership(gallery_map("z2-const-z3"), f, 3).verdict, "certified");
  EXPECT_EQ(phi_inv_membership(gallery_map("z-double"), zfun({{6, 1}}), 5).verdict, "certified-up-to-5");
  EXPECT_EQ(phi_inv_membership(gallery_map("z-double"), zfun({}), 5).verdict, "certified");
}

TEST(ModuleIdentities, EveryEmbeddingEveryDeltaInBallSix) {
  for (const auto &name : gallery_embeddings()) {
    auto phi = gallery_map(name);
    const auto &G = phi.source();
    const auto &H = phi.target();
    for (const auto &x : G.ball(6)) {
      auto d = FinSupFun::delta(G, Ring::integers(), 1, x);
      EXPECT_TRUE(pull_push_identity(phi, d, 6).holds) << name << " " << G.format(x);
      for (const auto &h : H.ball(2))
        EXPECT_TRUE(translate_push_identity(phi, h, d, 6).holds) << name << " " << G.format(x) << " " << H.format(h);
    }
  }
}

TEST(ModuleIdentities, PreimageModuleSpanOnFiniteGroups) {
  for (const auto &name : {"triv-into-z2", "z2-const-z3", "z2-into-z4", "z4-mod-z2"})
    for (const auto &ring : {Ring::integers(), Ring::parse("Q"), Ring::parse("Z/5")})
      EXPECT_TRUE(pullback_of_preimage_module_is_full(gallery_map(name), ring, 1)) << name << " " << ring.name();
}

TEST(Coinvariants, Examples) {
  EXPECT_EQ(h0_coinvariants(zfun({{3, 1}, {5, -1}})), (Vec{Scalar(0)}));
  EXPECT_EQ(h0_coinvariants(zfun({{0, 2}})), (Vec{Scalar(2)}));
  auto f = zfun({{1, 3}, {-4, 7}});
  EXPECT_EQ(h0_coinvariants(translate(z(9), f)), h0_coinvariants(f));
}

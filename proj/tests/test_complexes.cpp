#include "support.hpp"

using namespace coarse;
using namespace coarse::testing;

namespace {
auto unit1(std::int64_t x, std::int64_t g) -> Chain { return Chain::unit(Zgrp(), Ring::integers(), 1, z(x), {z(g)}); }

auto deg0(const FinSupFun &f) -> Chain { return Chain::from_function(f); }

auto diff(const Chain &a, const Chain &b) -> Chain {
  auto out = a;
  out -= b;
  return out;
}

const std::vector<std::string> kGroups = {"Z", "Z^2", "F2", "Dinf", "Z/6"};
} // namespace

TEST(Chi, ReindexingExamples) {
  BarChain b{Zgrp(), Ring::integers(), 1, 1, {}};
  b.add({z(1)}, zfun({{0, 1}}));
  auto c = chi(b);
  EXPECT_EQ(c.slice({z(1)}), zfun({{0, 1}}));
  EXPECT_EQ(c.slices().size(), 1U);
  BarChain zero{Zgrp(), Ring::integers(), 1, 2, {}};
  EXPECT_TRUE(chi(zero).is_zero());
}

TEST(Chi, RoundTripAndNaturality) {
  Rng rng(11);
  for (const auto &name : kGroups) {
    auto G = named_group(name);
    for (int n = 1; n <= 3; ++n)
      for (int i = 0; i < 20; ++i) {
        auto c = random_chain(rng, G, Ring::integers(), 2, n, 5);
        auto b = chi_inv(c);
        EXPECT_EQ(chi(b), c);
        EXPECT_EQ(chi(bar_boundary(b)), boundary(c)) << name << " degree " << n;
      }
  }
}

TEST(Boundary, Examples) {
  EXPECT_EQ(boundary(unit1(0, 1)), deg0(zfun({{-1, 1}, {0, -1}})));
  Chain zero(Zgrp(), Ring::integers(), 1, 2);
  EXPECT_TRUE(boundary(zero).is_zero());
  EXPECT_EQ(boundary(zero).degree(), 1);
}

TEST(Boundary, SquaresToZero) {
  Rng rng(12);
  for (const auto &name : kGroups)
    for (const auto &ring : {Ring::integers(), Ring::parse("Q"), Ring::parse("Z/5")})
      for (int n = 2; n <= 3; ++n)
        for (int i = 0; i < 200; ++i) {
          auto c = random_chain(rng, named_group(name), ring, 1, n, 4);
          EXPECT_TRUE(boundary(boundary(c)).is_zero()) << name << " " << ring.name() << " degree " << n;
        }
}

TEST(Coboundary, OriginIndicator) {
  auto f = cochain_from_gallery("origin-indicator", Zgrp(), Ring::integers(), 1, 0);
  auto df = coboundary(f);
  EXPECT_EQ(df(z(0), {z(1)}), (Vec{Scalar(-1)}));
  EXPECT_EQ(df(z(1), {z(1)}), (Vec{Scalar(1)}));
  EXPECT_EQ(df(z(5), {z(-2)}), (Vec{Scalar(0)}));
  auto ddf = coboundary(df);
  Rng rng(13);
  for (const auto &[x, g] : random_points(rng, Zgrp(), 2, 50)) EXPECT_EQ(ddf(x, g), (Vec{Scalar(0)}));
  auto zero = coboundary(cochain_from_gallery("zero", Zgrp(), Ring::integers(), 1, 1));
  for (const auto &[x, g] : random_points(rng, Zgrp(), 2, 20)) EXPECT_EQ(zero(x, g), (Vec{Scalar(0)}));
}

TEST(Coboundary, SquaresToZeroPointwise) {
  Rng rng(14);
  for (const auto &name : kGroups) {
    auto G = named_group(name);
    for (int n = 0; n <= 2; ++n)
      for (const auto &rule : {"hashed", "word-length", "origin-indicator"}) {
        auto dd = coboundary(coboundary(cochain_from_gallery(rule, G, Ring::integers(), 2, n, 5)));
        for (const auto &[x, g] : random_points(rng, G, n + 2, 500))
          ASSERT_EQ(dd(x, g), zero_vec(2)) << name << " " << rule << " degree " << n;
      }
  }
}

TEST(InducedChainMap, Examples) {
  auto phi = gallery_map("z-double");
  EXPECT_EQ(induced_chain_map(phi, unit1(0, 1)), unit1(0, 2));
  auto f = zfun({{3, 1}, {-1, 2}});
  EXPECT_EQ(induced_chain_map(phi, deg0(f)), deg0(pushforward(phi, f)));
  Rng rng(15);
  auto c = random_chain(rng, Zgrp(), Ring::integers(), 1, 2, 6);
  EXPECT_EQ(induced_chain_map(gallery_map("z-id"), c), c);
}

TEST(InducedChainMap, ChainMapFunctorialAndSliceFormula) {
  Rng rng(16);
  for (const auto &name : gallery_embeddings()) {
    auto phi = gallery_map(name);
    for (int n = 1; n <= 2; ++n)
      for (int i = 0; i < 20; ++i) {
        auto c = random_chain(rng, phi.source(), Ring::integers(), 1, n, 4);
        auto pushed = induced_chain_map(phi, c);
        EXPECT_EQ(boundary(pushed), induced_chain_map(phi, boundary(c))) << name;
        EXPECT_EQ(induced_chain_map_by_slices(phi, c), pushed) << name;
      }
  }
  auto a = gallery_map("z-double"), b = gallery_map("z-to-dihedral");
  for (int i = 0; i < 20; ++i) {
    auto c = random_chain(rng, Zgrp(), Ring::integers(), 1, 2, 4);
    EXPECT_EQ(induced_chain_map(compose(b, a), c), induced_chain_map(b, induced_chain_map(a, c)));
  }
}

TEST(InducedCochainMap, Examples) {
  auto phi = gallery_map("z-double");
  auto H = Zgrp();
  auto target = cochain_from_rule(H, Ring::integers(), 1, 1,
                                  [H](const GroupElement &y, const Tuple &h) {
                                    return Vec{Scalar(H.is_identity(y) && h[0] == z(2) ? 1 : 0)};
                                  },
                                  "y = 0, h = 2");
  auto pulled = induced_cochain_map(phi, target);
  for (std::int64_t x = -4; x <= 4; ++x)
    for (std::int64_t g = -3; g <= 3; ++g)
      EXPECT_EQ(pulled(z(x), {z(g)}), (Vec{Scalar(x == 0 && g == 1 ? 1 : 0)})) << x << " " << g;
  auto hashed = cochain_from_gallery("hashed", H, Ring::integers(), 1, 2, 3);
  auto same = induced_cochain_map(gallery_map("z-id"), hashed);
  Rng rng(17);
  for (const auto &[x, g] : random_points(rng, H, 2, 50)) EXPECT_EQ(same(x, g), hashed(x, g));
}

TEST(InducedCochainMap, Contravariant) {
  Rng rng(18);
  auto a = gallery_map("z-double"), b = gallery_map("z-to-dihedral");
  auto c = cochain_from_gallery("hashed", named_group("Dinf"), Ring::integers(), 1, 2, 9);
  auto lhs = induced_cochain_map(compose(b, a), c);
  auto rhs = induced_cochain_map(a, induced_cochain_map(b, c));
  for (const auto &[x, g] : random_points(rng, Zgrp(), 2, 200)) EXPECT_EQ(lhs(x, g), rhs(x, g));
}

TEST(OmegaChainMap, Examples) {
  auto om = omega(gallery_map("z-double"), 20);
  EXPECT_EQ(omega_chain_map(om, unit1(0, 2)), unit1(0, 1));
  auto f = zfun({{4, 1}, {5, 1}});
  EXPECT_EQ(omega_chain_map(om, deg0(f)), deg0(omega_pushforward(om, f)));
  Chain zero(Zgrp(), Ring::integers(), 1, 1);
  EXPECT_TRUE(omega_chain_map(om, zero).is_zero());
  EXPECT_THROW(omega_chain_map(om, unit1(19, -5)), PreconditionFailed);
}

TEST(HomotopyK, ExampleAndSign) {
  auto phi = gallery_map("z-double"), psi = gallery_map("z-double-plus-one");
  auto c = deg0(zfun({{0, 1}}));
  auto k = homotopy_k(phi, psi, c);
  EXPECT_EQ(k.degree(), 1);
  // d k + k d = D(psi) - D(phi); on a degree-0 chain k d vanishes
  EXPECT_EQ(boundary(k), deg0(zfun({{1, 1}, {0, -1}})));
  EXPECT_TRUE(homotopy_k(phi, phi, c).is_zero() || boundary(homotopy_k(phi, phi, c)).is_zero());
  EXPECT_TRUE(homotopy_k(phi, psi, Chain(Zgrp(), Ring::integers(), 1, 1)).is_zero());
}

TEST(HomotopyK, IdentityOnClosePairs) {
  Rng rng(19);
  for (const auto &[a, b] : close_gallery_pairs()) {
    auto phi = gallery_map(a), psi = gallery_map(b);
    for (int n = 0; n <= 2; ++n)
      for (int i = 0; i < 20; ++i) {
        auto c = random_chain(rng, Zgrp(), Ring::integers(), 1, n, 4);
        auto lhs = boundary(homotopy_k(phi, psi, c));
        if (n > 0) lhs += homotopy_k(phi, psi, boundary(c));
        EXPECT_EQ(lhs, diff(induced_chain_map(psi, c), induced_chain_map(phi, c))) << a << " ~ " << b;
      }
  }
}

TEST(HomotopyL, ExampleAndIdentity) {
  auto phi = gallery_map("z-double");
  auto om = omega(phi, 20);
  auto c = deg0(zfun({{1, 1}}));
  EXPECT_EQ(boundary(homotopy_l(phi, om, c)), deg0(zfun({{0, 1}, {1, -1}})));
  auto even = deg0(zfun({{4, 1}}));
  EXPECT_TRUE(boundary(homotopy_l(phi, om, even)).is_zero());
  Rng rng(20);
  auto back = compose(phi, om.omega);
  for (int n = 0; n <= 2; ++n)
    for (int i = 0; i < 20; ++i) {
      auto y = random_chain(rng, Zgrp(), Ring::integers(), 1, n, 4);
      auto lhs = boundary(homotopy_l(phi, om, y));
      if (n > 0) lhs += homotopy_l(phi, om, boundary(y));
      EXPECT_EQ(lhs, diff(induced_chain_map(back, y), y));
    }
}

TEST(HomotopyCochain, PointwiseIdentities) {
  Rng rng(21);
  auto phi = gallery_map("z-double"), psi = gallery_map("z-double-plus-one");
  for (int n = 0; n <= 2; ++n) {
    auto c_low = cochain_from_gallery("hashed", Zgrp(), Ring::integers(), 1, n, 4);
    // k d + d k = psi^* - phi^* on degree-n cochains
    auto lhs_k = homotopy_k_cochain(phi, psi, coboundary(c_low));
    auto d_k = n > 0 ? std::optional(coboundary(homotopy_k_cochain(phi, psi, c_low))) : std::nullopt;
    for (const auto &[x, g] : random_points(rng, Zgrp(), n, 100)) {
      auto v = lhs_k(x, g);
      if (d_k) add_into(Ring::integers(), v, (*d_k)(x, g));
      auto expected = induced_cochain_map(psi, c_low)(x, g);
      add_into(Ring::integers(), expected, induced_cochain_map(phi, c_low)(x, g), Scalar(-1));
      EXPECT_EQ(v, expected) << "degree " << n;
    }
  }
}

#include "support.hpp"

#include <set>

using namespace coarse;
using namespace coarse::testing;

namespace {
auto zset(std::initializer_list<std::int64_t> vs) -> std::set<GroupElement> {
  std::set<GroupElement> s;
  for (auto v : vs) s.insert(z(v));
  return s;
}
auto as_set(const std::vector<GroupElement> &v) -> std::set<GroupElement> { return {v.begin(), v.end()}; }
} // namespace

TEST(Displacement, Examples) {
  EXPECT_EQ(as_set(displacement_set(gallery_map("z-double"), z(1), 10)), zset({2}));
  EXPECT_EQ(as_set(displacement_set(gallery_map("z-abs"), z(1), 10)), zset({1, -1}));
  for (const auto &name : {"z-double", "z-abs", "z-into-z2", "f2-abelianize"}) {
    auto phi = gallery_map(name);
    auto d = displacement_set(phi, phi.source().identity(), 6);
    ASSERT_EQ(d.size(), 1u);
    EXPECT_TRUE(phi.target().is_identity(d[0]));
  }
}

TEST(CheckCoarseMap, AbelianizationIsNotProper) {
  auto phi = gallery_map("f2-abelianize");
  auto rep = check_coarse_map(phi, 6);
  EXPECT_EQ(rep.proper, Verdict::Falsified);
  EXPECT_EQ(rep.verdict, Verdict::Falsified);
  ASSERT_TRUE(rep.fiber_witness.has_value());
  // direct count of exponent-sum-zero words in ball(6)
  std::size_t zero = 0;
  for (const auto &x : phi.source().ball(6))
    if (phi(x) == z(0)) ++zero;
  EXPECT_GE(zero, 13u);
  EXPECT_GE(rep.max_fiber, 13u);
}

TEST(CheckCoarseMap, DoublingCertified) {
  auto phi = gallery_map("z-double");
  auto rep = check_coarse_map(phi, 20);
  EXPECT_EQ(rep.verdict, Verdict::Certified);
  for (const auto &row : rep.displacement)
    if (row.generator == z(1)) {
      EXPECT_TRUE(row.stable());
      EXPECT_EQ(as_set(row.at_full), zset({2}));
    }
}

TEST(CheckCoarseMap, IdentityCertified) {
  for (const auto &name : {"Z", "F2", "Z^2"}) {
    auto G = named_group(name);
    auto rep = check_coarse_map(identity_map(G), 8);
    EXPECT_EQ(rep.verdict, Verdict::Certified) << name;
    for (const auto &g : G.ball(2)) {
      auto d = displacement_set(identity_map(G), g, 4);
      ASSERT_EQ(d.size(), 1u);
      EXPECT_EQ(d[0], g);
    }
  }
}

TEST(CheckCoarseEmbedding, Examples) {
  auto abs = gallery_map("z-abs");
  auto rep = check_coarse_embedding(abs, 10);
  EXPECT_EQ(rep.verdict, Verdict::Falsified);
  ASSERT_TRUE(rep.witness.has_value());
  EXPECT_EQ(rep.witness->first, z(10));
  EXPECT_EQ(rep.witness->second, z(-10));
  EXPECT_EQ(abs(rep.witness->first), abs(rep.witness->second));
  EXPECT_EQ(check_coarse_embedding(gallery_map("z-into-z2"), 10).verdict, Verdict::Certified);
  EXPECT_EQ(check_coarse_embedding(gallery_map("z-double"), 10).verdict, Verdict::Certified);
}

TEST(CheckCoarseEmbedding, WitnessWithinRadiusTen) {
  for (std::int64_t r = 4; r <= 10; r += 2) {
    auto rep = check_coarse_embedding(gallery_map("z-abs"), r);
    EXPECT_EQ(rep.verdict, Verdict::Falsified) << r;
  }
}

TEST(CheckCoarseEmbedding, GalleryEmbeddingsCertifiedAndStable) {
  for (const auto &name : gallery_embeddings()) {
    auto phi = gallery_map(name);
    EXPECT_NE(check_coarse_embedding(phi, 12).verdict, Verdict::Falsified) << name;
    for (const auto &g : phi.source().ball(3))
      EXPECT_EQ(displacement_set(phi, g, 6), displacement_set(phi, g, 12)) << name;
  }
}

TEST(Closeness, Examples) {
  auto c1 = closeness(gallery_map("z-double"), gallery_map("z-double-plus-one"), 10);
  EXPECT_TRUE(c1.close);
  ASSERT_EQ(c1.pieces.size(), 1u);
  EXPECT_EQ(c1.pieces[0].offset, z(1));
  auto c2 = closeness(gallery_map("z-id"), gallery_map("z-parity-shift"), 10);
  EXPECT_TRUE(c2.close);
  EXPECT_EQ(as_set(c2.offsets()), zset({0, 1}));
  auto c3 = closeness(gallery_map("z-id"), gallery_map("z-double"), 10);
  EXPECT_FALSE(c3.close);
  EXPECT_EQ(c3.size_half, 11u);
  EXPECT_EQ(c3.size_full, 21u);
}

TEST(Compose, Examples) {
  auto six = compose(gallery_map("z-double"), gallery_map("z-triple"));
  auto om = omega(gallery_map("z-double"), 30);
  auto back = compose(om.omega, gallery_map("z-double"));
  auto phi = gallery_map("z-abs");
  auto with_id = compose(phi, identity_map(Zgrp()));
  for (const auto &x : Zgrp().ball(15)) {
    EXPECT_EQ(six(x), z(6 * x.nf[0]));
    EXPECT_EQ(back(x), x);
    EXPECT_EQ(with_id(x), phi(x));
  }
  EXPECT_THROW(compose(gallery_map("f2-abelianize"), gallery_map("z-double")), GroupMismatch);
}

TEST(Section, Examples) {
  auto s1 = section(gallery_map("z-double"), 6);
  EXPECT_EQ(as_set(s1.translate_cover), zset({0}));
  EXPECT_EQ(s1.domain.size(), Zgrp().ball(6).size());
  auto s2 = section(gallery_map("z-abs"), 4);
  EXPECT_EQ(as_set(s2.translate_cover), zset({0, -2, -4, -6, -8}));
  for (const auto &x : s2.domain) EXPECT_GE(x.nf[0], 0);
  auto s3 = section(gallery_map("z-id"), 5);
  EXPECT_EQ(as_set(s3.translate_cover), zset({0}));
  EXPECT_EQ(s3.domain, Zgrp().ball(5));
}

TEST(DecomposeDomain, Examples) {
  EXPECT_EQ(decompose_domain(gallery_map("z-double"), 8).pieces.size(), 1u);
  EXPECT_EQ(decompose_domain(gallery_map("z-into-z2"), 8).pieces.size(), 1u);
  // the enumeration-least section of 2 floor(x/2) is X = {0, -1, 2, -3, ...}, which
  // splits the odd shift g = -1 by h in {0, 2}
  auto phi = gallery_map("z-floor-even");
  auto sd = section(phi, 8);
  EXPECT_EQ(sd.domain, (std::vector<GroupElement>{z(0), z(-1), z(2), z(-3), z(4), z(-5), z(6), z(-7), z(8)}));
  auto d = decompose_domain(phi, 8);
  std::set<std::pair<GroupElement, GroupElement>> gh;
  for (const auto &p : d.pieces) gh.insert({p.g, p.h});
  EXPECT_EQ(gh, (std::set<std::pair<GroupElement, GroupElement>>{{z(0), z(0)}, {z(-1), z(0)}, {z(-1), z(2)}}));
  EXPECT_EQ(d.pieces.front().members, sd.domain);
}

TEST(DecomposeDomain, PartitionsTheBall) {
  for (const auto &name : {"z-double", "z-floor-even", "z-parity-shift", "z-into-z2", "z-to-dihedral", "dihedral-to-z"}) {
    auto phi = gallery_map(name);
    const auto &G = phi.source();
    const auto &H = phi.target();
    auto d = decompose_domain(phi, 6);
    std::multiset<GroupElement> seen;
    for (const auto &p : d.pieces)
      for (const auto &x : p.members) {
        seen.insert(x);
        EXPECT_EQ(phi(x), H.mul(p.h, phi(G.mul(p.g, x)))) << name;
      }
    auto b = G.ball(6);
    EXPECT_EQ(seen, std::multiset<GroupElement>(b.begin(), b.end())) << name;
  }
}

TEST(Omega, DoublingClosedForm) {
  auto om = omega(gallery_map("z-double"), 50);
  for (const auto &y : Zgrp().ball(50)) {
    auto v = y.nf[0];
    EXPECT_EQ(om.omega(y), z(v % 2 == 0 ? v / 2 : (v - 1) / 2));
  }
  ASSERT_EQ(om.difference_set.size(), 1u);
  EXPECT_EQ(om.difference_set[0], z(0));
  ASSERT_GE(om.partition.blocks.size(), 2u);
  EXPECT_EQ(om.partition.blocks[0].shift, z(0));
  EXPECT_EQ(om.partition.blocks[1].shift, z(1));
  for (const auto &y : om.partition.blocks[0].members) EXPECT_EQ(y.nf[0] % 2, 0);
  for (const auto &y : om.partition.blocks[1].members) EXPECT_NE(y.nf[0] % 2, 0);
}

TEST(Omega, IdentityIsIdentity) {
  auto om = omega(gallery_map("z-id"), 20);
  ASSERT_EQ(om.partition.blocks.size(), 1u);
  EXPECT_EQ(om.partition.blocks[0].shift, z(0));
  for (const auto &y : Zgrp().ball(20)) EXPECT_EQ(om.omega(y), y);
}

TEST(Omega, BlocksAreDisjointAndInsideTheImage) {
  for (const auto &name : {"z-double", "z-triple", "z-into-z2", "z-floor-even"}) {
    auto phi = gallery_map(name);
    auto om = omega(phi, 8);
    const auto &H = phi.target();
    std::set<GroupElement> seen;
    for (const auto &b : om.partition.blocks)
      for (const auto &y : b.members) {
        EXPECT_TRUE(seen.insert(y).second) << name;
        auto base = H.mul(H.inv(b.shift), y);
        EXPECT_TRUE(b.subset(base)) << name;
        EXPECT_FALSE(phi.preimage(base).empty()) << name;
      }
  }
}

TEST(MapFromTable, OutOfTableIsAnError) {
  auto Z = Zgrp();
  auto phi = map_from_table(Z, Z, nlohmann::json::array({{0, 0}, {1, 2}, {-1, -2}}), "t");
  EXPECT_EQ(phi(z(1)), z(2));
  EXPECT_THROW(phi(z(5)), Error);
  EXPECT_THROW(map_from_table(Z, Z, nlohmann::json::object(), "bad"), ConfigError);
}

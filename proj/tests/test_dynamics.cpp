#include "support.hpp"

using namespace coarse;

namespace {
auto table(const std::string &g) -> GroupTable { return group_table(named_group(g)); }

auto identity_kakutani(const FiniteSystem &s) -> KakutaniData {
  KakutaniData kd;
  for (std::size_t x = 0; x < s.size(); ++x) {
    kd.A.push_back(x);
    kd.B.push_back(x);
    for (std::size_t g = 0; g < s.group->order(); ++g) kd.chi[{x, g}] = {x, g};
  }
  return kd;
}

const std::vector<std::string> kScenarios = {"product-coupling", "diagonal-coupling", "z4-z2-kakutani",
                                             "dihedral-flip", "trivial-coupling"};
} // namespace

TEST(Systems, ActionAxiomsAndFreeness) {
  auto t = translation_system(table("D3"));
  EXPECT_TRUE(t.check().ok);
  EXPECT_TRUE(t.is_free());
  auto p = trivial_system(table("Z/2"), 2);
  EXPECT_TRUE(p.check().ok);
  EXPECT_FALSE(p.is_free());
  auto bad = t;
  std::swap(bad.action[1][0], bad.action[1][1]);
  EXPECT_FALSE(bad.check().ok);
}

TEST(Coupling, ProductCouple) {
  auto c = coupling_scenario("product-coupling");
  ASSERT_TRUE(c.check().ok);
  auto oc = coupling_to_couple(c);
  EXPECT_TRUE(oc.check().ok);
  const auto &G = *oc.sys_g.group;
  const auto &H = *oc.sys_h.group;
  for (std::size_t x = 0; x < oc.sys_g.size(); ++x) EXPECT_EQ(oc.p[x], oc.p[0]);
  for (std::size_t g = 0; g < G.order(); ++g)
    for (std::size_t x = 0; x < oc.sys_g.size(); ++x) {
      EXPECT_EQ(oc.a[g][x], H.identity());
      EXPECT_EQ(oc.sys_g.act(g, x), G.mul(g, x)); // X = G x {e} in the order of G
    }
}

TEST(Coupling, DiagonalAndTrivial) {
  auto oc = coupling_to_couple(coupling_scenario("diagonal-coupling"));
  EXPECT_TRUE(oc.check().ok);
  auto t = coupling_to_couple(coupling_scenario("trivial-coupling"));
  EXPECT_EQ(t.sys_g.size(), 1U);
  EXPECT_EQ(t.sys_h.size(), 1U);
  EXPECT_EQ(t.p, std::vector<std::size_t>{0});
  EXPECT_EQ(t.g_map, std::vector<std::size_t>{0});
}

TEST(Coupling, RejectsInvalidInput) {
  auto c = coupling_scenario("product-coupling");
  c.dom_x.push_back(c.dom_y.back()); // meets an H-orbit twice
  EXPECT_THROW(coupling_to_couple(c), InvariantViolation);
  auto d = coupling_scenario("product-coupling");
  std::swap(d.right[1][0], d.right[1][1]);
  EXPECT_FALSE(d.check().ok);
}

TEST(Roundtrip, EveryScenario) {
  for (const auto &name : kScenarios) {
    auto c = coupling_scenario(name);
    auto rep = roundtrip_iso_check(c);
    EXPECT_TRUE(rep.ok()) << name << " " << rep.to_json().dump();
    auto oc = coupling_to_couple(c);
    EXPECT_TRUE(couple_roundtrip_check(oc).ok) << name;
    auto built = couple_to_coupling(oc);
    EXPECT_TRUE(built.coupling.check().ok) << name;
    EXPECT_EQ(built.coupling.size(), oc.sys_g.size() * oc.sys_h.group->order()) << name;
  }
}

TEST(Roundtrip, MutationsAreDetected) {
  for (const auto &name : kScenarios) {
    auto c = coupling_scenario(name);
    auto s1 = mutation_sweep(c);
    EXPECT_GT(s1.tried, 0U) << name;
    EXPECT_TRUE(s1.all_detected()) << name << " " << s1.to_json().dump();
    auto s2 = mutation_sweep(coupling_to_couple(c));
    EXPECT_TRUE(s2.all_detected()) << name << " " << s2.to_json().dump();
  }
}

TEST(Roundtrip, CorruptedBTableFails) {
  auto oc = coupling_to_couple(coupling_scenario("z4-z2-kakutani"));
  oc.b[1][0] = (oc.b[1][0] + 1) % oc.sys_g.group->order();
  auto r = oc.check();
  EXPECT_FALSE(r.ok);
  EXPECT_FALSE(r.witness.is_null());
}

TEST(Kakutani, FromProductCouple) {
  auto kd = couple_to_kakutani(coupling_to_couple(coupling_scenario("product-coupling")));
  EXPECT_EQ(kd.A.size(), 1U);
  EXPECT_EQ(kd.B.size(), 1U);
  EXPECT_EQ(kd.chi.size(), 1U);
  auto z = couple_to_kakutani(coupling_to_couple(coupling_scenario("z4-z2-kakutani")));
  EXPECT_EQ(z.A.size(), 1U);
  EXPECT_EQ(z.B.size(), 1U);
}

TEST(Kakutani, EveryScenarioValidAndBack) {
  for (const auto &name : kScenarios) {
    auto oc = coupling_to_couple(coupling_scenario(name));
    auto kd = couple_to_kakutani(oc);
    EXPECT_TRUE(kd.check(oc.sys_g, oc.sys_h).ok) << name;
    auto back = kakutani_to_couple(oc.sys_g, oc.sys_h, kd);
    EXPECT_TRUE(back.couple.check().ok) << name;
  }
}

TEST(Kakutani, IdentityGivesOrbitEquivalence) {
  auto s = translation_system(table("Z/3"));
  auto kd = identity_kakutani(s);
  ASSERT_TRUE(kd.check(s, s).ok);
  auto oc = kakutani_to_couple(s, s, kd).couple;
  for (std::size_t x = 0; x < s.size(); ++x) {
    EXPECT_EQ(oc.g_map[x], 0U);
    EXPECT_EQ(oc.h_map[x], 0U);
    EXPECT_EQ(oc.q[oc.p[x]], x);
  }
  auto back = couple_to_kakutani(oc);
  EXPECT_EQ(back.A.size(), s.size());
}

TEST(Kakutani, TranslationSystemsWithSingletons) {
  auto sg = translation_system(table("Z/4"));
  auto sh = translation_system(table("Z/2"));
  KakutaniData kd;
  kd.A = {0};
  kd.B = {0};
  kd.chi[{0, 0}] = {0, 0};
  ASSERT_TRUE(kd.check(sg, sh).ok);
  auto oc = kakutani_to_couple(sg, sh, kd).couple;
  EXPECT_TRUE(oc.check().ok);
  auto trivial = translation_system(table("trivial"));
  auto t = kakutani_to_couple(trivial, trivial, identity_kakutani(trivial)).couple;
  EXPECT_EQ(t.p, std::vector<std::size_t>{0});
}

TEST(Kakutani, RejectsMissingOrbits) {
  auto sg = trivial_system(table("Z/2"), 2);
  auto sh = trivial_system(table("Z/2"), 2);
  KakutaniData kd;
  kd.A = {0};
  kd.B = {0};
  kd.chi[{0, 0}] = {0, 0};
  kd.chi[{0, 1}] = {0, 1};
  EXPECT_FALSE(kd.check(sg, sh).ok);
  EXPECT_THROW(kakutani_to_couple(sg, sh, kd), InvariantViolation);
}

TEST(GroupoidHomology, Examples) {
  auto pair = transformation_groupoid(translation_system(table("Z/4")));
  EXPECT_EQ(groupoid_homology_finite(pair, Ring::integers(), 1, 0).format(), "Z");
  EXPECT_EQ(groupoid_homology_finite(pair, Ring::integers(), 1, 1).format(), "0");
  EXPECT_EQ(groupoid_homology_finite(pair, Ring::integers(), 1, 2).format(), "0");
  auto units = transformation_groupoid(trivial_system(table("trivial"), 3));
  EXPECT_EQ(groupoid_homology_finite(units, Ring::integers(), 1, 0).format(), "Z^3");
  for (int n = 1; n <= 3; ++n) EXPECT_EQ(groupoid_homology_finite(units, Ring::integers(), 1, n).format(), "0");
}

TEST(GroupoidHomology, PointMatchesGroupHomology) {
  for (const auto &g : {"Z/2", "Z/3", "Z/4", "D3"})
    for (const auto &c : {"trivial-Z", "trivial-Q", "trivial-Z/2"}) {
      auto m = CoefficientModule::parse(c);
      auto gpd = transformation_groupoid(trivial_system(table(g), 1));
      for (int n = 0; n <= 3; ++n)
        EXPECT_EQ(groupoid_homology_finite(gpd, m.ring, 1, n), homology_finite(named_group(g), m, n)) << g << c << n;
    }
}

TEST(GroupoidCohomology, PointMatchesCyclicPattern) {
  // H^n(Z/2, Z) = Z, 0, Z/2, 0, ...
  auto gpd = transformation_groupoid(trivial_system(table("Z/2"), 1));
  EXPECT_EQ(groupoid_cohomology_finite(gpd, Ring::integers(), 1, 0).format(), "Z");
  EXPECT_EQ(groupoid_cohomology_finite(gpd, Ring::integers(), 1, 1).format(), "0");
  EXPECT_EQ(groupoid_cohomology_finite(gpd, Ring::integers(), 1, 2).format(), "Z/2");
}

TEST(Morita, Examples) {
  auto oc = coupling_to_couple(coupling_scenario("z4-z2-kakutani"));
  auto kd = couple_to_kakutani(oc);
  auto rep = morita_invariance_check(oc.sys_g, oc.sys_h, kd, Ring::integers(), 1, 2);
  EXPECT_TRUE(rep.ok);
  EXPECT_EQ(rep.whole_x[0].format(), "Z");
  EXPECT_EQ(rep.whole_x[1].format(), "0");
  auto s = translation_system(table("D3"));
  EXPECT_TRUE(morita_invariance_check(s, s, identity_kakutani(s), Ring::integers(), 1, 2).ok);
  KakutaniData bad;
  EXPECT_THROW(morita_invariance_check(s, translation_system(table("Z/2")), bad, Ring::integers(), 1, 1),
               InvariantViolation);
}

TEST(Morita, EveryScenario) {
  for (const auto &name : kScenarios) {
    auto oc = coupling_to_couple(coupling_scenario(name));
    auto kd = couple_to_kakutani(oc);
    for (const auto &ring : {Ring::integers(), Ring::parse("Q")})
      EXPECT_TRUE(morita_invariance_check(oc.sys_g, oc.sys_h, kd, ring, 1, 2).ok) << name;
  }
}

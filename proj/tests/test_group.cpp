#include "support.hpp"

#include <set>

using namespace coarse;
using namespace coarse::testing;

TEST(WordLength, Examples) {
  EXPECT_EQ(Zgrp().word_length(z(3)), 3);
  auto F2 = named_group("F2");
  EXPECT_EQ(F2.word_length(el(F2, {1, 2, -1})), 3);
  auto Z2 = named_group("Z^2");
  EXPECT_EQ(Z2.word_length(el(Z2, {2, -1})), 3);
}

TEST(Ball, Examples) {
  auto b = Zgrp().ball(2);
  std::set<GroupElement> got(b.begin(), b.end());
  EXPECT_EQ(got, (std::set<GroupElement>{z(-2), z(-1), z(0), z(1), z(2)}));
  EXPECT_EQ(named_group("F2").ball(2).size(), 17u);
  for (const auto &name : {"Z", "Z^2", "F2", "Dinf", "Z/3", "D3"}) {
    auto G = named_group(name);
    auto b0 = G.ball(0);
    ASSERT_EQ(b0.size(), 1u) << name;
    EXPECT_TRUE(G.is_identity(b0[0]));
  }
}

TEST(Ball, SizesMatchCounting) {
  for (std::int64_t r = 0; r <= 6; ++r) {
    EXPECT_EQ(Zgrp().ball(r).size(), static_cast<std::size_t>(2 * r + 1));
    EXPECT_EQ(named_group("Z^2").ball(r).size(), static_cast<std::size_t>(2 * r * r + 2 * r + 1));
  }
  std::size_t expected = 1, sphere = 4;
  for (std::int64_t r = 1; r <= 5; ++r, sphere *= 3) {
    expected += sphere;
    EXPECT_EQ(named_group("F2").ball(r).size(), expected);
  }
}

TEST(Enumerate, Order) {
  auto e = Zgrp().ball(2);
  ASSERT_EQ(e.size(), 5u);
  EXPECT_EQ(e, (std::vector<GroupElement>{z(0), z(1), z(-1), z(2), z(-2)}));
  auto C3 = named_group("Z/3");
  auto els = C3.elements();
  ASSERT_EQ(els.size(), 3u);
  EXPECT_TRUE(C3.is_identity(els[0]));
  EXPECT_EQ(C3.mul(els[1], els[1]), els[2]);
  auto F1 = free_group(1);
  auto f1 = F1.ball(2);
  ASSERT_EQ(f1.size(), 5u);
  for (std::size_t i = 0; i < f1.size(); ++i) EXPECT_EQ(F1.word_length(f1[i]), Zgrp().word_length(e[i]));
}

TEST(Ball, TriangleInequalityAndGrowth) {
  for (const auto &name : {"Z", "Z^2", "F2", "Dinf", "Z/6", "D3", "ZxZ/2"}) {
    auto G = named_group(name);
    auto b = G.ball(3);
    for (const auto &g : b)
      for (const auto &h : b) EXPECT_LE(G.word_length(G.mul(g, h)), G.word_length(g) + G.word_length(h)) << name;
    std::set<GroupElement> grown(b.begin(), b.end());
    for (const auto &s : G.generators())
      for (const auto &g : b) grown.insert(G.mul(s, g));
    auto b4 = G.ball(4);
    EXPECT_EQ(grown, std::set<GroupElement>(b4.begin(), b4.end())) << name;
    EXPECT_EQ(std::vector<GroupElement>(b4.begin(), b4.begin() + static_cast<std::ptrdiff_t>(b.size())), b) << name;
  }
}

TEST(Group, AxiomsOnBalls) {
  for (const auto &name : {"Z", "Z^3", "F2", "Dinf", "Z/4", "D3", "ZxZ/2"}) {
    auto G = named_group(name);
    auto b = G.ball(2);
    for (const auto &a : b) {
      EXPECT_TRUE(G.is_identity(G.mul(a, G.inv(a)))) << name;
      EXPECT_EQ(G.element_from_json(G.element_to_json(a)), a) << name;
      for (const auto &c : b)
        for (const auto &d : b) EXPECT_EQ(G.mul(G.mul(a, c), d), G.mul(a, G.mul(c, d))) << name;
    }
  }
}

TEST(Group, Errors) {
  EXPECT_THROW(named_group("Q8"), ConfigError);
  EXPECT_THROW(named_group("Z/3").validate(GroupElement{{7}}), InvalidElement);
  EXPECT_THROW(named_group("F2").validate(GroupElement{{1, -1}}), InvalidElement);
  auto saved = limits();
  auto l = saved;
  l.max_radius = 5;
  set_limits(l);
  EXPECT_THROW(named_group("Z").ball(6), ResourceLimit);
  set_limits(saved);
}

TEST(Group, CatalogAndOrders) {
  EXPECT_EQ(named_group("Z2").order(), std::optional<std::size_t>(2));
  EXPECT_EQ(named_group("D3").order(), std::optional<std::size_t>(6));
  EXPECT_EQ(named_group("trivial").order(), std::optional<std::size_t>(1));
  EXPECT_FALSE(named_group("Dinf").is_finite());
  EXPECT_FALSE(named_group("D3").is_abelian());
  auto G = group_from_config(named_group("ZxZ/2").descriptor());
  EXPECT_TRUE(G == named_group("ZxZ/2"));
}

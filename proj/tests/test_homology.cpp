#include "support.hpp"

using namespace coarse;
using namespace coarse::testing;

namespace {
auto coeffs(const std::string &s) -> CoefficientModule { return CoefficientModule::parse(s); }

auto dense(std::vector<std::vector<long>> rows) -> IntDense {
  IntDense d(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) d(i, j) = rows[i][j];
  return d;
}

auto identity(std::size_t n) -> IntDense {
  IntDense d(n, n);
  for (std::size_t i = 0; i < n; ++i) d(i, i) = 1;
  return d;
}

void expect_certificate(const IntDense &m) {
  auto s = smith_normal_form(m);
  EXPECT_EQ(s.u * m * s.v, s.diagonal);
  EXPECT_EQ(s.u * s.u_inv, identity(m.rows()));
  EXPECT_EQ(s.v * s.v_inv, identity(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      EXPECT_TRUE(i == j || s.diagonal(i, j) == 0) << i << "," << j;
  for (std::size_t i = 1; i < s.divisors.size(); ++i) EXPECT_EQ(s.divisors[i] % s.divisors[i - 1], 0);
}

auto divisors_of(const IntDense &m) -> std::vector<Int> { return smith_normal_form(m).divisors; }
} // namespace

TEST(BoundaryMatrix, Shapes) {
  auto Z2 = named_group("Z/2");
  auto d1 = assemble_boundary_matrix(Z2, coeffs("group-ring-Z"), 1);
  EXPECT_EQ(d1.rows(), 2U);
  EXPECT_EQ(d1.cols(), 4U);
  auto d1_rank2 = assemble_boundary_matrix(Z2, coeffs("group-ring-Z^2"), 1);
  EXPECT_EQ(d1_rank2.rows(), 4U);
  EXPECT_EQ(d1_rank2.cols(), 8U);
  EXPECT_EQ(assemble_boundary_matrix(Z2, coeffs("group-ring-Z"), 0).rows(), 0U);
}

TEST(BoundaryMatrix, TrivialGroupAlternates) {
  auto T = named_group("trivial");
  for (int n = 1; n <= 5; ++n) {
    auto d = assemble_boundary_matrix(T, coeffs("group-ring-Z"), n);
    ASSERT_EQ(d.rows(), 1U);
    ASSERT_EQ(d.cols(), 1U);
    EXPECT_EQ(d.at(0, 0), n % 2 == 0 ? 1 : 0) << n;
  }
}

TEST(BoundaryMatrix, CapExceeded) {
  auto saved = limits();
  set_limits({.max_matrix_dim = 100});
  EXPECT_THROW(assemble_boundary_matrix(named_group("Z/6"), coeffs("group-ring-Z"), 3), ResourceLimit);
  set_limits(saved);
}

TEST(Smith, Examples) {
  EXPECT_EQ(divisors_of(dense({{2, 0}, {0, 4}})), (std::vector<Int>{2, 4}));
  EXPECT_EQ(divisors_of(dense({{1, 2}, {2, 4}})), (std::vector<Int>{1}));
  EXPECT_TRUE(divisors_of(dense({{0, 0}, {0, 0}})).empty());
  EXPECT_EQ(divisors_of(dense({{2, 0}, {0, 3}})), (std::vector<Int>{1, 6}));
}

TEST(Smith, Certificates) {
  Rng rng(31);
  for (int t = 0; t < 40; ++t) {
    auto r = static_cast<std::size_t>(rng.between(1, 6)), c = static_cast<std::size_t>(rng.between(1, 6));
    IntDense m(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) m(i, j) = rng.between(-9, 9);
    expect_certificate(m);
  }
  expect_certificate(dense({{1, 2}, {2, 4}}));
  expect_certificate(assemble_boundary_matrix(named_group("Z/4"), coeffs("trivial-Z"), 2).to_dense());
}

TEST(HomologyFinite, CyclicTrivialCoefficients) {
  auto Z2 = named_group("Z/2");
  EXPECT_EQ(homology_finite(Z2, coeffs("trivial-Z"), 0).format(), "Z");
  EXPECT_EQ(homology_finite(Z2, coeffs("trivial-Z"), 1).format(), "Z/2");
  EXPECT_EQ(homology_finite(Z2, coeffs("trivial-Z"), 2).format(), "0");
  EXPECT_EQ(homology_finite(Z2, coeffs("trivial-Z"), 3).format(), "Z/2");
}

TEST(HomologyFinite, GroupRingIsShapiro) {
  for (const auto &g : {"Z/2", "Z/3", "D3"})
    for (const auto &ring : {"Z", "Q", "Z/5"})
      for (int n = 0; n <= 2; ++n) {
        auto m = coeffs(std::string("group-ring-") + ring);
        EXPECT_EQ(homology_finite(named_group(g), m, n), group_ring_homology_oracle(m.ring, 1, n)) << g << ring << n;
      }
}

TEST(HomologyFinite, TrivialGroup) {
  auto T = named_group("trivial");
  for (const auto &m : {"group-ring-Z^3", "trivial-Q^2", "trivial-Z/7"})
    for (int n = 0; n <= 3; ++n) {
      auto c = coeffs(m);
      auto h = homology_finite(T, c, n);
      EXPECT_EQ(h.betti, n == 0 ? static_cast<std::size_t>(c.rank) : 0U) << m << n;
      EXPECT_TRUE(h.torsion.empty());
    }
}

TEST(HomologyFinite, CyclicOracle) {
  for (std::int64_t m : {2, 3, 4, 6})
    for (int n = 0; n <= 3; ++n) {
      auto G = named_group("Z/" + std::to_string(m));
      EXPECT_EQ(homology_finite(G, coeffs("trivial-Z"), n), cyclic_homology_oracle(m, n)) << m << " " << n;
    }
}

TEST(HomologyFinite, RationalBettiMatchIntegral) {
  for (const auto &g : {"Z/2", "Z/3", "Z/4", "D3", "trivial"})
    for (int n = 0; n <= 2; ++n) {
      auto G = named_group(g);
      EXPECT_EQ(homology_finite(G, coeffs("trivial-Q"), n).betti, homology_finite(G, coeffs("trivial-Z"), n).betti)
          << g << n;
    }
  // over Z/2: H_n(Z/2, F_2) = F_2 in every degree
  for (int n = 0; n <= 3; ++n) EXPECT_EQ(homology_finite(named_group("Z/2"), coeffs("trivial-Z/2"), n).betti, 1U);
}

TEST(HomologyFinite, CompositeModulusRejected) {
  EXPECT_THROW(homology_finite(named_group("Z/2"), coeffs("trivial-Z/6"), 1), PreconditionFailed);
}

TEST(Window, Examples) {
  auto z = Chain::from_function(zfun({{-1, 1}, {0, -1}}));
  auto res = is_boundary_window(z, {2, 1});
  ASSERT_TRUE(res.witness.has_value());
  EXPECT_TRUE(res.verified);
  EXPECT_EQ(boundary(*res.witness), z);
  EXPECT_EQ(*res.witness, Chain::unit(Zgrp(), Ring::integers(), 1, coarse::testing::z(0), {coarse::testing::z(1)}));

  for (std::int64_t r = 1; r <= 3; ++r)
    EXPECT_FALSE(is_boundary_window(Chain::from_function(zfun({{0, 1}})), {r, r}).witness.has_value());

  auto zero = is_boundary_window(Chain(Zgrp(), Ring::integers(), 1, 0), {2, 1});
  ASSERT_TRUE(zero.witness.has_value());
  EXPECT_TRUE(zero.witness->is_zero());
}

TEST(Window, NotACycle) {
  auto c = Chain::unit(Zgrp(), Ring::integers(), 1, z(0), {z(1)});
  EXPECT_THROW(is_boundary_window(c, {2, 1}), PreconditionFailed);
}

TEST(Window, DegreeOneCycle) {
  // the boundary of a degree-2 unit is a cycle and lies in the window
  auto w = Chain::unit(Zgrp(), Ring::integers(), 1, z(1), {z(1), z(-1)});
  auto res = is_boundary_window(boundary(w), {3, 1});
  ASSERT_TRUE(res.witness.has_value());
  EXPECT_EQ(boundary(*res.witness), boundary(w));
}

TEST(InducedHomology, Examples) {
  auto m = coeffs("group-ring-Z");
  auto a = induced_map_on_homology(gallery_map("triv-into-z2"), m, 0);
  EXPECT_EQ(a.source_homology, "Z");
  EXPECT_EQ(a.target_homology, "Z");
  ASSERT_EQ(a.matrix.size(), 1U);
  EXPECT_EQ(abs(a.matrix[0][0]), 1);
  EXPECT_TRUE(a.isomorphism);
  EXPECT_TRUE(a.span_is_full);
  auto a1 = induced_map_on_homology(gallery_map("triv-into-z2"), m, 1);
  EXPECT_EQ(a1.source_homology, "0");
  EXPECT_EQ(a1.target_homology, "0");

  for (int n = 0; n <= 2; ++n) {
    auto b = induced_map_on_homology(gallery_map("z2-const-z3"), m, n);
    EXPECT_TRUE(b.isomorphism) << n;
    EXPECT_EQ(b.source_homology, n == 0 ? "Z" : "0");
  }
  auto id = induced_map_on_homology(gallery_map("z2-into-z4"), m, 0);
  EXPECT_TRUE(id.isomorphism);
}

TEST(InducedHomology, EveryFiniteEquivalence) {
  for (const auto &name : {"triv-into-z2", "z2-const-z3", "z2-into-z4", "z4-mod-z2"})
    for (const auto &c : {"group-ring-Z", "group-ring-Q"})
      for (int n = 0; n <= 2; ++n) {
        auto r = induced_map_on_homology(gallery_map(name), coeffs(c), n);
        EXPECT_TRUE(r.isomorphism) << name << " " << c << " " << n;
        EXPECT_TRUE(r.source_homotopy_identity && r.target_homotopy_identity) << name;
      }
}

TEST(InducedHomology, IdentityMap) {
  auto id = map_from_table(named_group("Z/3"), named_group("Z/3"), nlohmann::json::parse("[[0,0],[1,1],[2,2]]"), "z3-id");
  auto r = induced_map_on_homology(id, coeffs("group-ring-Z"), 0);
  ASSERT_EQ(r.matrix.size(), 1U);
  EXPECT_EQ(r.matrix[0][0], 1);
  EXPECT_TRUE(r.isomorphism);
}

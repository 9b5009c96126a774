#pragma once

#include "finite_system.hpp"
#include "homology.hpp"
#include "limits.hpp"
#include "matrix.hpp"
#include "ring.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace coarse {

/// Finite groupoid given by its arrows. Arrow i goes from source[i] to range[i].
class FiniteGroupoid {
public:
  struct Arrow {
    std::size_t range = 0, source = 0;
    std::string label;
  };

  FiniteGroupoid() = default;
  FiniteGroupoid(std::vector<std::string> units, std::vector<Arrow> arrows,
                 std::map<std::pair<std::size_t, std::size_t>, std::size_t> product)
      : units_(std::move(units)), arrows_(std::move(arrows)), product_(std::move(product)) {
    by_range_.resize(units_.size());
    for (std::size_t a = 0; a < arrows_.size(); ++a) by_range_[arrows_[a].range].push_back(a);
  }

  [[nodiscard]] auto unit_count() const -> std::size_t { return units_.size(); }
  [[nodiscard]] auto units() const -> const std::vector<std::string> & { return units_; }
  [[nodiscard]] auto arrows() const -> const std::vector<Arrow> & { return arrows_; }
  [[nodiscard]] auto arrows_with_range(std::size_t u) const -> const std::vector<std::size_t> & {
    return by_range_.at(u);
  }
  /// a * b, defined when source(a) = range(b).
  [[nodiscard]] auto compose(std::size_t a, std::size_t b) const -> std::size_t {
    auto it = product_.find({a, b});
    if (it == product_.end()) throw PreconditionFailed("arrows are not composable");
    return it->second;
  }

  /// Composable strings (g_1, ..., g_n) with source(g_i) = range(g_{i+1}).
  [[nodiscard]] auto strings(int n) const -> std::vector<std::vector<std::size_t>> {
    std::vector<std::vector<std::size_t>> out;
    if (n == 0) return out;
    for (std::size_t a = 0; a < arrows_.size(); ++a) out.push_back({a});
    for (int len = 1; len < n; ++len) {
      std::vector<std::vector<std::size_t>> next;
      for (const auto &s : out)
        for (auto a : by_range_[arrows_[s.back()].source]) {
          auto t = s;
          t.push_back(a);
          next.push_back(std::move(t));
        }
      out = std::move(next);
      if (out.size() > limits().max_matrix_dim)
        throw ResourceLimit("groupoid strings of length " + std::to_string(len + 1) + " exceed the matrix cap");
    }
    return out;
  }

private:
  std::vector<std::string> units_;
  std::vector<Arrow> arrows_;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> product_;
  std::vector<std::vector<std::size_t>> by_range_;
};

/// X x| G restricted to `subset`: arrows (x, g) with range x and source g^{-1}.x,
/// both in the subset.
inline auto transformation_groupoid(const FiniteSystem &sys, const std::vector<std::size_t> &subset)
    -> FiniteGroupoid {
  const auto &G = *sys.group;
  std::vector<std::size_t> unit_of(sys.size(), SIZE_MAX);
  std::vector<std::string> units;
  for (auto x : subset) {
    unit_of.at(x) = units.size();
    units.push_back(sys.points[x]);
  }
  std::vector<FiniteGroupoid::Arrow> arrows;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> arrow_of; // (x, g) -> id
  for (auto x : subset)
    for (std::size_t g = 0; g < G.order(); ++g) {
      auto s = sys.act(G.inv(g), x);
      if (unit_of[s] == SIZE_MAX) continue;
      arrow_of.emplace(std::make_pair(x, g), arrows.size());
      arrows.push_back({unit_of[x], unit_of[s], "(" + sys.points[x] + "," + G.format(g) + ")"});
    }
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> product;
  for (const auto &[xg, a] : arrow_of) {
    const auto [x, g] = xg;
    auto s = sys.act(G.inv(g), x);
    for (std::size_t h = 0; h < G.order(); ++h) {
      auto it = arrow_of.find({s, h});
      if (it == arrow_of.end()) continue;
      product.emplace(std::make_pair(a, it->second), arrow_of.at({x, G.mul(g, h)}));
    }
  }
  return FiniteGroupoid(std::move(units), std::move(arrows), std::move(product));
}

inline auto transformation_groupoid(const FiniteSystem &sys) -> FiniteGroupoid {
  std::vector<std::size_t> all(sys.size());
  for (std::size_t x = 0; x < sys.size(); ++x) all[x] = x;
  return transformation_groupoid(sys, all);
}

/// d_n on R^k-valued functions of composable n-strings (constant coefficients).
/// Rows are (n-1)-strings (units when n = 1).
inline auto groupoid_boundary_matrix(const FiniteGroupoid &gpd, int n, int rank) -> IntMatrix {
  const auto k = static_cast<std::size_t>(rank);
  if (n == 0) return IntMatrix(0, gpd.unit_count() * k);
  auto cols = gpd.strings(n);
  if (cols.size() * k > limits().max_matrix_dim) throw ResourceLimit("groupoid chain group exceeds the matrix cap");
  if (n == 1) {
    IntMatrix d(gpd.unit_count() * k, cols.size() * k);
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const auto &a = gpd.arrows()[cols[j][0]];
      for (std::size_t c = 0; c < k; ++c) {
        d.add(a.source * k + c, j * k + c, 1);
        d.add(a.range * k + c, j * k + c, -1);
      }
    }
    return d;
  }
  auto rows = gpd.strings(n - 1);
  std::map<std::vector<std::size_t>, std::size_t> row_of;
  for (std::size_t i = 0; i < rows.size(); ++i) row_of.emplace(rows[i], i);
  IntMatrix d(rows.size() * k, cols.size() * k);
  std::vector<std::size_t> face;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    const auto &s = cols[j];
    auto put = [&](int sign) {
      auto r = row_of.at(face);
      for (std::size_t c = 0; c < k; ++c) d.add(r * k + c, j * k + c, sign);
    };
    face.assign(s.begin() + 1, s.end());
    put(1);
    for (int i = 1; i < n; ++i) {
      face.assign(s.begin(), s.begin() + (i - 1));
      face.push_back(gpd.compose(s[i - 1], s[i]));
      face.insert(face.end(), s.begin() + (i + 1), s.end());
      put(i % 2 == 0 ? 1 : -1);
    }
    face.assign(s.begin(), s.end() - 1);
    put(n % 2 == 0 ? 1 : -1);
  }
  return d;
}

namespace detail {
inline void reject_composite(const Ring &ring) {
  if (ring.kind() == RingKind::IntegersMod && !ring.is_prime_field())
    throw PreconditionFailed("homology over Z/" + std::to_string(ring.modulus()) +
                             " is not supported (composite modulus); use Z, Q or Z/p");
}

inline auto divisors_above_one(const IntMatrix &m) -> std::vector<Int> {
  std::vector<Int> out;
  if (m.rows() == 0 || m.cols() == 0) return out;
  for (const auto &d : elementary_divisors(m))
    if (d > 1) out.push_back(d);
  return out;
}
} // namespace detail

/// H_n(G, R^k) for the constant sheaf.
inline auto groupoid_homology_finite(const FiniteGroupoid &gpd, const Ring &ring, int rank, int n)
    -> HomologyResult {
  detail::reject_composite(ring);
  auto d_n = groupoid_boundary_matrix(gpd, n, rank);
  auto d_next = groupoid_boundary_matrix(gpd, n + 1, rank);
  HomologyResult res;
  res.degree = n;
  res.ring = ring;
  res.betti = d_n.cols() - detail::rank_of(d_n, ring) - detail::rank_of(d_next, ring);
  if (ring.kind() == RingKind::Integers) res.torsion = detail::divisors_above_one(d_next);
  return res;
}

/// H^n(G, R^k) for the constant sheaf: the cochain differentials are the
/// transposes of the chain ones on a finite groupoid.
inline auto groupoid_cohomology_finite(const FiniteGroupoid &gpd, const Ring &ring, int rank, int n)
    -> HomologyResult {
  detail::reject_composite(ring);
  auto d_into = groupoid_boundary_matrix(gpd, n, rank).transposed();       // C^{n-1} -> C^n
  auto d_out = groupoid_boundary_matrix(gpd, n + 1, rank).transposed();    // C^n -> C^{n+1}
  HomologyResult res;
  res.degree = n;
  res.ring = ring;
  res.betti = d_out.cols() - detail::rank_of(d_out, ring) - detail::rank_of(d_into, ring);
  if (ring.kind() == RingKind::Integers) res.torsion = detail::divisors_above_one(d_into);
  return res;
}

} // namespace coarse

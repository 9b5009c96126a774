#pragma once

#include "chain.hpp"
#include "fin_sup_fun.hpp"
#include "group.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace coarse {

/// Seeded generator. Draws go through our own bounded sampler so that the
/// stream is the same with every standard library.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, n) by rejection.
  auto below(std::uint64_t n) -> std::uint64_t {
    if (n == 0) throw PreconditionFailed("Rng::below(0)");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % n;
  }

  /// Uniform in [lo, hi].
  auto between(std::int64_t lo, std::int64_t hi) -> std::int64_t {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  template <class T> auto pick(const std::vector<T> &v) -> const T & { return v.at(below(v.size())); }

  /// Nonzero coefficient in [-5, 5].
  auto coefficient() -> long {
    auto v = between(-5, 4);
    return v >= 0 ? v + 1 : v;
  }

  auto engine() -> std::mt19937_64 & { return engine_; }

private:
  std::mt19937_64 engine_;
};

/// Random chain: `points` draws of (x, g_1..g_n) with x from ball(x_radius), each
/// g_i from ball(g_radius), and every coefficient uniform in [-5, 5] minus 0.
/// Coefficients are reduced in the ring, so collisions can cancel.
inline auto random_chain(Rng &rng, const Group &G, const Ring &ring, int rank, int degree, std::size_t points,
                         std::int64_t x_radius = 3, std::int64_t g_radius = 2) -> Chain {
  const auto xs = G.ball(x_radius);
  const auto gs = G.ball(g_radius);
  Chain c(G, ring, rank, degree);
  for (std::size_t p = 0; p < points; ++p) {
    auto x = rng.pick(xs);
    Tuple g;
    for (int i = 0; i < degree; ++i) g.push_back(rng.pick(gs));
    Vec v(static_cast<std::size_t>(rank));
    for (auto &s : v) s = ring.make(rng.coefficient());
    c.add(x, g, v);
  }
  return c;
}

inline auto random_function(Rng &rng, const Group &G, const Ring &ring, int rank, std::size_t points,
                            std::int64_t radius = 3) -> FinSupFun {
  return random_chain(rng, G, ring, rank, 0, points, radius).slice({});
}

/// Random sample of points of G x G^n (for pointwise cochain checks).
inline auto random_points(Rng &rng, const Group &G, int degree, std::size_t count, std::int64_t x_radius = 4,
                          std::int64_t g_radius = 2) -> std::vector<std::pair<GroupElement, Tuple>> {
  const auto xs = G.ball(x_radius);
  const auto gs = G.ball(g_radius);
  std::vector<std::pair<GroupElement, Tuple>> out;
  out.reserve(count);
  for (std::size_t p = 0; p < count; ++p) {
    auto x = rng.pick(xs);
    Tuple g;
    for (int i = 0; i < degree; ++i) g.push_back(rng.pick(gs));
    out.emplace_back(x, std::move(g));
  }
  return out;
}

} // namespace coarse

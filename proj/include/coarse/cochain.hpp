#pragma once

#include "chain.hpp"
#include "coarse_map.hpp"
#include "fin_sup_fun.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>

namespace coarse {

using CochainRule = std::function<Vec(const GroupElement &, const Tuple &)>;

/// Lazy cochain: a rule (x, g_1..g_n) -> R^k on all of G x G^n.
class Cochain {
public:
  Cochain() = default;
  Cochain(Group group, Ring ring, int rank, int degree, CochainRule rule, std::string description = "rule",
          ModuleTag tag = {ModuleTag::Kind::FullC, 1, 0, 0})
      : group_(std::move(group)), ring_(ring), rank_(rank), degree_(degree), rule_(std::move(rule)),
        description_(std::move(description)), tag_(tag) {}

  [[nodiscard]] auto group() const -> const Group & { return group_; }
  [[nodiscard]] auto ring() const -> const Ring & { return ring_; }
  [[nodiscard]] auto rank() const -> int { return rank_; }
  [[nodiscard]] auto degree() const -> int { return degree_; }
  [[nodiscard]] auto description() const -> const std::string & { return description_; }
  [[nodiscard]] auto tag() const -> const ModuleTag & { return tag_; }

  [[nodiscard]] auto operator()(const GroupElement &x, const Tuple &g) const -> Vec {
    if (static_cast<int>(g.size()) != degree_) throw PreconditionFailed("cochain evaluated on a tuple of wrong length");
    auto v = rule_(x, g);
    for (auto &s : v) s = ring_.make(s);
    return v;
  }

  [[nodiscard]] auto rule() const -> const CochainRule & { return rule_; }

  /// Pointwise a - b.
  [[nodiscard]] auto minus(const Cochain &o) const -> Cochain {
    auto a = *this;
    auto b = o;
    return Cochain(group_, ring_, rank_, degree_,
                   [a, b](const GroupElement &x, const Tuple &g) {
                     auto v = a(x, g);
                     add_into(a.ring(), v, b(x, g), Scalar(-1));
                     return v;
                   },
                   "(" + description_ + ") - (" + o.description_ + ")");
  }

private:
  Group group_;
  Ring ring_;
  int rank_ = 1;
  int degree_ = 0;
  CochainRule rule_;
  std::string description_;
  ModuleTag tag_;
};

/// d^n = sum_{i=0}^{n+1} (-1)^i (delta^n_(i))^*; each evaluation reads n + 2 values.
inline auto coboundary(const Cochain &c) -> Cochain {
  const int n = c.degree();
  const auto G = c.group();
  auto in = c;
  CochainRule rule = [in, G, n](const GroupElement &x, const Tuple &g) {
    // g = (g_0, ..., g_n)
    Vec acc = zero_vec(in.rank());
    add_into(in.ring(), acc, in(G.mul(G.inv(g[0]), x), Tuple(g.begin() + 1, g.end())));
    for (int i = 1; i <= n; ++i) {
      Tuple merged(g.begin(), g.begin() + (i - 1));
      merged.push_back(G.mul(g[i - 1], g[i]));
      merged.insert(merged.end(), g.begin() + (i + 1), g.end());
      add_into(in.ring(), acc, in(x, merged), Scalar(i % 2 == 0 ? 1 : -1));
    }
    add_into(in.ring(), acc, in(x, Tuple(g.begin(), g.end() - 1)), Scalar((n + 1) % 2 == 0 ? 1 : -1));
    return acc;
  };
  return Cochain(G, c.ring(), c.rank(), n + 1, std::move(rule), "d(" + c.description() + ")", c.tag());
}

/// D^n(phi) = (phi^n)^*: a cochain on the target read back on the source.
inline auto induced_cochain_map(const CoarseMap &phi, const Cochain &c) -> Cochain {
  if (!(c.group() == phi.target())) throw GroupMismatch("induced_cochain_map: cochain is not on the target of " + phi.name());
  auto in = c;
  auto G = phi.source();
  auto H = phi.target();
  CochainRule rule = [in, phi, G, H](const GroupElement &x, const Tuple &g) {
    auto [y, h] = push_point(G, H, [&phi](const GroupElement &p) { return phi(p); }, x, g);
    return in(y, h);
  };
  return Cochain(G, c.ring(), c.rank(), c.degree(), std::move(rule), phi.name() + "^*(" + c.description() + ")",
                 c.tag());
}

/// D^n(omega) = (omega^n)^*: a cochain on the source read on the target.
inline auto omega_cochain_map(const OmegaResult &om, const Cochain &c) -> Cochain {
  if (!(c.group() == om.omega.target())) throw GroupMismatch("omega_cochain_map: cochain is not on the source of phi");
  auto in = c;
  auto omega_map = om.omega;
  auto H = om.omega.source();
  auto G = om.omega.target();
  CochainRule rule = [in, omega_map, G, H](const GroupElement &y, const Tuple &h) {
    auto [x, g] = push_point(H, G, [&omega_map](const GroupElement &p) { return omega_map(p); }, y, h);
    return in(x, g);
  };
  return Cochain(H, c.ring(), c.rank(), c.degree(), std::move(rule), "omega^*(" + c.description() + ")", c.tag());
}

/// k^n = sum_{h=1}^{n} (-1)^{h+1} (kappa^n_(h))^*, a degree n - 1 cochain.
inline auto homotopy_cochain(const Group &G, const Group &H, const PointMap &first, const PointMap &second,
                             const Cochain &c, const std::string &label) -> Cochain {
  const int n = c.degree();
  if (n < 1) throw PreconditionFailed("cochain homotopy needs degree >= 1");
  auto in = c;
  CochainRule rule = [in, G, H, first, second, n](const GroupElement &x, const Tuple &g) {
    Vec acc = zero_vec(in.rank());
    for (int h = 1; h <= n; ++h) {
      auto [y, t] = homotopy_point(G, H, first, second, x, g, static_cast<std::size_t>(h));
      add_into(in.ring(), acc, in(y, t), Scalar(h % 2 == 1 ? 1 : -1));
    }
    return acc;
  };
  return Cochain(G, c.ring(), c.rank(), n - 1, std::move(rule), label + "(" + c.description() + ")", c.tag());
}

inline auto homotopy_k_cochain(const CoarseMap &phi, const CoarseMap &psi, const Cochain &c) -> Cochain {
  if (!(c.group() == phi.target())) throw GroupMismatch("homotopy_k_cochain: cochain is not on the target");
  return homotopy_cochain(phi.source(), phi.target(), [phi](const GroupElement &x) { return phi(x); },
                          [psi](const GroupElement &x) { return psi(x); }, c, "k");
}

inline auto homotopy_l_cochain(const CoarseMap &phi, const OmegaResult &om, const Cochain &c) -> Cochain {
  const auto &H = phi.target();
  if (!(c.group() == H)) throw GroupMismatch("homotopy_l_cochain: cochain is not on the target of phi");
  auto omega_map = om.omega;
  return homotopy_cochain(H, H, [](const GroupElement &y) { return y; },
                          [phi, omega_map](const GroupElement &y) { return phi(omega_map(y)); }, c, "l");
}

// ---------------------------------------------------------------------------
// rule gallery

namespace detail {
inline auto mix64(std::uint64_t z) -> std::uint64_t {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline auto hash_point(std::uint64_t seed, const GroupElement &x, const Tuple &g) -> std::uint64_t {
  std::uint64_t h = mix64(seed);
  auto eat = [&h](const GroupElement &e) {
    h = mix64(h ^ static_cast<std::uint64_t>(e.nf.size()));
    for (auto v : e.nf) h = mix64(h ^ static_cast<std::uint64_t>(v));
  };
  eat(x);
  for (const auto &gi : g) eat(gi);
  return h;
}
} // namespace detail

inline auto cochain_rule_names() -> std::vector<std::string> {
  return {"zero", "constant", "origin-indicator", "word-length", "hashed"};
}

/// Built-in cochain rules:
///   zero, constant (all ones), origin-indicator ([x = e], tuple ignored),
///   word-length (l(x) + sum l(g_i) in the first coordinate),
///   hashed (values in [-5, 5] from a seeded hash of the point).
inline auto cochain_from_gallery(const std::string &name, const Group &G, const Ring &ring, int rank, int degree,
                                 std::uint64_t seed = 0) -> Cochain {
  CochainRule rule;
  if (name == "zero") {
    rule = [rank](const GroupElement &, const Tuple &) { return zero_vec(rank); };
  } else if (name == "constant") {
    rule = [rank](const GroupElement &, const Tuple &) { return Vec(static_cast<std::size_t>(rank), Scalar(1)); };
  } else if (name == "origin-indicator") {
    rule = [rank, G](const GroupElement &x, const Tuple &) {
      return G.is_identity(x) ? unit_vec(rank, 0) : zero_vec(rank);
    };
  } else if (name == "word-length") {
    rule = [rank, G](const GroupElement &x, const Tuple &g) {
      std::int64_t s = G.word_length(x);
      for (const auto &gi : g) s += G.word_length(gi);
      auto v = zero_vec(rank);
      v[0] = Scalar(static_cast<long>(s));
      return v;
    };
  } else if (name == "hashed") {
    rule = [rank, seed](const GroupElement &x, const Tuple &g) {
      auto h = detail::hash_point(seed, x, g);
      Vec v(static_cast<std::size_t>(rank));
      for (int c = 0; c < rank; ++c) {
        v[c] = Scalar(static_cast<long>(h % 11) - 5);
        h = detail::mix64(h);
      }
      return v;
    };
  } else {
    throw ConfigError("unknown cochain rule '" + name + "'");
  }
  return Cochain(G, ring, rank, degree, std::move(rule), name);
}

/// A cochain given by an explicit rule (tests and examples).
inline auto cochain_from_rule(const Group &G, const Ring &ring, int rank, int degree, CochainRule rule,
                              std::string description) -> Cochain {
  return Cochain(G, ring, rank, degree, std::move(rule), std::move(description));
}

} // namespace coarse

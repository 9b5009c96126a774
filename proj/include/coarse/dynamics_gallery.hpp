#pragma once

#include "dynamics.hpp"

#include <string>
#include <vector>

namespace coarse {

struct ScenarioEntry {
  std::string name;
  std::string description;
};

inline auto scenario_catalog() -> std::vector<ScenarioEntry> {
  return {
      {"product-coupling", "Z/2 x Z/3 with left and right translation; Xbar = G x {e}, Ybar = {e} x H"},
      {"diagonal-coupling", "Z/3 x Z/3 with g(a,b) = (ga,gb), (a,b)h = (a,bh)"},
      {"z4-z2-kakutani", "Z/4 x Z/2 product coupling: Z/4 and Z/2 translation systems"},
      {"dihedral-flip", "D3 x Z/2, right action through a reflection; twisted fundamental domains"},
      {"trivial-coupling", "one point, both groups trivial"},
  };
}

namespace detail {
inline auto pair_label(const FiniteIndex &G, std::size_t a, const FiniteIndex &H, std::size_t b) -> std::string {
  return "(" + G.format(a) + "," + H.format(b) + ")";
}

/// Omega = G x H, w = a |H| + b, left g(a,b) = (g a, b) or (g a, g b) when
/// `diagonal`, right (a,b)h = (a iota(h), b h).
inline auto product_like(const Group &g_group, const Group &h_group, bool diagonal,
                         const std::vector<std::size_t> &iota) -> Coupling {
  Coupling c;
  c.left_group = group_table(g_group);
  c.right_group = group_table(h_group);
  const auto &G = *c.left_group;
  const auto &H = *c.right_group;
  const auto ng = G.order(), nh = H.order();
  auto w = [nh](std::size_t a, std::size_t b) { return a * nh + b; };
  for (std::size_t a = 0; a < ng; ++a)
    for (std::size_t b = 0; b < nh; ++b) c.points.push_back(pair_label(G, a, H, b));
  c.left.assign(ng, std::vector<std::size_t>(ng * nh));
  c.right.assign(nh, std::vector<std::size_t>(ng * nh));
  for (std::size_t a = 0; a < ng; ++a)
    for (std::size_t b = 0; b < nh; ++b) {
      for (std::size_t g = 0; g < ng; ++g) c.left[g][w(a, b)] = w(G.mul(g, a), diagonal ? H.mul(g, b) : b);
      for (std::size_t h = 0; h < nh; ++h)
        c.right[h][w(a, b)] = w(iota.empty() ? a : G.mul(a, iota[h]), H.mul(b, h));
    }
  for (std::size_t a = 0; a < ng; ++a) c.dom_x.push_back(w(a, H.identity()));
  for (std::size_t b = 0; b < nh; ++b) c.dom_y.push_back(w(G.identity(), b));
  c.dom_x = sorted_unique(c.dom_x);
  c.dom_y = sorted_unique(c.dom_y);
  return c;
}
} // namespace detail

inline auto product_coupling(const Group &G, const Group &H) -> Coupling {
  return detail::product_like(G, H, false, {});
}

/// G = H acting by g(a,b) = (ga, gb) and (a,b)h = (a, bh).
inline auto diagonal_coupling(const Group &G) -> Coupling { return detail::product_like(G, G, true, {}); }

/// D3 x Z/2 with (a,b)h = (a s^h, b + h) for a reflection s; Xbar takes the point
/// with rotation first coordinate in each H-orbit, Ybar = {(s,0), (e,1)}.
inline auto dihedral_flip_coupling() -> Coupling {
  auto d3 = named_group("D3");
  auto z2 = named_group("Z/2");
  FiniteIndex G(d3);
  std::size_t s = 0;
  for (std::size_t g = 1; g < G.order() && s == 0; ++g)
    if (G.mul(g, g) == G.identity()) s = g;
  auto c = detail::product_like(d3, z2, false, {G.identity(), s});
  std::vector<bool> rotation(G.order(), false);
  for (std::size_t g = 0; g < G.order(); ++g) rotation[G.mul(g, g)] = true; // squares of D3 are the rotations
  const std::size_t nh = 2;
  c.dom_x.clear();
  for (std::size_t a = 0; a < G.order(); ++a)
    if (rotation[a])
      for (std::size_t b = 0; b < nh; ++b) c.dom_x.push_back(a * nh + b);
  c.dom_y = detail::sorted_unique({s * nh + 0, G.identity() * nh + 1});
  return c;
}

inline auto coupling_scenario(const std::string &name) -> Coupling {
  if (name == "product-coupling") return product_coupling(named_group("Z/2"), named_group("Z/3"));
  if (name == "diagonal-coupling") return diagonal_coupling(named_group("Z/3"));
  if (name == "z4-z2-kakutani") return product_coupling(named_group("Z/4"), named_group("Z/2"));
  if (name == "dihedral-flip") return dihedral_flip_coupling();
  if (name == "trivial-coupling") return product_coupling(named_group("trivial"), named_group("trivial"));
  throw ConfigError("unknown scenario '" + name + "'");
}

/// A scenario name, or an inline coupling object.
inline auto coupling_from_config(const nlohmann::json &j) -> Coupling {
  if (j.is_string()) return coupling_scenario(j.get<std::string>());
  return Coupling::from_json(j);
}

} // namespace coarse

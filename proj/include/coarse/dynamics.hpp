#pragma once

#include "finite_system.hpp"
#include "groupoid.hpp"
#include "homology.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace coarse {

inline constexpr std::size_t kNone = SIZE_MAX;

namespace detail {
inline auto sorted_unique(std::vector<std::size_t> v) -> std::vector<std::size_t> {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

inline auto position_table(const std::vector<std::size_t> &subset, std::size_t size) -> std::vector<std::size_t> {
  std::vector<std::size_t> pos(size, kNone);
  for (std::size_t i = 0; i < subset.size(); ++i) pos.at(subset[i]) = i;
  return pos;
}

inline auto check_subset(const std::vector<std::size_t> &s, std::size_t size, const std::string &name,
                         CheckReport &r) -> bool {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] >= size) {
      r.fail(name + " entry out of range", {{"index", i}, {"value", s[i]}});
      return false;
    }
    if (i > 0 && s[i] <= s[i - 1]) {
      r.fail(name + " must be strictly increasing", {{"index", i}});
      return false;
    }
  }
  return true;
}
} // namespace detail

// ---------------------------------------------------------------------------
// couplings

/// Finite (G, H) coupling: commuting left G- and right H-actions on a finite set,
/// with an H-fundamental domain dom_x and a G-fundamental domain dom_y.
struct Coupling {
  GroupTable left_group, right_group;
  std::vector<std::string> points;
  ActionTable left;  // left[g][w] = g w
  ActionTable right; // right[h][w] = w h
  std::vector<std::size_t> dom_x, dom_y;

  [[nodiscard]] auto size() const -> std::size_t { return points.size(); }

  [[nodiscard]] auto check() const -> CheckReport {
    CheckReport r;
    const auto &G = *left_group;
    const auto &H = *right_group;
    const auto n = size();
    if (!detail::check_shape(left, G.order(), n, n, "left action", r)) return r;
    if (!detail::check_shape(right, H.order(), n, n, "right action", r)) return r;
    if (!detail::check_subset(dom_x, n, "dom_x", r) || !detail::check_subset(dom_y, n, "dom_y", r)) return r;
    for (std::size_t w = 0; w < n; ++w) {
      if (left[G.identity()][w] != w) return r.fail("e does not act trivially on the left", {{"w", w}});
      if (right[H.identity()][w] != w) return r.fail("e does not act trivially on the right", {{"w", w}});
    }
    for (std::size_t g1 = 0; g1 < G.order(); ++g1)
      for (std::size_t g2 = 0; g2 < G.order(); ++g2)
        for (std::size_t w = 0; w < n; ++w)
          if (left[G.mul(g1, g2)][w] != left[g1][left[g2][w]])
            return r.fail("left action is not compatible with multiplication",
                          {{"g1", G.format(g1)}, {"g2", G.format(g2)}, {"w", w}});
    for (std::size_t h1 = 0; h1 < H.order(); ++h1)
      for (std::size_t h2 = 0; h2 < H.order(); ++h2)
        for (std::size_t w = 0; w < n; ++w)
          if (right[H.mul(h1, h2)][w] != right[h2][right[h1][w]])
            return r.fail("right action is not compatible with multiplication",
                          {{"h1", H.format(h1)}, {"h2", H.format(h2)}, {"w", w}});
    for (std::size_t g = 0; g < G.order(); ++g)
      for (std::size_t h = 0; h < H.order(); ++h)
        for (std::size_t w = 0; w < n; ++w) {
          if (right[h][left[g][w]] != left[g][right[h][w]])
            return r.fail("actions do not commute", {{"g", G.format(g)}, {"h", H.format(h)}, {"w", w}});
          if ((g != G.identity() || h != H.identity()) && left[g][right[h][w]] == w)
            return r.fail("G x H action is not free", {{"g", G.format(g)}, {"h", H.format(h)}, {"w", w}});
        }
    auto in_x = detail::position_table(dom_x, n);
    auto in_y = detail::position_table(dom_y, n);
    for (std::size_t w = 0; w < n; ++w) {
      std::size_t hits = 0;
      for (std::size_t h = 0; h < H.order(); ++h) hits += in_x[right[h][w]] != kNone;
      if (hits != 1) return r.fail("dom_x does not meet an H-orbit exactly once", {{"w", w}, {"hits", hits}});
      hits = 0;
      for (std::size_t g = 0; g < G.order(); ++g) hits += in_y[left[g][w]] != kNone;
      if (hits != 1) return r.fail("dom_y does not meet a G-orbit exactly once", {{"w", w}, {"hits", hits}});
    }
    return r;
  }

  [[nodiscard]] auto to_json() const -> nlohmann::ordered_json {
    nlohmann::ordered_json j;
    j["left_group"] = left_group->group().descriptor();
    j["right_group"] = right_group->group().descriptor();
    j["points"] = points;
    j["left"] = detail::table_to_json(left);
    j["right"] = detail::table_to_json(right);
    j["dom_x"] = dom_x;
    j["dom_y"] = dom_y;
    return j;
  }

  static auto from_json(const nlohmann::json &j) -> Coupling {
    try {
      Coupling c;
      c.left_group = group_table(group_from_config(j.at("left_group")));
      c.right_group = group_table(group_from_config(j.at("right_group")));
      c.points = j.at("points").get<std::vector<std::string>>();
      c.left = detail::table_from_json(j.at("left"));
      c.right = detail::table_from_json(j.at("right"));
      c.dom_x = j.at("dom_x").get<std::vector<std::size_t>>();
      c.dom_y = j.at("dom_y").get<std::vector<std::size_t>>();
      return c;
    } catch (const nlohmann::json::exception &e) {
      throw ConfigError(std::string("bad coupling JSON: ") + e.what());
    }
  }
};

// ---------------------------------------------------------------------------
// orbit couples

/// Continuous orbit couple between finite systems G on X and H on Y.
struct OrbitCouple {
  FiniteSystem sys_g, sys_h;
  std::vector<std::size_t> p;     // X -> Y
  std::vector<std::size_t> q;     // Y -> X
  ActionTable a;                  // a[g][x] in H
  ActionTable b;                  // b[h][y] in G
  std::vector<std::size_t> g_map; // X -> G
  std::vector<std::size_t> h_map; // Y -> H

  /// p(g.x) = a(g,x).p(x), q(h.y) = b(h,y).q(y), q(p(x)) = g(x).x,
  /// p(q(y)) = h(y).y and both cocycle identities, exhaustively.
  [[nodiscard]] auto check() const -> CheckReport {
    CheckReport r = sys_g.check();
    if (!r.ok) return r;
    r = sys_h.check();
    if (!r.ok) return r;
    const auto &G = *sys_g.group;
    const auto &H = *sys_h.group;
    const auto nx = sys_g.size(), ny = sys_h.size();
    if (!detail::check_map_shape(p, nx, ny, "p", r) || !detail::check_map_shape(q, ny, nx, "q", r) ||
        !detail::check_shape(a, G.order(), nx, H.order(), "a", r) ||
        !detail::check_shape(b, H.order(), ny, G.order(), "b", r) ||
        !detail::check_map_shape(g_map, nx, G.order(), "g_map", r) ||
        !detail::check_map_shape(h_map, ny, H.order(), "h_map", r))
      return r;
    for (std::size_t g = 0; g < G.order(); ++g)
      for (std::size_t x = 0; x < nx; ++x)
        if (p[sys_g.act(g, x)] != sys_h.act(a[g][x], p[x]))
          return r.fail("p(g.x) != a(g,x).p(x)", {{"g", G.format(g)}, {"x", x}});
    for (std::size_t h = 0; h < H.order(); ++h)
      for (std::size_t y = 0; y < ny; ++y)
        if (q[sys_h.act(h, y)] != sys_g.act(b[h][y], q[y]))
          return r.fail("q(h.y) != b(h,y).q(y)", {{"h", H.format(h)}, {"y", y}});
    for (std::size_t x = 0; x < nx; ++x)
      if (q[p[x]] != sys_g.act(g_map[x], x)) return r.fail("q(p(x)) != g(x).x", {{"x", x}});
    for (std::size_t y = 0; y < ny; ++y)
      if (p[q[y]] != sys_h.act(h_map[y], y)) return r.fail("p(q(y)) != h(y).y", {{"y", y}});
    for (std::size_t g1 = 0; g1 < G.order(); ++g1)
      for (std::size_t g2 = 0; g2 < G.order(); ++g2)
        for (std::size_t x = 0; x < nx; ++x)
          if (a[G.mul(g1, g2)][x] != H.mul(a[g1][sys_g.act(g2, x)], a[g2][x]))
            return r.fail("cocycle identity fails for a", {{"g1", G.format(g1)}, {"g2", G.format(g2)}, {"x", x}});
    for (std::size_t h1 = 0; h1 < H.order(); ++h1)
      for (std::size_t h2 = 0; h2 < H.order(); ++h2)
        for (std::size_t y = 0; y < ny; ++y)
          if (b[H.mul(h1, h2)][y] != G.mul(b[h1][sys_h.act(h2, y)], b[h2][y]))
            return r.fail("cocycle identity fails for b", {{"h1", H.format(h1)}, {"h2", H.format(h2)}, {"y", y}});
    return r;
  }

  [[nodiscard]] auto to_json() const -> nlohmann::ordered_json {
    nlohmann::ordered_json j;
    j["sys_g"] = sys_g.to_json();
    j["sys_h"] = sys_h.to_json();
    j["p"] = p;
    j["q"] = q;
    j["a"] = detail::table_to_json(a);
    j["b"] = detail::table_to_json(b);
    j["g_map"] = g_map;
    j["h_map"] = h_map;
    return j;
  }

  static auto from_json(const nlohmann::json &j) -> OrbitCouple {
    try {
      OrbitCouple oc;
      oc.sys_g = FiniteSystem::from_json(j.at("sys_g"));
      oc.sys_h = FiniteSystem::from_json(j.at("sys_h"));
      oc.p = j.at("p").get<std::vector<std::size_t>>();
      oc.q = j.at("q").get<std::vector<std::size_t>>();
      oc.a = detail::table_from_json(j.at("a"));
      oc.b = detail::table_from_json(j.at("b"));
      oc.g_map = j.at("g_map").get<std::vector<std::size_t>>();
      oc.h_map = j.at("h_map").get<std::vector<std::size_t>>();
      return oc;
    } catch (const nlohmann::json::exception &e) {
      throw ConfigError(std::string("bad orbit couple JSON: ") + e.what());
    }
  }
};

/// X = dom_x, Y = dom_y; p(x) is the point of Gx in Y, alpha(g,x) the h with
/// gx in X h, and the induced actions are g.x = g x alpha(g,x)^{-1} and
/// h.y = beta(y,h^{-1})^{-1} y h^{-1}.
inline auto coupling_to_couple(const Coupling &c) -> OrbitCouple {
  require(c.check());
  const auto &G = *c.left_group;
  const auto &H = *c.right_group;
  const auto n = c.size();
  auto pos_x = detail::position_table(c.dom_x, n);
  auto pos_y = detail::position_table(c.dom_y, n);
  const auto nx = c.dom_x.size(), ny = c.dom_y.size();

  OrbitCouple oc;
  oc.sys_g.group = c.left_group;
  oc.sys_h.group = c.right_group;
  for (auto w : c.dom_x) oc.sys_g.points.push_back(c.points[w]);
  for (auto w : c.dom_y) oc.sys_h.points.push_back(c.points[w]);
  oc.p.assign(nx, kNone);
  oc.g_map.assign(nx, kNone);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t g = 0; g < G.order() && oc.p[x] == kNone; ++g)
      if (auto y = pos_y[c.left[g][c.dom_x[x]]]; y != kNone) {
        oc.p[x] = y;
        oc.g_map[x] = g; // gamma(x)
      }
  oc.a.assign(G.order(), std::vector<std::size_t>(nx, kNone));
  oc.sys_g.action.assign(G.order(), std::vector<std::size_t>(nx, kNone));
  for (std::size_t g = 0; g < G.order(); ++g)
    for (std::size_t x = 0; x < nx; ++x) {
      auto gx = c.left[g][c.dom_x[x]];
      for (std::size_t h = 0; h < H.order(); ++h)
        if (auto x2 = pos_x[c.right[H.inv(h)][gx]]; x2 != kNone) {
          oc.a[g][x] = h;
          oc.sys_g.action[g][x] = x2;
          break;
        }
    }
  oc.q.assign(ny, kNone);
  std::vector<std::size_t> eta(ny, kNone);
  for (std::size_t y = 0; y < ny; ++y)
    for (std::size_t h = 0; h < H.order() && oc.q[y] == kNone; ++h)
      if (auto x = pos_x[c.right[h][c.dom_y[y]]]; x != kNone) {
        oc.q[y] = x;
        eta[y] = h;
      }
  // beta(y, h): y h = beta y' with y' in Y
  auto beta = [&](std::size_t y, std::size_t h) -> std::pair<std::size_t, std::size_t> {
    auto yh = c.right[h][c.dom_y[y]];
    for (std::size_t g = 0; g < G.order(); ++g)
      if (auto y2 = pos_y[c.left[G.inv(g)][yh]]; y2 != kNone) return {g, y2};
    throw Error("coupling_to_couple: no beta");
  };
  oc.b.assign(H.order(), std::vector<std::size_t>(ny, kNone));
  oc.sys_h.action.assign(H.order(), std::vector<std::size_t>(ny, kNone));
  for (std::size_t h = 0; h < H.order(); ++h)
    for (std::size_t y = 0; y < ny; ++y) {
      auto [g, y2] = beta(y, H.inv(h));
      oc.b[h][y] = G.inv(g);
      oc.sys_h.action[h][y] = y2;
    }
  oc.h_map.resize(ny);
  for (std::size_t y = 0; y < ny; ++y) oc.h_map[y] = H.inv(eta[y]);
  require(oc.check());
  return oc;
}

/// Omega = X x H with g(x,h) = (g.x, a(g,x)h) and (x,h)h' = (x,hh'), together with
/// Theta: X x H -> G x Y and its inverse.
struct CouplingConstruction {
  Coupling coupling;
  std::vector<std::pair<std::size_t, std::size_t>> theta; // Omega -> (g, y)
  ActionTable theta_inv;                                   // [g][y] -> Omega
};

inline auto couple_to_coupling(const OrbitCouple &oc) -> CouplingConstruction {
  const auto &sg = oc.sys_g;
  const auto &sh = oc.sys_h;
  const auto &G = *sg.group;
  const auto &H = *sh.group;
  {
    CheckReport r = sg.check();
    if (r.ok) r = sh.check();
    if (r.ok) {
      if (auto f = sg.fixed_point()) r.fail("G-system is not free", {{"g", G.format(f->first)}, {"x", f->second}});
      else if (auto f2 = sh.fixed_point()) r.fail("H-system is not free", {{"h", H.format(f2->first)}, {"y", f2->second}});
    }
    require(r);
  }
  const auto nx = sg.size(), ny = sh.size(), nh = H.order();
  CouplingConstruction out;
  auto &c = out.coupling;
  c.left_group = sg.group;
  c.right_group = sh.group;
  auto omega = [nh](std::size_t x, std::size_t h) { return x * nh + h; };
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t h = 0; h < nh; ++h) c.points.push_back("(" + sg.points[x] + "," + H.format(h) + ")");
  const auto n = c.points.size();
  c.left.assign(G.order(), std::vector<std::size_t>(n));
  c.right.assign(nh, std::vector<std::size_t>(n));
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t h = 0; h < nh; ++h) {
      for (std::size_t g = 0; g < G.order(); ++g) c.left[g][omega(x, h)] = omega(sg.act(g, x), H.mul(oc.a[g][x], h));
      for (std::size_t h2 = 0; h2 < nh; ++h2) c.right[h2][omega(x, h)] = omega(x, H.mul(h, h2));
    }
  for (std::size_t x = 0; x < nx; ++x) c.dom_x.push_back(omega(x, H.identity()));

  out.theta.resize(n);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t h = 0; h < nh; ++h) {
      auto hi = H.inv(h);
      auto px = oc.p[x];
      out.theta[omega(x, h)] = {G.mul(G.inv(oc.g_map[x]), G.inv(oc.b[hi][px])), sh.act(hi, px)};
    }
  out.theta_inv.assign(G.order(), std::vector<std::size_t>(ny));
  for (std::size_t g = 0; g < G.order(); ++g)
    for (std::size_t y = 0; y < ny; ++y) {
      auto qy = oc.q[y];
      out.theta_inv[g][y] = omega(sg.act(g, qy), H.mul(oc.a[g][qy], oc.h_map[y]));
    }
  CheckReport r;
  for (std::size_t w = 0; w < n && r.ok; ++w) {
    auto [g0, y0] = out.theta[w];
    for (std::size_t g = 0; g < G.order() && r.ok; ++g)
      if (out.theta[c.left[g][w]] != std::make_pair(G.mul(g, g0), y0))
        r.fail("Theta is not G-equivariant", {{"g", G.format(g)}, {"w", c.points[w]}});
    for (std::size_t h = 0; h < nh && r.ok; ++h) {
      auto hi = H.inv(h);
      std::pair<std::size_t, std::size_t> expect{G.mul(g0, G.inv(oc.b[hi][y0])), sh.act(hi, y0)};
      if (out.theta[c.right[h][w]] != expect)
        r.fail("Theta is not H-equivariant", {{"h", H.format(h)}, {"w", c.points[w]}});
    }
  }
  for (std::size_t w = 0; w < n && r.ok; ++w) {
    auto [g, y] = out.theta[w];
    if (out.theta_inv[g][y] != w) r.fail("Theta^{-1}(Theta(w)) != w", {{"w", c.points[w]}});
  }
  for (std::size_t g = 0; g < G.order() && r.ok; ++g)
    for (std::size_t y = 0; y < ny && r.ok; ++y)
      if (out.theta[out.theta_inv[g][y]] != std::make_pair(g, y))
        r.fail("Theta(Theta^{-1}(g,y)) != (g,y)", {{"g", G.format(g)}, {"y", y}});
  require(r);
  require(oc.check());
  for (std::size_t y = 0; y < ny; ++y) c.dom_y.push_back(out.theta_inv[G.identity()][y]);
  std::sort(c.dom_y.begin(), c.dom_y.end());
  require(c.check());
  return out;
}

// ---------------------------------------------------------------------------
// round trips

struct RoundtripReport {
  CheckReport coupling_side; // (Xbar x H -> Omega, (x,h) -> xh) is an isomorphism of couplings
  CheckReport couple_side;   // X = X x {e}, Y = Theta^{-1}({e} x Y) is an isomorphism of couples
  std::vector<std::size_t> iso_map;

  [[nodiscard]] auto ok() const -> bool { return coupling_side.ok && couple_side.ok; }

  [[nodiscard]] auto to_json() const -> nlohmann::ordered_json {
    nlohmann::ordered_json j;
    j["verdict"] = ok() ? "iso-confirmed" : "iso-failed";
    j["coupling_side"] = coupling_side.to_json();
    j["couple_side"] = couple_side.to_json();
    j["iso_map"] = iso_map;
    return j;
  }
};

/// Couple -> coupling -> couple, compared with the input through X = X x {e} and
/// Y = Theta^{-1}({e} x Y).
inline auto couple_roundtrip_check(const OrbitCouple &oc) -> CheckReport {
  CheckReport r;
  try {
    auto built = couple_to_coupling(oc);
    auto back = coupling_to_couple(built.coupling);
    const auto &G = *oc.sys_g.group;
    const auto &H = *oc.sys_h.group;
    const auto nx = oc.sys_g.size(), ny = oc.sys_h.size();
    auto pos_x = detail::position_table(built.coupling.dom_x, built.coupling.size());
    auto pos_y = detail::position_table(built.coupling.dom_y, built.coupling.size());
    std::vector<std::size_t> ix(nx), iy(ny);
    for (std::size_t x = 0; x < nx; ++x) ix[x] = pos_x[x * H.order() + H.identity()];
    for (std::size_t y = 0; y < ny; ++y) iy[y] = pos_y[built.theta_inv[G.identity()][y]];
    if (back.sys_g.size() != nx || back.sys_h.size() != ny) return r.fail("round trip changed the space sizes", {});
    if (detail::sorted_unique(ix).size() != nx || detail::sorted_unique(iy).size() != ny)
      return r.fail("round trip identification is not bijective", {});
    for (std::size_t g = 0; g < G.order(); ++g)
      for (std::size_t x = 0; x < nx; ++x)
        if (ix[oc.sys_g.act(g, x)] != back.sys_g.act(g, ix[x]))
          return r.fail("X identification is not G-equivariant", {{"g", G.format(g)}, {"x", x}});
    for (std::size_t h = 0; h < H.order(); ++h)
      for (std::size_t y = 0; y < ny; ++y)
        if (iy[oc.sys_h.act(h, y)] != back.sys_h.act(h, iy[y]))
          return r.fail("Y identification is not H-equivariant", {{"h", H.format(h)}, {"y", y}});
    for (std::size_t x = 0; x < nx; ++x)
      if (iy[oc.p[x]] != back.p[ix[x]]) return r.fail("p does not commute with the identifications", {{"x", x}});
    for (std::size_t y = 0; y < ny; ++y)
      if (ix[oc.q[y]] != back.q[iy[y]]) return r.fail("q does not commute with the identifications", {{"y", y}});
  } catch (const InvariantViolation &e) {
    return e.report();
  }
  return r;
}

inline auto roundtrip_iso_check(const Coupling &c) -> RoundtripReport {
  RoundtripReport rep;
  OrbitCouple oc;
  CouplingConstruction built;
  try {
    oc = coupling_to_couple(c);
    built = couple_to_coupling(oc);
  } catch (const InvariantViolation &e) {
    rep.coupling_side = e.report();
    rep.couple_side.fail("no couple to compare", {});
    return rep;
  }
  const auto &G = *c.left_group;
  const auto &H = *c.right_group;
  const auto &c2 = built.coupling;
  auto &r = rep.coupling_side;
  // (x, h) -> x h
  rep.iso_map.resize(c2.size());
  for (std::size_t x = 0; x < c.dom_x.size(); ++x)
    for (std::size_t h = 0; h < H.order(); ++h) rep.iso_map[x * H.order() + h] = c.right[h][c.dom_x[x]];
  if (c2.size() != c.size() || detail::sorted_unique(rep.iso_map).size() != c.size())
    r.fail("Xbar x H -> Omega is not bijective", {{"sizes", {c2.size(), c.size()}}});
  for (std::size_t w = 0; w < c2.size() && r.ok; ++w) {
    for (std::size_t g = 0; g < G.order() && r.ok; ++g)
      if (rep.iso_map[c2.left[g][w]] != c.left[g][rep.iso_map[w]])
        r.fail("Xbar x H -> Omega is not G-equivariant", {{"g", G.format(g)}, {"w", c2.points[w]}});
    for (std::size_t h = 0; h < H.order() && r.ok; ++h)
      if (rep.iso_map[c2.right[h][w]] != c.right[h][rep.iso_map[w]])
        r.fail("Xbar x H -> Omega is not H-equivariant", {{"h", H.format(h)}, {"w", c2.points[w]}});
  }
  auto image = [&](const std::vector<std::size_t> &s) {
    std::vector<std::size_t> out;
    for (auto w : s) out.push_back(rep.iso_map[w]);
    return detail::sorted_unique(out);
  };
  if (r.ok && image(c2.dom_x) != c.dom_x) r.fail("fundamental domain for H is not preserved", {});
  if (r.ok && image(c2.dom_y) != c.dom_y) r.fail("fundamental domain for G is not preserved", {});
  rep.couple_side = couple_roundtrip_check(oc);
  return rep;
}

// ---------------------------------------------------------------------------
// Kakutani equivalence

using ArrowKey = std::pair<std::size_t, std::size_t>; // (range point, group element)

/// A in X, B in Y and chi: (X x| G)|A -> (Y x| H)|B on arrows (x, g) with range x.
struct KakutaniData {
  std::vector<std::size_t> A, B;
  std::map<ArrowKey, ArrowKey> chi;
  std::map<ArrowKey, std::size_t> b_prime; // (h, y) -> g, when built from a couple
  nlohmann::ordered_json choices;

  /// G.A = X, H.B = Y, chi bijective onto the restricted arrows, unit preserving,
  /// compatible with source and range, multiplicative on all composable pairs.
  [[nodiscard]] auto check(const FiniteSystem &sg, const FiniteSystem &sh) const -> CheckReport {
    CheckReport r;
    const auto &G = *sg.group;
    const auto &H = *sh.group;
    if (!detail::check_subset(A, sg.size(), "A", r) || !detail::check_subset(B, sh.size(), "B", r)) return r;
    auto in_a = detail::position_table(A, sg.size());
    auto in_b = detail::position_table(B, sh.size());
    for (std::size_t x = 0; x < sg.size(); ++x) {
      bool hit = false;
      for (std::size_t g = 0; g < G.order() && !hit; ++g) hit = in_a[sg.act(g, x)] != kNone;
      if (!hit) return r.fail("G.A != X", {{"x", x}});
    }
    for (std::size_t y = 0; y < sh.size(); ++y) {
      bool hit = false;
      for (std::size_t h = 0; h < H.order() && !hit; ++h) hit = in_b[sh.act(h, y)] != kNone;
      if (!hit) return r.fail("H.B != Y", {{"y", y}});
    }
    auto restricted = [](const FiniteSystem &s, const std::vector<std::size_t> &in) {
      std::set<ArrowKey> out;
      const auto &K = *s.group;
      for (std::size_t x = 0; x < s.size(); ++x)
        if (in[x] != kNone)
          for (std::size_t g = 0; g < K.order(); ++g)
            if (in[s.act(K.inv(g), x)] != kNone) out.insert({x, g});
      return out;
    };
    auto arrows_a = restricted(sg, in_a);
    auto arrows_b = restricted(sh, in_b);
    std::set<ArrowKey> images;
    for (const auto &arrow : arrows_a) {
      auto it = chi.find(arrow);
      if (it == chi.end())
        return r.fail("chi undefined on an arrow", {{"x", arrow.first}, {"g", G.format(arrow.second)}});
      if (!arrows_b.count(it->second))
        return r.fail("chi leaves (Y x| H)|B", {{"x", arrow.first}, {"g", G.format(arrow.second)}});
      images.insert(it->second);
    }
    if (chi.size() != arrows_a.size()) return r.fail("chi defined outside (X x| G)|A", {});
    if (images.size() != arrows_b.size())
      return r.fail("chi is not bijective", {{"arrows_A", arrows_a.size()}, {"arrows_B", arrows_b.size()}, {"images", images.size()}});
    for (const auto &arrow : arrows_a) {
      const auto [x, g] = arrow;
      const auto [y, h] = chi.at(arrow);
      if (g == G.identity() && h != H.identity()) return r.fail("chi does not preserve units", {{"x", x}});
      const auto [ys, hs] = chi.at({sg.act(G.inv(g), x), G.identity()});
      if (chi.at({x, G.identity()}).first != y || sh.act(H.inv(h), y) != ys || hs != H.identity())
        return r.fail("chi is not compatible with source and range", {{"x", x}, {"g", G.format(g)}});
    }
    for (const auto &first : arrows_a) {
      const auto [x, g] = first;
      auto s = sg.act(G.inv(g), x);
      for (std::size_t k = 0; k < G.order(); ++k) {
        if (!arrows_a.count({s, k})) continue;
        auto prod = chi.at({x, G.mul(g, k)});
        auto c1 = chi.at(first);
        auto c2 = chi.at({s, k});
        if (sh.act(H.inv(c1.second), c1.first) != c2.first || prod != ArrowKey{c1.first, H.mul(c1.second, c2.second)})
          return r.fail("chi is not multiplicative", {{"x", x}, {"g", G.format(g)}, {"k", G.format(k)}});
      }
    }
    return r;
  }

  /// The unit map A -> B.
  [[nodiscard]] auto phi(const GroupTable &G) const -> std::map<std::size_t, std::size_t> {
    std::map<std::size_t, std::size_t> out;
    for (auto x : A) out.emplace(x, chi.at({x, G->identity()}).first);
    return out;
  }

  [[nodiscard]] auto to_json() const -> nlohmann::ordered_json {
    nlohmann::ordered_json j;
    j["A"] = A;
    j["B"] = B;
    auto arr = nlohmann::ordered_json::array();
    for (const auto &[k, v] : chi) arr.push_back({k.first, k.second, v.first, v.second});
    j["chi"] = arr;
    if (!b_prime.empty()) {
      auto bp = nlohmann::ordered_json::array();
      for (const auto &[k, g] : b_prime) bp.push_back({k.first, k.second, g});
      j["b_prime"] = bp;
    }
    if (!choices.is_null()) j["choices"] = choices;
    return j;
  }

  static auto from_json(const nlohmann::json &j) -> KakutaniData {
    try {
      KakutaniData kd;
      kd.A = j.at("A").get<std::vector<std::size_t>>();
      kd.B = j.at("B").get<std::vector<std::size_t>>();
      for (const auto &e : j.at("chi")) kd.chi[{e.at(0), e.at(1)}] = {e.at(2), e.at(3)};
      return kd;
    } catch (const nlohmann::json::exception &e) {
      throw ConfigError(std::string("bad Kakutani JSON: ") + e.what());
    }
  }
};

/// U_g = {g(x) = g}, V_g = p(U_g), B_g chosen greedily in enumeration order,
/// A_g = U_g cap p^{-1}(B_g), phi = p|_A.
inline auto couple_to_kakutani(const OrbitCouple &oc) -> KakutaniData {
  require(oc.check());
  const auto &sg = oc.sys_g;
  const auto &sh = oc.sys_h;
  const auto &G = *sg.group;
  const auto &H = *sh.group;
  KakutaniData kd;
  std::vector<std::size_t> block_of_y(sh.size(), kNone); // y in B_g
  std::vector<std::size_t> a_points;
  auto choices = nlohmann::ordered_json::array();
  for (std::size_t g = 0; g < G.order(); ++g) {
    std::vector<std::size_t> bg;
    for (std::size_t x = 0; x < sg.size(); ++x)
      if (oc.g_map[x] == g && block_of_y[oc.p[x]] == kNone) {
        block_of_y[oc.p[x]] = g;
        bg.push_back(oc.p[x]);
      }
    for (std::size_t x = 0; x < sg.size(); ++x)
      if (oc.g_map[x] == g && block_of_y[oc.p[x]] == g) a_points.push_back(x);
    if (!bg.empty()) choices.push_back({{"g", G.format(g)}, {"B_g", detail::sorted_unique(bg)}});
  }
  kd.A = detail::sorted_unique(a_points);
  for (std::size_t y = 0; y < sh.size(); ++y)
    if (block_of_y[y] != kNone) kd.B.push_back(y);
  kd.choices = choices;
  auto in_a = detail::position_table(kd.A, sg.size());
  for (auto x : kd.A)
    for (std::size_t g = 0; g < G.order(); ++g) {
      auto s = sg.act(G.inv(g), x);
      if (in_a[s] == kNone) continue;
      kd.chi[{x, g}] = {oc.p[x], oc.a[g][s]};
    }
  // b'(h,y) = g2^{-1} b(h,y) g1 for y in B_{g1}, h.y in B_{g2}
  std::map<std::size_t, std::size_t> phi_inv;
  for (auto x : kd.A) phi_inv[oc.p[x]] = x;
  CheckReport r = kd.check(sg, sh);
  for (auto y : kd.B)
    for (std::size_t h = 0; h < H.order(); ++h) {
      auto hy = sh.act(h, y);
      if (block_of_y[hy] == kNone) continue;
      auto bp = G.mul(G.mul(G.inv(block_of_y[hy]), oc.b[h][y]), block_of_y[y]);
      kd.b_prime[{h, y}] = bp;
      if (r.ok && phi_inv.at(hy) != sg.act(bp, phi_inv.at(y)))
        r.fail("phi^{-1}(h.y) != b'(h,y).phi^{-1}(y)", {{"h", H.format(h)}, {"y", y}});
    }
  require(r);
  return kd;
}

struct CoupleFromKakutani {
  OrbitCouple couple;
  std::vector<std::size_t> x_block; // gamma with x in X_gamma
  std::vector<std::size_t> y_block; // eta with y in Y_eta
};

/// X_gamma in gamma.A and Y_eta in eta.B chosen greedily in enumeration order,
/// p(x) = phi(gamma^{-1}.x), q(y) = phi^{-1}(eta^{-1}.y).
inline auto kakutani_to_couple(const FiniteSystem &sg, const FiniteSystem &sh, const KakutaniData &kd)
    -> CoupleFromKakutani {
  require(sg.check());
  require(sh.check());
  require(kd.check(sg, sh));
  const auto &G = *sg.group;
  const auto &H = *sh.group;
  auto phi = kd.phi(sg.group);
  std::map<std::size_t, std::size_t> phi_inv;
  for (const auto &[x, y] : phi) phi_inv.emplace(y, x);
  // a'(g, x) for x, g.x in A; b'(h, y) for y, h.y in B
  auto a_prime = [&](std::size_t g, std::size_t x) { return kd.chi.at({sg.act(g, x), g}).second; };
  std::map<ArrowKey, std::size_t> chi_inv_group; // (range y, h) -> g
  for (const auto &[k, v] : kd.chi) chi_inv_group[v] = k.second;
  auto b_prime = [&](std::size_t h, std::size_t y) { return chi_inv_group.at({sh.act(h, y), h}); };

  auto blocks = [](const FiniteSystem &s, const std::vector<std::size_t> &base) {
    std::vector<std::size_t> block(s.size(), kNone);
    for (std::size_t gamma = 0; gamma < s.group->order(); ++gamma)
      for (auto x : base) {
        auto z = s.act(gamma, x);
        if (block[z] == kNone) block[z] = gamma;
      }
    return block;
  };
  CoupleFromKakutani out;
  out.x_block = blocks(sg, kd.A);
  out.y_block = blocks(sh, kd.B);
  auto &oc = out.couple;
  oc.sys_g = sg;
  oc.sys_h = sh;
  const auto nx = sg.size(), ny = sh.size();
  oc.p.resize(nx);
  oc.g_map.resize(nx);
  for (std::size_t x = 0; x < nx; ++x) {
    auto gamma = out.x_block[x];
    oc.p[x] = phi.at(sg.act(G.inv(gamma), x));
    oc.g_map[x] = G.inv(gamma);
  }
  oc.q.resize(ny);
  oc.h_map.resize(ny);
  for (std::size_t y = 0; y < ny; ++y) {
    auto eta = out.y_block[y];
    oc.q[y] = phi_inv.at(sh.act(H.inv(eta), y));
    // q(y) lies in A = X_e, so p(q(y)) = eta^{-1}.y
    oc.h_map[y] = H.inv(eta);
  }
  oc.a.assign(G.order(), std::vector<std::size_t>(nx));
  for (std::size_t g = 0; g < G.order(); ++g)
    for (std::size_t x = 0; x < nx; ++x) {
      auto g1 = out.x_block[x];
      auto g2 = out.x_block[sg.act(g, x)];
      oc.a[g][x] = a_prime(G.mul(G.mul(G.inv(g2), g), g1), sg.act(G.inv(g1), x));
    }
  oc.b.assign(H.order(), std::vector<std::size_t>(ny));
  for (std::size_t h = 0; h < H.order(); ++h)
    for (std::size_t y = 0; y < ny; ++y) {
      auto e1 = out.y_block[y];
      auto e2 = out.y_block[sh.act(h, y)];
      oc.b[h][y] = b_prime(H.mul(H.mul(H.inv(e2), h), e1), sh.act(H.inv(e1), y));
    }
  require(oc.check());
  return out;
}

// ---------------------------------------------------------------------------
// Morita invariance

struct MoritaReport {
  std::vector<HomologyResult> whole_x, whole_y, restricted_a, restricted_b;
  bool ok = false;

  [[nodiscard]] auto to_json() const -> nlohmann::ordered_json {
    auto list = [](const std::vector<HomologyResult> &v) {
      auto a = nlohmann::ordered_json::array();
      for (const auto &h : v) a.push_back(h.to_json());
      return a;
    };
    nlohmann::ordered_json j;
    j["verdict"] = ok ? "OK" : "MISMATCH";
    j["X"] = list(whole_x);
    j["Y"] = list(whole_y);
    j["X|A"] = list(restricted_a);
    j["Y|B"] = list(restricted_b);
    return j;
  }
};

inline auto morita_invariance_check(const FiniteSystem &sg, const FiniteSystem &sh, const KakutaniData &kd,
                                    const Ring &ring, int rank, int n_max) -> MoritaReport {
  if (auto r = kd.check(sg, sh); !r.ok) throw InvariantViolation(r);
  MoritaReport rep;
  auto gx = transformation_groupoid(sg);
  auto gy = transformation_groupoid(sh);
  auto ga = transformation_groupoid(sg, kd.A);
  auto gb = transformation_groupoid(sh, kd.B);
  rep.ok = true;
  for (int n = 0; n <= n_max; ++n) {
    rep.whole_x.push_back(groupoid_homology_finite(gx, ring, rank, n));
    rep.whole_y.push_back(groupoid_homology_finite(gy, ring, rank, n));
    rep.restricted_a.push_back(groupoid_homology_finite(ga, ring, rank, n));
    rep.restricted_b.push_back(groupoid_homology_finite(gb, ring, rank, n));
    const auto &h = rep.whole_x.back();
    rep.ok = rep.ok && h == rep.whole_y.back() && h == rep.restricted_a.back() && h == rep.restricted_b.back();
  }
  return rep;
}

// ---------------------------------------------------------------------------
// mutation sweeps

struct MutationSweep {
  std::size_t tried = 0, detected = 0;
  std::vector<std::string> undetected;

  [[nodiscard]] auto all_detected() const -> bool { return tried == detected; }
  [[nodiscard]] auto to_json() const -> nlohmann::ordered_json {
    return {{"tried", tried}, {"detected", detected}, {"undetected", undetected}};
  }
};

namespace detail {
template <class Object, class Check>
void sweep_table(MutationSweep &sw, const Object &base, ActionTable Object::*table, std::size_t range,
                 const std::string &name, const Check &check) {
  if (range < 2) return;
  const auto &t = base.*table;
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = 0; j < t[i].size(); ++j) {
      Object m = base;
      (m.*table)[i][j] = (t[i][j] + 1) % range;
      ++sw.tried;
      if (!check(m)) ++sw.detected;
      else sw.undetected.push_back(name + "[" + std::to_string(i) + "][" + std::to_string(j) + "]");
    }
}

template <class Object, class Check>
void sweep_map(MutationSweep &sw, const Object &base, std::vector<std::size_t> Object::*map, std::size_t range,
               const std::string &name, const Check &check) {
  if (range < 2) return;
  const auto &t = base.*map;
  for (std::size_t i = 0; i < t.size(); ++i) {
    Object m = base;
    (m.*map)[i] = (t[i] + 1) % range;
    ++sw.tried;
    if (!check(m)) ++sw.detected;
    else sw.undetected.push_back(name + "[" + std::to_string(i) + "]");
  }
}
} // namespace detail

/// Every single-entry change of every table (and every single membership flip of
/// a fundamental domain) must make the coupling invalid.
inline auto mutation_sweep(const Coupling &c) -> MutationSweep {
  MutationSweep sw;
  auto valid = [](const Coupling &m) { return m.check().ok; };
  detail::sweep_table(sw, c, &Coupling::left, c.size(), "left", valid);
  detail::sweep_table(sw, c, &Coupling::right, c.size(), "right", valid);
  for (auto dom : {&Coupling::dom_x, &Coupling::dom_y})
    for (std::size_t w = 0; w < c.size(); ++w) {
      Coupling m = c;
      auto &d = m.*dom;
      auto it = std::find(d.begin(), d.end(), w);
      if (it == d.end()) d.push_back(w);
      else d.erase(it);
      d = detail::sorted_unique(d);
      ++sw.tried;
      if (!valid(m)) ++sw.detected;
      else sw.undetected.push_back(std::string(dom == &Coupling::dom_x ? "dom_x" : "dom_y") + " flip " + std::to_string(w));
    }
  return sw;
}

inline auto mutation_sweep(const OrbitCouple &oc) -> MutationSweep {
  MutationSweep sw;
  auto valid = [](const OrbitCouple &m) { return m.check().ok; };
  const auto nx = oc.sys_g.size(), ny = oc.sys_h.size();
  const auto ng = oc.sys_g.group->order(), nh = oc.sys_h.group->order();
  detail::sweep_map(sw, oc, &OrbitCouple::p, ny, "p", valid);
  detail::sweep_map(sw, oc, &OrbitCouple::q, nx, "q", valid);
  detail::sweep_map(sw, oc, &OrbitCouple::g_map, ng, "g_map", valid);
  detail::sweep_map(sw, oc, &OrbitCouple::h_map, nh, "h_map", valid);
  detail::sweep_table(sw, oc, &OrbitCouple::a, nh, "a", valid);
  detail::sweep_table(sw, oc, &OrbitCouple::b, ng, "b", valid);
  // actions of the two systems
  for (int side = 0; side < 2; ++side) {
    const auto &sys = side == 0 ? oc.sys_g : oc.sys_h;
    if (sys.size() < 2) continue;
    for (std::size_t g = 0; g < sys.action.size(); ++g)
      for (std::size_t x = 0; x < sys.size(); ++x) {
        OrbitCouple m = oc;
        auto &t = side == 0 ? m.sys_g.action : m.sys_h.action;
        t[g][x] = (t[g][x] + 1) % sys.size();
        ++sw.tried;
        if (!valid(m)) ++sw.detected;
        else sw.undetected.push_back(std::string(side == 0 ? "G-action" : "H-action") + "[" + std::to_string(g) + "][" + std::to_string(x) + "]");
      }
  }
  return sw;
}

} // namespace coarse

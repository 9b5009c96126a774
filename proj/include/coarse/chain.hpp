#pragma once

#include "coarse_map.hpp"
#include "fin_sup_fun.hpp"
#include "group.hpp"
#include "ring.hpp"

#include <nlohmann/json.hpp>

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace coarse {

/// Groupoid-form chain: finitely many slices g -> (x -> value), i.e. a finitely
/// supported function on G x G^n. The point (x, g_1..g_n) stands for the
/// composable string (x_1, g_1), ..., (x_n, g_n) with x_{i+1} = g_i^{-1} x_i.
class Chain {
public:
  Chain() = default;
  Chain(Group group, Ring ring, int rank, int degree)
      : group_(std::move(group)), ring_(ring), rank_(rank), degree_(degree) {
    if (degree < 0) throw ConfigError("chain degree must be >= 0");
  }

  [[nodiscard]] auto group() const -> const Group & { return group_; }
  [[nodiscard]] auto ring() const -> const Ring & { return ring_; }
  [[nodiscard]] auto rank() const -> int { return rank_; }
  [[nodiscard]] auto degree() const -> int { return degree_; }
  [[nodiscard]] auto slices() const -> const std::map<Tuple, FinSupFun> & { return slices_; }
  [[nodiscard]] auto is_zero() const -> bool { return slices_.empty(); }

  /// Number of support points.
  [[nodiscard]] auto size() const -> std::size_t {
    std::size_t n = 0;
    for (const auto &[g, f] : slices_) n += f.size();
    return n;
  }

  [[nodiscard]] auto empty_like(int degree) const -> Chain { return Chain(group_, ring_, rank_, degree); }

  void add(const GroupElement &x, const Tuple &g, const Vec &v, const Scalar &factor = Scalar(1)) {
    if (static_cast<int>(g.size()) != degree_) throw PreconditionFailed("tuple length does not match chain degree");
    auto it = slices_.find(g);
    if (it == slices_.end()) it = slices_.emplace(g, FinSupFun(group_, ring_, rank_)).first;
    it->second.add(x, v, factor);
    if (it->second.is_zero()) slices_.erase(it);
  }

  void add_slice(const Tuple &g, const FinSupFun &f, const Scalar &factor = Scalar(1)) {
    for (const auto &[x, v] : f.support()) add(x, g, v, factor);
  }

  [[nodiscard]] auto at(const GroupElement &x, const Tuple &g) const -> Vec {
    auto it = slices_.find(g);
    return it == slices_.end() ? zero_vec(rank_) : it->second.at(x);
  }

  [[nodiscard]] auto slice(const Tuple &g) const -> FinSupFun {
    auto it = slices_.find(g);
    return it == slices_.end() ? FinSupFun(group_, ring_, rank_) : it->second;
  }

  /// Degree-0 chains are functions on G.
  [[nodiscard]] auto as_function() const -> FinSupFun {
    if (degree_ != 0) throw PreconditionFailed("as_function needs a degree-0 chain");
    return slice({});
  }
  static auto from_function(const FinSupFun &f) -> Chain {
    Chain c(f.group(), f.ring(), f.rank(), 0);
    c.add_slice({}, f);
    return c;
  }

  /// Unit chain v * [x, g].
  static auto unit(const Group &G, const Ring &ring, int rank, const GroupElement &x, const Tuple &g,
                   std::optional<Vec> v = std::nullopt) -> Chain {
    Chain c(G, ring, rank, static_cast<int>(g.size()));
    c.add(x, g, v ? *v : unit_vec(rank, 0));
    return c;
  }

  template <class Fn> void for_each_point(Fn &&fn) const {
    for (const auto &[g, f] : slices_)
      for (const auto &[x, v] : f.support()) fn(x, g, v);
  }

  auto operator+=(const Chain &o) -> Chain & {
    check_compatible(o);
    o.for_each_point([&](const auto &x, const auto &g, const auto &v) { add(x, g, v); });
    return *this;
  }
  auto operator-=(const Chain &o) -> Chain & {
    check_compatible(o);
    o.for_each_point([&](const auto &x, const auto &g, const auto &v) { add(x, g, v, Scalar(-1)); });
    return *this;
  }
  friend auto operator+(Chain a, const Chain &b) -> Chain { return a += b; }
  friend auto operator-(Chain a, const Chain &b) -> Chain { return a -= b; }
  [[nodiscard]] auto times(const Scalar &s) const -> Chain {
    Chain out = empty_like(degree_);
    for_each_point([&](const auto &x, const auto &g, const auto &v) { out.add(x, g, v, s); });
    return out;
  }

  auto operator==(const Chain &o) const -> bool {
    return group_ == o.group_ && ring_ == o.ring_ && rank_ == o.rank_ && degree_ == o.degree_ &&
           slices_ == o.slices_;
  }

  void check_compatible(const Chain &o) const {
    if (!(group_ == o.group_)) throw GroupMismatch("chains live on different groups");
    if (!(ring_ == o.ring_) || rank_ != o.rank_) throw GroupMismatch("chains have different coefficients");
    if (degree_ != o.degree_) throw PreconditionFailed("chains have different degrees");
  }

  /// Largest word length among the points x_1..x_{n+1} and the tuple entries.
  [[nodiscard]] auto reach() const -> std::int64_t {
    std::int64_t r = 0;
    for_each_point([&](const GroupElement &x, const Tuple &g, const Vec &) {
      auto xi = x;
      r = std::max(r, group_.word_length(xi));
      for (const auto &gi : g) {
        r = std::max(r, group_.word_length(gi));
        xi = group_.mul(group_.inv(gi), xi);
        r = std::max(r, group_.word_length(xi));
      }
    });
    return r;
  }

  /// {"degree": n, "slices": [[[g...], FinSupFun], ...]}
  [[nodiscard]] auto to_json() const -> nlohmann::ordered_json {
    nlohmann::ordered_json j;
    j["degree"] = degree_;
    auto arr = nlohmann::ordered_json::array();
    for (const auto &[g, f] : slices_) {
      auto tuple = nlohmann::ordered_json::array();
      for (const auto &gi : g) tuple.push_back(nlohmann::ordered_json(group_.element_to_json(gi)));
      arr.push_back(nlohmann::ordered_json::array({tuple, f.to_json()}));
    }
    j["slices"] = arr;
    return j;
  }

  static auto from_json(const Group &G, const nlohmann::json &j) -> Chain {
    int degree = j.at("degree").get<int>();
    const auto &sl = j.at("slices");
    Ring ring = Ring::integers();
    int rank = 1;
    if (!sl.empty()) {
      ring = Ring::parse(sl[0][1].value("ring", std::string("Z")));
      rank = sl[0][1].value("rank", 1);
    }
    Chain c(G, ring, rank, degree);
    for (const auto &e : sl) {
      Tuple g;
      for (const auto &gi : e.at(0)) g.push_back(G.element_from_json(gi));
      c.add_slice(g, FinSupFun::from_json(G, e.at(1)));
    }
    return c;
  }

  [[nodiscard]] auto format() const -> std::string {
    if (is_zero()) return "0";
    std::string s;
    for_each_point([&](const GroupElement &x, const Tuple &g, const Vec &v) {
      if (!s.empty()) s += " + ";
      s += v[0].get_str();
      if (rank_ > 1) s += "..";
      s += "[" + group_.format(x) + ";";
      for (std::size_t i = 0; i < g.size(); ++i) s += (i ? "," : "") + group_.format(g[i]);
      s += "]";
    });
    return s;
  }

private:
  Group group_;
  Ring ring_;
  int rank_ = 1;
  int degree_ = 0;
  std::map<Tuple, FinSupFun> slices_;
};

/// x_1 = x, x_{i+1} = g_i^{-1} x_i (n + 1 points).
inline auto vertex_path(const Group &G, const GroupElement &x, const Tuple &g) -> std::vector<GroupElement> {
  std::vector<GroupElement> xs{x};
  xs.reserve(g.size() + 1);
  for (const auto &gi : g) xs.push_back(G.mul(G.inv(gi), xs.back()));
  return xs;
}

// ---------------------------------------------------------------------------
// groupoid boundary

/// d_n = sum (-1)^i (delta_n^(i))_*, faces on the composable string.
inline auto boundary(const Chain &c) -> Chain {
  const int n = c.degree();
  if (n < 1) throw PreconditionFailed("boundary needs degree >= 1");
  const auto &G = c.group();
  Chain out = c.empty_like(n - 1);
  c.for_each_point([&](const GroupElement &x, const Tuple &g, const Vec &v) {
    if (n == 1) {
      out.add(G.mul(G.inv(g[0]), x), {}, v);      // s
      out.add(x, {}, v, Scalar(-1));              // r
      return;
    }
    // i = 0: drop the first arrow, base point moves to its source
    out.add(G.mul(G.inv(g[0]), x), Tuple(g.begin() + 1, g.end()), v);
    for (int i = 1; i < n; ++i) {
      Tuple merged;
      merged.reserve(n - 1);
      for (int k = 0; k < n; ++k) {
        if (k == i - 1) {
          merged.push_back(G.mul(g[k], g[k + 1]));
          ++k;
        } else {
          merged.push_back(g[k]);
        }
      }
      out.add(x, merged, v, Scalar(i % 2 == 0 ? 1 : -1));
    }
    out.add(x, Tuple(g.begin(), g.end() - 1), v, Scalar(n % 2 == 0 ? 1 : -1));
  });
  return out;
}

// ---------------------------------------------------------------------------
// bar form and chi

/// Bar-resolution chain: finitely many g -> f(g) in RG^k.
struct BarChain {
  Group group;
  Ring ring;
  int rank = 1;
  int degree = 0;
  std::map<Tuple, FinSupFun> values;

  void add(const Tuple &g, const FinSupFun &f, const Scalar &factor = Scalar(1)) {
    auto it = values.find(g);
    if (it == values.end()) it = values.emplace(g, FinSupFun(group, ring, rank)).first;
    it->second.add_scaled(f, factor);
    if (it->second.is_zero()) values.erase(it);
  }
  auto operator==(const BarChain &o) const -> bool {
    return group == o.group && ring == o.ring && rank == o.rank && degree == o.degree && values == o.values;
  }
};

/// Bar differential: the first face sums g_0^{-1}.f(g_0, ...), inner faces split
/// g_i = g gbar, the last face forgets g_n. Each face is written as a sum over
/// the support, i.e. every (g_0, ...) contributes to exactly one target tuple.
inline auto bar_boundary(const BarChain &c) -> BarChain {
  const int n = c.degree;
  if (n < 1) throw PreconditionFailed("bar boundary needs degree >= 1");
  const auto &G = c.group;
  BarChain out{G, c.ring, c.rank, n - 1, {}};
  for (const auto &[g, f] : c.values) {
    out.add(Tuple(g.begin() + 1, g.end()), translate(G.inv(g[0]), f));
    for (int i = 1; i < n; ++i) {
      Tuple t(g.begin(), g.begin() + (i - 1));
      t.push_back(G.mul(g[i - 1], g[i]));
      t.insert(t.end(), g.begin() + (i + 1), g.end());
      out.add(t, f, Scalar(i % 2 == 0 ? 1 : -1));
    }
    out.add(Tuple(g.begin(), g.end() - 1), f, Scalar(n % 2 == 0 ? 1 : -1));
  }
  return out;
}

/// chi(f)(x, g) = f(g)(x)
inline auto chi(const BarChain &b) -> Chain {
  Chain c(b.group, b.ring, b.rank, b.degree);
  for (const auto &[g, f] : b.values) c.add_slice(g, f);
  return c;
}

inline auto chi_inv(const Chain &c) -> BarChain {
  BarChain b{c.group(), c.ring(), c.rank(), c.degree(), {}};
  for (const auto &[g, f] : c.slices()) b.values.emplace(g, f);
  return b;
}

// ---------------------------------------------------------------------------
// maps of composable strings

using PointMap = std::function<GroupElement(const GroupElement &)>;

/// phi^n(x, g) = (phi(x), h) with h_i = phi(x_i) phi(x_{i+1})^{-1}.
inline auto push_point(const Group &G, const Group &H, const PointMap &phi, const GroupElement &x, const Tuple &g)
    -> std::pair<GroupElement, Tuple> {
  auto xs = vertex_path(G, x, g);
  std::vector<GroupElement> ys;
  ys.reserve(xs.size());
  for (const auto &xi : xs) ys.push_back(phi(xi));
  Tuple h;
  h.reserve(g.size());
  for (std::size_t i = 0; i + 1 < ys.size(); ++i) h.push_back(H.div(ys[i], ys[i + 1]));
  return {ys.front(), std::move(h)};
}

inline auto push_chain(const Group &H, const PointMap &phi, const Chain &c) -> Chain {
  Chain out(H, c.ring(), c.rank(), c.degree());
  c.for_each_point([&](const GroupElement &x, const Tuple &g, const Vec &v) {
    auto [y, h] = push_point(c.group(), H, phi, x, g);
    out.add(y, h, v);
  });
  return out;
}

/// D_n(phi) = (phi^n)_*
inline auto induced_chain_map(const CoarseMap &phi, const Chain &c) -> Chain {
  if (!(c.group() == phi.source())) throw GroupMismatch("induced_chain_map: chain is not on the source of " + phi.name());
  return push_chain(phi.target(), [&phi](const GroupElement &x) { return phi(x); }, c);
}

/// Slice formula: (phi^n)_*(f)|_h = phi_*(1_A . f|_g), assembled slice by slice.
inline auto induced_chain_map_by_slices(const CoarseMap &phi, const Chain &c) -> Chain {
  const auto &G = c.group();
  const auto &H = phi.target();
  Chain out(H, c.ring(), c.rank(), c.degree());
  for (const auto &[g, f] : c.slices()) {
    // split the slice support by the tuple h it is sent to
    std::map<Tuple, std::set<GroupElement>> pieces;
    for (const auto &[x, v] : f.support()) {
      auto xs = vertex_path(G, x, g);
      Tuple h;
      for (std::size_t i = 0; i + 1 < xs.size(); ++i) h.push_back(H.div(phi(xs[i]), phi(xs[i + 1])));
      pieces[h].insert(x);
    }
    for (const auto &[h, a] : pieces) out.add_slice(h, pushforward(phi, restrict(subset_finite(a, "A"), f)));
  }
  return out;
}

/// D_n(omega); every vertex of every pushed string must lie in the prefix ball.
inline auto omega_chain_map(const OmegaResult &om, const Chain &c) -> Chain {
  if (!(c.group() == om.omega.source())) throw GroupMismatch("omega_chain_map: chain is not on the target of phi");
  if (c.reach() > om.prefix)
    throw PreconditionFailed("prefix too short: chain reaches word length " + std::to_string(c.reach()) + " > " +
                             std::to_string(om.prefix));
  return push_chain(om.omega.target(), [&om](const GroupElement &y) { return om.omega(y); }, c);
}

// ---------------------------------------------------------------------------
// homotopies

/// kappa^(h)(x, g) for first ~ second: arrows of first before position h, then
/// theta(x_h) = (first(x_h), first(x_h) second(x_h)^{-1}), then arrows of second.
inline auto homotopy_point(const Group &G, const Group &H, const PointMap &first, const PointMap &second,
                           const GroupElement &x, const Tuple &g, std::size_t h) -> std::pair<GroupElement, Tuple> {
  auto xs = vertex_path(G, x, g);
  Tuple out;
  out.reserve(g.size() + 1);
  for (std::size_t i = 0; i + 1 < h; ++i) out.push_back(H.div(first(xs[i]), first(xs[i + 1])));
  out.push_back(H.div(first(xs[h - 1]), second(xs[h - 1])));
  for (std::size_t i = h - 1; i + 1 < xs.size(); ++i) out.push_back(H.div(second(xs[i]), second(xs[i + 1])));
  return {first(xs.front()), std::move(out)};
}

/// k_n = sum_{h=1}^{n+1} (-1)^{h+1} (kappa_n^(h))_*. Satisfies
/// d k + k d = D(second) - D(first).
inline auto homotopy_chain(const Group &H, const PointMap &first, const PointMap &second, const Chain &c) -> Chain {
  Chain out(H, c.ring(), c.rank(), c.degree() + 1);
  const auto n = static_cast<std::size_t>(c.degree());
  c.for_each_point([&](const GroupElement &x, const Tuple &g, const Vec &v) {
    for (std::size_t h = 1; h <= n + 1; ++h) {
      auto [y, t] = homotopy_point(c.group(), H, first, second, x, g, h);
      out.add(y, t, v, Scalar(h % 2 == 1 ? 1 : -1));
    }
  });
  return out;
}

/// Chain homotopy between D(phi) and D(psi) for close maps phi ~ psi.
inline auto homotopy_k(const CoarseMap &phi, const CoarseMap &psi, const Chain &c) -> Chain {
  if (!(phi.source() == psi.source()) || !(phi.target() == psi.target()))
    throw GroupMismatch("homotopy_k: maps differ in source or target");
  if (!(c.group() == phi.source())) throw GroupMismatch("homotopy_k: chain is not on the source");
  return homotopy_chain(phi.target(), [&phi](const GroupElement &x) { return phi(x); },
                        [&psi](const GroupElement &x) { return psi(x); }, c);
}

/// Chain homotopy between id and D(phi o omega) on the target.
inline auto homotopy_l(const CoarseMap &phi, const OmegaResult &om, const Chain &c) -> Chain {
  const auto &H = phi.target();
  if (!(c.group() == H)) throw GroupMismatch("homotopy_l: chain is not on the target of phi");
  if (c.reach() > om.prefix)
    throw PreconditionFailed("prefix too short: chain reaches word length " + std::to_string(c.reach()) + " > " +
                             std::to_string(om.prefix));
  return homotopy_chain(H, [](const GroupElement &y) { return y; },
                        [&phi, &om](const GroupElement &y) { return phi(om.omega(y)); }, c);
}

} // namespace coarse

#pragma once

#include "chain.hpp"
#include "cochain.hpp"
#include "coarse_map.hpp"
#include "dynamics.hpp"
#include "dynamics_gallery.hpp"
#include "groupoid.hpp"
#include "homology.hpp"
#include "map_gallery.hpp"
#include "random.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace coarse {

inline constexpr const char *kVersion = "1.0.0";

struct CatalogEntry {
  std::string name;
  std::string description;
};

inline auto experiment_catalog() -> std::vector<CatalogEntry> {
  return {
      {"coarse-check", "coarse-map and coarse-embedding checks of one map on a ball"},
      {"omega-build", "coarse inverse omega of a map, its block partition and difference set"},
      {"chain-suite", "boundary o boundary = 0, chi naturality and induced-map laws on seeded random chains"},
      {"homotopy-suite", "chain and cochain homotopy identities for close maps and for phi o omega"},
      {"homology-finite", "homology of a finite group (and induced maps) against closed-form oracles"},
      {"window-boundary", "search for a bounding chain inside a finite window"},
      {"dynamics-roundtrip", "coupling <-> orbit couple round trip, Kakutani data and mutation detection"},
      {"morita-check", "groupoid homology of two systems and of their Kakutani restrictions"},
  };
}

/// Catalog of groups, maps, scenarios and experiments ("all" or one section).
inline auto list_catalog(const std::string &section = "all") -> nlohmann::ordered_json {
  nlohmann::ordered_json out;
  auto want = [&](const char *s) { return section == "all" || section == s; };
  if (!want("groups") && !want("maps") && !want("scenarios") && !want("experiments"))
    throw ConfigError("unknown list section '" + section + "' (groups, maps, scenarios, experiments)");
  if (want("groups")) {
    auto a = nlohmann::ordered_json::array();
    for (const auto &g : group_catalog()) a.push_back({{"name", g.name}, {"description", g.description}});
    out["groups"] = a;
  }
  if (want("maps")) {
    auto a = nlohmann::ordered_json::array();
    for (const auto &m : map_catalog())
      a.push_back({{"name", m.name}, {"source", m.source}, {"target", m.target}, {"description", m.description}});
    out["maps"] = a;
  }
  if (want("scenarios")) {
    auto a = nlohmann::ordered_json::array();
    for (const auto &s : scenario_catalog()) a.push_back({{"name", s.name}, {"description", s.description}});
    out["scenarios"] = a;
  }
  if (want("experiments")) {
    auto a = nlohmann::ordered_json::array();
    for (const auto &e : experiment_catalog()) a.push_back({{"name", e.name}, {"description", e.description}});
    out["experiments"] = a;
  }
  return out;
}

/// Finished run. `body` is deterministic for a given config; timing is kept apart.
struct Report {
  nlohmann::ordered_json body;
  double seconds = 0;

  [[nodiscard]] auto passed() const -> bool { return body.at("passed").get<bool>(); }
  [[nodiscard]] auto to_json() const -> nlohmann::ordered_json {
    auto j = body;
    j["timing"] = {{"seconds", seconds}};
    return j;
  }
};

namespace detail {

/// Reads config fields, records the resolved value of each in the echo and
/// rejects fields nobody asked for.
class ConfigReader {
public:
  explicit ConfigReader(const nlohmann::json &j) : j_(j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
  }

  [[nodiscard]] auto has(const std::string &key) const -> bool { return j_.contains(key); }

  template <class T> auto get(const std::string &key, T fallback) -> T {
    used_.insert(key);
    T v = std::move(fallback);
    if (j_.contains(key)) {
      try {
        v = j_.at(key).get<T>();
      } catch (const nlohmann::json::exception &e) {
        throw ConfigError("config field '" + key + "': " + e.what());
      }
    }
    echo_[key] = v;
    return v;
  }

  /// Raw JSON value, echoed as given.
  auto raw(const std::string &key, const nlohmann::json &fallback) -> nlohmann::json {
    used_.insert(key);
    auto v = j_.contains(key) ? j_.at(key) : fallback;
    echo_[key] = nlohmann::ordered_json(v);
    return v;
  }

  /// Optional field; absent ones are not echoed.
  auto optional(const std::string &key) -> std::optional<nlohmann::json> {
    used_.insert(key);
    if (!j_.contains(key)) return std::nullopt;
    echo_[key] = nlohmann::ordered_json(j_.at(key));
    return std::optional<nlohmann::json>(std::in_place, j_.at(key));
  }

  void echo(const std::string &key, nlohmann::ordered_json v) { echo_[key] = std::move(v); }

  void finish(const std::string &experiment) const {
    for (const auto &[k, v] : j_.items())
      if (!used_.contains(k)) throw ConfigError("unknown config field '" + k + "' for experiment " + experiment);
  }

  [[nodiscard]] auto echo() const -> const nlohmann::ordered_json & { return echo_; }

private:
  const nlohmann::json &j_;
  std::set<std::string> used_;
  nlohmann::ordered_json echo_ = nlohmann::ordered_json::object();
};

struct Context {
  ConfigReader cfg;
  std::string experiment;
  std::uint64_t seed = 1;
  std::int64_t max_radius = 100;
  int max_degree = 4;
  nlohmann::ordered_json verdicts = nlohmann::ordered_json::object();
  nlohmann::ordered_json witnesses = nlohmann::ordered_json::object();
  nlohmann::ordered_json results = nlohmann::ordered_json::object();

  explicit Context(const nlohmann::json &j) : cfg(j) {}

  void verdict(const std::string &name, bool ok) { verdicts[name] = ok ? "pass" : "fail"; }
  void witness(const std::string &name, nlohmann::ordered_json w) { witnesses[name] = std::move(w); }

  auto count(const std::string &key, std::int64_t fallback) -> std::size_t {
    auto v = cfg.get<std::int64_t>(key, fallback);
    if (v <= 0) throw ConfigError("config field '" + key + "' must be positive");
    return static_cast<std::size_t>(v);
  }
  /// Radius parameter: defaults are clamped to max_radius, explicit values above it are refused.
  auto radius(const std::string &key, std::int64_t fallback) -> std::int64_t {
    bool given = cfg.has(key);
    auto v = cfg.get<std::int64_t>(key, std::min(fallback, max_radius));
    if (v < 0) throw ConfigError("config field '" + key + "' must be non-negative");
    if (given && v > max_radius)
      throw ResourceLimit(key + " = " + std::to_string(v) + " exceeds max_radius = " + std::to_string(max_radius));
    return v;
  }
  auto degree(const std::string &key, int fallback) -> int {
    bool given = cfg.has(key);
    auto v = cfg.get<int>(key, std::min(fallback, max_degree));
    if (v < 0) throw ConfigError("config field '" + key + "' must be non-negative");
    if (given && v > max_degree)
      throw ResourceLimit(key + " = " + std::to_string(v) + " exceeds max_degree = " + std::to_string(max_degree));
    return v;
  }
  auto names(const std::string &key, std::vector<std::string> fallback) -> std::vector<std::string> {
    auto v = cfg.get<std::vector<std::string>>(key, std::move(fallback));
    if (v.empty()) throw ConfigError("config field '" + key + "' must not be empty");
    return v;
  }
};

/// Counts of one law over many samples, keeping the first counterexample.
struct Tally {
  std::size_t checked = 0, failed = 0;
  nlohmann::ordered_json first_failure;

  template <class Witness> void record(bool ok, Witness &&make) {
    ++checked;
    if (ok) return;
    if (failed++ == 0) first_failure = make();
  }
  [[nodiscard]] auto ok() const -> bool { return failed == 0 && checked > 0; }
  [[nodiscard]] auto to_json() const -> nlohmann::ordered_json {
    nlohmann::ordered_json j;
    j["checked"] = checked;
    j["failed"] = failed;
    return j;
  }
  void report(Context &ctx, const std::string &name) const {
    ctx.results[name] = to_json();
    ctx.verdict(name, ok());
    if (failed > 0) ctx.witness(name, first_failure);
  }
};

inline auto map_by_config(const nlohmann::json &j) -> CoarseMap {
  if (j.is_string()) return gallery_map(j.get<std::string>());
  if (j.is_object()) return map_from_config(j);
  throw ConfigError("map must be a gallery name or a table object");
}

inline auto ring_list(const std::vector<std::string> &names) -> std::vector<Ring> {
  std::vector<Ring> out;
  for (const auto &n : names) out.push_back(Ring::parse(n));
  return out;
}

/// First `count` points of G x G^n: tuple entries from ball(g_radius), base
/// points by growing radius (capped at x_cap).
inline auto enumerate_points(const Group &G, int n, std::size_t count, std::int64_t g_radius = 2,
                             std::int64_t x_cap = 60) -> std::vector<std::pair<GroupElement, Tuple>> {
  const auto gs = G.ball(g_radius);
  std::size_t per_x = 1;
  for (int i = 0; i < n; ++i) per_x *= gs.size();
  std::int64_t r = 0;
  while (r < x_cap && (G.is_finite() ? false : G.ball(r).size() * per_x < count)) ++r;
  if (G.is_finite()) r = x_cap;
  std::vector<std::pair<GroupElement, Tuple>> out;
  for (const auto &x : G.ball(r)) {
    std::vector<std::size_t> digit(static_cast<std::size_t>(n), 0);
    for (std::size_t k = 0; k < per_x; ++k) {
      Tuple g;
      for (auto d : digit) g.push_back(gs[d]);
      out.emplace_back(x, std::move(g));
      for (std::size_t i = 0; i < digit.size(); ++i) {
        if (++digit[i] < gs.size()) break;
        digit[i] = 0;
      }
    }
  }
  return out;
}

inline auto vec_json(const Vec &v) -> nlohmann::ordered_json {
  auto a = nlohmann::ordered_json::array();
  for (const auto &s : v) a.push_back(s.get_str());
  return a;
}

inline auto point_json(const Group &G, const GroupElement &x, const Tuple &g) -> nlohmann::ordered_json {
  auto t = nlohmann::ordered_json::array();
  for (const auto &gi : g) t.push_back(nlohmann::ordered_json(G.element_to_json(gi)));
  return {{"x", nlohmann::ordered_json(G.element_to_json(x))}, {"g", t}};
}

inline auto cyclic_order(const Group &G) -> std::optional<std::int64_t> {
  if (!G.is_finite()) return std::nullopt;
  FiniteIndex idx(G);
  const auto n = idx.order();
  for (std::size_t a = 0; a < n; ++a) {
    std::size_t k = 1, p = a;
    while (p != idx.identity()) {
      p = idx.mul(p, a);
      ++k;
    }
    if (k == n) return static_cast<std::int64_t>(n);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// experiments

inline void run_coarse_check(Context &ctx) {
  auto phi = map_by_config(ctx.cfg.raw("map", "z-double"));
  auto r = ctx.radius("radius", 10);
  auto fiber_limit = ctx.count("fiber_limit", 8);
  auto expect = ctx.cfg.optional("expect");
  ctx.cfg.finish(ctx.experiment);

  auto base = check_coarse_map(phi, r, fiber_limit);
  ctx.results["coarse_map"] = base.to_json(phi);
  std::string classification;
  if (base.verdict == Verdict::Falsified) {
    classification = "falsified-coarse-map";
    if (base.fiber_witness)
      ctx.witness("fiber", {{"target", nlohmann::ordered_json(phi.target().element_to_json(*base.fiber_witness))},
                            {"counts_quarter_half_full", base.fiber_witness_counts}});
  } else {
    auto emb = check_coarse_embedding(phi, r, fiber_limit);
    ctx.results["embedding"] = emb.to_json(phi);
    if (emb.verdict == Verdict::Falsified) {
      classification = "falsified-embedding";
      ctx.witness("embedding", ctx.results["embedding"]["witness"]);
    } else if (emb.verdict == Verdict::Certified) {
      classification = "certified-embedding";
    } else {
      classification = base.verdict == Verdict::Certified ? "certified-coarse-map" : "inconclusive";
    }
  }
  ctx.results["classification"] = classification;
  if (expect) ctx.verdict("classification", classification == expect->get<std::string>());
  else ctx.verdict("classification", classification.rfind("certified", 0) == 0);
}

inline void run_omega_build(Context &ctx) {
  auto phi = map_by_config(ctx.cfg.raw("map", "z-double"));
  auto prefix = ctx.radius("prefix", 50);
  auto shown = ctx.count("blocks_shown", 8);
  ctx.cfg.finish(ctx.experiment);

  auto om = omega(phi, prefix);
  const auto &G = phi.source();
  const auto &H = phi.target();
  auto blocks = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < om.partition.blocks.size() && i < shown; ++i) {
    const auto &b = om.partition.blocks[i];
    blocks.push_back({{"index", b.index},
                      {"shift", nlohmann::ordered_json(H.element_to_json(b.shift))},
                      {"members_in_ball", b.members.size()}});
  }
  ctx.results["prefix"] = prefix;
  ctx.results["block_count"] = om.partition.blocks.size();
  ctx.results["blocks"] = blocks;
  ctx.results["difference_set"] = nlohmann::ordered_json(elements_to_json(G, om.difference_set));

  // stability of omega o phi ~ id between ball(prefix/2) and ball(prefix)
  std::set<GroupElement> half;
  for (const auto &x : G.ball(prefix / 2)) half.insert(G.div(om.omega(phi(x)), x));
  std::set<GroupElement> full(om.difference_set.begin(), om.difference_set.end());
  ctx.results["difference_set_half_size"] = half.size();
  ctx.verdict("difference_set_stable", half == full);
  if (half != full) ctx.witness("difference_set_stable", {{"half", half.size()}, {"full", full.size()}});

  // phi o omega ~ id: largest displacement on the two balls
  auto reach = [&](std::int64_t r) {
    std::int64_t m = 0;
    for (const auto &y : H.ball(r)) m = std::max(m, H.word_length(H.div(phi(om.omega(y)), y)));
    return m;
  };
  ctx.results["phi_omega_displacement"] = {{"half", reach(prefix / 2)}, {"full", reach(prefix)}};

  if (phi.name() == "z-double") {
    bool ok = true;
    nlohmann::ordered_json bad;
    for (const auto &y : H.ball(prefix)) {
      auto v = y.nf[0];
      auto expected = v % 2 == 0 ? v / 2 : (v - 1) / 2;
      if (om.omega(y).nf[0] != expected) {
        ok = false;
        bad = {{"y", v}, {"omega", om.omega(y).nf[0]}, {"expected", expected}};
        break;
      }
    }
    ok = ok && om.difference_set.size() == 1 && G.is_identity(om.difference_set[0]);
    ctx.verdict("closed_form", ok);
    if (!ok) ctx.witness("closed_form", bad);
  }
}

inline void run_chain_suite(Context &ctx) {
  auto group_names = ctx.names("groups", {"Z", "Z^2", "F2", "Dinf", "Z/6"});
  auto rings = ring_list(ctx.names("rings", {"Z", "Q", "Z/5"}));
  auto max_deg = ctx.degree("degrees", 3);
  auto samples = ctx.count("samples", 200);
  auto chi_samples = ctx.count("chi_samples", 100);
  auto map_samples = ctx.count("map_samples", 50);
  auto points = ctx.count("points", 4);
  auto map_names = ctx.cfg.get<std::vector<std::string>>("maps", [] {
    std::vector<std::string> v;
    for (const auto &e : map_catalog()) v.push_back(e.name);
    return v;
  }());
  ctx.cfg.finish(ctx.experiment);

  Rng rng(ctx.seed);
  Tally dd, chi_nat, commute, functor, slices;
  for (const auto &gname : group_names) {
    auto G = named_group(gname);
    for (const auto &ring : rings)
      for (int n = 2; n <= max_deg; ++n)
        for (std::size_t s = 0; s < samples; ++s) {
          auto c = random_chain(rng, G, ring, 1, n, points);
          bool ok = boundary(boundary(c)).is_zero();
          dd.record(ok, [&] { return nlohmann::ordered_json{{"group", gname}, {"chain", c.to_json()}}; });
        }
    for (int n = 1; n <= max_deg; ++n)
      for (std::size_t s = 0; s < chi_samples; ++s) {
        const auto &ring = rings[s % rings.size()];
        auto c = random_chain(rng, G, ring, 1, n, points);
        bool ok = chi(bar_boundary(chi_inv(c))) == boundary(c);
        chi_nat.record(ok, [&] { return nlohmann::ordered_json{{"group", gname}, {"chain", c.to_json()}}; });
      }
  }

  std::vector<CoarseMap> maps;
  for (const auto &m : map_names) maps.push_back(gallery_map(m));
  const int map_deg = std::max(1, std::min(max_deg, 2));
  for (const auto &phi : maps)
    for (std::size_t s = 0; s < map_samples; ++s) {
      const auto &ring = rings[s % rings.size()];
      const int n = 1 + static_cast<int>(s % static_cast<std::size_t>(map_deg));
      auto c = random_chain(rng, phi.source(), ring, 1, n, points);
      bool ok = boundary(induced_chain_map(phi, c)) == induced_chain_map(phi, boundary(c));
      commute.record(ok, [&] { return nlohmann::ordered_json{{"map", phi.name()}, {"chain", c.to_json()}}; });
      bool same = induced_chain_map_by_slices(phi, c) == induced_chain_map(phi, c);
      slices.record(same, [&] { return nlohmann::ordered_json{{"map", phi.name()}, {"chain", c.to_json()}}; });
    }
  std::size_t pairs = 0;
  for (const auto &phi : maps)
    for (const auto &psi : maps) {
      if (!(phi.target() == psi.source())) continue;
      ++pairs;
      auto both = compose(psi, phi);
      for (std::size_t s = 0; s < map_samples; ++s) {
        const auto &ring = rings[s % rings.size()];
        const int n = static_cast<int>(s % static_cast<std::size_t>(map_deg + 1));
        auto c = random_chain(rng, phi.source(), ring, 1, n, points);
        bool ok = induced_chain_map(both, c) == induced_chain_map(psi, induced_chain_map(phi, c));
        functor.record(ok, [&] {
          return nlohmann::ordered_json{{"phi", phi.name()}, {"psi", psi.name()}, {"chain", c.to_json()}};
        });
      }
    }
  if (max_deg >= 2) dd.report(ctx, "boundary_squared_zero");
  chi_nat.report(ctx, "chi_naturality");
  commute.report(ctx, "chain_map_commutes");
  functor.report(ctx, "functoriality");
  slices.report(ctx, "slice_formula");
  ctx.results["composable_pairs"] = pairs;
}

inline void run_homotopy_suite(Context &ctx) {
  auto default_pairs = nlohmann::json::array();
  for (const auto &[a, b] : close_gallery_pairs()) default_pairs.push_back({a, b});
  auto pairs_json = ctx.cfg.raw("pairs", default_pairs);
  auto l_maps = ctx.cfg.get<std::vector<std::string>>("l_maps", {"z-double"});
  auto rings = ring_list(ctx.names("rings", {"Z", "Q", "Z/5"}));
  auto max_deg = ctx.degree("degrees", 2);
  auto samples = ctx.count("samples", 50);
  auto points = ctx.count("points", 4);
  auto cochain_points = ctx.count("cochain_points", 500);
  auto rules = ctx.names("cochain_rules", {"hashed", "word-length"});
  auto prefix = ctx.radius("prefix", 20);
  ctx.cfg.finish(ctx.experiment);

  std::vector<std::pair<CoarseMap, CoarseMap>> pairs;
  try {
    for (const auto &p : pairs_json) pairs.emplace_back(gallery_map(p.at(0)), gallery_map(p.at(1)));
  } catch (const nlohmann::json::exception &e) {
    throw ConfigError(std::string("pairs must be a list of [map, map]: ") + e.what());
  }
  ctx.results["sign"] = "d k + k d = D(psi) - D(phi) for the pair (phi, psi); d l + l d = D(phi o omega) - id";

  Rng rng(ctx.seed);
  Tally chain_k, chain_l, cochain_k, cochain_l;
  auto chain_identity = [&](Tally &t, const std::function<Chain(const Chain &)> &k,
                            const std::function<Chain(const Chain &)> &first,
                            const std::function<Chain(const Chain &)> &second, const Chain &c,
                            const std::string &label) {
    auto lhs = boundary(k(c));
    if (c.degree() >= 1) lhs += k(boundary(c));
    auto rhs = second(c);
    rhs -= first(c);
    t.record(lhs == rhs, [&] { return nlohmann::ordered_json{{"case", label}, {"chain", c.to_json()}}; });
  };
  auto cochain_identity = [&](Tally &t, const Cochain &c, const std::function<Cochain(const Cochain &)> &k,
                              const Cochain &first, const Cochain &second, const std::string &label) {
    const auto &G = first.group();
    const int n = c.degree();
    auto kd = k(coboundary(c));
    std::optional<Cochain> dk;
    if (n >= 1) dk = coboundary(k(c));
    for (const auto &[x, g] : enumerate_points(G, n, cochain_points)) {
      auto lhs = kd(x, g);
      if (dk) add_into(c.ring(), lhs, (*dk)(x, g));
      auto rhs = second(x, g);
      add_into(c.ring(), rhs, first(x, g), Scalar(-1));
      t.record(lhs == rhs, [&] {
        auto w = point_json(G, x, g);
        w["case"] = label;
        w["lhs"] = vec_json(lhs);
        w["rhs"] = vec_json(rhs);
        return w;
      });
    }
  };

  for (const auto &[phi, psi] : pairs) {
    const std::string label = phi.name() + " ~ " + psi.name();
    for (int n = 0; n <= max_deg; ++n)
      for (std::size_t s = 0; s < samples; ++s) {
        auto c = random_chain(rng, phi.source(), rings[s % rings.size()], 1, n, points);
        chain_identity(
            chain_k, [&](const Chain &x) { return homotopy_k(phi, psi, x); },
            [&](const Chain &x) { return induced_chain_map(phi, x); },
            [&](const Chain &x) { return induced_chain_map(psi, x); }, c, label);
      }
    for (const auto &rule : rules)
      for (int n = 0; n <= max_deg; ++n) {
        auto c = cochain_from_gallery(rule, phi.target(), rings[static_cast<std::size_t>(n) % rings.size()], 1, n,
                                      ctx.seed);
        cochain_identity(
            cochain_k, c, [&](const Cochain &x) { return homotopy_k_cochain(phi, psi, x); },
            induced_cochain_map(phi, c), induced_cochain_map(psi, c), label + " / " + rule);
      }
  }
  for (const auto &name : l_maps) {
    auto phi = gallery_map(name);
    auto om = omega(phi, prefix);
    auto phi_omega = compose(phi, om.omega);
    const auto &H = phi.target();
    for (int n = 0; n <= max_deg; ++n)
      for (std::size_t s = 0; s < samples; ++s) {
        auto c = random_chain(rng, H, rings[s % rings.size()], 1, n, points);
        chain_identity(
            chain_l, [&](const Chain &x) { return homotopy_l(phi, om, x); }, [](const Chain &x) { return x; },
            [&](const Chain &x) { return induced_chain_map(phi_omega, x); }, c, name);
      }
    for (const auto &rule : rules)
      for (int n = 0; n <= max_deg; ++n) {
        auto c = cochain_from_gallery(rule, H, rings[static_cast<std::size_t>(n) % rings.size()], 1, n, ctx.seed);
        cochain_identity(
            cochain_l, c, [&](const Cochain &x) { return homotopy_l_cochain(phi, om, x); }, c,
            induced_cochain_map(phi_omega, c), name + " / " + rule);
      }
  }
  chain_k.report(ctx, "chain_homotopy_k");
  chain_l.report(ctx, "chain_homotopy_l");
  cochain_k.report(ctx, "cochain_homotopy_k");
  cochain_l.report(ctx, "cochain_homotopy_l");
}

inline void run_homology_finite(Context &ctx) {
  auto map_cfg = ctx.cfg.optional("map");
  auto group_name = map_cfg ? std::string() : ctx.cfg.get<std::string>("group", "Z/2");
  auto coeffs = ctx.cfg.get<std::string>("coeffs", map_cfg ? "group-ring-Z" : "trivial-Z");
  auto top = ctx.degree("degrees", map_cfg ? 2 : 3);
  ctx.cfg.finish(ctx.experiment);
  auto m = CoefficientModule::parse(coeffs);

  if (map_cfg) {
    auto phi = map_by_config(*map_cfg);
    if (!phi.source().is_finite() || !phi.target().is_finite())
      throw ConfigError("induced maps on homology need finite groups");
    auto arr = nlohmann::ordered_json::array();
    bool all = true;
    for (int n = 0; n <= top; ++n) {
      auto res = induced_map_on_homology(phi, m, n);
      arr.push_back(res.to_json());
      if (!res.isomorphism) {
        if (all) ctx.witness("isomorphism", {{"degree", n}});
        all = false;
      }
    }
    ctx.results["induced_maps"] = arr;
    ctx.verdict("isomorphism", all);
    return;
  }

  auto G = named_group(group_name);
  if (!G.is_finite()) throw ConfigError("homology-finite needs a finite group, got " + group_name);
  FiniteIndex idx(G);
  auto cyc = cyclic_order(G);
  auto arr = nlohmann::ordered_json::array();
  bool agree = true, have_oracle = false;
  for (int n = 0; n <= top; ++n) {
    auto res = homology_finite(idx, m, n);
    auto e = res.to_json();
    e["group"] = res.format();
    std::optional<HomologyResult> oracle;
    if (m.kind == CoefficientModule::Kind::GroupRing) {
      oracle = group_ring_homology_oracle(m.ring, m.rank, n);
    } else if (cyc && m.ring.kind() == RingKind::Integers) {
      auto base = cyclic_homology_oracle(*cyc, n);
      oracle = base;
      oracle->betti = base.betti * static_cast<std::size_t>(m.rank);
      oracle->torsion.clear();
      for (int k = 0; k < m.rank; ++k)
        oracle->torsion.insert(oracle->torsion.end(), base.torsion.begin(), base.torsion.end());
      std::sort(oracle->torsion.begin(), oracle->torsion.end());
    }
    if (oracle) {
      have_oracle = true;
      e["oracle"] = oracle->format();
      if (!(res == *oracle)) {
        if (agree) ctx.witness("oracle_agreement", {{"degree", n}, {"engine", res.format()}, {"oracle", oracle->format()}});
        agree = false;
      }
    }
    arr.push_back(e);
  }
  ctx.results["homology"] = arr;
  if (have_oracle) ctx.verdict("oracle_agreement", agree);
}

inline void run_window_boundary(Context &ctx) {
  auto group_name = ctx.cfg.get<std::string>("group", "Z");
  auto G = named_group(group_name);
  auto default_chain = [&] {
    Chain c(G, Ring::integers(), 1, 0);
    c.add(G.inv(G.generators().front()), {}, {Scalar(1)});
    c.add(G.identity(), {}, {Scalar(-1)});
    return c.to_json();
  };
  nlohmann::json chain_json = ctx.cfg.raw("chain", nlohmann::json(default_chain()));
  Window w;
  w.base_radius = ctx.radius("base_radius", 2);
  w.slice_radius = ctx.radius("slice_radius", 1);
  auto expect = ctx.cfg.optional("expect");
  ctx.cfg.finish(ctx.experiment);

  Chain z;
  try {
    z = Chain::from_json(G, chain_json);
  } catch (const nlohmann::json::exception &e) {
    throw ConfigError(std::string("bad chain JSON: ") + e.what());
  }
  auto res = is_boundary_window(z, w);
  ctx.results["window"] = res.to_json();
  const std::string outcome = res.witness ? "boundary" : "none-within-window";
  ctx.results["outcome"] = outcome;
  if (res.witness) ctx.verdict("witness_verified", res.verified);
  if (expect) ctx.verdict("expectation", expect->get<std::string>() == outcome);
}

inline void run_dynamics_roundtrip(Context &ctx) {
  auto scenario = ctx.cfg.raw("scenario", "product-coupling");
  auto mutations = ctx.cfg.get<bool>("mutations", true);
  ctx.cfg.finish(ctx.experiment);

  auto c = coupling_from_config(scenario);
  auto valid = c.check();
  ctx.results["coupling"] = valid.to_json();
  ctx.verdict("coupling_valid", valid.ok);
  if (!valid.ok) {
    ctx.witness("coupling_valid", valid.to_json());
    return;
  }
  auto rt = roundtrip_iso_check(c);
  ctx.results["roundtrip"] = rt.to_json();
  ctx.results["verdict"] = rt.ok() ? "iso-confirmed" : "iso-failed";
  ctx.verdict("roundtrip", rt.ok());
  if (!rt.ok()) ctx.witness("roundtrip", rt.to_json());

  auto oc = coupling_to_couple(c);
  auto inv = oc.check();
  ctx.results["couple"] = {{"p", oc.p}, {"q", oc.q}, {"g_map", oc.g_map}, {"h_map", oc.h_map}, {"check", inv.to_json()}};
  ctx.verdict("couple_invariants", inv.ok);
  if (!inv.ok) {
    ctx.witness("couple_invariants", inv.to_json());
    return;
  }
  auto kd = couple_to_kakutani(oc);
  auto kcheck = kd.check(oc.sys_g, oc.sys_h);
  ctx.results["kakutani"] = {{"A", kd.A}, {"B", kd.B}, {"check", kcheck.to_json()}};
  ctx.verdict("kakutani_from_couple", kcheck.ok);
  if (!kcheck.ok) ctx.witness("kakutani_from_couple", kcheck.to_json());
  else {
    CheckReport back;
    try {
      back = kakutani_to_couple(oc.sys_g, oc.sys_h, kd).couple.check();
    } catch (const InvariantViolation &e) {
      back = e.report();
    }
    ctx.results["couple_from_kakutani"] = back.to_json();
    ctx.verdict("couple_from_kakutani", back.ok);
    if (!back.ok) ctx.witness("couple_from_kakutani", back.to_json());
  }
  if (mutations) {
    auto sc = mutation_sweep(c);
    auto so = mutation_sweep(oc);
    ctx.results["mutations"] = {{"coupling", sc.to_json()}, {"couple", so.to_json()}};
    ctx.verdict("mutations_detected", sc.all_detected() && so.all_detected());
    if (!sc.all_detected() || !so.all_detected())
      ctx.witness("mutations_detected", {{"coupling", sc.undetected}, {"couple", so.undetected}});
  }
}

inline void run_morita_check(Context &ctx) {
  auto scenario = ctx.cfg.raw("scenario", "z4-z2-kakutani");
  auto explicit_data = ctx.cfg.optional("kakutani");
  auto ring = Ring::parse(ctx.cfg.get<std::string>("ring", "Z"));
  auto rank = static_cast<int>(ctx.count("rank", 1));
  auto top = ctx.degree("degrees", 2);
  ctx.cfg.finish(ctx.experiment);

  FiniteSystem sg, sh;
  KakutaniData kd;
  if (explicit_data) {
    try {
      sg = FiniteSystem::from_json(explicit_data->at("sys_g"));
      sh = FiniteSystem::from_json(explicit_data->at("sys_h"));
      kd = KakutaniData::from_json(explicit_data->at("data"));
    } catch (const nlohmann::json::exception &e) {
      throw ConfigError(std::string("kakutani needs sys_g, sys_h and data: ") + e.what());
    }
  } else {
    auto oc = coupling_to_couple(coupling_from_config(scenario));
    sg = oc.sys_g;
    sh = oc.sys_h;
    kd = couple_to_kakutani(oc);
  }
  auto kcheck = kd.check(sg, sh);
  ctx.results["kakutani"] = {{"A", kd.A}, {"B", kd.B}, {"check", kcheck.to_json()}};
  ctx.verdict("kakutani_valid", kcheck.ok);
  if (!kcheck.ok) {
    ctx.witness("kakutani_valid", kcheck.to_json());
    return;
  }
  auto rep = morita_invariance_check(sg, sh, kd, ring, rank, top);
  ctx.results["morita"] = rep.to_json();
  ctx.verdict("homology_agrees", rep.ok);
  if (!rep.ok) ctx.witness("homology_agrees", rep.to_json());
}

} // namespace detail

/// Runs one experiment from its JSON config. Throws ConfigError, ResourceLimit
/// and the module errors unchanged.
inline auto run_experiment(const nlohmann::json &config) -> Report {
  const auto start = std::chrono::steady_clock::now();
  detail::Context ctx(config);
  ctx.experiment = ctx.cfg.get<std::string>("experiment", "");
  if (ctx.experiment.empty()) throw ConfigError("config has no experiment name");
  ctx.seed = ctx.cfg.get<std::uint64_t>("seed", 1);
  ctx.max_radius = ctx.cfg.get<std::int64_t>("max_radius", 100);
  ctx.max_degree = ctx.cfg.get<int>("max_degree", 4);
  if (ctx.max_radius <= 0 || ctx.max_degree <= 0) throw ConfigError("max_radius and max_degree must be positive");

  static const std::map<std::string, std::function<void(detail::Context &)>> table = {
      {"coarse-check", detail::run_coarse_check},       {"omega-build", detail::run_omega_build},
      {"chain-suite", detail::run_chain_suite},         {"homotopy-suite", detail::run_homotopy_suite},
      {"homology-finite", detail::run_homology_finite}, {"window-boundary", detail::run_window_boundary},
      {"dynamics-roundtrip", detail::run_dynamics_roundtrip}, {"morita-check", detail::run_morita_check},
  };
  auto it = table.find(ctx.experiment);
  if (it == table.end()) throw ConfigError("unknown experiment '" + ctx.experiment + "'");
  it->second(ctx);

  bool passed = true;
  for (const auto &[k, v] : ctx.verdicts.items()) passed = passed && v == "pass";
  Report rep;
  rep.body["experiment"] = ctx.experiment;
  rep.body["version"] = kVersion;
  rep.body["seed"] = ctx.seed;
  rep.body["config"] = ctx.cfg.echo();
  rep.body["verdicts"] = ctx.verdicts;
  rep.body["witnesses"] = ctx.witnesses;
  rep.body["results"] = ctx.results;
  rep.body["passed"] = passed;
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

/// Default config of every experiment, in catalog order.
inline auto default_configs() -> std::vector<nlohmann::json> {
  std::vector<nlohmann::json> out;
  for (const auto &e : experiment_catalog()) out.push_back({{"experiment", e.name}});
  return out;
}

} // namespace coarse

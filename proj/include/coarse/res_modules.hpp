#pragma once

#include "coarse_map.hpp"
#include "fin_sup_fun.hpp"
#include "matrix.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <set>
#include <string>
#include <vector>

namespace coarse {

namespace detail {
inline auto max_word_length(const FinSupFun &f) -> std::int64_t {
  std::int64_t m = 0;
  for (const auto &[x, v] : f.support()) m = std::max(m, f.group().word_length(x));
  return m;
}

inline void require_fibers(const CoarseMap &phi, const char *what) {
  if (!phi.has_fibers()) throw PreconditionFailed(std::string(what) + ": " + phi.name() + " has no fiber oracle");
}

inline auto elements_json(const Group &g, const std::set<GroupElement> &s) -> nlohmann::json {
  std::vector<GroupElement> v(s.begin(), s.end());
  sort_enumeration(g, v);
  return elements_to_json(g, v);
}
} // namespace detail

/// One class of the F_x partition: X_i = {x : F_x = F_i} (members listed where relevant).
struct FiberClass {
  std::set<GroupElement> shifts;     // F_i
  std::vector<GroupElement> members; // the part of X_i that can meet the support
};

struct IdentityReport {
  std::string name;
  Group source; // where F and the partition live
  bool holds = false;
  FinSupFun lhs, rhs;
  std::set<GroupElement> cover; // F
  std::vector<FiberClass> partition;

  [[nodiscard]] auto to_json() const -> nlohmann::ordered_json {
    const auto &G = source;
    nlohmann::ordered_json j;
    j["identity"] = name;
    j["holds"] = holds;
    j["lhs"] = lhs.to_json();
    j["rhs"] = rhs.to_json();
    j["F"] = detail::elements_json(G, cover);
    auto parts = nlohmann::ordered_json::array();
    for (const auto &p : partition) {
      nlohmann::ordered_json e;
      e["F_i"] = detail::elements_json(G, p.shifts);
      e["members"] = elements_to_json(G, p.members);
      parts.push_back(e);
    }
    j["partition"] = parts;
    return j;
  }
};

/// F_x = {x~ x^{-1} : phi(x~) = target}
inline auto fiber_shifts(const CoarseMap &phi, const GroupElement &x, const GroupElement &target)
    -> std::set<GroupElement> {
  std::set<GroupElement> out;
  for (const auto &xt : phi.preimage(target)) out.insert(phi.source().div(xt, x));
  return out;
}

namespace detail {
/// sum over classes of 1_{X_i} * (sum_{g in F_i} g^{-1}.f), with the classes
/// given as lists of points.
inline auto partition_sum(const FinSupFun &f, const std::vector<FiberClass> &classes) -> FinSupFun {
  const auto &G = f.group();
  FinSupFun out = f.empty_like();
  for (const auto &cls : classes) {
    FinSupFun inner = f.empty_like();
    for (const auto &g : cls.shifts) inner += translate(G.inv(g), f);
    out += restrict(subset_finite({cls.members.begin(), cls.members.end()}, "X_i"), inner);
  }
  return out;
}

inline auto group_by_shifts(const Group &G, std::map<GroupElement, std::set<GroupElement>> shifts_of)
    -> std::vector<FiberClass> {
  std::map<std::set<GroupElement>, std::vector<GroupElement>> by;
  for (auto &[x, fx] : shifts_of) by[fx].push_back(x);
  std::vector<FiberClass> out;
  for (auto &[fx, xs] : by) {
    sort_enumeration(G, xs);
    out.push_back({fx, std::move(xs)});
  }
  std::sort(out.begin(), out.end(), [&](const FiberClass &a, const FiberClass &b) {
    return G.enum_less(a.members.front(), b.members.front());
  });
  return out;
}

inline void check_radius(const FinSupFun &f, std::int64_t radius) {
  if (max_word_length(f) > radius)
    throw PreconditionFailed("radius insufficient: support reaches word length " +
                             std::to_string(max_word_length(f)) + " > " + std::to_string(radius));
}
} // namespace detail

/// phi^*(phi_*(f)) against sum_i 1_{X_i} (sum_{g in F_i} g^{-1}.f).
inline auto pull_push_identity(const CoarseMap &phi, const FinSupFun &f, std::int64_t radius) -> IdentityReport {
  detail::require_fibers(phi, "pull_push_identity");
  detail::check_radius(f, radius);
  const auto &G = phi.source();
  IdentityReport rep;
  rep.name = "pull_push";
  rep.source = G;
  rep.lhs = pullback(phi, pushforward(phi, f));
  // F from the support, then every x that some g^{-1} s can reach
  for (const auto &[s, v] : f.support())
    for (const auto &g : fiber_shifts(phi, s, phi(s))) {
      rep.cover.insert(g);
      rep.cover.insert(G.inv(g));
    }
  std::map<GroupElement, std::set<GroupElement>> shifts_of;
  for (const auto &[s, v] : f.support())
    for (const auto &g : rep.cover) {
      auto x = G.mul(G.inv(g), s);
      if (!shifts_of.contains(x)) shifts_of.emplace(x, fiber_shifts(phi, x, phi(x)));
    }
  rep.partition = detail::group_by_shifts(G, std::move(shifts_of));
  rep.rhs = detail::partition_sum(f, rep.partition);
  rep.holds = rep.lhs == rep.rhs;
  return rep;
}

/// 1_Y (h.phi_*(f)) against phi_*(sum_i 1_{X_i} (sum_{g in F_i} g^{-1}.f)), with
/// X the least-preimage section and F_x = {x~ x^{-1} : phi(x~) = h^{-1} phi(x)}.
inline auto translate_push_identity(const CoarseMap &phi, const GroupElement &h, const FinSupFun &f,
                                    std::int64_t radius) -> IdentityReport {
  detail::require_fibers(phi, "translate_push_identity");
  detail::check_radius(f, radius);
  const auto &G = phi.source();
  const auto &H = phi.target();
  H.validate(h);
  SectionOracle sect(phi);
  IdentityReport rep;
  rep.name = "translate_push";
  rep.source = G;
  auto moved = translate(h, pushforward(phi, f));
  rep.lhs = restrict(subset_predicate("Y", [&](const GroupElement &y) { return sect.in_image(y); }), moved);
  // x in X with phi(x) = h phi(s) for some s in supp f
  std::map<GroupElement, std::set<GroupElement>> shifts_of;
  for (const auto &[s, v] : f.support()) {
    auto x = sect.least_preimage(H.mul(h, phi(s)));
    if (!x || shifts_of.contains(*x)) continue;
    auto fx = fiber_shifts(phi, *x, H.mul(H.inv(h), phi(*x)));
    rep.cover.insert(fx.begin(), fx.end());
    shifts_of.emplace(*x, std::move(fx));
  }
  rep.partition = detail::group_by_shifts(G, std::move(shifts_of));
  rep.rhs = pushforward(phi, detail::partition_sum(f, rep.partition));
  rep.holds = rep.lhs == rep.rhs;
  return rep;
}

/// omega_*(f)(x) = sum over omega(y) = x of f(y); supp f must lie in the prefix ball.
inline auto omega_pushforward(const OmegaResult &om, const FinSupFun &f) -> FinSupFun {
  if (!(f.group() == om.omega.source())) throw GroupMismatch("omega_pushforward: function is not on the target of phi");
  if (detail::max_word_length(f) > om.prefix)
    throw PreconditionFailed("partition prefix too short: support reaches word length " +
                             std::to_string(detail::max_word_length(f)) + " > " + std::to_string(om.prefix));
  return pushforward(om.omega, f);
}

// ---------------------------------------------------------------------------
// coordinates on finite groups

/// Coordinates of f in the basis (x in enumeration order) x (coefficient index).
inline auto coordinates(const FinSupFun &f) -> Vec {
  const auto elems = f.group().elements();
  Vec out(elems.size() * static_cast<std::size_t>(f.rank()));
  std::map<GroupElement, std::size_t> pos;
  for (std::size_t i = 0; i < elems.size(); ++i) pos.emplace(elems[i], i);
  for (const auto &[x, v] : f.support())
    for (int c = 0; c < f.rank(); ++c) out[pos.at(x) * f.rank() + c] = v[c];
  return out;
}

/// All unit functions delta_x e_c of a finite group.
inline auto unit_basis(const Group &g, const Ring &ring, int rank) -> std::vector<FinSupFun> {
  std::vector<FinSupFun> out;
  for (const auto &x : g.elements())
    for (int c = 0; c < rank; ++c) out.push_back(FinSupFun::delta(g, ring, rank, x, unit_vec(rank, c)));
  return out;
}

/// Generators {h.phi_*(delta_x e_c)} of phi_*(RG^k) for finite groups.
inline auto pushforward_span_generators(const CoarseMap &phi, const Ring &ring, int rank) -> std::vector<FinSupFun> {
  const auto &H = phi.target();
  if (!phi.source().is_finite() || !H.is_finite()) throw PreconditionFailed("span generators need finite groups");
  std::vector<FinSupFun> out;
  for (const auto &b : unit_basis(phi.source(), ring, rank)) {
    auto pushed = pushforward(phi, b);
    for (const auto &h : H.elements()) out.push_back(translate(h, pushed));
  }
  return out;
}

inline auto span_of(const std::vector<FinSupFun> &fs, const Group &g, const Ring &ring, int rank)
    -> std::vector<Vec> {
  std::vector<Vec> rows;
  for (const auto &f : fs) rows.push_back(coordinates(f));
  return canonical_span(rows, *g.order() * static_cast<std::size_t>(rank), ring);
}

inline auto is_full_span(const std::vector<FinSupFun> &fs, const Group &g, const Ring &ring, int rank) -> bool {
  std::vector<Vec> full;
  for (const auto &b : unit_basis(g, ring, rank)) full.push_back(coordinates(b));
  std::vector<Vec> gens;
  for (const auto &f : fs) gens.push_back(coordinates(f));
  return spans_equal(gens, full, *g.order() * static_cast<std::size_t>(rank), ring);
}

// ---------------------------------------------------------------------------
// coarse equivalence and module images

struct EquivalenceReport {
  Verdict verdict = Verdict::Inconclusive;
  Verdict embedding = Verdict::Inconclusive;
  std::int64_t radius = 0;
  std::int64_t cover_half = -1, cover_full = -1; // max distance to the image over ball(r/4), ball(r/2)
};

/// Certified when the embedding check certifies and the distance from ball(r/2)
/// to the image does not exceed the one seen on ball(r/4). Maps between finite
/// groups are equivalences outright.
inline auto check_coarse_equivalence(const CoarseMap &phi, std::int64_t r) -> EquivalenceReport {
  EquivalenceReport rep;
  rep.radius = r;
  if (phi.source().is_finite() && phi.target().is_finite()) {
    rep.verdict = rep.embedding = Verdict::Certified;
    return rep;
  }
  if (phi.source().is_finite() != phi.target().is_finite()) {
    rep.verdict = Verdict::Falsified;
    return rep;
  }
  detail::require_fibers(phi, "check_coarse_equivalence");
  try {
    rep.embedding = check_coarse_embedding(phi, r).verdict;
  } catch (const PreconditionFailed &) {
    rep.embedding = Verdict::Falsified;
  }
  const auto &H = phi.target();
  SectionOracle sect(phi);
  auto distance = [&](const GroupElement &y) -> std::int64_t {
    for (std::int64_t k = 0; k <= r / 2; ++k)
      for (const auto &h : H.sphere(k))
        if (sect.in_image(H.mul(H.inv(h), y))) return k;
    return r / 2 + 1;
  };
  for (const auto &y : H.ball(r / 2)) {
    auto d = distance(y);
    if (H.word_length(y) <= r / 4) rep.cover_half = std::max(rep.cover_half, d);
    rep.cover_full = std::max(rep.cover_full, d);
  }
  bool dense = rep.cover_full <= rep.cover_half;
  if (rep.embedding == Verdict::Falsified || (!dense && rep.cover_full > r / 4))
    rep.verdict = Verdict::Falsified;
  else if (rep.embedding == Verdict::Certified && dense)
    rep.verdict = Verdict::Certified;
  return rep;
}

struct ModuleImage {
  ModuleTag tag;
  EquivalenceReport equivalence;
  std::vector<FinSupFun> span_generators; // finite groups only
  bool span_is_full = false;               // finite groups: span equals R[H]^k

  [[nodiscard]] auto to_json() const -> nlohmann::ordered_json {
    nlohmann::ordered_json j;
    j["tag"] = tag.name();
    j["equivalence"] = verdict_name(equivalence.verdict);
    if (!span_generators.empty()) {
      j["span_generators"] = span_generators.size();
      j["span_is_full"] = span_is_full;
    }
    return j;
  }
};

/// phi_* on the named families; each family is carried to the same family on the
/// target. Refused unless phi is a certified coarse equivalence.
inline auto module_image_tag(const CoarseMap &phi, const ModuleTag &l, const Ring &ring = Ring::integers(),
                             std::int64_t r = 16) -> ModuleImage {
  ModuleImage out;
  out.equivalence = check_coarse_equivalence(phi, r);
  if (out.equivalence.verdict != Verdict::Certified)
    throw PreconditionFailed("module_image_tag: " + phi.name() + " is not a certified coarse equivalence (" +
                             verdict_name(out.equivalence.verdict) + ")");
  out.tag = l;
  if (phi.source().is_finite() && l.kind == ModuleTag::Kind::GroupRing) {
    out.span_generators = pushforward_span_generators(phi, ring, l.rank);
    out.span_is_full = is_full_span(out.span_generators, phi.target(), ring, l.rank);
  }
  return out;
}

// ---------------------------------------------------------------------------
// phi^{*-1} L for L = RG^k

struct MembershipReport {
  std::string verdict; // "certified", "certified-up-to-r", "refused"
  std::int64_t radius = 0;
  std::size_t translates_checked = 0;
  std::string reason;

  [[nodiscard]] auto to_json() const -> nlohmann::ordered_json {
    nlohmann::ordered_json j;
    j["verdict"] = verdict;
    j["radius"] = radius;
    j["translates_checked"] = translates_checked;
    if (!reason.empty()) j["reason"] = reason;
    return j;
  }
};

/// Is phi^*(h.f) in RG^k for all h in ball(r)? Automatic once pullbacks are finite.
inline auto phi_inv_membership(const CoarseMap &phi, const FinSupFun &f, std::int64_t r) -> MembershipReport {
  MembershipReport rep;
  rep.radius = r;
  const auto &H = phi.target();
  bool finite = phi.source().is_finite() && H.is_finite();
  const auto shifts = finite ? H.elements() : H.ball(r);
  try {
    for (const auto &h : shifts) {
      auto pulled = pullback(phi, translate(h, f));
      (void)pulled; // finitely supported by construction
      ++rep.translates_checked;
    }
  } catch (const PreconditionFailed &e) {
    rep.verdict = "refused";
    rep.reason = e.what();
    return rep;
  }
  rep.verdict = finite || f.is_zero() ? "certified" : "certified-up-to-" + std::to_string(r);
  return rep;
}

/// phi^* phi^{*-1} L = L for finite groups and L = RG^k: the res-invariant
/// G-module generated by {phi^*(f) : f in RH^k} is compared with RG^k by exact span.
inline auto pullback_of_preimage_module_is_full(const CoarseMap &phi, const Ring &ring, int rank) -> bool {
  const auto &G = phi.source();
  const auto &H = phi.target();
  if (!G.is_finite() || !H.is_finite()) throw PreconditionFailed("span comparison needs finite groups");
  std::vector<FinSupFun> gens;
  for (const auto &b : unit_basis(H, ring, rank)) {
    auto pulled = pullback(phi, b);
    // restrictions to all of G and to singletons, then G-translates
    std::vector<FinSupFun> pieces{pulled};
    for (const auto &x : G.elements()) pieces.push_back(restrict(subset_finite({x}), pulled));
    for (const auto &p : pieces)
      for (const auto &g : G.elements()) gens.push_back(translate(g, p));
  }
  return is_full_span(gens, G, ring, rank);
}

} // namespace coarse

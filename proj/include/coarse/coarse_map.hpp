#pragma once

#include "errors.hpp"
#include "group.hpp"
#include "limits.hpp"
#include "subset.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace coarse {

using MapRule = std::function<GroupElement(const GroupElement &)>;
/// Full (finite) preimage of a target element.
using FiberRule = std::function<std::vector<GroupElement>(const GroupElement &)>;

/// Section, translate cover and the radius they were validated on.
struct CoarseWitness {
  std::map<GroupElement, GroupElement> section; // y -> x_y
  std::vector<GroupElement> translate_cover;    // F, enumeration order
  std::int64_t validated_radius = 0;
};

inline void sort_enumeration(const Group &g, std::vector<GroupElement> &v) {
  std::sort(v.begin(), v.end(), [&](const auto &a, const auto &b) { return g.enum_less(a, b); });
}

/// A total map between groups with an optional fiber oracle.
class CoarseMap {
public:
  CoarseMap() = default;
  CoarseMap(Group source, Group target, MapRule rule, std::string name,
            std::optional<FiberRule> fiber = std::nullopt)
      : source_(std::move(source)), target_(std::move(target)), rule_(std::move(rule)),
        fiber_(std::move(fiber)), name_(std::move(name)) {}

  auto operator()(const GroupElement &x) const -> GroupElement { return rule_(x); }

  [[nodiscard]] auto source() const -> const Group & { return source_; }
  [[nodiscard]] auto target() const -> const Group & { return target_; }
  [[nodiscard]] auto name() const -> const std::string & { return name_; }
  [[nodiscard]] auto rule() const -> const MapRule & { return rule_; }

  /// True if preimages can be listed exactly (explicit oracle or finite source).
  [[nodiscard]] auto has_fibers() const -> bool { return fiber_.has_value() || source_.is_finite(); }

  /// All preimages of y in enumeration order.
  [[nodiscard]] auto preimage(const GroupElement &y) const -> std::vector<GroupElement> {
    std::vector<GroupElement> out;
    if (fiber_) {
      out = (*fiber_)(y);
    } else if (source_.is_finite()) {
      for (const auto &x : source_.elements())
        if (rule_(x) == y) out.push_back(x);
    } else {
      throw PreconditionFailed("map " + name_ + " has no fiber oracle on an infinite source");
    }
    sort_enumeration(source_, out);
    return out;
  }

  /// Preimages of y inside ball(r) of the source (always available).
  [[nodiscard]] auto preimage_in_ball(const GroupElement &y, std::int64_t r) const
      -> std::vector<GroupElement> {
    std::vector<GroupElement> out;
    if (has_fibers()) {
      for (auto &x : preimage(y))
        if (source_.word_length(x) <= r) out.push_back(x);
      return out;
    }
    for (const auto &x : source_.ball(r))
      if (rule_(x) == y) out.push_back(x);
    return out;
  }

  [[nodiscard]] auto witness() const -> const std::optional<CoarseWitness> & { return witness_; }
  void set_witness(CoarseWitness w) { witness_ = std::move(w); }

  [[nodiscard]] auto fiber_rule() const -> const std::optional<FiberRule> & { return fiber_; }

private:
  Group source_, target_;
  MapRule rule_;
  std::optional<FiberRule> fiber_;
  std::string name_;
  std::optional<CoarseWitness> witness_;
};

inline auto identity_map(const Group &g) -> CoarseMap {
  return CoarseMap(
      g, g, [](const GroupElement &x) { return x; }, "id",
      FiberRule([](const GroupElement &y) { return std::vector<GroupElement>{y}; }));
}

/// psi o phi; fibers compose when both sides have them, witnesses are dropped.
inline auto compose(const CoarseMap &psi, const CoarseMap &phi) -> CoarseMap {
  if (!(phi.target() == psi.source()))
    throw GroupMismatch("cannot compose: target of " + phi.name() + " is " + phi.target().name() +
                        ", source of " + psi.name() + " is " + psi.source().name());
  std::optional<FiberRule> fiber;
  if (psi.has_fibers() && phi.has_fibers()) {
    fiber = [psi, phi](const GroupElement &z) {
      std::vector<GroupElement> out;
      for (const auto &y : psi.preimage(z)) {
        auto part = phi.preimage(y);
        out.insert(out.end(), part.begin(), part.end());
      }
      return out;
    };
  }
  MapRule rule = [psi, phi](const GroupElement &x) { return psi(phi(x)); };
  return CoarseMap(phi.source(), psi.target(), std::move(rule), psi.name() + " o " + phi.name(),
                   std::move(fiber));
}

/// Map given by a finite table of [input, output] normal-form pairs. Inputs
/// outside the table are an error.
inline auto map_from_table(const Group &source, const Group &target, const nlohmann::json &pairs,
                           const std::string &name) -> CoarseMap {
  if (!pairs.is_array()) throw ConfigError("map table must be a list of [input, output] pairs");
  auto table = std::make_shared<std::map<GroupElement, GroupElement>>();
  auto inverse = std::make_shared<std::map<GroupElement, std::vector<GroupElement>>>();
  for (const auto &p : pairs) {
    if (!p.is_array() || p.size() != 2) throw ConfigError("map table entry must be [input, output]");
    auto x = source.element_from_json(p[0]);
    auto y = target.element_from_json(p[1]);
    if (!table->emplace(x, y).second) throw ConfigError("duplicate input in map table");
    (*inverse)[y].push_back(x);
  }
  MapRule rule = [table, name](const GroupElement &x) {
    auto it = table->find(x);
    if (it == table->end()) throw PreconditionFailed("input outside the table of map " + name);
    return it->second;
  };
  FiberRule fiber = [inverse](const GroupElement &y) {
    auto it = inverse->find(y);
    return it == inverse->end() ? std::vector<GroupElement>{} : it->second;
  };
  return CoarseMap(source, target, std::move(rule), name, std::move(fiber));
}

// ---------------------------------------------------------------------------
// verdicts

enum class Verdict { Certified, Falsified, Inconclusive };

inline auto verdict_name(Verdict v) -> std::string {
  switch (v) {
  case Verdict::Certified: return "certified";
  case Verdict::Falsified: return "falsified";
  case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

inline auto elements_to_json(const Group &g, const std::vector<GroupElement> &v) -> nlohmann::json {
  auto arr = nlohmann::json::array();
  for (const auto &x : v) arr.push_back(g.element_to_json(x));
  return arr;
}

/// {phi(g x) phi(x)^{-1} : x in ball(r)} in enumeration order.
inline auto displacement_set(const CoarseMap &phi, const GroupElement &g, std::int64_t r)
    -> std::vector<GroupElement> {
  phi.source().validate(g);
  std::set<GroupElement> seen;
  for (const auto &x : phi.source().ball(r))
    seen.insert(phi.target().div(phi(phi.source().mul(g, x)), phi(x)));
  std::vector<GroupElement> out(seen.begin(), seen.end());
  sort_enumeration(phi.target(), out);
  return out;
}

struct DisplacementRow {
  GroupElement generator;
  std::vector<GroupElement> at_half, at_full;
  [[nodiscard]] auto stable() const -> bool { return at_half == at_full; }
};

struct CoarseMapReport {
  std::string map_name;
  std::int64_t radius = 0;
  std::size_t fiber_limit = 8;
  Verdict proper = Verdict::Inconclusive;
  // falsification witness: a target point whose preimage keeps growing
  std::optional<GroupElement> fiber_witness;
  std::vector<std::size_t> fiber_witness_counts; // in ball(r/4), ball(r/2), ball(r)
  std::vector<GroupElement> fiber_witness_preimages;
  std::size_t max_fiber = 0;
  std::vector<DisplacementRow> displacement;
  Verdict verdict = Verdict::Inconclusive;

  [[nodiscard]] auto to_json(const CoarseMap &phi) const -> nlohmann::ordered_json {
    nlohmann::ordered_json j;
    j["map"] = map_name;
    j["radius"] = radius;
    j["proper"] = verdict_name(proper);
    j["max_fiber_in_ball"] = max_fiber;
    if (fiber_witness) {
      j["fiber_witness"] = {{"target", phi.target().element_to_json(*fiber_witness)},
                            {"counts_quarter_half_full", fiber_witness_counts},
                            {"preimages", elements_to_json(phi.source(), fiber_witness_preimages)}};
    }
    auto rows = nlohmann::json::array();
    for (const auto &r : displacement)
      rows.push_back({{"generator", phi.source().element_to_json(r.generator)},
                      {"size_half", r.at_half.size()},
                      {"size_full", r.at_full.size()},
                      {"stable", r.stable()},
                      {"set", elements_to_json(phi.target(), r.at_full)}});
    j["displacement"] = rows;
    j["verdict"] = verdict_name(verdict);
    return j;
  }
};

/// Ball-bounded check of the coarse-map axioms. A fiber counts as stable if the
/// preimage of phi(x), x in ball(r/4), has the same size in ball(r/2) and ball(r).
/// Properness is falsified when some fiber grows strictly across r/4, r/2, r and
/// exceeds fiber_limit at r.
inline auto check_coarse_map(const CoarseMap &phi, std::int64_t r, std::size_t fiber_limit = 8)
    -> CoarseMapReport {
  CoarseMapReport rep;
  rep.map_name = phi.name();
  rep.radius = r;
  rep.fiber_limit = fiber_limit;
  const auto &G = phi.source();
  const auto ball = G.ball(r);
  std::map<GroupElement, std::vector<GroupElement>> fibers; // within ball(r), enumeration order
  std::map<GroupElement, std::array<std::size_t, 3>> counts;
  for (const auto &x : ball) {
    auto y = phi(x);
    auto l = G.word_length(x);
    auto &c = counts[y];
    if (l <= r / 4) ++c[0];
    if (l <= r / 2) ++c[1];
    ++c[2];
    fibers[y].push_back(x);
  }
  bool all_stable = true;
  for (const auto &[y, c] : counts) {
    rep.max_fiber = std::max(rep.max_fiber, c[2]);
    if (c[0] == 0) continue; // only images of ball(r/4) are judged
    if (c[1] != c[2]) all_stable = false;
    // witness: the largest growing fiber
    if (c[0] < c[1] && c[1] < c[2] && c[2] > fiber_limit &&
        (!rep.fiber_witness || c[2] > rep.fiber_witness_counts[2])) {
      rep.fiber_witness = y;
      rep.fiber_witness_counts = {c[0], c[1], c[2]};
      rep.fiber_witness_preimages = fibers[y];
    }
  }
  rep.proper = rep.fiber_witness ? Verdict::Falsified : (all_stable ? Verdict::Certified : Verdict::Inconclusive);

  bool disp_stable = true;
  for (const auto &s : G.generators()) {
    DisplacementRow row{s, displacement_set(phi, s, r / 2), displacement_set(phi, s, r)};
    disp_stable = disp_stable && row.stable();
    rep.displacement.push_back(std::move(row));
  }
  if (rep.proper == Verdict::Falsified)
    rep.verdict = Verdict::Falsified;
  else if (rep.proper == Verdict::Certified && disp_stable)
    rep.verdict = Verdict::Certified;
  else
    rep.verdict = Verdict::Inconclusive;
  return rep;
}

struct EmbeddingRow {
  std::int64_t c = 0;
  std::int64_t max_half = -1; // max l(st^-1) over pairs in ball(r/2) with l(phi(s)phi(t)^-1) <= c
  std::int64_t max_full = -1;
};

struct EmbeddingReport {
  std::string map_name;
  std::int64_t radius = 0;
  std::vector<EmbeddingRow> rows;
  Verdict verdict = Verdict::Inconclusive;
  std::optional<std::pair<GroupElement, GroupElement>> witness;
  std::int64_t witness_c = 0;

  [[nodiscard]] auto to_json(const CoarseMap &phi) const -> nlohmann::ordered_json {
    nlohmann::ordered_json j;
    j["map"] = map_name;
    j["radius"] = radius;
    auto rs = nlohmann::json::array();
    for (const auto &r : rows) rs.push_back({{"c", r.c}, {"max_half", r.max_half}, {"max_full", r.max_full}});
    j["reverse_bounds"] = rs;
    j["verdict"] = verdict_name(verdict);
    if (witness) {
      const auto &[s, t] = *witness;
      j["witness"] = {{"s", phi.source().element_to_json(s)},
                      {"t", phi.source().element_to_json(t)},
                      {"c", witness_c},
                      {"image_difference", phi.target().element_to_json(phi.target().div(phi(s), phi(t)))},
                      {"source_difference", phi.source().element_to_json(phi.source().div(s, t))}};
    }
    return j;
  }
};

/// Reverse implication of the coarse-embedding axiom on ball(r): for each
/// c <= r/4 compare the largest l(st^-1) with l(phi(s)phi(t)^-1) <= c between
/// ball(r/2) and ball(r). Growth falsifies; the witness is the first maximizing
/// pair in enumeration order.
inline auto check_coarse_embedding(const CoarseMap &phi, std::int64_t r, std::size_t fiber_limit = 8)
    -> EmbeddingReport {
  auto base = check_coarse_map(phi, r, fiber_limit);
  if (base.verdict == Verdict::Falsified)
    throw PreconditionFailed("map " + phi.name() + " is not a coarse map (fiber over " +
                             phi.target().format(*base.fiber_witness) + " keeps growing)");
  EmbeddingReport rep;
  rep.map_name = phi.name();
  rep.radius = r;
  const auto &G = phi.source();
  const auto &H = phi.target();
  const auto ball = G.ball(r);
  if (ball.size() * ball.size() > 40'000'000ULL)
    throw ResourceLimit("embedding check: too many pairs in ball(" + std::to_string(r) + ")");
  const std::int64_t cmax = r / 4;
  std::vector<GroupElement> img;
  std::vector<std::int64_t> len;
  img.reserve(ball.size());
  for (const auto &x : ball) {
    img.push_back(phi(x));
    len.push_back(G.word_length(x));
  }
  rep.rows.resize(static_cast<std::size_t>(cmax + 1));
  std::vector<std::optional<std::pair<std::size_t, std::size_t>>> argmax(rep.rows.size());
  for (std::int64_t c = 0; c <= cmax; ++c) rep.rows[c].c = c;
  for (std::size_t i = 0; i < ball.size(); ++i)
    for (std::size_t k = 0; k < ball.size(); ++k) {
      auto dl = H.word_length(H.div(img[i], img[k]));
      if (dl > cmax) continue;
      auto sl = G.word_length(G.div(ball[i], ball[k]));
      bool half = len[i] <= r / 2 && len[k] <= r / 2;
      for (std::int64_t c = dl; c <= cmax; ++c) {
        auto &row = rep.rows[c];
        if (half) row.max_half = std::max(row.max_half, sl);
        if (sl > row.max_full) {
          row.max_full = sl;
          argmax[c] = {i, k};
        }
      }
    }
  rep.verdict = Verdict::Certified;
  for (std::int64_t c = 0; c <= cmax; ++c) {
    const auto &row = rep.rows[c];
    if (row.max_full > row.max_half) {
      rep.verdict = Verdict::Falsified;
      auto [i, k] = *argmax[c];
      rep.witness = std::make_pair(ball[i], ball[k]);
      rep.witness_c = c;
      break;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// closeness

struct ClosenessPiece {
  GroupElement offset; // h with psi(x) = h phi(x)
  std::vector<GroupElement> members;
};

struct ClosenessResult {
  bool close = false;
  std::int64_t radius = 0;
  std::size_t size_half = 0, size_full = 0;
  std::vector<ClosenessPiece> pieces; // only when close

  [[nodiscard]] auto offsets() const -> std::vector<GroupElement> {
    std::vector<GroupElement> out;
    for (const auto &p : pieces) out.push_back(p.offset);
    return out;
  }
};

/// Partition ball(r) by psi(x) phi(x)^{-1}. Close when the difference set is the
/// same on ball(r/2) and ball(r) and has at most max_pieces values.
inline auto closeness(const CoarseMap &phi, const CoarseMap &psi, std::int64_t r, std::size_t max_pieces = 16)
    -> ClosenessResult {
  if (!(phi.source() == psi.source()) || !(phi.target() == psi.target()))
    throw GroupMismatch("closeness needs maps with the same source and target");
  const auto &G = phi.source();
  const auto &H = phi.target();
  ClosenessResult res;
  res.radius = r;
  std::set<GroupElement> half, full;
  std::vector<ClosenessPiece> pieces;
  std::map<GroupElement, std::size_t> where;
  for (const auto &x : G.ball(r)) {
    auto h = H.div(psi(x), phi(x));
    if (G.word_length(x) <= r / 2) half.insert(h);
    full.insert(h);
    auto it = where.find(h);
    if (it == where.end()) {
      where.emplace(h, pieces.size());
      pieces.push_back({h, {x}});
    } else {
      pieces[it->second].members.push_back(x);
    }
  }
  res.size_half = half.size();
  res.size_full = full.size();
  res.close = half == full && full.size() <= max_pieces;
  if (res.close) res.pieces = std::move(pieces);
  return res;
}

// ---------------------------------------------------------------------------
// section X, x_y and translate cover F

/// Lazily answers "least preimage of y" in enumeration order; x lies in X iff it
/// is the least preimage of phi(x).
class SectionOracle {
public:
  explicit SectionOracle(CoarseMap phi) : phi_(std::move(phi)) {}

  [[nodiscard]] auto map() const -> const CoarseMap & { return phi_; }

  auto least_preimage(const GroupElement &y) -> std::optional<GroupElement> {
    {
      std::lock_guard lock(mu_);
      auto it = cache_.find(y);
      if (it != cache_.end()) return it->second;
    }
    std::optional<GroupElement> out;
    if (phi_.has_fibers()) {
      auto pre = phi_.preimage(y);
      if (!pre.empty()) out = pre.front();
    } else {
      throw PreconditionFailed("section of " + phi_.name() + " needs a fiber oracle");
    }
    std::lock_guard lock(mu_);
    cache_.emplace(y, out);
    return out;
  }

  auto in_image(const GroupElement &y) -> bool { return least_preimage(y).has_value(); }

  auto in_section_domain(const GroupElement &x) -> bool {
    auto xy = least_preimage(phi_(x));
    return xy && *xy == x;
  }

private:
  CoarseMap phi_;
  std::mutex mu_;
  std::map<GroupElement, std::optional<GroupElement>> cache_;
};

struct SectionData {
  std::int64_t radius = 0;
  std::map<GroupElement, GroupElement> section; // y -> x_y for y in phi(ball(r))
  std::vector<GroupElement> domain;             // X within ball(r), enumeration order
  std::vector<GroupElement> translate_cover;    // F, enumeration order
};

/// x_y = enumeration-least preimage; F = {g x_{phi(g)}^{-1} : g in ball(r)}.
inline auto section(const CoarseMap &phi, std::int64_t r) -> SectionData {
  const auto &G = phi.source();
  SectionData sd;
  sd.radius = r;
  const auto ball = G.ball(r);
  for (const auto &x : ball) sd.section.emplace(phi(x), x); // first hit wins: ball order
  std::set<GroupElement> dom, cover;
  for (const auto &[y, x] : sd.section) dom.insert(x);
  for (const auto &g : ball) cover.insert(G.div(g, sd.section.at(phi(g))));
  sd.domain.assign(dom.begin(), dom.end());
  sd.translate_cover.assign(cover.begin(), cover.end());
  sort_enumeration(G, sd.domain);
  sort_enumeration(G, sd.translate_cover);
  return sd;
}

/// Attach the section and translate cover computed on ball(r) as the witness.
inline auto with_witness(CoarseMap phi, std::int64_t r) -> CoarseMap {
  auto sd = section(phi, r);
  // validate: phi(x_y) = y, ball covered by translates
  for (const auto &[y, x] : sd.section)
    if (phi(x) != y) throw Error("section validation failed");
  phi.set_witness({sd.section, sd.translate_cover, r});
  return phi;
}

// ---------------------------------------------------------------------------
// decomposition of the domain

struct DomainPiece {
  GroupElement g; // g(i)
  GroupElement h; // h(i): phi(x) = h phi(g x)
  Subset subset;
  std::vector<GroupElement> members; // within ball(radius)
};

struct DomainDecomposition {
  std::int64_t radius = 0;
  std::vector<DomainPiece> pieces;

  [[nodiscard]] auto to_json(const CoarseMap &phi) const -> nlohmann::ordered_json {
    nlohmann::ordered_json j;
    j["radius"] = radius;
    auto arr = nlohmann::json::array();
    for (const auto &p : pieces)
      arr.push_back({{"g", phi.source().element_to_json(p.g)},
                     {"h", phi.target().element_to_json(p.h)},
                     {"size_in_ball", p.members.size()},
                     {"description", p.subset.description}});
    j["pieces"] = arr;
    return j;
  }
};

/// Ball-restricted version of the finite decomposition G = disjoint union of X_i
/// with phi(x) = h(i) phi(g(i) x) on X_i. Pieces come from the cover by
/// g(i)^{-1} X (g(i) = f^{-1}, f in F, F in enumeration order so g(1) = e),
/// disjointified in order and split by the value of h.
inline auto decompose_domain(const CoarseMap &phi, std::int64_t r) -> DomainDecomposition {
  const auto &G = phi.source();
  const auto &H = phi.target();
  auto sd = section(phi, r);
  auto oracle = std::make_shared<SectionOracle>(phi);
  std::vector<GroupElement> shifts;
  for (const auto &f : sd.translate_cover) shifts.push_back(G.inv(f));
  auto first_cover = [G, shifts, oracle](const GroupElement &x) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < shifts.size(); ++i)
      if (oracle->in_section_domain(G.mul(shifts[i], x))) return i;
    return std::nullopt;
  };
  DomainDecomposition dd;
  dd.radius = r;
  std::map<std::pair<std::size_t, GroupElement>, std::size_t> index;
  std::vector<std::pair<std::size_t, GroupElement>> keys;
  for (const auto &x : G.ball(r)) {
    auto i = first_cover(x);
    if (!i) throw Error("decomposition: " + G.format(x) + " not covered by the translate cover");
    auto h = H.div(phi(x), phi(G.mul(shifts[*i], x)));
    auto key = std::make_pair(*i, h);
    auto it = index.find(key);
    if (it == index.end()) {
      index.emplace(key, dd.pieces.size());
      keys.push_back(key);
      auto gi = shifts[*i];
      Subset s = subset_predicate(
          "x with first cover index " + std::to_string(*i) + " (g = " + G.format(gi) + ") and h = " + H.format(h),
          [first_cover, phi, G, H, i = *i, gi, h](const GroupElement &x) {
            auto j = first_cover(x);
            return j && *j == i && H.div(phi(x), phi(G.mul(gi, x))) == h;
          });
      dd.pieces.push_back({gi, h, std::move(s), {x}});
    } else {
      dd.pieces[it->second].members.push_back(x);
    }
  }
  // piece with g = e, h = e first
  std::stable_sort(dd.pieces.begin(), dd.pieces.end(), [&](const DomainPiece &a, const DomainPiece &b) {
    auto ka = !(G.is_identity(a.g) && H.is_identity(a.h));
    auto kb = !(G.is_identity(b.g) && H.is_identity(b.h));
    return ka < kb;
  });
  return dd;
}

// ---------------------------------------------------------------------------
// omega: the coarse inverse built from the target enumeration

struct TargetBlock {
  GroupElement shift; // h_j
  std::size_t index = 0; // j (1-based position of h_j in the target enumeration)
  Subset subset;      // Y_j
  std::vector<GroupElement> members; // elements of h_j Y_j inside ball(prefix)
};

struct TargetPartition {
  std::int64_t prefix_radius = 0;
  std::vector<TargetBlock> blocks;
};

namespace detail {
class OmegaState {
public:
  explicit OmegaState(CoarseMap phi) : oracle_(phi), phi_(std::move(phi)), enumerator_(phi_.target()) {}

  /// (j, omega(y)) with j the 1-based block index of y.
  auto lookup(const GroupElement &y) -> std::pair<std::size_t, GroupElement> {
    {
      std::lock_guard lock(mu_);
      auto it = cache_.find(y);
      if (it != cache_.end()) return it->second;
    }
    const auto &H = phi_.target();
    for (std::size_t j = 0;; ++j) {
      auto hj = shift(j);
      auto base = H.mul(H.inv(hj), y);
      if (auto x = oracle_.least_preimage(base)) {
        std::lock_guard lock(mu_);
        auto res = std::make_pair(j + 1, *x);
        cache_.emplace(y, res);
        return res;
      }
    }
  }

  auto shift(std::size_t j) -> GroupElement {
    std::lock_guard lock(mu_);
    while (shifts_.size() <= j) {
      if (shifts_.size() >= limits().max_enumeration)
        throw ResourceLimit("omega: target enumeration cap reached");
      auto h = enumerator_.next();
      if (!h) throw ResourceLimit("omega: target enumeration exhausted without covering");
      shifts_.push_back(*h);
    }
    return shifts_[j];
  }

  auto oracle() -> SectionOracle & { return oracle_; }

private:
  SectionOracle oracle_;
  CoarseMap phi_;
  Enumerator enumerator_;
  std::mutex mu_;
  std::vector<GroupElement> shifts_;
  std::map<GroupElement, std::pair<std::size_t, GroupElement>> cache_;
};
} // namespace detail

struct OmegaResult {
  CoarseMap omega;           // lazy map target -> source
  TargetPartition partition; // blocks hit inside ball(prefix) of the target
  std::vector<GroupElement> difference_set; // {omega(phi(x)) x^{-1} : x in ball(prefix)}
  std::int64_t prefix = 0;
  std::shared_ptr<detail::OmegaState> state;

  /// 1-based block index j of y.
  [[nodiscard]] auto block_of(const GroupElement &y) const -> std::size_t { return state->lookup(y).first; }
};

/// omega(y) = x_{h_j^{-1} y} for y in h_j Y_j, with h_1 = e, h_2, ... the target
/// enumeration. The map itself is lazy and defined on the whole target.
inline auto omega(const CoarseMap &phi, std::int64_t prefix) -> OmegaResult {
  if (!phi.has_fibers()) throw PreconditionFailed("omega needs a fiber oracle for " + phi.name());
  auto state = std::make_shared<detail::OmegaState>(phi);
  const auto &G = phi.source();
  const auto &H = phi.target();
  MapRule rule = [state](const GroupElement &y) { return state->lookup(y).second; };
  OmegaResult res{CoarseMap(H, G, rule, "omega(" + phi.name() + ")"), {}, {}, prefix, state};
  res.partition.prefix_radius = prefix;
  std::map<std::size_t, std::size_t> at;
  for (const auto &y : H.ball(prefix)) {
    auto j = state->lookup(y).first;
    auto it = at.find(j);
    if (it == at.end()) {
      auto hj = state->shift(j - 1);
      Subset yj = subset_predicate("Y_" + std::to_string(j) + " (shift " + H.format(hj) + ")",
                                   [state, H, hj, j](const GroupElement &z) {
                                     return state->oracle().in_image(z) && state->lookup(H.mul(hj, z)).first == j;
                                   });
      at.emplace(j, res.partition.blocks.size());
      res.partition.blocks.push_back({hj, j, std::move(yj), {y}});
    } else {
      res.partition.blocks[it->second].members.push_back(y);
    }
  }
  std::sort(res.partition.blocks.begin(), res.partition.blocks.end(),
            [](const auto &a, const auto &b) { return a.index < b.index; });
  std::set<GroupElement> diff;
  for (const auto &x : G.ball(prefix)) diff.insert(G.div(rule(phi(x)), x));
  res.difference_set.assign(diff.begin(), diff.end());
  sort_enumeration(G, res.difference_set);
  return res;
}

} // namespace coarse

#pragma once

#include "coarse_map.hpp"
#include "errors.hpp"
#include "group.hpp"
#include "ring.hpp"
#include "subset.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <map>
#include <string>
#include <utility>

namespace coarse {

/// Finitely supported function G -> R^k. Zero values are never stored.
class FinSupFun {
public:
  FinSupFun() = default;
  FinSupFun(Group group, Ring ring, int rank) : group_(std::move(group)), ring_(ring), rank_(rank) {
    if (rank < 1) throw ConfigError("coefficient rank must be >= 1");
  }

  /// value * delta_x (value defaults to the first unit vector).
  static auto delta(const Group &g, const Ring &ring, int rank, const GroupElement &x,
                    std::optional<Vec> value = std::nullopt) -> FinSupFun {
    FinSupFun f(g, ring, rank);
    f.add(x, value ? *value : unit_vec(rank, 0));
    return f;
  }

  [[nodiscard]] auto group() const -> const Group & { return group_; }
  [[nodiscard]] auto ring() const -> const Ring & { return ring_; }
  [[nodiscard]] auto rank() const -> int { return rank_; }
  [[nodiscard]] auto support() const -> const std::map<GroupElement, Vec> & { return support_; }
  [[nodiscard]] auto size() const -> std::size_t { return support_.size(); }
  [[nodiscard]] auto is_zero() const -> bool { return support_.empty(); }

  [[nodiscard]] auto at(const GroupElement &x) const -> Vec {
    auto it = support_.find(x);
    return it == support_.end() ? zero_vec(rank_) : it->second;
  }

  /// f(x) += factor * v
  void add(const GroupElement &x, const Vec &v, const Scalar &factor = Scalar(1)) {
    if (static_cast<int>(v.size()) != rank_) throw ConfigError("value has wrong rank");
    auto it = support_.find(x);
    if (it == support_.end()) {
      Vec w = scaled(ring_, v, factor);
      if (!coarse::is_zero(w)) support_.emplace(x, std::move(w));
      return;
    }
    add_into(ring_, it->second, v, factor);
    if (coarse::is_zero(it->second)) support_.erase(it);
  }

  void add_scaled(const FinSupFun &o, const Scalar &factor) {
    check_compatible(o);
    for (const auto &[x, v] : o.support_) add(x, v, factor);
  }

  auto operator+=(const FinSupFun &o) -> FinSupFun & {
    add_scaled(o, Scalar(1));
    return *this;
  }
  auto operator-=(const FinSupFun &o) -> FinSupFun & {
    add_scaled(o, Scalar(-1));
    return *this;
  }
  friend auto operator+(FinSupFun a, const FinSupFun &b) -> FinSupFun { return a += b; }
  friend auto operator-(FinSupFun a, const FinSupFun &b) -> FinSupFun { return a -= b; }
  [[nodiscard]] auto times(const Scalar &c) const -> FinSupFun {
    FinSupFun out(group_, ring_, rank_);
    for (const auto &[x, v] : support_) out.add(x, v, c);
    return out;
  }

  auto operator==(const FinSupFun &o) const -> bool {
    return group_ == o.group_ && ring_ == o.ring_ && rank_ == o.rank_ && support_ == o.support_;
  }

  void check_compatible(const FinSupFun &o) const {
    if (!(group_ == o.group_)) throw GroupMismatch("functions live on different groups");
    if (!(ring_ == o.ring_) || rank_ != o.rank_) throw GroupMismatch("functions have different coefficients");
  }

  [[nodiscard]] auto empty_like() const -> FinSupFun { return FinSupFun(group_, ring_, rank_); }

  /// {"ring": ..., "rank": k, "support": [[normal_form, [coeffs]], ...]}
  [[nodiscard]] auto to_json() const -> nlohmann::ordered_json {
    nlohmann::ordered_json j;
    j["ring"] = ring_.name();
    j["rank"] = rank_;
    auto sup = nlohmann::ordered_json::array();
    for (const auto &[x, v] : ordered_support())
      sup.push_back(nlohmann::ordered_json::array({group_.element_to_json(x), vec_to_json(v)}));
    j["support"] = sup;
    return j;
  }

  static auto from_json(const Group &g, const nlohmann::json &j) -> FinSupFun {
    auto ring = Ring::parse(j.value("ring", std::string("Z")));
    int rank = j.value("rank", 1);
    FinSupFun f(g, ring, rank);
    for (const auto &e : j.at("support")) {
      if (!e.is_array() || e.size() != 2) throw ConfigError("support entry must be [element, coeffs]");
      f.add(g.element_from_json(e[0]), vec_from_json(e[1], ring, rank));
    }
    return f;
  }

  /// Support entries in enumeration order (for reports).
  [[nodiscard]] auto ordered_support() const -> std::vector<std::pair<GroupElement, Vec>> {
    std::vector<std::pair<GroupElement, Vec>> out(support_.begin(), support_.end());
    std::sort(out.begin(), out.end(),
              [&](const auto &a, const auto &b) { return group_.enum_less(a.first, b.first); });
    return out;
  }

  [[nodiscard]] auto format() const -> std::string {
    if (support_.empty()) return "0";
    std::string s;
    for (const auto &[x, v] : ordered_support()) {
      if (!s.empty()) s += " + ";
      std::string coeff;
      if (rank_ == 1) {
        coeff = v[0].get_str();
      } else {
        coeff = "(";
        for (std::size_t i = 0; i < v.size(); ++i) coeff += (i ? "," : "") + v[i].get_str();
        coeff += ")";
      }
      s += coeff + "*d[" + group_.format(x) + "]";
    }
    return s;
  }

private:
  Group group_;
  Ring ring_;
  int rank_ = 1;
  std::map<GroupElement, Vec> support_;
};

/// (g.f)(x) = f(g^{-1} x): the support moves to g * supp(f).
inline auto translate(const GroupElement &g, const FinSupFun &f) -> FinSupFun {
  f.group().validate(g);
  FinSupFun out = f.empty_like();
  for (const auto &[x, v] : f.support()) out.add(f.group().mul(g, x), v);
  return out;
}

/// 1_A * f
inline auto restrict(const Subset &a, const FinSupFun &f) -> FinSupFun {
  FinSupFun out = f.empty_like();
  for (const auto &[x, v] : f.support())
    if (a(x)) out.add(x, v);
  return out;
}

/// phi_*(f)(y) = sum over phi(x) = y of f(x).
inline auto pushforward(const CoarseMap &phi, const FinSupFun &f) -> FinSupFun {
  if (!(f.group() == phi.source())) throw GroupMismatch("pushforward: function is not on the source of " + phi.name());
  FinSupFun out(phi.target(), f.ring(), f.rank());
  for (const auto &[x, v] : f.support()) out.add(phi(x), v);
  return out;
}

/// phi^*(f) = f o phi. Needs exact fibers; without an oracle the map is first
/// checked for properness on ball(search_radius) (refused with the witness when
/// falsified) and preimages are then searched in that ball.
inline auto pullback(const CoarseMap &phi, const FinSupFun &f, std::int64_t search_radius = 6) -> FinSupFun {
  if (!(f.group() == phi.target())) throw GroupMismatch("pullback: function is not on the target of " + phi.name());
  FinSupFun out(phi.source(), f.ring(), f.rank());
  if (phi.has_fibers()) {
    for (const auto &[y, v] : f.support())
      for (const auto &x : phi.preimage(y)) out.add(x, v);
    return out;
  }
  auto rep = check_coarse_map(phi, search_radius);
  if (rep.proper == Verdict::Falsified)
    throw PreconditionFailed("pullback refused: " + phi.name() + " is not proper; " +
                             std::to_string(rep.fiber_witness_counts.back()) + " elements of ball(" +
                             std::to_string(search_radius) + ") map to " +
                             phi.target().format(*rep.fiber_witness));
  for (const auto &[y, v] : f.support())
    for (const auto &x : phi.preimage_in_ball(y, search_radius)) out.add(x, v);
  return out;
}

// ---------------------------------------------------------------------------
// module tags and finite-support norm diagnostics

struct ModuleTag {
  enum class Kind { FullC, Cf, GroupRing, Lp, C0, Sobolev };
  Kind kind = Kind::GroupRing;
  int rank = 1;
  double p = 0;
  double s = 0;

  [[nodiscard]] auto name() const -> std::string {
    switch (kind) {
    case Kind::FullC: return "C(G,W)";
    case Kind::Cf: return "C_f(G,W)";
    case Kind::GroupRing: return "RG^" + std::to_string(rank);
    case Kind::Lp: return "l^" + trimmed(p);
    case Kind::C0: return "c_0";
    case Kind::Sobolev: return "H^{" + trimmed(s) + "," + trimmed(p) + "}";
    }
    return "?";
  }
  auto operator==(const ModuleTag &) const -> bool = default;

  static auto parse(const std::string &text) -> ModuleTag {
    ModuleTag t;
    if (text == "FullC") t.kind = Kind::FullC;
    else if (text == "Cf") t.kind = Kind::Cf;
    else if (text == "C0") t.kind = Kind::C0;
    else if (text.rfind("GroupRing", 0) == 0) {
      t.kind = Kind::GroupRing;
      if (text.size() > 9) t.rank = std::stoi(text.substr(10));
    } else if (text.rfind("Lp", 0) == 0) {
      t.kind = Kind::Lp;
      t.p = std::stod(text.substr(3));
    } else if (text.rfind("Sobolev", 0) == 0) {
      t.kind = Kind::Sobolev;
      auto comma = text.find(',');
      t.s = std::stod(text.substr(8, comma - 8));
      t.p = std::stod(text.substr(comma + 1));
    } else {
      throw ConfigError("unknown module tag '" + text + "'");
    }
    return t;
  }

private:
  static auto trimmed(double v) -> std::string {
    auto s = std::to_string(v);
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
  }
};

/// (sum_x |f(x)|_p^p)^(1/p) as a double; Z/m values use representatives in [0, m).
inline auto lp_norm(const FinSupFun &f, double p) -> double {
  if (p <= 0) throw ConfigError("l^p norm needs p > 0");
  double acc = 0;
  for (const auto &[x, v] : f.support())
    for (const auto &c : v) acc += std::pow(std::fabs(c.get_d()), p);
  return std::pow(acc, 1.0 / p);
}

/// Weighted norm with weights (1 + l(x))^s.
inline auto sobolev_norm(const FinSupFun &f, double s, double p) -> double {
  if (p <= 0) throw ConfigError("Sobolev norm needs p > 0");
  double acc = 0;
  for (const auto &[x, v] : f.support()) {
    double w = std::pow(1.0 + static_cast<double>(f.group().word_length(x)), s);
    for (const auto &c : v) acc += std::pow(w * std::fabs(c.get_d()), p);
  }
  return std::pow(acc, 1.0 / p);
}

} // namespace coarse

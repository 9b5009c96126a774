#pragma once

#include "errors.hpp"
#include "limits.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <compare>
#include <deque>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace coarse {

/// Canonical normal form of a group element. Layout depends on the family:
///   IntLattice(d)     coordinates (x_1..x_d)
///   FreeGroup(k)      reduced word, letter +i / -i for the i-th generator / its inverse
///   InfiniteDihedral  (shift, flip): n -> shift + (-1)^flip * n
///   Finite            [index into the multiplication table]
///   Product           [len(left), left..., right...]
struct GroupElement {
  std::vector<std::int64_t> nf;

  auto operator<=>(const GroupElement &) const = default;
  auto operator==(const GroupElement &) const -> bool = default;
};

/// Tuple of group elements (the g-vector of a chain point).
using Tuple = std::vector<GroupElement>;

namespace detail {

// key(n) orders integers 0, 1, -1, 2, -2, ...
inline auto int_key(std::int64_t n) -> std::int64_t { return n > 0 ? 2 * n - 1 : -2 * n; }

inline auto abs64(std::int64_t v) -> std::int64_t { return v < 0 ? -v : v; }

class GroupImpl {
public:
  virtual ~GroupImpl() = default;

  [[nodiscard]] virtual auto identity() const -> GroupElement = 0;
  [[nodiscard]] virtual auto mul(const GroupElement &a, const GroupElement &b) const -> GroupElement = 0;
  [[nodiscard]] virtual auto inv(const GroupElement &a) const -> GroupElement = 0;
  /// Throws InvalidElement if `a` is not a normal form of this group.
  virtual void validate(const GroupElement &a) const = 0;
  [[nodiscard]] virtual auto word_length(const GroupElement &a) const -> std::int64_t = 0;
  [[nodiscard]] virtual auto generators() const -> std::vector<GroupElement> = 0;
  /// Tie-break key inside a sphere; compared lexicographically.
  [[nodiscard]] virtual auto order_key(const GroupElement &a) const -> std::vector<std::int64_t> = 0;
  [[nodiscard]] virtual auto order() const -> std::optional<std::size_t> { return std::nullopt; }
  [[nodiscard]] virtual auto is_abelian() const -> bool = 0;
  [[nodiscard]] virtual auto descriptor() const -> nlohmann::json = 0;
  [[nodiscard]] virtual auto element_to_json(const GroupElement &a) const -> nlohmann::json = 0;
  [[nodiscard]] virtual auto element_from_json(const nlohmann::json &j) const -> GroupElement = 0;
  [[nodiscard]] virtual auto format(const GroupElement &a) const -> std::string = 0;

  std::string name;
  std::string canonical; // descriptor dump, used for equality

  // sphere cache, filled lazily
  mutable std::mutex mu;
  // deque: references handed out by sphere() stay valid while it grows
  mutable std::deque<std::vector<GroupElement>> spheres;
  mutable std::size_t cached_total = 0;

  auto sphere(std::size_t n) const -> const std::vector<GroupElement> & {
    std::lock_guard lock(mu);
    if (spheres.empty()) {
      spheres.push_back({identity()});
      cached_total = 1;
    }
    while (spheres.size() <= n) {
      const auto &last = spheres.back();
      if (last.empty()) {
        spheres.emplace_back();
        continue;
      }
      std::set<GroupElement> prev;
      if (spheres.size() >= 2)
        prev.insert(spheres[spheres.size() - 2].begin(), spheres[spheres.size() - 2].end());
      std::set<GroupElement> cur(last.begin(), last.end());
      std::set<GroupElement> next;
      auto gens = generators();
      for (const auto &g : last)
        for (const auto &s : gens) {
          auto sg = mul(s, g);
          if (!prev.contains(sg) && !cur.contains(sg)) next.insert(sg);
        }
      cached_total += next.size();
      if (cached_total > limits().max_elements)
        throw ResourceLimit("group " + name + ": enumeration exceeds cap of " +
                            std::to_string(limits().max_elements) + " elements (sphere " +
                            std::to_string(spheres.size()) + ")");
      std::vector<GroupElement> out(next.begin(), next.end());
      std::vector<std::pair<std::vector<std::int64_t>, std::size_t>> keyed;
      keyed.reserve(out.size());
      for (std::size_t i = 0; i < out.size(); ++i) keyed.emplace_back(order_key(out[i]), i);
      std::sort(keyed.begin(), keyed.end());
      std::vector<GroupElement> sorted;
      sorted.reserve(out.size());
      for (auto &[k, i] : keyed) sorted.push_back(out[i]);
      spheres.push_back(std::move(sorted));
    }
    return spheres[n];
  }
};

} // namespace detail

/// A computable group with a fixed finite symmetric generating set.
/// Cheap to copy (shared immutable implementation).
class Group {
public:
  Group() = default;
  explicit Group(std::shared_ptr<const detail::GroupImpl> impl) : impl_(std::move(impl)) {}

  [[nodiscard]] auto name() const -> const std::string & { return impl_->name; }
  [[nodiscard]] auto identity() const -> GroupElement { return impl_->identity(); }

  [[nodiscard]] auto mul(const GroupElement &a, const GroupElement &b) const -> GroupElement {
    return impl_->mul(a, b);
  }
  [[nodiscard]] auto inv(const GroupElement &a) const -> GroupElement { return impl_->inv(a); }
  /// a * b^{-1}
  [[nodiscard]] auto div(const GroupElement &a, const GroupElement &b) const -> GroupElement {
    return mul(a, inv(b));
  }
  [[nodiscard]] auto is_identity(const GroupElement &a) const -> bool { return a == identity(); }

  void validate(const GroupElement &a) const { impl_->validate(a); }
  [[nodiscard]] auto is_valid(const GroupElement &a) const -> bool {
    try {
      impl_->validate(a);
      return true;
    } catch (const InvalidElement &) {
      return false;
    }
  }

  [[nodiscard]] auto word_length(const GroupElement &a) const -> std::int64_t {
    validate(a);
    return impl_->word_length(a);
  }
  [[nodiscard]] auto generators() const -> std::vector<GroupElement> { return impl_->generators(); }
  [[nodiscard]] auto order() const -> std::optional<std::size_t> { return impl_->order(); }
  [[nodiscard]] auto is_finite() const -> bool { return impl_->order().has_value(); }
  [[nodiscard]] auto is_abelian() const -> bool { return impl_->is_abelian(); }

  [[nodiscard]] auto descriptor() const -> nlohmann::json { return impl_->descriptor(); }
  [[nodiscard]] auto element_to_json(const GroupElement &a) const -> nlohmann::json {
    return impl_->element_to_json(a);
  }
  [[nodiscard]] auto element_from_json(const nlohmann::json &j) const -> GroupElement {
    auto g = impl_->element_from_json(j);
    validate(g);
    return g;
  }
  [[nodiscard]] auto format(const GroupElement &a) const -> std::string { return impl_->format(a); }

  /// Elements of word length exactly n, in ball order.
  [[nodiscard]] auto sphere(std::int64_t n) const -> const std::vector<GroupElement> & {
    return impl_->sphere(static_cast<std::size_t>(n));
  }

  /// {g : l(g) <= r} in ball order (length, then the family tie-break).
  [[nodiscard]] auto ball(std::int64_t r) const -> std::vector<GroupElement> {
    if (r < 0) return {};
    if (r > limits().max_radius)
      throw ResourceLimit("radius " + std::to_string(r) + " exceeds cap " +
                          std::to_string(limits().max_radius));
    std::vector<GroupElement> out;
    for (std::int64_t n = 0; n <= r; ++n) {
      const auto &s = sphere(n);
      if (s.empty()) break;
      out.insert(out.end(), s.begin(), s.end());
    }
    return out;
  }

  /// All elements of a finite group in enumeration order.
  [[nodiscard]] auto elements() const -> std::vector<GroupElement> {
    if (!is_finite()) throw PreconditionFailed("group " + name() + " is infinite");
    std::vector<GroupElement> out;
    for (std::int64_t n = 0;; ++n) {
      const auto &s = sphere(n);
      if (s.empty()) break;
      out.insert(out.end(), s.begin(), s.end());
    }
    return out;
  }

  /// Compare elements in enumeration order.
  [[nodiscard]] auto enum_less(const GroupElement &a, const GroupElement &b) const -> bool {
    auto la = impl_->word_length(a);
    auto lb = impl_->word_length(b);
    if (la != lb) return la < lb;
    return impl_->order_key(a) < impl_->order_key(b);
  }

  auto operator==(const Group &o) const -> bool {
    return impl_ == o.impl_ || impl_->canonical == o.impl_->canonical;
  }

  [[nodiscard]] auto impl() const -> const detail::GroupImpl & { return *impl_; }

private:
  std::shared_ptr<const detail::GroupImpl> impl_;
};

/// Lazy enumeration g_1 = e, g_2, ... in ball order. Ends only for finite groups.
class Enumerator {
public:
  explicit Enumerator(Group g) : group_(std::move(g)) {}

  auto next() -> std::optional<GroupElement> {
    while (true) {
      const auto &s = group_.sphere(radius_);
      if (s.empty()) return std::nullopt;
      if (pos_ < s.size()) {
        ++count_;
        return s[pos_++];
      }
      ++radius_;
      pos_ = 0;
    }
  }
  [[nodiscard]] auto count() const -> std::size_t { return count_; }

private:
  Group group_;
  std::int64_t radius_ = 0;
  std::size_t pos_ = 0;
  std::size_t count_ = 0;
};

// ---------------------------------------------------------------------------
// families

namespace detail {

class IntLattice final : public GroupImpl {
public:
  explicit IntLattice(int dim) : dim_(dim) {
    if (dim < 1) throw ConfigError("IntLattice dimension must be >= 1");
    name = dim == 1 ? "Z" : "Z^" + std::to_string(dim);
    canonical = descriptor().dump();
  }
  auto identity() const -> GroupElement override { return {std::vector<std::int64_t>(dim_, 0)}; }
  auto mul(const GroupElement &a, const GroupElement &b) const -> GroupElement override {
    GroupElement r = a;
    for (int i = 0; i < dim_; ++i) r.nf[i] += b.nf[i];
    return r;
  }
  auto inv(const GroupElement &a) const -> GroupElement override {
    GroupElement r = a;
    for (auto &v : r.nf) v = -v;
    return r;
  }
  void validate(const GroupElement &a) const override {
    if (static_cast<int>(a.nf.size()) != dim_)
      throw InvalidElement("element of " + name + " needs " + std::to_string(dim_) + " coordinates");
  }
  auto word_length(const GroupElement &a) const -> std::int64_t override {
    std::int64_t s = 0;
    for (auto v : a.nf) s += abs64(v);
    return s;
  }
  auto generators() const -> std::vector<GroupElement> override {
    std::vector<GroupElement> out;
    for (int i = 0; i < dim_; ++i)
      for (int sgn : {1, -1}) {
        auto e = identity();
        e.nf[i] = sgn;
        out.push_back(e);
      }
    return out;
  }
  auto order_key(const GroupElement &a) const -> std::vector<std::int64_t> override {
    std::vector<std::int64_t> k;
    for (auto v : a.nf) k.push_back(int_key(v));
    return k;
  }
  auto is_abelian() const -> bool override { return true; }
  auto descriptor() const -> nlohmann::json override {
    return {{"family", "IntLattice"}, {"params", {{"dim", dim_}}}};
  }
  auto element_to_json(const GroupElement &a) const -> nlohmann::json override {
    if (dim_ == 1) return a.nf[0];
    return a.nf;
  }
  auto element_from_json(const nlohmann::json &j) const -> GroupElement override {
    if (dim_ == 1 && j.is_number_integer()) return {{j.get<std::int64_t>()}};
    if (!j.is_array()) throw InvalidElement("bad element of " + name + ": " + j.dump());
    GroupElement g;
    for (const auto &v : j) {
      if (!v.is_number_integer()) throw InvalidElement("bad element of " + name + ": " + j.dump());
      g.nf.push_back(v.get<std::int64_t>());
    }
    return g;
  }
  auto format(const GroupElement &a) const -> std::string override {
    if (dim_ == 1) return std::to_string(a.nf[0]);
    std::string s = "(";
    for (int i = 0; i < dim_; ++i) s += (i ? "," : "") + std::to_string(a.nf[i]);
    return s + ")";
  }

private:
  int dim_;
};

class FreeGroup final : public GroupImpl {
public:
  explicit FreeGroup(int rank) : rank_(rank) {
    if (rank < 1) throw ConfigError("FreeGroup rank must be >= 1");
    name = "F" + std::to_string(rank);
    canonical = descriptor().dump();
  }
  auto identity() const -> GroupElement override { return {}; }
  auto mul(const GroupElement &a, const GroupElement &b) const -> GroupElement override {
    GroupElement r = a;
    for (auto l : b.nf) {
      if (!r.nf.empty() && r.nf.back() == -l)
        r.nf.pop_back();
      else
        r.nf.push_back(l);
    }
    return r;
  }
  auto inv(const GroupElement &a) const -> GroupElement override {
    GroupElement r;
    for (auto it = a.nf.rbegin(); it != a.nf.rend(); ++it) r.nf.push_back(-*it);
    return r;
  }
  void validate(const GroupElement &a) const override {
    for (std::size_t i = 0; i < a.nf.size(); ++i) {
      auto l = a.nf[i];
      if (l == 0 || abs64(l) > rank_) throw InvalidElement("bad letter in word of " + name);
      if (i > 0 && a.nf[i - 1] == -l) throw InvalidElement("word is not reduced in " + name);
    }
  }
  auto word_length(const GroupElement &a) const -> std::int64_t override {
    return static_cast<std::int64_t>(a.nf.size());
  }
  auto generators() const -> std::vector<GroupElement> override {
    std::vector<GroupElement> out;
    for (int i = 1; i <= rank_; ++i) {
      out.push_back({{i}});
      out.push_back({{-i}});
    }
    return out;
  }
  // letter order a < A < b < B < ...
  auto order_key(const GroupElement &a) const -> std::vector<std::int64_t> override {
    std::vector<std::int64_t> k;
    for (auto l : a.nf) k.push_back(l > 0 ? 2 * l - 1 : -2 * l);
    return k;
  }
  auto is_abelian() const -> bool override { return rank_ == 1; }
  auto descriptor() const -> nlohmann::json override {
    return {{"family", "FreeGroup"}, {"params", {{"rank", rank_}}}};
  }
  auto element_to_json(const GroupElement &a) const -> nlohmann::json override { return a.nf; }
  auto element_from_json(const nlohmann::json &j) const -> GroupElement override {
    if (!j.is_array()) throw InvalidElement("free group element must be a letter array");
    GroupElement g;
    for (const auto &v : j) {
      if (!v.is_number_integer()) throw InvalidElement("bad letter " + v.dump());
      g.nf.push_back(v.get<std::int64_t>());
    }
    return g;
  }
  auto format(const GroupElement &a) const -> std::string override {
    if (a.nf.empty()) return "e";
    std::string s;
    for (auto l : a.nf) {
      char c = static_cast<char>('a' + (abs64(l) - 1) % 26);
      s += l > 0 ? c : static_cast<char>(c - 'a' + 'A');
    }
    return s;
  }

private:
  int rank_;
};

class InfiniteDihedral final : public GroupImpl {
public:
  InfiniteDihedral() {
    name = "Dinf";
    canonical = descriptor().dump();
  }
  auto identity() const -> GroupElement override { return {{0, 0}}; }
  auto mul(const GroupElement &a, const GroupElement &b) const -> GroupElement override {
    std::int64_t s = a.nf[0] + (a.nf[1] ? -b.nf[0] : b.nf[0]);
    return {{s, (a.nf[1] + b.nf[1]) % 2}};
  }
  auto inv(const GroupElement &a) const -> GroupElement override {
    if (a.nf[1]) return a;
    return {{-a.nf[0], 0}};
  }
  void validate(const GroupElement &a) const override {
    if (a.nf.size() != 2 || (a.nf[1] != 0 && a.nf[1] != 1))
      throw InvalidElement("Dinf element must be [shift, flip] with flip in {0,1}");
  }
  auto word_length(const GroupElement &a) const -> std::int64_t override {
    return abs64(a.nf[0]) + a.nf[1];
  }
  auto generators() const -> std::vector<GroupElement> override {
    return {{{1, 0}}, {{-1, 0}}, {{0, 1}}};
  }
  auto order_key(const GroupElement &a) const -> std::vector<std::int64_t> override {
    return {int_key(a.nf[0]), a.nf[1]};
  }
  auto is_abelian() const -> bool override { return false; }
  auto descriptor() const -> nlohmann::json override {
    return {{"family", "InfiniteDihedral"}, {"params", nlohmann::json::object()}};
  }
  auto element_to_json(const GroupElement &a) const -> nlohmann::json override { return a.nf; }
  auto element_from_json(const nlohmann::json &j) const -> GroupElement override {
    if (!j.is_array() || j.size() != 2) throw InvalidElement("Dinf element must be [shift, flip]");
    return {{j[0].get<std::int64_t>(), j[1].get<std::int64_t>()}};
  }
  auto format(const GroupElement &a) const -> std::string override {
    return "(" + std::to_string(a.nf[0]) + "," + std::to_string(a.nf[1]) + ")";
  }
};

class FiniteGroup final : public GroupImpl {
public:
  FiniteGroup(std::string nm, std::vector<std::vector<int>> table, std::vector<int> gens,
              nlohmann::json params)
      : table_(std::move(table)), params_(std::move(params)) {
    name = std::move(nm);
    const int n = static_cast<int>(table_.size());
    if (n == 0) throw ConfigError("finite group table is empty");
    for (const auto &row : table_) {
      if (static_cast<int>(row.size()) != n) throw ConfigError("multiplication table is not square");
      std::vector<bool> hit(n, false);
      for (int v : row) {
        if (v < 0 || v >= n || hit[v]) throw ConfigError("multiplication table is not a Latin square");
        hit[v] = true;
      }
    }
    for (int c = 0; c < n; ++c) {
      std::vector<bool> hit(n, false);
      for (int r = 0; r < n; ++r) {
        if (hit[table_[r][c]]) throw ConfigError("multiplication table is not a Latin square");
        hit[table_[r][c]] = true;
      }
    }
    identity_ = -1;
    for (int e = 0; e < n && identity_ < 0; ++e) {
      bool ok = true;
      for (int x = 0; x < n && ok; ++x) ok = table_[e][x] == x && table_[x][e] == x;
      if (ok) identity_ = e;
    }
    if (identity_ < 0) throw ConfigError("multiplication table has no identity");
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          if (table_[table_[a][b]][c] != table_[a][table_[b][c]])
            throw ConfigError("multiplication table is not associative");
    inverse_.assign(n, -1);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (table_[a][b] == identity_) inverse_[a] = b;
    // symmetrize generators
    std::set<int> gs;
    for (int g : gens) {
      if (g < 0 || g >= n) throw ConfigError("generator index out of range");
      if (g == identity_) continue;
      gs.insert(g);
      gs.insert(inverse_[g]);
    }
    gens_.assign(gs.begin(), gs.end());
    // BFS distances
    dist_.assign(n, -1);
    dist_[identity_] = 0;
    std::vector<int> frontier{identity_};
    while (!frontier.empty()) {
      std::vector<int> next;
      for (int x : frontier)
        for (int s : gens_) {
          int y = table_[s][x];
          if (dist_[y] < 0) {
            dist_[y] = dist_[x] + 1;
            next.push_back(y);
          }
        }
      frontier = std::move(next);
    }
    for (int x = 0; x < n; ++x)
      if (dist_[x] < 0) throw ConfigError("generators do not generate the finite group " + name);
    abelian_ = true;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (table_[a][b] != table_[b][a]) abelian_ = false;
    canonical = descriptor().dump();
  }

  auto identity() const -> GroupElement override { return {{identity_}}; }
  auto mul(const GroupElement &a, const GroupElement &b) const -> GroupElement override {
    return {{table_[a.nf[0]][b.nf[0]]}};
  }
  auto inv(const GroupElement &a) const -> GroupElement override { return {{inverse_[a.nf[0]]}}; }
  void validate(const GroupElement &a) const override {
    if (a.nf.size() != 1 || a.nf[0] < 0 || a.nf[0] >= static_cast<std::int64_t>(table_.size()))
      throw InvalidElement("element index out of range for " + name);
  }
  auto word_length(const GroupElement &a) const -> std::int64_t override { return dist_[a.nf[0]]; }
  auto generators() const -> std::vector<GroupElement> override {
    std::vector<GroupElement> out;
    for (int g : gens_) out.push_back({{g}});
    return out;
  }
  auto order_key(const GroupElement &a) const -> std::vector<std::int64_t> override { return a.nf; }
  auto order() const -> std::optional<std::size_t> override { return table_.size(); }
  auto is_abelian() const -> bool override { return abelian_; }
  auto descriptor() const -> nlohmann::json override { return {{"family", "Finite"}, {"params", params_}}; }
  auto element_to_json(const GroupElement &a) const -> nlohmann::json override { return a.nf[0]; }
  auto element_from_json(const nlohmann::json &j) const -> GroupElement override {
    if (!j.is_number_integer()) throw InvalidElement("finite group element must be an index");
    return {{j.get<std::int64_t>()}};
  }
  auto format(const GroupElement &a) const -> std::string override {
    if (a.nf[0] == identity_) return "e";
    return "g" + std::to_string(a.nf[0]);
  }

private:
  std::vector<std::vector<int>> table_;
  nlohmann::json params_;
  int identity_ = 0;
  std::vector<int> inverse_;
  std::vector<int> gens_;
  std::vector<std::int64_t> dist_;
  bool abelian_ = true;
};

class ProductGroup final : public GroupImpl {
public:
  ProductGroup(Group left, Group right) : left_(std::move(left)), right_(std::move(right)) {
    name = left_.name() + "x" + right_.name();
    canonical = descriptor().dump();
  }
  auto split(const GroupElement &a) const -> std::pair<GroupElement, GroupElement> {
    auto n = static_cast<std::size_t>(a.nf.at(0));
    GroupElement l{{a.nf.begin() + 1, a.nf.begin() + 1 + static_cast<std::ptrdiff_t>(n)}};
    GroupElement r{{a.nf.begin() + 1 + static_cast<std::ptrdiff_t>(n), a.nf.end()}};
    return {l, r};
  }
  static auto join(const GroupElement &l, const GroupElement &r) -> GroupElement {
    GroupElement g;
    g.nf.push_back(static_cast<std::int64_t>(l.nf.size()));
    g.nf.insert(g.nf.end(), l.nf.begin(), l.nf.end());
    g.nf.insert(g.nf.end(), r.nf.begin(), r.nf.end());
    return g;
  }
  auto identity() const -> GroupElement override { return join(left_.identity(), right_.identity()); }
  auto mul(const GroupElement &a, const GroupElement &b) const -> GroupElement override {
    auto [al, ar] = split(a);
    auto [bl, br] = split(b);
    return join(left_.mul(al, bl), right_.mul(ar, br));
  }
  auto inv(const GroupElement &a) const -> GroupElement override {
    auto [l, r] = split(a);
    return join(left_.inv(l), right_.inv(r));
  }
  void validate(const GroupElement &a) const override {
    if (a.nf.empty() || a.nf[0] < 0 || static_cast<std::size_t>(a.nf[0]) + 1 > a.nf.size())
      throw InvalidElement("malformed product element");
    auto [l, r] = split(a);
    left_.validate(l);
    right_.validate(r);
  }
  auto word_length(const GroupElement &a) const -> std::int64_t override {
    auto [l, r] = split(a);
    return left_.impl().word_length(l) + right_.impl().word_length(r);
  }
  auto generators() const -> std::vector<GroupElement> override {
    std::vector<GroupElement> out;
    for (const auto &s : left_.generators()) out.push_back(join(s, right_.identity()));
    for (const auto &t : right_.generators()) out.push_back(join(left_.identity(), t));
    return out;
  }
  auto order_key(const GroupElement &a) const -> std::vector<std::int64_t> override {
    auto [l, r] = split(a);
    auto k = left_.impl().order_key(l);
    k.push_back(-1);
    auto kr = right_.impl().order_key(r);
    k.insert(k.end(), kr.begin(), kr.end());
    return k;
  }
  auto order() const -> std::optional<std::size_t> override {
    auto a = left_.order();
    auto b = right_.order();
    if (a && b) return *a * *b;
    return std::nullopt;
  }
  auto is_abelian() const -> bool override { return left_.is_abelian() && right_.is_abelian(); }
  auto descriptor() const -> nlohmann::json override {
    return {{"family", "Product"}, {"params", {{"left", left_.descriptor()}, {"right", right_.descriptor()}}}};
  }
  auto element_to_json(const GroupElement &a) const -> nlohmann::json override {
    auto [l, r] = split(a);
    return nlohmann::json::array({left_.element_to_json(l), right_.element_to_json(r)});
  }
  auto element_from_json(const nlohmann::json &j) const -> GroupElement override {
    if (!j.is_array() || j.size() != 2) throw InvalidElement("product element must be [left, right]");
    return join(left_.element_from_json(j[0]), right_.element_from_json(j[1]));
  }
  auto format(const GroupElement &a) const -> std::string override {
    auto [l, r] = split(a);
    return "(" + left_.format(l) + "," + right_.format(r) + ")";
  }

  [[nodiscard]] auto left() const -> const Group & { return left_; }
  [[nodiscard]] auto right() const -> const Group & { return right_; }

private:
  Group left_, right_;
};

} // namespace detail

// ---------------------------------------------------------------------------
// constructors

inline auto int_lattice(int dim) -> Group { return Group(std::make_shared<detail::IntLattice>(dim)); }
inline auto free_group(int rank) -> Group { return Group(std::make_shared<detail::FreeGroup>(rank)); }
inline auto infinite_dihedral() -> Group { return Group(std::make_shared<detail::InfiniteDihedral>()); }

inline auto finite_group(std::string name, std::vector<std::vector<int>> table, std::vector<int> gens)
    -> Group {
  nlohmann::json params = {{"name", name}, {"table", table}, {"generators", gens}};
  return Group(std::make_shared<detail::FiniteGroup>(std::move(name), std::move(table), std::move(gens),
                                                     std::move(params)));
}

/// Z/m with generator 1; m = 1 gives the trivial group.
inline auto cyclic_group(int m) -> Group {
  if (m < 1) throw ConfigError("cyclic group order must be >= 1");
  std::vector<std::vector<int>> t(m, std::vector<int>(m));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) t[a][b] = (a + b) % m;
  std::vector<int> gens;
  if (m > 1) gens.push_back(1);
  std::string name = m == 1 ? "trivial" : "Z/" + std::to_string(m);
  nlohmann::json params = {{"cyclic", m}};
  return Group(std::make_shared<detail::FiniteGroup>(name, std::move(t), gens, std::move(params)));
}

/// Dihedral group of order 2n: index i + n*j stands for r^i f^j.
inline auto dihedral_group(int n) -> Group {
  if (n < 2) throw ConfigError("dihedral group needs n >= 2");
  const int size = 2 * n;
  std::vector<std::vector<int>> t(size, std::vector<int>(size));
  for (int a = 0; a < size; ++a)
    for (int b = 0; b < size; ++b) {
      int i1 = a % n, j1 = a / n, i2 = b % n, j2 = b / n;
      // r^i1 f^j1 r^i2 f^j2 = r^(i1 + (-1)^j1 i2) f^(j1+j2)
      int i = ((i1 + (j1 ? -i2 : i2)) % n + n) % n;
      t[a][b] = i + n * ((j1 + j2) % 2);
    }
  nlohmann::json params = {{"dihedral", n}};
  return Group(std::make_shared<detail::FiniteGroup>("D" + std::to_string(n), std::move(t),
                                                     std::vector<int>{1, n}, std::move(params)));
}

inline auto product_group(const Group &left, const Group &right) -> Group {
  return Group(std::make_shared<detail::ProductGroup>(left, right));
}

/// Build a group from its JSON descriptor {"family": ..., "params": {...}}.
inline auto group_from_json(const nlohmann::json &j) -> Group {
  if (!j.is_object() || !j.contains("family")) throw ConfigError("group descriptor needs a \"family\"");
  const auto family = j.at("family").get<std::string>();
  const auto params = j.value("params", nlohmann::json::object());
  try {
    if (family == "IntLattice") return int_lattice(params.at("dim").get<int>());
    if (family == "FreeGroup") return free_group(params.at("rank").get<int>());
    if (family == "InfiniteDihedral") return infinite_dihedral();
    if (family == "Finite") {
      if (params.contains("cyclic")) return cyclic_group(params.at("cyclic").get<int>());
      if (params.contains("dihedral")) return dihedral_group(params.at("dihedral").get<int>());
      return finite_group(params.value("name", std::string("finite")),
                          params.at("table").get<std::vector<std::vector<int>>>(),
                          params.at("generators").get<std::vector<int>>());
    }
    if (family == "Product")
      return product_group(group_from_json(params.at("left")), group_from_json(params.at("right")));
  } catch (const nlohmann::json::exception &e) {
    throw ConfigError(std::string("bad group params: ") + e.what());
  }
  throw ConfigError("unknown group family '" + family + "'");
}

struct NamedGroup {
  std::string name;
  std::string description;
};

inline auto group_catalog() -> std::vector<NamedGroup> {
  return {
      {"Z", "integers, generators +-1"},
      {"Z^2", "integer lattice Z^2, standard generators"},
      {"Z^3", "integer lattice Z^3"},
      {"F2", "free group on a, b"},
      {"Dinf", "infinite dihedral group Z x| Z/2, generators t, t^-1, r"},
      {"trivial", "the one-element group"},
      {"Z/2", "cyclic group of order 2"},
      {"Z2", "alias of Z/2"},
      {"Z/3", "cyclic group of order 3"},
      {"Z/4", "cyclic group of order 4"},
      {"Z/6", "cyclic group of order 6"},
      {"D3", "dihedral group of order 6"},
      {"ZxZ/2", "product Z x Z/2"},
  };
}

namespace detail {
inline auto make_named_group(const std::string &name) -> Group {
  auto num = [&](std::size_t from) {
    try {
      std::size_t used = 0;
      int v = std::stoi(name.substr(from), &used);
      if (used + from != name.size()) throw ConfigError("unknown group '" + name + "'");
      return v;
    } catch (const std::logic_error &) {
      throw ConfigError("unknown group '" + name + "'");
    }
  };
  if (name == "Z") return int_lattice(1);
  if (name == "Dinf") return infinite_dihedral();
  if (name == "trivial") return cyclic_group(1);
  if (name == "Z2") return cyclic_group(2);
  if (name == "ZxZ/2") return product_group(int_lattice(1), cyclic_group(2));
  if (name.rfind("Z^", 0) == 0) return int_lattice(num(2));
  if (name.rfind("Z/", 0) == 0) return cyclic_group(num(2));
  if (name.size() > 1 && name[0] == 'F') return free_group(num(1));
  if (name.size() > 1 && name[0] == 'D') return dihedral_group(num(1));
  throw ConfigError("unknown group '" + name + "'");
}
} // namespace detail

/// Look up a built-in group; also accepts "Z^d", "Fk", "Z/m" and "Dn" patterns.
/// Instances are shared so their ball caches are reused.
inline auto named_group(const std::string &name) -> Group {
  static std::mutex mu;
  static std::map<std::string, Group> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(name);
  if (it != cache.end()) return it->second;
  auto g = detail::make_named_group(name);
  cache.emplace(name, g);
  return g;
}

/// Accepts either a name string or a full descriptor object.
inline auto group_from_config(const nlohmann::json &j) -> Group {
  if (j.is_string()) return named_group(j.get<std::string>());
  return group_from_json(j);
}

} // namespace coarse

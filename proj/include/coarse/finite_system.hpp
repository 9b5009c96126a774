#pragma once

#include "errors.hpp"
#include "finite_index.hpp"
#include "group.hpp"

#include <nlohmann/json.hpp>

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace coarse {

/// Outcome of an exhaustive table check: the first failing condition with the
/// tuple that violates it.
struct CheckReport {
  bool ok = true;
  std::string failure;
  nlohmann::ordered_json witness;

  auto fail(std::string what, nlohmann::ordered_json w) -> CheckReport & {
    if (ok) {
      ok = false;
      failure = std::move(what);
      witness = std::move(w);
    }
    return *this;
  }

  [[nodiscard]] auto to_json() const -> nlohmann::ordered_json {
    nlohmann::ordered_json j;
    j["ok"] = ok;
    if (!ok) {
      j["failure"] = failure;
      j["witness"] = witness;
    }
    return j;
  }
};

class InvariantViolation : public PreconditionFailed {
public:
  explicit InvariantViolation(CheckReport r)
      : PreconditionFailed(r.failure + " at " + r.witness.dump()), report_(std::move(r)) {}
  [[nodiscard]] auto report() const -> const CheckReport & { return report_; }

private:
  CheckReport report_;
};

inline void require(const CheckReport &r) {
  if (!r.ok) throw InvariantViolation(r);
}

using GroupTable = std::shared_ptr<const FiniteIndex>;
using ActionTable = std::vector<std::vector<std::size_t>>; // [group element index][point]

inline auto group_table(const Group &g) -> GroupTable { return std::make_shared<const FiniteIndex>(g); }

namespace detail {
inline auto check_shape(const ActionTable &t, std::size_t rows, std::size_t cols, std::size_t range,
                        const std::string &name, CheckReport &r) -> bool {
  if (t.size() != rows) {
    r.fail(name + " has wrong number of rows", {{"expected", rows}, {"got", t.size()}});
    return false;
  }
  for (std::size_t i = 0; i < rows; ++i) {
    if (t[i].size() != cols) {
      r.fail(name + " row has wrong length", {{"row", i}, {"expected", cols}, {"got", t[i].size()}});
      return false;
    }
    for (std::size_t j = 0; j < cols; ++j)
      if (t[i][j] >= range) {
        r.fail(name + " entry out of range", {{"row", i}, {"col", j}, {"value", t[i][j]}});
        return false;
      }
  }
  return true;
}

inline auto check_map_shape(const std::vector<std::size_t> &m, std::size_t size, std::size_t range,
                            const std::string &name, CheckReport &r) -> bool {
  if (m.size() != size) {
    r.fail(name + " has wrong length", {{"expected", size}, {"got", m.size()}});
    return false;
  }
  for (std::size_t i = 0; i < size; ++i)
    if (m[i] >= range) {
      r.fail(name + " entry out of range", {{"index", i}, {"value", m[i]}});
      return false;
    }
  return true;
}

inline auto table_to_json(const ActionTable &t) -> nlohmann::ordered_json {
  auto a = nlohmann::ordered_json::array();
  for (const auto &row : t) a.push_back(row);
  return a;
}

inline auto table_from_json(const nlohmann::json &j) -> ActionTable {
  return j.get<std::vector<std::vector<std::size_t>>>();
}
} // namespace detail

/// A finite group acting on a finite set of labelled points.
struct FiniteSystem {
  GroupTable group;
  std::vector<std::string> points;
  ActionTable action; // action[g][x] = g.x

  [[nodiscard]] auto size() const -> std::size_t { return points.size(); }
  [[nodiscard]] auto act(std::size_t g, std::size_t x) const -> std::size_t { return action[g][x]; }

  /// e.x = x and (gh).x = g.(h.x), exhaustively.
  [[nodiscard]] auto check() const -> CheckReport {
    CheckReport r;
    const auto &G = *group;
    if (!detail::check_shape(action, G.order(), size(), size(), "action table", r)) return r;
    for (std::size_t x = 0; x < size(); ++x)
      if (action[G.identity()][x] != x) return r.fail("identity does not act trivially", {{"x", x}});
    for (std::size_t g = 0; g < G.order(); ++g)
      for (std::size_t h = 0; h < G.order(); ++h)
        for (std::size_t x = 0; x < size(); ++x)
          if (action[G.mul(g, h)][x] != action[g][action[h][x]])
            return r.fail("action is not compatible with multiplication", {{"g", G.format(g)}, {"h", G.format(h)}, {"x", x}});
    return r;
  }

  /// A nonidentity g and a point it fixes, if any.
  [[nodiscard]] auto fixed_point() const -> std::optional<std::pair<std::size_t, std::size_t>> {
    for (std::size_t g = 1; g < group->order(); ++g)
      for (std::size_t x = 0; x < size(); ++x)
        if (action[g][x] == x) return std::make_pair(g, x);
    return std::nullopt;
  }
  [[nodiscard]] auto is_free() const -> bool { return !fixed_point(); }

  [[nodiscard]] auto to_json() const -> nlohmann::ordered_json {
    nlohmann::ordered_json j;
    j["group"] = group->group().descriptor();
    j["points"] = points;
    j["action"] = detail::table_to_json(action);
    j["free"] = is_free();
    return j;
  }

  static auto from_json(const nlohmann::json &j) -> FiniteSystem {
    try {
      FiniteSystem s;
      s.group = group_table(group_from_config(j.at("group")));
      s.points = j.at("points").get<std::vector<std::string>>();
      s.action = detail::table_from_json(j.at("action"));
      return s;
    } catch (const nlohmann::json::exception &e) {
      throw ConfigError(std::string("bad system JSON: ") + e.what());
    }
  }
};

/// G acting on itself by left multiplication.
inline auto translation_system(const GroupTable &G) -> FiniteSystem {
  FiniteSystem s;
  s.group = G;
  for (std::size_t x = 0; x < G->order(); ++x) s.points.push_back(G->format(x));
  s.action.assign(G->order(), std::vector<std::size_t>(G->order()));
  for (std::size_t g = 0; g < G->order(); ++g)
    for (std::size_t x = 0; x < G->order(); ++x) s.action[g][x] = G->mul(g, x);
  return s;
}

/// G acting trivially on `count` points.
inline auto trivial_system(const GroupTable &G, std::size_t count) -> FiniteSystem {
  FiniteSystem s;
  s.group = G;
  for (std::size_t x = 0; x < count; ++x) s.points.push_back("p" + std::to_string(x));
  s.action.assign(G->order(), std::vector<std::size_t>(count));
  for (auto &row : s.action)
    for (std::size_t x = 0; x < count; ++x) row[x] = x;
  return s;
}

} // namespace coarse

#pragma once

#include "coarse_map.hpp"
#include "group.hpp"

#include <string>
#include <vector>

namespace coarse {

struct GalleryEntry {
  std::string name;
  std::string source;
  std::string target;
  std::string description;
};

inline auto map_catalog() -> std::vector<GalleryEntry> {
  return {
      {"z-id", "Z", "Z", "identity x -> x"},
      {"z-double", "Z", "Z", "x -> 2x (coarse equivalence onto evens' translates)"},
      {"z-double-plus-one", "Z", "Z", "x -> 2x + 1 (close to z-double)"},
      {"z-triple", "Z", "Z", "x -> 3x"},
      {"z-abs", "Z", "Z", "x -> |x| (coarse map, not a coarse embedding)"},
      {"z-parity-shift", "Z", "Z", "x -> x + (x mod 2) (close to z-id)"},
      {"z-floor-even", "Z", "Z", "x -> 2 floor(x/2) (close to z-id)"},
      {"z-into-z2", "Z", "Z^2", "x -> (x, 0), isometric embedding"},
      {"f2-abelianize", "F2", "Z", "exponent sum of a reduced word; not proper"},
      {"z-to-dihedral", "Z", "Dinf", "n -> (n, 0), translation subgroup"},
      {"dihedral-to-z", "Dinf", "Z", "(s, f) -> (-1)^f s"},
      {"triv-into-z2", "trivial", "Z/2", "inclusion of the trivial group"},
      {"z2-const-z3", "Z/2", "Z/3", "constant map onto the identity"},
      {"z2-into-z4", "Z/2", "Z/4", "x -> 2x"},
      {"z4-mod-z2", "Z/4", "Z/2", "reduction mod 2"},
  };
}

namespace detail {
inline auto z1(std::int64_t v) -> GroupElement { return {{v}}; }
inline auto floor_div2(std::int64_t v) -> std::int64_t { return v >= 0 ? v / 2 : -((-v + 1) / 2); }
inline auto mod2(std::int64_t v) -> std::int64_t { return ((v % 2) + 2) % 2; }
} // namespace detail

/// Built-in map by name (see map_catalog()).
inline auto gallery_map(const std::string &name) -> CoarseMap {
  using detail::z1;
  using V = std::vector<GroupElement>;
  const auto Z = named_group("Z");
  if (name == "z-id") {
    auto m = identity_map(Z);
    return CoarseMap(Z, Z, m.rule(), name, m.fiber_rule());
  }
  if (name == "z-double")
    return CoarseMap(
        Z, Z, [](const GroupElement &x) { return z1(2 * x.nf[0]); }, name,
        FiberRule([](const GroupElement &y) { return y.nf[0] % 2 == 0 ? V{z1(y.nf[0] / 2)} : V{}; }));
  if (name == "z-double-plus-one")
    return CoarseMap(
        Z, Z, [](const GroupElement &x) { return z1(2 * x.nf[0] + 1); }, name,
        FiberRule([](const GroupElement &y) {
          return detail::mod2(y.nf[0]) == 1 ? V{z1((y.nf[0] - 1) / 2)} : V{};
        }));
  if (name == "z-triple")
    return CoarseMap(
        Z, Z, [](const GroupElement &x) { return z1(3 * x.nf[0]); }, name,
        FiberRule([](const GroupElement &y) { return y.nf[0] % 3 == 0 ? V{z1(y.nf[0] / 3)} : V{}; }));
  if (name == "z-abs")
    return CoarseMap(
        Z, Z, [](const GroupElement &x) { return z1(x.nf[0] < 0 ? -x.nf[0] : x.nf[0]); }, name,
        FiberRule([](const GroupElement &y) {
          auto v = y.nf[0];
          if (v < 0) return V{};
          if (v == 0) return V{z1(0)};
          return V{z1(v), z1(-v)};
        }));
  if (name == "z-parity-shift")
    return CoarseMap(
        Z, Z, [](const GroupElement &x) { return z1(x.nf[0] + detail::mod2(x.nf[0])); }, name,
        FiberRule([](const GroupElement &y) {
          auto v = y.nf[0];
          return detail::mod2(v) == 0 ? V{z1(v), z1(v - 1)} : V{};
        }));
  if (name == "z-floor-even")
    return CoarseMap(
        Z, Z, [](const GroupElement &x) { return z1(2 * detail::floor_div2(x.nf[0])); }, name,
        FiberRule([](const GroupElement &y) {
          auto v = y.nf[0];
          return detail::mod2(v) == 0 ? V{z1(v), z1(v + 1)} : V{};
        }));
  if (name == "z-into-z2") {
    auto Z2 = named_group("Z^2");
    return CoarseMap(
        Z, Z2, [](const GroupElement &x) { return GroupElement{{x.nf[0], 0}}; }, name,
        FiberRule([](const GroupElement &y) { return y.nf[1] == 0 ? V{z1(y.nf[0])} : V{}; }));
  }
  if (name == "f2-abelianize") {
    auto F2 = named_group("F2");
    return CoarseMap(F2, Z,
                     [](const GroupElement &x) {
                       std::int64_t s = 0;
                       for (auto l : x.nf) s += l > 0 ? 1 : -1;
                       return z1(s);
                     },
                     name);
  }
  if (name == "z-to-dihedral") {
    auto D = named_group("Dinf");
    return CoarseMap(
        Z, D, [](const GroupElement &x) { return GroupElement{{x.nf[0], 0}}; }, name,
        FiberRule([](const GroupElement &y) { return y.nf[1] == 0 ? V{z1(y.nf[0])} : V{}; }));
  }
  if (name == "dihedral-to-z") {
    auto D = named_group("Dinf");
    return CoarseMap(
        D, Z, [](const GroupElement &x) { return z1(x.nf[1] ? -x.nf[0] : x.nf[0]); }, name,
        FiberRule([](const GroupElement &y) {
          return V{GroupElement{{y.nf[0], 0}}, GroupElement{{-y.nf[0], 1}}};
        }));
  }
  if (name == "triv-into-z2")
    return CoarseMap(named_group("trivial"), named_group("Z/2"),
                     [](const GroupElement &) { return GroupElement{{0}}; }, name);
  if (name == "z2-const-z3")
    return CoarseMap(named_group("Z/2"), named_group("Z/3"),
                     [](const GroupElement &) { return GroupElement{{0}}; }, name);
  if (name == "z2-into-z4")
    return CoarseMap(named_group("Z/2"), named_group("Z/4"),
                     [](const GroupElement &x) { return GroupElement{{2 * x.nf[0]}}; }, name);
  if (name == "z4-mod-z2")
    return CoarseMap(named_group("Z/4"), named_group("Z/2"),
                     [](const GroupElement &x) { return GroupElement{{x.nf[0] % 2}}; }, name);
  throw ConfigError("unknown map '" + name + "'");
}

/// Gallery map by name, or a table map {"source", "target", "table", "name"}.
inline auto map_from_config(const nlohmann::json &j) -> CoarseMap {
  if (j.is_string()) return gallery_map(j.get<std::string>());
  if (!j.is_object() || !j.contains("table")) throw ConfigError("map must be a gallery name or a table object");
  auto src = group_from_config(j.at("source"));
  auto tgt = group_from_config(j.at("target"));
  return map_from_table(src, tgt, j.at("table"), j.value("name", std::string("table-map")));
}

/// Pairs of gallery maps that are close (phi ~ psi).
inline auto close_gallery_pairs() -> std::vector<std::pair<std::string, std::string>> {
  return {{"z-double", "z-double-plus-one"}, {"z-id", "z-parity-shift"}, {"z-id", "z-floor-even"}};
}

/// Gallery maps that are coarse embeddings.
inline auto gallery_embeddings() -> std::vector<std::string> {
  return {"z-id",          "z-double",      "z-double-plus-one", "z-triple",     "z-parity-shift",
          "z-floor-even",  "z-into-z2",     "z-to-dihedral",     "dihedral-to-z", "triv-into-z2",
          "z2-const-z3",   "z2-into-z4",    "z4-mod-z2"};
}

} // namespace coarse

#pragma once

#include "group.hpp"

#include <functional>
#include <memory>
#include <set>
#include <string>
#include <utility>

namespace coarse {

/// Decidable subset of a group: a membership predicate plus a readable description.
struct Subset {
  std::string description;
  std::function<bool(const GroupElement &)> contains;

  auto operator()(const GroupElement &g) const -> bool { return contains(g); }
};

inline auto subset_all() -> Subset {
  return {"all", [](const GroupElement &) { return true; }};
}

inline auto subset_none() -> Subset {
  return {"none", [](const GroupElement &) { return false; }};
}

inline auto subset_finite(std::set<GroupElement> members, std::string description = "finite set") -> Subset {
  auto m = std::make_shared<const std::set<GroupElement>>(std::move(members));
  return {std::move(description), [m](const GroupElement &g) { return m->contains(g); }};
}

inline auto subset_complement(Subset a) -> Subset {
  auto desc = "complement of (" + a.description + ")";
  return {std::move(desc), [c = std::move(a.contains)](const GroupElement &g) { return !c(g); }};
}

inline auto subset_intersect(Subset a, Subset b) -> Subset {
  auto desc = "(" + a.description + ") and (" + b.description + ")";
  return {std::move(desc), [ca = std::move(a.contains), cb = std::move(b.contains)](const GroupElement &g) {
            return ca(g) && cb(g);
          }};
}

/// {g : l(g) <= r}
inline auto subset_word_length_at_most(Group group, std::int64_t r) -> Subset {
  return {"word length <= " + std::to_string(r),
          [group = std::move(group), r](const GroupElement &g) { return group.word_length(g) <= r; }};
}

/// {x : rule(x) in target}
inline auto subset_preimage(std::function<GroupElement(const GroupElement &)> rule, Subset target,
                            const std::string &rule_name) -> Subset {
  auto desc = "preimage under " + rule_name + " of (" + target.description + ")";
  return {std::move(desc), [rule = std::move(rule), t = std::move(target.contains)](const GroupElement &g) {
            return t(rule(g));
          }};
}

inline auto subset_predicate(std::string description, std::function<bool(const GroupElement &)> pred)
    -> Subset {
  return {std::move(description), std::move(pred)};
}

} // namespace coarse

#pragma once

#include "errors.hpp"
#include "group.hpp"

#include <map>
#include <string>
#include <vector>

namespace coarse {

/// Element numbering and multiplication table of a finite group.
class FiniteIndex {
public:
  explicit FiniteIndex(Group g) : group_(std::move(g)) {
    if (!group_.is_finite()) throw PreconditionFailed("finite group required, got " + group_.name());
    elems_ = group_.elements();
    if (elems_.empty() || !group_.is_identity(elems_.front())) throw Error("enumeration of " + group_.name() + " does not start at e");
    for (std::size_t i = 0; i < elems_.size(); ++i) pos_.emplace(elems_[i], i);
    const auto n = elems_.size();
    mul_.assign(n * n, 0);
    inv_.assign(n, 0);
    for (std::size_t a = 0; a < n; ++a) {
      inv_[a] = pos_.at(group_.inv(elems_[a]));
      for (std::size_t b = 0; b < n; ++b) mul_[a * n + b] = pos_.at(group_.mul(elems_[a], elems_[b]));
    }
  }

  [[nodiscard]] auto group() const -> const Group & { return group_; }
  [[nodiscard]] auto order() const -> std::size_t { return elems_.size(); }
  [[nodiscard]] auto element(std::size_t i) const -> const GroupElement & { return elems_.at(i); }
  [[nodiscard]] auto index(const GroupElement &g) const -> std::size_t { return pos_.at(g); }
  [[nodiscard]] auto mul(std::size_t a, std::size_t b) const -> std::size_t { return mul_[a * elems_.size() + b]; }
  [[nodiscard]] auto inv(std::size_t a) const -> std::size_t { return inv_[a]; }
  [[nodiscard]] auto identity() const -> std::size_t { return 0; } // ball order starts at e
  [[nodiscard]] auto format(std::size_t a) const -> std::string { return group_.format(elems_.at(a)); }

private:
  Group group_;
  std::vector<GroupElement> elems_;
  std::map<GroupElement, std::size_t> pos_;
  std::vector<std::size_t> mul_, inv_;
};

} // namespace coarse

#pragma once

#include "coarse/coarse.hpp"

#include <gtest/gtest.h>

#include <cstdint>
#include <initializer_list>
#include <utility>

namespace coarse::testing {

inline auto Zgrp() -> Group { return named_group("Z"); }
inline auto z(std::int64_t v) -> GroupElement { return {{v}}; }

/// sum c * delta_x over Z with integer coefficients
inline auto zfun(std::initializer_list<std::pair<std::int64_t, long>> terms, Ring ring = Ring::integers())
    -> FinSupFun {
  FinSupFun f(Zgrp(), ring, 1);
  for (const auto &[x, c] : terms) f.add(z(x), {ring.make(Scalar(c))});
  return f;
}

inline auto el(const Group &G, const nlohmann::json &j) -> GroupElement { return G.element_from_json(j); }

} // namespace coarse::testing

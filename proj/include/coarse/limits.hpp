#pragma once

#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <string>

namespace coarse {

/// Process-wide resource caps. Exceeding one raises ResourceLimit.
struct Limits {
  /// Elements held in any single group enumeration cache.
  std::size_t max_elements = 4'000'000;
  /// Largest radius accepted by ball().
  std::int64_t max_radius = 200;
  /// Largest matrix side (rows or columns) the homology engine assembles.
  std::size_t max_matrix_dim = 250'000;
  /// Default number of omega blocks / enumeration steps before giving up.
  std::size_t max_enumeration = 1'000'000;
};

namespace detail {
inline auto limits_storage() -> Limits & {
  static Limits l = [] {
    Limits out;
    // COARSE_MEMORY_CAP scales the element and matrix caps (value = max elements)
    if (const char *cap = std::getenv("COARSE_MEMORY_CAP")) {
      try {
        auto v = std::stoull(cap);
        if (v > 0) {
          out.max_elements = v;
          out.max_matrix_dim = v;
          out.max_enumeration = v;
        }
      } catch (const std::exception &) {
        // ignored: malformed cap falls back to defaults
      }
    }
    return out;
  }();
  return l;
}
} // namespace detail

inline auto limits() -> const Limits & { return detail::limits_storage(); }

/// Override caps (tests and the CLI). Not synchronized: call before spawning work.
inline void set_limits(const Limits &l) { detail::limits_storage() = l; }

} // namespace coarse

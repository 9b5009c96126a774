#pragma once

#include "errors.hpp"

#include <gmpxx.h>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace coarse {

using Scalar = mpq_class;
/// A value in R^k.
using Vec = std::vector<Scalar>;

enum class RingKind { Integers, Rationals, IntegersMod };

/// Exact coefficient ring: Z, Q or Z/m. Every scalar is stored as an mpq_class
/// and kept in canonical form by normalize(): integral for Z and Z/m, reduced
/// into [0, m) for Z/m.
class Ring {
public:
  Ring() = default;

  static auto integers() -> Ring { return Ring(RingKind::Integers, 0); }
  static auto rationals() -> Ring { return Ring(RingKind::Rationals, 0); }
  static auto mod(std::int64_t m) -> Ring {
    if (m < 2) throw ConfigError("Z/m requires m >= 2, got " + std::to_string(m));
    return Ring(RingKind::IntegersMod, m);
  }

  [[nodiscard]] auto kind() const -> RingKind { return kind_; }
  [[nodiscard]] auto modulus() const -> std::int64_t { return modulus_; }

  [[nodiscard]] auto is_prime_field() const -> bool {
    if (kind_ != RingKind::IntegersMod) return false;
    for (std::int64_t d = 2; d * d <= modulus_; ++d)
      if (modulus_ % d == 0) return false;
    return true;
  }
  [[nodiscard]] auto is_field() const -> bool {
    return kind_ == RingKind::Rationals || is_prime_field();
  }

  void normalize(Scalar &v) const {
    switch (kind_) {
    case RingKind::Rationals: v.canonicalize(); break;
    case RingKind::Integers:
      v.canonicalize();
      if (v.get_den() != 1) throw InvalidElement("non-integral value " + v.get_str() + " in Z");
      break;
    case RingKind::IntegersMod: {
      v.canonicalize();
      if (v.get_den() != 1) {
        // a/b in Z/m when b is a unit
        mpz_class inv;
        mpz_class m = modulus_;
        if (mpz_invert(inv.get_mpz_t(), v.get_den_mpz_t(), m.get_mpz_t()) == 0)
          throw InvalidElement("denominator not invertible in " + name());
        mpz_class num = v.get_num() * inv;
        v = num;
      }
      mpz_class r;
      mpz_class m = modulus_;
      mpz_fdiv_r(r.get_mpz_t(), v.get_num_mpz_t(), m.get_mpz_t());
      v = r;
      break;
    }
    }
  }

  [[nodiscard]] auto make(const Scalar &v) const -> Scalar {
    Scalar r = v;
    normalize(r);
    return r;
  }
  [[nodiscard]] auto make(long v) const -> Scalar { return make(Scalar(v)); }

  [[nodiscard]] auto add(const Scalar &a, const Scalar &b) const -> Scalar { return make(a + b); }
  [[nodiscard]] auto sub(const Scalar &a, const Scalar &b) const -> Scalar { return make(a - b); }
  [[nodiscard]] auto mul(const Scalar &a, const Scalar &b) const -> Scalar { return make(a * b); }
  [[nodiscard]] auto neg(const Scalar &a) const -> Scalar { return make(-a); }

  /// Multiplicative inverse; only defined for units.
  [[nodiscard]] auto inverse(const Scalar &a) const -> Scalar {
    if (a == 0) throw PreconditionFailed("division by zero in " + name());
    switch (kind_) {
    case RingKind::Rationals: return make(1 / a);
    case RingKind::Integers:
      if (a == 1 || a == -1) return a;
      throw PreconditionFailed(a.get_str() + " is not a unit in Z");
    case RingKind::IntegersMod: {
      mpz_class inv;
      mpz_class m = modulus_;
      mpz_class n = a.get_num();
      if (mpz_invert(inv.get_mpz_t(), n.get_mpz_t(), m.get_mpz_t()) == 0)
        throw PreconditionFailed(a.get_str() + " is not a unit in " + name());
      return make(Scalar(inv));
    }
    }
    return a;
  }

  [[nodiscard]] auto is_unit(const Scalar &a) const -> bool {
    switch (kind_) {
    case RingKind::Rationals: return a != 0;
    case RingKind::Integers: return a == 1 || a == -1;
    case RingKind::IntegersMod: {
      mpz_class g;
      mpz_class m = modulus_;
      mpz_class n = a.get_num();
      mpz_gcd(g.get_mpz_t(), n.get_mpz_t(), m.get_mpz_t());
      return g == 1;
    }
    }
    return false;
  }

  [[nodiscard]] auto name() const -> std::string {
    switch (kind_) {
    case RingKind::Integers: return "Z";
    case RingKind::Rationals: return "Q";
    case RingKind::IntegersMod: return "Z/" + std::to_string(modulus_);
    }
    return "?";
  }

  static auto parse(const std::string &s) -> Ring {
    if (s == "Z" || s == "integers") return integers();
    if (s == "Q" || s == "rationals") return rationals();
    if (s.rfind("Z/", 0) == 0) {
      try {
        return mod(std::stoll(s.substr(2)));
      } catch (const std::logic_error &) {
        throw ConfigError("bad ring '" + s + "'");
      }
    }
    throw ConfigError("unknown ring '" + s + "' (expected Z, Q or Z/m)");
  }

  auto operator==(const Ring &o) const -> bool = default;

private:
  Ring(RingKind k, std::int64_t m) : kind_(k), modulus_(m) {}

  RingKind kind_ = RingKind::Integers;
  std::int64_t modulus_ = 0;
};

// ---- R^k helpers -----------------------------------------------------------

inline auto zero_vec(int rank) -> Vec { return Vec(static_cast<std::size_t>(rank), Scalar(0)); }

inline auto is_zero(const Vec &v) -> bool {
  for (const auto &s : v)
    if (s != 0) return false;
  return true;
}

inline void add_into(const Ring &ring, Vec &acc, const Vec &v, const Scalar &factor = Scalar(1)) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = ring.make(acc[i] + factor * v[i]);
}

inline auto scaled(const Ring &ring, const Vec &v, const Scalar &factor) -> Vec {
  Vec r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = ring.mul(v[i], factor);
  return r;
}

inline auto unit_vec(int rank, int index) -> Vec {
  Vec v = zero_vec(rank);
  v[static_cast<std::size_t>(index)] = 1;
  return v;
}

// ---- JSON ------------------------------------------------------------------

inline auto scalar_to_json(const Scalar &s) -> nlohmann::json {
  if (s.get_den() == 1 && s.get_num().fits_slong_p()) return s.get_num().get_si();
  return s.get_str();
}

inline auto scalar_from_json(const nlohmann::json &j, const Ring &ring) -> Scalar {
  if (j.is_number_integer()) return ring.make(Scalar(j.get<long>()));
  if (j.is_string()) {
    Scalar s;
    if (s.set_str(j.get<std::string>(), 10) != 0) throw ConfigError("bad scalar " + j.dump());
    return ring.make(s);
  }
  throw ConfigError("scalar must be an integer or a \"p/q\" string, got " + j.dump());
}

inline auto vec_to_json(const Vec &v) -> nlohmann::json {
  auto arr = nlohmann::json::array();
  for (const auto &s : v) arr.push_back(scalar_to_json(s));
  return arr;
}

inline auto vec_from_json(const nlohmann::json &j, const Ring &ring, int rank) -> Vec {
  if (!j.is_array() || static_cast<int>(j.size()) != rank)
    throw ConfigError("coefficient vector must have length " + std::to_string(rank));
  Vec v;
  for (const auto &e : j) v.push_back(scalar_from_json(e, ring));
  return v;
}

} // namespace coarse

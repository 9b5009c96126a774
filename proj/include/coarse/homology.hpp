#pragma once

#include "chain.hpp"
#include "coarse_map.hpp"
#include "fin_sup_fun.hpp"
#include "finite_index.hpp"
#include "limits.hpp"
#include "matrix.hpp"
#include "res_modules.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace coarse {

/// Coefficients of the bar complex of a finite group: R[G]^k, or R^k with the
/// trivial action.
struct CoefficientModule {
  enum class Kind { GroupRing, Trivial };
  Kind kind = Kind::GroupRing;
  Ring ring = Ring::integers();
  int rank = 1;

  [[nodiscard]] auto name() const -> std::string {
    std::string base = kind == Kind::GroupRing ? "group-ring-" : "trivial-";
    return base + ring.name() + (rank > 1 ? "^" + std::to_string(rank) : "");
  }

  /// "group-ring-Z", "trivial-Q", "trivial-Z/5", optionally with "^k".
  static auto parse(const std::string &text) -> CoefficientModule {
    CoefficientModule m;
    std::string rest;
    if (text.rfind("group-ring-", 0) == 0) {
      m.kind = Kind::GroupRing;
      rest = text.substr(11);
    } else if (text.rfind("trivial-", 0) == 0) {
      m.kind = Kind::Trivial;
      rest = text.substr(8);
    } else {
      throw ConfigError("unknown coefficients '" + text + "' (expected group-ring-<ring> or trivial-<ring>)");
    }
    auto caret = rest.find('^');
    if (caret != std::string::npos) {
      m.rank = std::stoi(rest.substr(caret + 1));
      rest = rest.substr(0, caret);
      if (m.rank < 1) throw ConfigError("coefficient rank must be >= 1");
    }
    m.ring = Ring::parse(rest);
    return m;
  }
};

/// Basis of C_n: x (ball order) major, then g (lexicographic in element
/// indices), then coefficient index. Trivial coefficients drop x.
class BarBasis {
public:
  BarBasis(const FiniteIndex &idx, CoefficientModule m, int degree) : idx_(&idx), module_(m), degree_(degree) {
    tuples_ = 1;
    for (int i = 0; i < degree; ++i) tuples_ *= idx.order();
  }

  [[nodiscard]] auto dim() const -> std::size_t {
    return (module_.kind == CoefficientModule::Kind::GroupRing ? idx_->order() : 1) * tuples_ *
           static_cast<std::size_t>(module_.rank);
  }
  [[nodiscard]] auto tuples() const -> std::size_t { return tuples_; }

  [[nodiscard]] auto tuple_index(const std::vector<std::size_t> &t) const -> std::size_t {
    std::size_t v = 0;
    for (auto e : t) v = v * idx_->order() + e;
    return v;
  }
  [[nodiscard]] auto tuple_of(std::size_t v) const -> std::vector<std::size_t> {
    std::vector<std::size_t> t(static_cast<std::size_t>(degree_));
    for (int i = degree_ - 1; i >= 0; --i) {
      t[i] = v % idx_->order();
      v /= idx_->order();
    }
    return t;
  }
  [[nodiscard]] auto index(std::size_t x, std::size_t tuple, int c) const -> std::size_t {
    std::size_t base = module_.kind == CoefficientModule::Kind::GroupRing ? x * tuples_ + tuple : tuple;
    return base * static_cast<std::size_t>(module_.rank) + static_cast<std::size_t>(c);
  }

private:
  const FiniteIndex *idx_;
  CoefficientModule module_;
  int degree_;
  std::size_t tuples_ = 1;
};

namespace detail {
inline void check_bar_cap(const FiniteIndex &idx, const CoefficientModule &m, int n) {
  // |G|^{n+1} k, computed without overflow
  long double size = static_cast<long double>(m.rank);
  for (int i = 0; i <= n; ++i) size *= static_cast<long double>(idx.order());
  if (size > static_cast<long double>(limits().max_matrix_dim))
    throw ResourceLimit("bar complex in degree " + std::to_string(n) + " exceeds the matrix cap (" +
                        std::to_string(limits().max_matrix_dim) + ")");
}
} // namespace detail

/// Matrix of d_n : C_n -> C_{n-1} (rows C_{n-1}, columns C_n). Degree 0 gives a
/// matrix with no rows.
inline auto assemble_boundary_matrix(const FiniteIndex &idx, const CoefficientModule &m, int n) -> IntMatrix {
  if (n < 0) throw ConfigError("degree must be >= 0");
  detail::check_bar_cap(idx, m, n);
  BarBasis src(idx, m, n);
  if (n == 0) return IntMatrix(0, src.dim());
  BarBasis dst(idx, m, n - 1);
  IntMatrix out(dst.dim(), src.dim());
  const bool group_ring = m.kind == CoefficientModule::Kind::GroupRing;
  const std::size_t xs = group_ring ? idx.order() : 1;
  for (std::size_t x = 0; x < xs; ++x)
    for (std::size_t tv = 0; tv < src.tuples(); ++tv) {
      auto g = src.tuple_of(tv);
      std::vector<std::size_t> face;
      for (int c = 0; c < m.rank; ++c) {
        auto col = src.index(x, tv, c);
        // i = 0: base point moves to g_1^{-1} x
        face.assign(g.begin() + 1, g.end());
        out.add(dst.index(group_ring ? idx.mul(idx.inv(g[0]), x) : 0, dst.tuple_index(face), c), col, 1);
        for (int i = 1; i < n; ++i) {
          face.assign(g.begin(), g.begin() + (i - 1));
          face.push_back(idx.mul(g[i - 1], g[i]));
          face.insert(face.end(), g.begin() + (i + 1), g.end());
          out.add(dst.index(x, dst.tuple_index(face), c), col, i % 2 == 0 ? 1 : -1);
        }
        face.assign(g.begin(), g.end() - 1);
        out.add(dst.index(x, dst.tuple_index(face), c), col, n % 2 == 0 ? 1 : -1);
      }
    }
  return out;
}

inline auto assemble_boundary_matrix(const Group &G, const CoefficientModule &m, int n) -> IntMatrix {
  FiniteIndex idx(G);
  return assemble_boundary_matrix(idx, m, n);
}

struct HomologyResult {
  int degree = 0;
  Ring ring;
  std::size_t betti = 0;
  std::vector<Int> torsion;

  [[nodiscard]] auto to_json() const -> nlohmann::ordered_json {
    nlohmann::ordered_json j;
    j["degree"] = degree;
    j["ring"] = ring.name();
    j["betti"] = betti;
    auto t = nlohmann::ordered_json::array();
    for (const auto &d : torsion) t.push_back(d.fits_slong_p() ? nlohmann::ordered_json(d.get_si()) : nlohmann::ordered_json(d.get_str()));
    j["torsion"] = t;
    return j;
  }

  /// "Z^2 + Z/2", "0", ...
  [[nodiscard]] auto format() const -> std::string {
    std::string s;
    std::string base = ring.name();
    if (betti > 0) s = base + (betti > 1 ? "^" + std::to_string(betti) : "");
    for (const auto &d : torsion) s += (s.empty() ? "" : " + ") + std::string("Z/") + d.get_str();
    return s.empty() ? "0" : s;
  }

  auto operator==(const HomologyResult &o) const -> bool {
    return degree == o.degree && ring == o.ring && betti == o.betti && torsion == o.torsion;
  }
};

namespace detail {
inline auto rank_of(const IntMatrix &m, const Ring &ring) -> std::size_t {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  return ring.kind() == RingKind::Integers ? elementary_divisors(m).size() : rank_over_field(m, ring);
}
} // namespace detail

/// H_n(G, L) for finite G from the bar complex.
inline auto homology_finite(const FiniteIndex &idx, const CoefficientModule &m, int n) -> HomologyResult {
  if (m.ring.kind() == RingKind::IntegersMod && !m.ring.is_prime_field())
    throw PreconditionFailed("homology over Z/" + std::to_string(m.ring.modulus()) +
                             " is not supported (composite modulus); use Z, Q or Z/p");
  HomologyResult res;
  res.degree = n;
  res.ring = m.ring;
  const auto dim = BarBasis(idx, m, n).dim();
  auto d_n = assemble_boundary_matrix(idx, m, n);
  auto d_next = assemble_boundary_matrix(idx, m, n + 1);
  std::size_t rank_in = detail::rank_of(d_n, m.ring);
  if (m.ring.kind() == RingKind::Integers) {
    auto divs = d_next.rows() && d_next.cols() ? elementary_divisors(d_next) : std::vector<Int>{};
    res.betti = dim - rank_in - divs.size();
    for (const auto &d : divs)
      if (d > 1) res.torsion.push_back(d);
  } else {
    res.betti = dim - rank_in - detail::rank_of(d_next, m.ring);
  }
  return res;
}

inline auto homology_finite(const Group &G, const CoefficientModule &m, int n) -> HomologyResult {
  FiniteIndex idx(G);
  return homology_finite(idx, m, n);
}

/// Periodic resolution of Z/m with trivial integer coefficients: the complex
/// Z <-0- Z <-m- Z <-0- Z <-m- ... reduced by Smith form of its 1x1 maps.
inline auto cyclic_homology_oracle(std::int64_t m, int n) -> HomologyResult {
  auto map_into = [m](int k) -> Int { return k <= 0 ? Int(0) : (k % 2 == 0 ? Int(m) : Int(0)); }; // C_k -> C_{k-1}
  HomologyResult res;
  res.degree = n;
  res.ring = Ring::integers();
  Int out = map_into(n), in = map_into(n + 1);
  std::size_t kernel = out == 0 ? 1 : 0;
  std::size_t image_rank = in == 0 ? 0 : 1;
  res.betti = kernel - image_rank;
  if (in != 0 && abs(in) > 1) res.torsion.push_back(abs(in));
  return res;
}

/// Shapiro: H_n(G, R[G]^k) = H_n(1, R^k).
inline auto group_ring_homology_oracle(const Ring &ring, int rank, int n) -> HomologyResult {
  HomologyResult res;
  res.degree = n;
  res.ring = ring;
  res.betti = n == 0 ? static_cast<std::size_t>(rank) : 0;
  return res;
}

/// Augmentation: the class of f in the coinvariants of R[G]^k.
inline auto h0_coinvariants(const FinSupFun &f) -> Vec {
  Vec acc = zero_vec(f.rank());
  for (const auto &[x, v] : f.support()) add_into(f.ring(), acc, v);
  return acc;
}

// ---------------------------------------------------------------------------
// finite windows for infinite groups

struct Window {
  std::int64_t base_radius = 2;  // x in ball(base_radius)
  std::int64_t slice_radius = 1; // tuple entries in ball(slice_radius)
};

struct WindowResult {
  std::optional<Chain> witness;
  Window window;
  std::size_t unknowns = 0, equations = 0;
  bool verified = false; // boundary(witness) == z checked independently

  [[nodiscard]] auto to_json() const -> nlohmann::ordered_json {
    nlohmann::ordered_json j;
    j["window"] = {{"base_radius", window.base_radius}, {"slice_radius", window.slice_radius}};
    j["unknowns"] = unknowns;
    j["equations"] = equations;
    if (witness) {
      j["result"] = "boundary";
      j["witness"] = witness->to_json();
      j["verified"] = verified;
    } else {
      j["result"] = "none-within-window";
    }
    return j;
  }
};

/// Looks for w of degree n + 1 supported on (x, g) with l(x) <= base_radius and
/// l(g_i) <= slice_radius such that boundary(w) = z. None is not a proof that the
/// class of z is nonzero.
inline auto is_boundary_window(const Chain &z, const Window &w) -> WindowResult {
  if (z.degree() >= 1 && !boundary(z).is_zero()) throw PreconditionFailed("not a cycle");
  WindowResult res;
  res.window = w;
  const auto &G = z.group();
  if (z.is_zero()) {
    res.witness = z.empty_like(z.degree() + 1);
    res.verified = true;
    return res;
  }
  const auto xs = G.ball(w.base_radius);
  const auto gs = G.ball(w.slice_radius);
  const int n1 = z.degree() + 1;
  long double count = static_cast<long double>(xs.size()) * z.rank();
  for (int i = 0; i < n1; ++i) count *= static_cast<long double>(gs.size());
  if (count > static_cast<long double>(std::min<std::size_t>(limits().max_matrix_dim, 6000)))
    throw ResourceLimit("window has too many unknowns (" + std::to_string(static_cast<double>(count)) + ")");
  // unknown points
  std::vector<std::pair<GroupElement, Tuple>> unknowns;
  std::vector<std::size_t> counter(static_cast<std::size_t>(n1), 0);
  for (const auto &x : xs) {
    std::fill(counter.begin(), counter.end(), 0);
    for (;;) {
      Tuple g;
      for (auto c : counter) g.push_back(gs[c]);
      unknowns.emplace_back(x, std::move(g));
      int k = n1 - 1;
      while (k >= 0 && ++counter[k] == gs.size()) counter[k--] = 0;
      if (k < 0) break;
    }
  }
  // equations indexed by degree-n points
  std::map<std::pair<GroupElement, Tuple>, std::size_t> row_of;
  auto row = [&](const GroupElement &x, const Tuple &g) {
    auto key = std::make_pair(x, g);
    auto it = row_of.find(key);
    if (it == row_of.end()) it = row_of.emplace(key, row_of.size()).first;
    return it->second;
  };
  struct Entry {
    std::size_t r, c;
    Int v;
  };
  std::vector<Entry> entries;
  const auto k = static_cast<std::size_t>(z.rank());
  for (std::size_t u = 0; u < unknowns.size(); ++u) {
    const auto &[x, g] = unknowns[u];
    auto face = boundary(Chain::unit(G, Ring::integers(), 1, x, g));
    face.for_each_point([&](const GroupElement &fx, const Tuple &fg, const Vec &v) {
      auto r = row(fx, fg);
      for (std::size_t c = 0; c < k; ++c) entries.push_back({r * k + c, u * k + c, v[0].get_num()});
    });
  }
  z.for_each_point([&](const GroupElement &x, const Tuple &g, const Vec &) { row(x, g); });
  const std::size_t rows = row_of.size() * k, cols = unknowns.size() * k;
  IntMatrix a(rows, cols);
  for (const auto &e : entries) a.add(e.r, e.c, e.v);
  Vec rhs(rows);
  z.for_each_point([&](const GroupElement &x, const Tuple &g, const Vec &v) {
    auto r = row_of.at({x, g});
    for (std::size_t c = 0; c < k; ++c) rhs[r * k + c] = v[c];
  });
  res.unknowns = cols;
  res.equations = rows;
  auto sol = solve(a, rhs, z.ring());
  if (!sol) return res;
  Chain wit = z.empty_like(n1);
  for (std::size_t u = 0; u < unknowns.size(); ++u) {
    Vec v(k);
    for (std::size_t c = 0; c < k; ++c) v[c] = (*sol)[u * k + c];
    wit.add(unknowns[u].first, unknowns[u].second, v);
  }
  res.verified = boundary(wit) == z;
  if (!res.verified) throw Error("window solve produced a witness whose boundary differs from z");
  res.witness = std::move(wit);
  return res;
}

// ---------------------------------------------------------------------------
// homology presentations and induced maps (finite groups, group-ring coefficients)

/// H_n = ker d_n / im d_{n+1} over Z as Z^free + sum Z/d_i, with explicit cycles.
struct HomologyPresentation {
  int degree = 0;
  std::vector<Int> orders;             // per generator: 0 for Z, d > 1 for Z/d
  std::vector<std::vector<Int>> cycles; // generator cycles in C_n coordinates
  // coordinates: c = (v_inv * z)[rank..], then u2 * c
  IntDense v_inv;
  std::size_t kernel_offset = 0;
  IntDense u2;
  std::vector<std::size_t> kept; // rows of u2 c that are generators

  /// Coordinates of a cycle in the generator basis (torsion entries reduced).
  [[nodiscard]] auto coordinates(const std::vector<Int> &z) const -> std::vector<Int> {
    auto full = v_inv.apply(z);
    std::vector<Int> c(full.begin() + static_cast<std::ptrdiff_t>(kernel_offset), full.end());
    auto uc = u2.rows() ? u2.apply(c) : std::vector<Int>{};
    std::vector<Int> out;
    for (std::size_t i = 0; i < kept.size(); ++i) {
      Int v = uc[kept[i]];
      if (orders[i] != 0) mpz_fdiv_r(v.get_mpz_t(), v.get_mpz_t(), orders[i].get_mpz_t());
      out.push_back(v);
    }
    return out;
  }

  [[nodiscard]] auto format() const -> std::string {
    std::size_t free = 0;
    std::string tors;
    for (const auto &o : orders) {
      if (o == 0) ++free;
      else tors += " + Z/" + o.get_str();
    }
    std::string s = free ? (free > 1 ? "Z^" + std::to_string(free) : "Z") : "";
    s += tors;
    if (!free && !tors.empty()) s = s.substr(3);
    return s.empty() ? "0" : s;
  }
};

inline auto homology_presentation(const FiniteIndex &idx, const CoefficientModule &m, int n) -> HomologyPresentation {
  if (m.ring.kind() != RingKind::Integers && m.ring.kind() != RingKind::Rationals)
    throw PreconditionFailed("homology presentations are computed over Z (Q keeps the free part)");
  HomologyPresentation p;
  p.degree = n;
  CoefficientModule zm = m;
  zm.ring = Ring::integers();
  const auto dim = BarBasis(idx, zm, n).dim();
  auto d_n = assemble_boundary_matrix(idx, zm, n).to_dense();
  auto d_next = assemble_boundary_matrix(idx, zm, n + 1);
  IntDense v_full = IntDense::identity(dim);
  p.v_inv = v_full;
  if (n > 0) {
    auto s = smith_normal_form(d_n);
    p.v_inv = s.v_inv;
    v_full = s.v;
    p.kernel_offset = s.rank();
  }
  const std::size_t kdim = dim - p.kernel_offset;
  // kernel basis: trailing columns of V
  IntDense k_basis(dim, kdim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < kdim; ++j) k_basis(i, j) = v_full(i, p.kernel_offset + j);
  // image of d_{n+1} in kernel coordinates
  auto vb = p.v_inv * d_next.to_dense();
  IntDense c(kdim, d_next.cols());
  for (std::size_t i = 0; i < kdim; ++i)
    for (std::size_t j = 0; j < d_next.cols(); ++j) c(i, j) = vb(p.kernel_offset + i, j);
  SmithForm s2;
  if (kdim > 0) s2 = smith_normal_form(c);
  p.u2 = kdim > 0 ? s2.u : IntDense();
  // generators: columns of K u2^{-1}
  IntDense gens = kdim > 0 ? k_basis * s2.u_inv : IntDense(dim, 0);
  for (std::size_t i = 0; i < kdim; ++i) {
    Int order = i < s2.divisors.size() ? s2.divisors[i] : Int(0);
    if (order == 1) continue;
    if (m.ring.kind() == RingKind::Rationals && order != 0) continue;
    p.kept.push_back(i);
    p.orders.push_back(order);
    p.cycles.push_back(gens.column(i));
  }
  return p;
}

inline auto chain_to_coordinates(const Chain &c, const FiniteIndex &idx, const CoefficientModule &m)
    -> std::vector<Int> {
  BarBasis basis(idx, m, c.degree());
  std::vector<Int> out(basis.dim());
  c.for_each_point([&](const GroupElement &x, const Tuple &g, const Vec &v) {
    std::vector<std::size_t> t;
    for (const auto &gi : g) t.push_back(idx.index(gi));
    for (int k = 0; k < m.rank; ++k) out[basis.index(idx.index(x), basis.tuple_index(t), k)] += v[k].get_num();
  });
  return out;
}

inline auto coordinates_to_chain(const std::vector<Int> &z, const FiniteIndex &idx, const CoefficientModule &m,
                                 int degree) -> Chain {
  BarBasis basis(idx, m, degree);
  Chain c(idx.group(), Ring::integers(), m.rank, degree);
  for (std::size_t x = 0; x < idx.order(); ++x)
    for (std::size_t t = 0; t < basis.tuples(); ++t) {
      Vec v(static_cast<std::size_t>(m.rank));
      for (int k = 0; k < m.rank; ++k) v[k] = Scalar(z[basis.index(x, t, k)]);
      if (is_zero(v)) continue;
      Tuple g;
      for (auto e : basis.tuple_of(t)) g.push_back(idx.element(e));
      c.add(idx.element(x), g, v);
    }
  return c;
}

struct InducedMapResult {
  int degree = 0;
  std::string source_homology, target_homology;
  std::vector<std::vector<Int>> matrix;       // H_n(phi), target gens x source gens
  std::vector<std::vector<Int>> omega_matrix; // H_n(omega)
  bool omega_after_phi_identity = false;
  bool phi_after_omega_identity = false;
  bool source_homotopy_identity = false; // D(omega phi) - id = d k + k d on the C_n basis
  bool target_homotopy_identity = false; // D(phi omega) - id = d l + l d on the C_n basis
  bool span_is_full = false;             // phi_* L equals R[H]^k
  bool isomorphism = false;

  [[nodiscard]] auto to_json() const -> nlohmann::ordered_json {
    auto mat = [](const std::vector<std::vector<Int>> &m) {
      auto a = nlohmann::ordered_json::array();
      for (const auto &r : m) {
        auto row = nlohmann::ordered_json::array();
        for (const auto &v : r) row.push_back(v.get_si());
        a.push_back(row);
      }
      return a;
    };
    nlohmann::ordered_json j;
    j["degree"] = degree;
    j["source_homology"] = source_homology;
    j["target_homology"] = target_homology;
    j["matrix"] = mat(matrix);
    j["omega_matrix"] = mat(omega_matrix);
    j["omega_after_phi_identity"] = omega_after_phi_identity;
    j["phi_after_omega_identity"] = phi_after_omega_identity;
    j["source_homotopy_identity"] = source_homotopy_identity;
    j["target_homotopy_identity"] = target_homotopy_identity;
    j["span_is_full"] = span_is_full;
    j["verdict"] = isomorphism ? "isomorphism" : "not-isomorphism";
    return j;
  }
};

namespace detail {
inline auto map_on_homology(const HomologyPresentation &src, const HomologyPresentation &dst,
                            const FiniteIndex &src_idx, const FiniteIndex &dst_idx, const CoefficientModule &m,
                            const std::function<Chain(const Chain &)> &chain_map) -> std::vector<std::vector<Int>> {
  std::vector<std::vector<Int>> mat(dst.orders.size(), std::vector<Int>(src.orders.size()));
  for (std::size_t j = 0; j < src.cycles.size(); ++j) {
    auto z = coordinates_to_chain(src.cycles[j], src_idx, m, src.degree);
    auto image = chain_to_coordinates(chain_map(z), dst_idx, m);
    auto col = dst.coordinates(image);
    for (std::size_t i = 0; i < col.size(); ++i) mat[i][j] = col[i];
  }
  return mat;
}

inline auto is_identity_on(const HomologyPresentation &p, const std::vector<std::vector<Int>> &a,
                           const std::vector<std::vector<Int>> &b) -> bool {
  // a: p <- q, b: q <- p; check a b = id modulo the orders of p
  const auto n = p.orders.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Int s = 0;
      for (std::size_t k = 0; k < b.size(); ++k) s += a[i][k] * b[k][j];
      s -= i == j ? 1 : 0;
      if (p.orders[i] != 0) mpz_fdiv_r(s.get_mpz_t(), s.get_mpz_t(), p.orders[i].get_mpz_t());
      if (s != 0) return false;
    }
  return true;
}

inline auto homotopy_holds_on_basis(const FiniteIndex &idx, const CoefficientModule &m, int n,
                                    const std::function<Chain(const Chain &)> &composite,
                                    const std::function<Chain(const Chain &)> &homotopy) -> bool {
  BarBasis basis(idx, m, n);
  for (std::size_t x = 0; x < idx.order(); ++x)
    for (std::size_t t = 0; t < basis.tuples(); ++t)
      for (int k = 0; k < m.rank; ++k) {
        Tuple g;
        for (auto e : basis.tuple_of(t)) g.push_back(idx.element(e));
        auto c = Chain::unit(idx.group(), Ring::integers(), m.rank, idx.element(x), g, unit_vec(m.rank, k));
        auto lhs = boundary(homotopy(c));
        if (n > 0) lhs += homotopy(boundary(c));
        if (!(lhs == composite(c) - c)) return false;
      }
  return true;
}
} // namespace detail

/// H_n(phi) for a map of finite groups with L = R[G]^k, checked against H_n(omega)
/// in both orders and by the chain homotopies behind them.
inline auto induced_map_on_homology(const CoarseMap &phi, const CoefficientModule &m, int n) -> InducedMapResult {
  if (m.kind != CoefficientModule::Kind::GroupRing)
    throw PreconditionFailed("induced maps on homology use group-ring coefficients");
  const auto &G = phi.source();
  const auto &H = phi.target();
  if (!G.is_finite() || !H.is_finite()) throw PreconditionFailed("induced_map_on_homology needs finite groups");
  FiniteIndex gi(G), hi(H);
  detail::check_bar_cap(gi, m, n + 1);
  detail::check_bar_cap(hi, m, n + 1);
  InducedMapResult res;
  res.degree = n;
  res.span_is_full = is_full_span(pushforward_span_generators(phi, m.ring, m.rank), H, m.ring, m.rank);
  auto pg = homology_presentation(gi, m, n);
  auto ph = homology_presentation(hi, m, n);
  res.source_homology = pg.format();
  res.target_homology = ph.format();
  std::int64_t diameter = 0;
  for (const auto &y : H.elements()) diameter = std::max(diameter, H.word_length(y));
  auto om = omega(phi, diameter);
  auto d_phi = [&phi](const Chain &c) { return induced_chain_map(phi, c); };
  auto d_omega = [&om](const Chain &c) { return omega_chain_map(om, c); };
  res.matrix = detail::map_on_homology(pg, ph, gi, hi, m, d_phi);
  res.omega_matrix = detail::map_on_homology(ph, pg, hi, gi, m, d_omega);
  res.omega_after_phi_identity = detail::is_identity_on(pg, res.omega_matrix, res.matrix);
  res.phi_after_omega_identity = detail::is_identity_on(ph, res.matrix, res.omega_matrix);
  // chain level: omega o phi ~ id on G, phi o omega ~ id on H
  auto omega_phi = compose(om.omega, phi);
  auto id_g = identity_map(G);
  res.source_homotopy_identity = detail::homotopy_holds_on_basis(
      gi, m, n, [&](const Chain &c) { return d_omega(d_phi(c)); },
      [&](const Chain &c) { return homotopy_k(id_g, omega_phi, c); });
  res.target_homotopy_identity = detail::homotopy_holds_on_basis(
      hi, m, n, [&](const Chain &c) { return d_phi(d_omega(c)); },
      [&](const Chain &c) { return homotopy_l(phi, om, c); });
  res.isomorphism = res.span_is_full && res.omega_after_phi_identity && res.phi_after_omega_identity &&
                    res.source_homotopy_identity && res.target_homotopy_identity &&
                    pg.orders.size() == ph.orders.size();
  return res;
}

} // namespace coarse

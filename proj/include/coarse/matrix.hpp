#pragma once

#include "errors.hpp"
#include "limits.hpp"
#include "ring.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace coarse {

using Int = mpz_class;

/// Dense matrix, row-major.
template <class T> class DenseMatrix {
public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static auto identity(std::size_t n) -> DenseMatrix {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  [[nodiscard]] auto rows() const -> std::size_t { return rows_; }
  [[nodiscard]] auto cols() const -> std::size_t { return cols_; }
  auto operator()(std::size_t i, std::size_t j) -> T & { return data_[i * cols_ + j]; }
  auto operator()(std::size_t i, std::size_t j) const -> const T & { return data_[i * cols_ + j]; }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  /// row a += q * row b
  void add_row(std::size_t a, std::size_t b, const T &q) {
    if (q == 0) return;
    for (std::size_t j = 0; j < cols_; ++j)
      if ((*this)(b, j) != 0) (*this)(a, j) += q * (*this)(b, j);
  }
  /// col a += q * col b
  void add_col(std::size_t a, std::size_t b, const T &q) {
    if (q == 0) return;
    for (std::size_t i = 0; i < rows_; ++i)
      if ((*this)(i, b) != 0) (*this)(i, a) += q * (*this)(i, b);
  }
  void negate_row(std::size_t a) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(a, j) = -(*this)(a, j);
  }
  void negate_col(std::size_t a) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, a) = -(*this)(i, a);
  }

  friend auto operator*(const DenseMatrix &a, const DenseMatrix &b) -> DenseMatrix {
    if (a.cols_ != b.rows_) throw PreconditionFailed("matrix product: dimension mismatch");
    DenseMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T &x = a(i, k);
        if (x == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j)
          if (b(k, j) != 0) c(i, j) += x * b(k, j);
      }
    return c;
  }
  auto operator==(const DenseMatrix &o) const -> bool = default;

  [[nodiscard]] auto is_zero() const -> bool {
    return std::all_of(data_.begin(), data_.end(), [](const T &v) { return v == 0; });
  }
  [[nodiscard]] auto column(std::size_t j) const -> std::vector<T> {
    std::vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }
  [[nodiscard]] auto apply(const std::vector<T> &v) const -> std::vector<T> {
    if (v.size() != cols_) throw PreconditionFailed("matrix-vector product: dimension mismatch");
    std::vector<T> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if ((*this)(i, j) != 0 && v[j] != 0) out[i] += (*this)(i, j) * v[j];
    return out;
  }

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

using IntDense = DenseMatrix<Int>;

/// Sparse matrix with exact integer entries, stored column-wise.
class IntMatrix {
public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), columns_(cols) {}

  [[nodiscard]] auto rows() const -> std::size_t { return rows_; }
  [[nodiscard]] auto cols() const -> std::size_t { return cols_; }

  /// entry(r, c) += v
  void add(std::size_t r, std::size_t c, const Int &v) {
    if (r >= rows_ || c >= cols_) throw PreconditionFailed("matrix entry out of range");
    if (v == 0) return;
    auto &col = columns_[c];
    auto it = col.find(r);
    if (it == col.end()) {
      col.emplace(r, v);
    } else {
      it->second += v;
      if (it->second == 0) col.erase(it);
    }
  }

  [[nodiscard]] auto column(std::size_t c) const -> const std::map<std::size_t, Int> & { return columns_.at(c); }
  [[nodiscard]] auto at(std::size_t r, std::size_t c) const -> Int {
    auto it = columns_.at(c).find(r);
    return it == columns_[c].end() ? Int(0) : it->second;
  }
  [[nodiscard]] auto nonzeros() const -> std::size_t {
    std::size_t n = 0;
    for (const auto &c : columns_) n += c.size();
    return n;
  }

  [[nodiscard]] auto to_dense() const -> IntDense {
    IntDense d(rows_, cols_);
    for (std::size_t j = 0; j < cols_; ++j)
      for (const auto &[i, v] : columns_[j]) d(i, j) = v;
    return d;
  }

  static auto from_dense(const IntDense &d) -> IntMatrix {
    IntMatrix m(d.rows(), d.cols());
    for (std::size_t i = 0; i < d.rows(); ++i)
      for (std::size_t j = 0; j < d.cols(); ++j) m.add(i, j, d(i, j));
    return m;
  }

  /// Product this * other (both sparse).
  [[nodiscard]] auto times(const IntMatrix &o) const -> IntMatrix {
    if (cols_ != o.rows_) throw PreconditionFailed("matrix product: dimension mismatch");
    IntMatrix out(rows_, o.cols_);
    for (std::size_t j = 0; j < o.cols_; ++j)
      for (const auto &[k, v] : o.columns_[j])
        for (const auto &[i, w] : columns_[k]) out.add(i, j, w * v);
    return out;
  }

  [[nodiscard]] auto is_zero() const -> bool {
    return std::all_of(columns_.begin(), columns_.end(), [](const auto &c) { return c.empty(); });
  }

  [[nodiscard]] auto transposed() const -> IntMatrix {
    IntMatrix t(cols_, rows_);
    for (std::size_t j = 0; j < cols_; ++j)
      for (const auto &[i, v] : columns_[j]) t.add(j, i, v);
    return t;
  }

  /// "row col value" per line, 0-based, preceded by a "% rows cols nnz" header.
  void write_triplets(std::ostream &out) const {
    out << "% " << rows_ << ' ' << cols_ << ' ' << nonzeros() << '\n';
    for (std::size_t j = 0; j < cols_; ++j)
      for (const auto &[i, v] : columns_[j]) out << i << ' ' << j << ' ' << v.get_str() << '\n';
  }

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<std::map<std::size_t, Int>> columns_;
};

// ---------------------------------------------------------------------------
// Smith normal form

/// U * M * V = D with U, V unimodular; inverses are tracked as well.
struct SmithForm {
  IntDense diagonal;  // same shape as M
  IntDense u, v;      // rows x rows, cols x cols
  IntDense u_inv, v_inv;
  std::vector<Int> divisors; // nonzero diagonal entries, d_1 | d_2 | ...

  [[nodiscard]] auto rank() const -> std::size_t { return divisors.size(); }
};

namespace detail {

inline void check_dense_cap(std::size_t rows, std::size_t cols) {
  // dense certified work is quadratic in memory: keep it to moderate sizes
  std::size_t cap = std::min<std::size_t>(limits().max_matrix_dim, 6000);
  if (rows > cap || cols > cap) throw ResourceLimit("dense Smith form: matrix side exceeds " + std::to_string(cap));
}

/// Smith reduction of a in place. Row ops are mirrored into u (left) and u_inv
/// (right), column ops into v (right) and v_inv (left), when tracking.
inline auto smith_reduce(IntDense &a, IntDense *u, IntDense *u_inv, IntDense *v, IntDense *v_inv)
    -> std::vector<Int> {
  const std::size_t m = a.rows(), n = a.cols();
  auto row_swap = [&](std::size_t i, std::size_t j) {
    a.swap_rows(i, j);
    if (u) u->swap_rows(i, j), u_inv->swap_cols(i, j);
  };
  auto col_swap = [&](std::size_t i, std::size_t j) {
    a.swap_cols(i, j);
    if (v) v->swap_cols(i, j), v_inv->swap_rows(i, j);
  };
  // row i += q row j
  auto row_add = [&](std::size_t i, std::size_t j, const Int &q) {
    a.add_row(i, j, q);
    if (u) u->add_row(i, j, q), u_inv->add_col(j, i, -q);
  };
  auto col_add = [&](std::size_t i, std::size_t j, const Int &q) {
    a.add_col(i, j, q);
    if (v) v->add_col(i, j, q), v_inv->add_row(j, i, -q);
  };
  auto row_neg = [&](std::size_t i) {
    a.negate_row(i);
    if (u) u->negate_row(i), u_inv->negate_col(i);
  };

  std::vector<Int> divisors;
  for (std::size_t t = 0; t < std::min(m, n); ++t) {
    // smallest nonzero entry of the trailing block as pivot
    std::optional<std::pair<std::size_t, std::size_t>> best;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j)
        if (a(i, j) != 0 && (!best || abs(a(i, j)) < abs(a(best->first, best->second)))) {
          best = {i, j};
          if (abs(a(i, j)) == 1) goto found;
        }
  found:
    if (!best) break;
    row_swap(t, best->first);
    col_swap(t, best->second);
    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (a(i, t) == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), a(i, t).get_mpz_t(), a(t, t).get_mpz_t());
        row_add(i, t, -q);
        if (a(i, t) != 0) {
          clean = false;
          if (abs(a(i, t)) < abs(a(t, t))) row_swap(i, t);
        }
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (a(t, j) == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), a(t, j).get_mpz_t(), a(t, t).get_mpz_t());
        col_add(j, t, -q);
        if (a(t, j) != 0) {
          clean = false;
          if (abs(a(t, j)) < abs(a(t, t))) col_swap(j, t);
        }
      }
      if (!clean) continue;
      // divisibility of the trailing block
      std::optional<std::size_t> bad;
      for (std::size_t i = t + 1; i < m && !bad; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (a(i, j) != 0 && !mpz_divisible_p(a(i, j).get_mpz_t(), a(t, t).get_mpz_t())) {
            bad = i;
            break;
          }
      if (!bad) break;
      row_add(t, *bad, Int(1));
    }
    if (a(t, t) < 0) row_neg(t);
    divisors.push_back(a(t, t));
  }
  return divisors;
}

} // namespace detail

/// Certified Smith normal form; the certificate is checked before returning.
inline auto smith_normal_form(const IntDense &m) -> SmithForm {
  detail::check_dense_cap(m.rows(), m.cols());
  SmithForm s;
  s.diagonal = m;
  s.u = s.u_inv = IntDense::identity(m.rows());
  s.v = s.v_inv = IntDense::identity(m.cols());
  s.divisors = detail::smith_reduce(s.diagonal, &s.u, &s.u_inv, &s.v, &s.v_inv);
  if (!(s.u * m * s.v == s.diagonal)) throw Error("Smith form certificate failed: U M V != D");
  if (!(s.u * s.u_inv == IntDense::identity(m.rows())) || !(s.v * s.v_inv == IntDense::identity(m.cols())))
    throw Error("Smith form certificate failed: transforms not inverse");
  return s;
}

inline auto smith_normal_form(const IntMatrix &m) -> SmithForm { return smith_normal_form(m.to_dense()); }

/// Elementary divisors (nonzero, ascending by divisibility) of a sparse integer
/// matrix: unit pivots are eliminated sparsely, the remaining core densely.
inline auto elementary_divisors(const IntMatrix &m) -> std::vector<Int> {
  if (m.rows() > limits().max_matrix_dim || m.cols() > limits().max_matrix_dim)
    throw ResourceLimit("matrix side exceeds the configured cap");
  // row-wise working copy plus column -> rows index
  std::vector<std::map<std::size_t, Int>> rows(m.rows());
  std::vector<std::set<std::size_t>> col_rows(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (const auto &[i, v] : m.column(j)) {
      rows[i].emplace(j, v);
      col_rows[j].insert(i);
    }
  std::size_t unit_pivots = 0;
  std::vector<char> row_alive(m.rows(), 1);
  for (;;) {
    // Markowitz-style choice among unit entries
    std::optional<std::pair<std::size_t, std::size_t>> pick;
    std::size_t best_cost = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (!row_alive[i] || rows[i].empty()) continue;
      for (const auto &[j, v] : rows[i]) {
        if (v != 1 && v != -1) continue;
        std::size_t cost = (rows[i].size() - 1) * (col_rows[j].size() - 1);
        if (!pick || cost < best_cost) {
          pick = {i, j};
          best_cost = cost;
        }
        if (cost == 0) break;
      }
      if (pick && best_cost == 0) break;
    }
    if (!pick) break;
    auto [p, c] = *pick;
    Int unit = rows[p].at(c);
    std::vector<std::size_t> others(col_rows[c].begin(), col_rows[c].end());
    for (auto r : others) {
      if (r == p) continue;
      Int factor = rows[r].at(c) * unit; // unit^{-1} = unit
      for (const auto &[j, v] : rows[p]) {
        auto it = rows[r].find(j);
        Int delta = -factor * v;
        if (it == rows[r].end()) {
          rows[r].emplace(j, delta);
          col_rows[j].insert(r);
        } else {
          it->second += delta;
          if (it->second == 0) {
            rows[r].erase(it);
            col_rows[j].erase(r);
          }
        }
      }
    }
    for (const auto &[j, v] : rows[p]) col_rows[j].erase(p);
    rows[p].clear();
    row_alive[p] = 0;
    ++unit_pivots;
  }
  // dense core of what is left
  std::vector<std::size_t> core_rows, core_cols;
  std::map<std::size_t, std::size_t> col_index;
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (row_alive[i] && !rows[i].empty()) core_rows.push_back(i);
  for (std::size_t j = 0; j < col_rows.size(); ++j)
    if (!col_rows[j].empty()) {
      col_index[j] = core_cols.size();
      core_cols.push_back(j);
    }
  std::vector<Int> out(unit_pivots, Int(1));
  if (!core_rows.empty()) {
    detail::check_dense_cap(core_rows.size(), core_cols.size());
    IntDense core(core_rows.size(), core_cols.size());
    for (std::size_t a = 0; a < core_rows.size(); ++a)
      for (const auto &[j, v] : rows[core_rows[a]]) core(a, col_index.at(j)) = v;
    auto d = detail::smith_reduce(core, nullptr, nullptr, nullptr, nullptr);
    out.insert(out.end(), d.begin(), d.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// field linear algebra (Q or Z/p) on ring-normalized scalars

/// Rank of m over a field, by sparse Gaussian elimination.
inline auto rank_over_field(const IntMatrix &m, const Ring &ring) -> std::size_t {
  if (!ring.is_field()) throw PreconditionFailed("rank_over_field needs Q or Z/p");
  if (m.rows() > limits().max_matrix_dim || m.cols() > limits().max_matrix_dim)
    throw ResourceLimit("matrix side exceeds the configured cap");
  // pivot rows keyed by leading column
  std::map<std::size_t, std::map<std::size_t, Scalar>> pivots;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    std::map<std::size_t, Scalar> v;
    for (const auto &[i, x] : m.column(j)) {
      auto s = ring.make(Scalar(x));
      if (s != 0) v.emplace(i, s);
    }
    while (!v.empty()) {
      auto lead = v.begin()->first;
      auto it = pivots.find(lead);
      if (it == pivots.end()) {
        auto inv = ring.inverse(v.begin()->second);
        for (auto &[i, x] : v) x = ring.mul(x, inv);
        pivots.emplace(lead, std::move(v));
        break;
      }
      auto factor = v.begin()->second;
      for (const auto &[i, x] : it->second) {
        auto cur = v.find(i);
        auto nv = ring.sub(cur == v.end() ? Scalar(0) : cur->second, ring.mul(factor, x));
        if (nv == 0) {
          if (cur != v.end()) v.erase(cur);
        } else if (cur == v.end()) {
          v.emplace(i, nv);
        } else {
          cur->second = nv;
        }
      }
    }
  }
  return pivots.size();
}

/// Solve A w = b over a field; nullopt when inconsistent. A is given by columns.
inline auto solve_over_field(const IntMatrix &a, const Vec &b, const Ring &ring) -> std::optional<Vec> {
  if (!ring.is_field()) throw PreconditionFailed("solve_over_field needs Q or Z/p");
  detail::check_dense_cap(a.rows(), a.cols());
  const std::size_t m = a.rows(), n = a.cols();
  std::vector<Vec> aug(m, Vec(n + 1));
  for (std::size_t j = 0; j < n; ++j)
    for (const auto &[i, x] : a.column(j)) aug[i][j] = ring.make(Scalar(x));
  for (std::size_t i = 0; i < m; ++i) aug[i][n] = ring.make(b.at(i));
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t j = 0; j < n && r < m; ++j) {
    std::size_t p = r;
    while (p < m && aug[p][j] == 0) ++p;
    if (p == m) continue;
    std::swap(aug[p], aug[r]);
    auto inv = ring.inverse(aug[r][j]);
    for (std::size_t k = j; k <= n; ++k) aug[r][k] = ring.mul(aug[r][k], inv);
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || aug[i][j] == 0) continue;
      auto f = aug[i][j];
      for (std::size_t k = j; k <= n; ++k)
        if (aug[r][k] != 0) aug[i][k] = ring.sub(aug[i][k], ring.mul(f, aug[r][k]));
    }
    pivot_col.push_back(j);
    ++r;
  }
  for (std::size_t i = r; i < m; ++i)
    if (aug[i][n] != 0) return std::nullopt;
  Vec w(n);
  for (std::size_t i = 0; i < r; ++i) w[pivot_col[i]] = aug[i][n];
  return w;
}

/// Solve A w = b over Z via the certified Smith form; nullopt when no integral solution.
inline auto solve_over_integers(const IntDense &a, const std::vector<Int> &b) -> std::optional<std::vector<Int>> {
  auto s = smith_normal_form(a);
  auto ub = s.u.apply(b);
  std::vector<Int> y(a.cols());
  for (std::size_t i = 0; i < ub.size(); ++i) {
    if (i < s.rank()) {
      if (!mpz_divisible_p(ub[i].get_mpz_t(), s.divisors[i].get_mpz_t())) return std::nullopt;
      y[i] = ub[i] / s.divisors[i];
    } else if (ub[i] != 0) {
      return std::nullopt;
    }
  }
  return s.v.apply(y);
}

/// Solve A w = b over Z/m (any m >= 2) by solving [A | m I] over Z.
inline auto solve_over_zmod(const IntMatrix &a, const Vec &b, const Ring &ring) -> std::optional<Vec> {
  const Int mod = ring.modulus();
  IntDense big(a.rows(), a.cols() + a.rows());
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (const auto &[i, x] : a.column(j)) big(i, j) = x;
  for (std::size_t i = 0; i < a.rows(); ++i) big(i, a.cols() + i) = mod;
  std::vector<Int> rhs(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) rhs[i] = ring.make(b[i]).get_num();
  auto sol = solve_over_integers(big, rhs);
  if (!sol) return std::nullopt;
  Vec w(a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) w[j] = ring.make(Scalar((*sol)[j]));
  return w;
}

/// Solve A w = b over the given ring.
inline auto solve(const IntMatrix &a, const Vec &b, const Ring &ring) -> std::optional<Vec> {
  switch (ring.kind()) {
  case RingKind::Rationals: return solve_over_field(a, b, ring);
  case RingKind::IntegersMod: return solve_over_zmod(a, b, ring);
  case RingKind::Integers: {
    std::vector<Int> rhs(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) rhs[i] = ring.make(b[i]).get_num();
    auto sol = solve_over_integers(a.to_dense(), rhs);
    if (!sol) return std::nullopt;
    Vec w(sol->size());
    for (std::size_t j = 0; j < sol->size(); ++j) w[j] = Scalar((*sol)[j]);
    return w;
  }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// spans

/// Row Hermite normal form of an integer matrix (nonzero rows only).
inline auto hermite_rows(std::vector<std::vector<Int>> rows, std::size_t width) -> std::vector<std::vector<Int>> {
  std::size_t r = 0;
  for (std::size_t c = 0; c < width && r < rows.size(); ++c) {
    for (;;) {
      std::optional<std::size_t> best;
      for (std::size_t i = r; i < rows.size(); ++i)
        if (rows[i][c] != 0 && (!best || abs(rows[i][c]) < abs(rows[*best][c]))) best = i;
      if (!best) break;
      std::swap(rows[r], rows[*best]);
      bool done = true;
      for (std::size_t i = r + 1; i < rows.size(); ++i) {
        if (rows[i][c] == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), rows[i][c].get_mpz_t(), rows[r][c].get_mpz_t());
        for (std::size_t k = c; k < width; ++k) rows[i][k] -= q * rows[r][k];
        if (rows[i][c] != 0) done = false;
      }
      if (done) break;
    }
    if (r < rows.size() && rows[r][c] != 0) {
      if (rows[r][c] < 0)
        for (auto &x : rows[r]) x = -x;
      // reduce entries above the pivot into [0, pivot)
      for (std::size_t i = 0; i < r; ++i) {
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), rows[i][c].get_mpz_t(), rows[r][c].get_mpz_t());
        if (q != 0)
          for (std::size_t k = c; k < width; ++k) rows[i][k] -= q * rows[r][k];
      }
      ++r;
    }
  }
  rows.resize(r);
  return rows;
}

/// Canonical basis of the R-span of the given vectors: HNF over Z (with m e_i
/// appended over Z/m), reduced echelon form over Q.
inline auto canonical_span(const std::vector<Vec> &gens, std::size_t width, const Ring &ring) -> std::vector<Vec> {
  if (ring.kind() == RingKind::Rationals) {
    std::vector<Vec> rows;
    for (const auto &g : gens) rows.push_back(g);
    std::size_t r = 0;
    for (std::size_t c = 0; c < width && r < rows.size(); ++c) {
      std::size_t p = r;
      while (p < rows.size() && rows[p][c] == 0) ++p;
      if (p == rows.size()) continue;
      std::swap(rows[p], rows[r]);
      Scalar inv = 1 / rows[r][c];
      for (auto &x : rows[r]) x *= inv;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i == r || rows[i][c] == 0) continue;
        Scalar f = rows[i][c];
        for (std::size_t k = 0; k < width; ++k) rows[i][k] -= f * rows[r][k];
      }
      ++r;
    }
    rows.resize(r);
    return rows;
  }
  std::vector<std::vector<Int>> rows;
  for (const auto &g : gens) {
    std::vector<Int> row(width);
    for (std::size_t k = 0; k < width; ++k) row[k] = ring.make(g.at(k)).get_num();
    rows.push_back(std::move(row));
  }
  if (ring.kind() == RingKind::IntegersMod)
    for (std::size_t k = 0; k < width; ++k) {
      std::vector<Int> row(width);
      row[k] = ring.modulus();
      rows.push_back(std::move(row));
    }
  auto h = hermite_rows(std::move(rows), width);
  std::vector<Vec> out;
  for (auto &row : h) {
    Vec v(width);
    for (std::size_t k = 0; k < width; ++k) v[k] = Scalar(row[k]);
    out.push_back(std::move(v));
  }
  return out;
}

inline auto spans_equal(const std::vector<Vec> &a, const std::vector<Vec> &b, std::size_t width, const Ring &ring)
    -> bool {
  return canonical_span(a, width, ring) == canonical_span(b, width, ring);
}

} // namespace coarse

#pragma once
// Exact linear algebra over Rat: row echelon canonical forms, subspaces,
// kernels and linear solving. Everything here is deterministic; a subspace
// has exactly one representation, so equality is syntactic.

#include <cstddef>
#include <optional>
#include <vector>

#include "weil/rational.hpp"

namespace weil {

using Vec = std::vector<Rat>;

inline Vec zero_vec(std::size_t n) { return Vec(n); }

inline Vec unit_vec(std::size_t n, std::size_t i) {
  Vec v(n);
  v[i] = Rat(1);
  return v;
}

inline bool is_zero_vec(const Vec& v) {
  for (const Rat& x : v)
    if (!x.is_zero()) return false;
  return true;
}

inline Vec add_vec(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) fail(Err::DimensionMismatch, "vector add");
  Vec r(a);
  for (std::size_t i = 0; i < b.size(); ++i)
    if (!b[i].is_zero()) r[i] += b[i];
  return r;
}

inline Vec sub_vec(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) fail(Err::DimensionMismatch, "vector sub");
  Vec r(a);
  for (std::size_t i = 0; i < b.size(); ++i)
    if (!b[i].is_zero()) r[i] -= b[i];
  return r;
}

inline Vec scale_vec(const Vec& a, const Rat& c) {
  Vec r(a.size());
  if (c.is_zero()) return r;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!a[i].is_zero()) r[i] = a[i] * c;
  return r;
}

/// Dense row-major matrix of rationals.
struct Mat {
  std::size_t rows = 0, cols = 0;
  std::vector<Rat> a;

  Mat() = default;
  Mat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}

  Rat& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const Rat& at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  static Mat identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Rat(1);
    return m;
  }

  static Mat from_columns(std::size_t nrows, const std::vector<Vec>& cols) {
    Mat m(nrows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != nrows) fail(Err::DimensionMismatch, "from_columns");
      for (std::size_t i = 0; i < nrows; ++i) m.at(i, j) = cols[j][i];
    }
    return m;
  }

  static Mat from_rows(std::size_t ncols, const std::vector<Vec>& rows) {
    Mat m(rows.size(), ncols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != ncols) fail(Err::DimensionMismatch, "from_rows");
      for (std::size_t j = 0; j < ncols; ++j) m.at(i, j) = rows[i][j];
    }
    return m;
  }

  Vec column(std::size_t j) const {
    Vec v(rows);
    for (std::size_t i = 0; i < rows; ++i) v[i] = at(i, j);
    return v;
  }

  Vec row(std::size_t i) const {
    return Vec(a.begin() + static_cast<long>(i * cols),
               a.begin() + static_cast<long>((i + 1) * cols));
  }

  Mat transposed() const {
    Mat t(cols, rows);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
    return t;
  }

  Vec apply(const Vec& x) const {
    if (x.size() != cols) fail(Err::DimensionMismatch, "matrix apply");
    Vec y(rows);
    for (std::size_t j = 0; j < cols; ++j) {
      if (x[j].is_zero()) continue;
      for (std::size_t i = 0; i < rows; ++i) {
        const Rat& m = at(i, j);
        if (!m.is_zero()) y[i] += m * x[j];
      }
    }
    return y;
  }

  Mat operator*(const Mat& o) const {
    if (cols != o.rows) fail(Err::DimensionMismatch, "matrix product");
    Mat r(rows, o.cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t k = 0; k < cols; ++k) {
        const Rat& m = at(i, k);
        if (m.is_zero()) continue;
        for (std::size_t j = 0; j < o.cols; ++j) {
          const Rat& n = o.at(k, j);
          if (!n.is_zero()) r.at(i, j) += m * n;
        }
      }
    return r;
  }

  friend bool operator==(const Mat&, const Mat&) = default;
};

/// In-place reduced row echelon form. Pivots are normalized to 1 with zeros
/// above and below; zero rows are dropped; rows end up sorted by pivot
/// column. Returns the pivot columns in ascending order.
inline std::vector<std::size_t> rref(std::vector<Vec>& rows) {
  std::vector<std::size_t> pivots;
  if (rows.empty()) return pivots;
  const std::size_t ncols = rows[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < ncols && r < rows.size(); ++c) {
    std::size_t sel = r;
    while (sel < rows.size() && rows[sel][c].is_zero()) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[r], rows[sel]);
    const Rat inv = rows[r][c].inverse();
    for (std::size_t j = c; j < ncols; ++j)
      if (!rows[r][j].is_zero()) rows[r][j] *= inv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c].is_zero()) continue;
      const Rat f = rows[i][c];
      for (std::size_t j = c; j < ncols; ++j)
        if (!rows[r][j].is_zero()) rows[i][j] -= f * rows[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  rows.resize(r);
  return pivots;
}

/// A linear subspace of coordinate space, stored as its canonical reduced
/// row-echelon basis. Two Subspace values are equal iff the subspaces are.
class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(std::size_t ambient) : ambient_(ambient) {}

  static Subspace span(std::size_t ambient, std::vector<Vec> vectors) {
    for (const Vec& v : vectors)
      if (v.size() != ambient) fail(Err::DimensionMismatch, "span: ambient mismatch");
    rref(vectors);
    Subspace s(ambient);
    s.basis_ = std::move(vectors);
    return s;
  }

  static Subspace full(std::size_t ambient) {
    Subspace s(ambient);
    for (std::size_t i = 0; i < ambient; ++i) s.basis_.push_back(unit_vec(ambient, i));
    return s;
  }

  std::size_t ambient() const { return ambient_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<Vec>& basis() const { return basis_; }

  /// Remainder of v after eliminating all pivot coordinates.
  Vec reduce(Vec v) const {
    if (v.size() != ambient_) fail(Err::DimensionMismatch, "reduce");
    for (const Vec& b : basis_) {
      std::size_t p = 0;
      while (p < ambient_ && b[p].is_zero()) ++p;
      if (p == ambient_ || v[p].is_zero()) continue;
      const Rat f = v[p];
      for (std::size_t j = p; j < ambient_; ++j)
        if (!b[j].is_zero()) v[j] -= f * b[j];
    }
    return v;
  }

  bool contains(const Vec& v) const { return is_zero_vec(reduce(v)); }

  bool contains_subspace(const Subspace& other) const {
    for (const Vec& b : other.basis_)
      if (!contains(b)) return false;
    return true;
  }

  friend bool operator==(const Subspace&, const Subspace&) = default;

 private:
  std::size_t ambient_ = 0;
  std::vector<Vec> basis_;
};

/// Canonical echelon basis of the span of the given vectors. The ambient
/// dimension is taken from the vectors (zero for an empty list).
inline Subspace echelon(const std::vector<Vec>& vectors) {
  if (vectors.empty()) return Subspace(0);
  return Subspace::span(vectors[0].size(), vectors);
}

inline bool member(const Vec& v, const Subspace& s) { return s.contains(v); }

inline Subspace subspace_sum(const Subspace& u, const Subspace& v) {
  if (u.ambient() != v.ambient()) fail(Err::DimensionMismatch, "subspace_sum");
  std::vector<Vec> all = u.basis();
  all.insert(all.end(), v.basis().begin(), v.basis().end());
  return Subspace::span(u.ambient(), std::move(all));
}

/// Canonical basis of the null space of m, obtained from the free-variable
/// parameterization of the RREF and re-echelonned.
inline std::vector<Vec> kernel_basis(const Mat& m) {
  std::vector<Vec> rows;
  rows.reserve(m.rows);
  for (std::size_t i = 0; i < m.rows; ++i) rows.push_back(m.row(i));
  const std::vector<std::size_t> pivots = rref(rows);
  std::vector<bool> is_pivot(m.cols, false);
  for (std::size_t p : pivots) is_pivot[p] = true;
  std::vector<Vec> ker;
  for (std::size_t f = 0; f < m.cols; ++f) {
    if (is_pivot[f]) continue;
    Vec v(m.cols);
    v[f] = Rat(1);
    for (std::size_t r = 0; r < pivots.size(); ++r)
      v[pivots[r]] = -rows[r][f];
    ker.push_back(std::move(v));
  }
  rref(ker);
  return ker;
}

inline Subspace kernel_subspace(const Mat& m) {
  Subspace s(m.cols);
  std::vector<Vec> kb = kernel_basis(m);
  return Subspace::span(m.cols, std::move(kb));
}

inline Subspace intersect(const Subspace& u, const Subspace& v) {
  if (u.ambient() != v.ambient()) fail(Err::DimensionMismatch, "intersect");
  if (u.dim() == 0 || v.dim() == 0) return Subspace(u.ambient());
  // x in (U cap V) iff x = sum a_i u_i = sum b_j v_j; solve for (a, b).
  std::vector<Vec> cols = u.basis();
  for (const Vec& b : v.basis()) {
    Vec neg(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) neg[i] = -b[i];
    cols.push_back(std::move(neg));
  }
  const Mat m = Mat::from_columns(u.ambient(), cols);
  std::vector<Vec> result;
  for (const Vec& ab : kernel_basis(m)) {
    Vec x(u.ambient());
    for (std::size_t i = 0; i < u.dim(); ++i)
      if (!ab[i].is_zero()) x = add_vec(x, scale_vec(u.basis()[i], ab[i]));
    result.push_back(std::move(x));
  }
  return Subspace::span(u.ambient(), std::move(result));
}

inline std::size_t rank(const Mat& m) {
  std::vector<Vec> rows;
  rows.reserve(m.rows);
  for (std::size_t i = 0; i < m.rows; ++i) rows.push_back(m.row(i));
  return rref(rows).size();
}

/// One exact solution of m x = b (free variables set to zero), or nothing.
inline std::optional<Vec> solve(const Mat& m, const Vec& b) {
  if (b.size() != m.rows) fail(Err::DimensionMismatch, "solve");
  std::vector<Vec> rows;
  rows.reserve(m.rows);
  for (std::size_t i = 0; i < m.rows; ++i) {
    Vec r = m.row(i);
    r.push_back(b[i]);
    rows.push_back(std::move(r));
  }
  const std::vector<std::size_t> pivots = rref(rows);
  if (!pivots.empty() && pivots.back() == m.cols) return std::nullopt;
  Vec x(m.cols);
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = rows[r][m.cols];
  return x;
}

struct MatSolution {
  Mat x;
  bool unique = false;
};

/// Solves A X = B for X (free variables zero). unique is true when the
/// solution space is a single point, i.e. A has full column rank.
inline std::optional<MatSolution> solve_matrix(const Mat& a, const Mat& b) {
  if (a.rows != b.rows) fail(Err::DimensionMismatch, "solve_matrix");
  std::vector<Vec> rows;
  rows.reserve(a.rows);
  for (std::size_t i = 0; i < a.rows; ++i) {
    Vec r = a.row(i);
    const Vec br = b.row(i);
    r.insert(r.end(), br.begin(), br.end());
    rows.push_back(std::move(r));
  }
  const std::vector<std::size_t> pivots = rref(rows);
  for (std::size_t p : pivots)
    if (p >= a.cols) return std::nullopt;  // inconsistent
  MatSolution s;
  s.x = Mat(a.cols, b.cols);
  for (std::size_t r = 0; r < pivots.size(); ++r)
    for (std::size_t j = 0; j < b.cols; ++j) s.x.at(pivots[r], j) = rows[r][a.cols + j];
  s.unique = pivots.size() == a.cols;
  return s;
}

/// Solves X M = N for X; unique iff M has full row rank.
inline std::optional<MatSolution> solve_left(const Mat& m, const Mat& n) {
  auto t = solve_matrix(m.transposed(), n.transposed());
  if (!t) return std::nullopt;
  return MatSolution{t->x.transposed(), t->unique};
}

}  // namespace weil

#pragma once
// Finite-dimensional local algebras as structure-constant tables in an
// adapted basis (e0 = 1, e1..e_{d-1} spanning the maximal ideal). A table is
// only ever wrapped in a LocalAlgebra after the full battery of checks: unit
// law, commutativity, associativity, adapted form, nilpotency of the ideal.

#include <cmath>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "weil/linalg.hpp"

namespace weil {

class LocalAlgebra;
using AlgebraRef = std::shared_ptr<const LocalAlgebra>;

/// Structure constants: entry i*d+j is the coefficient vector of e_i * e_j.
using MulTable = std::vector<Vec>;

/// Nonzero entries of one product vector, as (basis index, coefficient).
using SparseVec = std::vector<std::pair<std::size_t, Rat>>;

class LocalAlgebra {
 public:
  /// Verifies every structural invariant and computes the ideal-power chain;
  /// throws (UnitLawViolation, NotCommutative, NotAssociative,
  /// NotAdaptedBasis, NotNilpotent, InvalidTable) on any defect.
  static AlgebraRef make(std::vector<std::string> labels, MulTable table);

  std::size_t dim() const { return dim_; }
  const std::string& label(std::size_t i) const { return labels_[i]; }
  const std::vector<std::string>& labels() const { return labels_; }

  /// Coefficient vector of e_i * e_j.
  const Vec& product(std::size_t i, std::size_t j) const { return table_[i * dim_ + j]; }
  const SparseVec& product_sparse(std::size_t i, std::size_t j) const {
    return sparse_[i * dim_ + j];
  }
  const double* product_num(std::size_t i, std::size_t j) const {
    return num_.data() + (i * dim_ + j) * dim_;
  }

  /// Least l with I^(l+1) = 0; zero for the one-dimensional algebra.
  std::size_t height() const { return height_; }

  /// Canonical basis of I^k (I^0 is the whole algebra; zero for k > height).
  Subspace ideal_power(std::size_t k) const {
    if (k < powers_.size()) return powers_[k];
    return Subspace(dim_);
  }

  /// (h_0, ..., h_height) with h_i = dim I^i - dim I^(i+1).
  std::vector<std::size_t> hilbert_vector() const {
    std::vector<std::size_t> h(height_ + 1);
    for (std::size_t i = 0; i <= height_; ++i)
      h[i] = ideal_power(i).dim() - ideal_power(i + 1).dim();
    return h;
  }

  /// Tables (not labels) decide identity of algebras everywhere.
  bool same_table(const LocalAlgebra& o) const {
    return dim_ == o.dim_ && table_ == o.table_;
  }

  /// Product of two coefficient vectors under this table.
  Vec mul_vec(const Vec& x, const Vec& y) const {
    if (x.size() != dim_ || y.size() != dim_) fail(Err::DimensionMismatch, "mul_vec");
    Vec r(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
      if (x[i].is_zero()) continue;
      for (std::size_t j = 0; j < dim_; ++j) {
        if (y[j].is_zero()) continue;
        const Rat c = x[i] * y[j];
        for (const auto& [k, p] : product_sparse(i, j)) r[k] += c * p;
      }
    }
    return r;
  }

 private:
  LocalAlgebra() = default;

  std::vector<std::string> labels_;
  std::size_t dim_ = 0;
  MulTable table_;
  std::vector<SparseVec> sparse_;  // nonzeros of table_
  std::vector<double> num_;        // table_ as binary64, for numeric mode
  std::size_t height_ = 0;
  std::vector<Subspace> powers_;   // I^0 .. I^(height+1), last entry zero
};

inline bool same_algebra(const AlgebraRef& a, const AlgebraRef& b) {
  return a == b || (a && b && a->same_table(*b));
}

inline AlgebraRef LocalAlgebra::make(std::vector<std::string> labels, MulTable table) {
  const std::size_t d = labels.size();
  if (d == 0) fail(Err::InvalidTable, "empty basis");
  if (labels[0] != "1") fail(Err::InvalidTable, "basis label 0 must be \"1\"");
  if (table.size() != d * d) fail(Err::InvalidTable, "table must have dim^2 entries");
  for (const Vec& v : table)
    if (v.size() != d) fail(Err::InvalidTable, "table entry has wrong length");

  auto pair_name = [&](std::size_t i, std::size_t j) {
    return "(" + labels[i] + ", " + labels[j] + ")";
  };

  for (std::size_t j = 0; j < d; ++j)
    if (table[j] != unit_vec(d, j))
      fail(Err::UnitLawViolation, "e0 * e_j != e_j at j = " + labels[j]);
  for (std::size_t i = 1; i < d; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (table[i * d + j] != table[j * d + i])
        fail(Err::NotCommutative, "at basis pair " + pair_name(i, j));
  for (std::size_t i = 1; i < d; ++i)
    for (std::size_t j = 1; j < d; ++j)
      if (!table[i * d + j][0].is_zero())
        fail(Err::NotAdaptedBasis,
             "c[i][j][0] != 0 at basis pair " + pair_name(i, j) +
                 " (span of e1..e_{d-1} is not an ideal)");

  auto obj = std::shared_ptr<LocalAlgebra>(new LocalAlgebra());
  obj->labels_ = std::move(labels);
  obj->dim_ = d;
  obj->table_ = std::move(table);
  obj->sparse_.resize(d * d);
  for (std::size_t e = 0; e < d * d; ++e)
    for (std::size_t k = 0; k < d; ++k)
      if (!obj->table_[e][k].is_zero()) obj->sparse_[e].emplace_back(k, obj->table_[e][k]);

  // Associativity: (e_i e_j) e_k = e_i (e_j e_k). Swapping i and k gives the
  // commuted instance, so i <= k suffices. Accumulator buffers are reused
  // across triples; only touched coordinates are compared and reset.
  {
    Vec lhs(d), rhs(d);
    std::vector<std::size_t> touched;
    for (std::size_t i = 1; i < d; ++i)
      for (std::size_t j = 1; j < d; ++j)
        for (std::size_t k = i; k < d; ++k) {
          touched.clear();
          for (const auto& [m, c] : obj->product_sparse(i, j))
            for (const auto& [t, p] : obj->product_sparse(m, k)) {
              lhs[t] += c * p;
              touched.push_back(t);
            }
          for (const auto& [m, c] : obj->product_sparse(j, k))
            for (const auto& [t, p] : obj->product_sparse(i, m)) {
              rhs[t] += c * p;
              touched.push_back(t);
            }
          bool ok = true;
          for (const std::size_t t : touched)
            if (!(lhs[t] == rhs[t])) ok = false;
          if (!ok)
            fail(Err::NotAssociative, "at basis triple (" + obj->labels_[i] + ", " +
                                          obj->labels_[j] + ", " + obj->labels_[k] + ")");
          for (const std::size_t t : touched) {
            lhs[t] = Rat(0);
            rhs[t] = Rat(0);
          }
        }
  }

  // Ideal power chain. The span of e1..e_{d-1} is closed by the adapted-basis
  // check; locality is now exactly nilpotency of that span.
  obj->powers_.push_back(Subspace::full(d));
  std::vector<Vec> ideal_basis;
  for (std::size_t i = 1; i < d; ++i) ideal_basis.push_back(unit_vec(d, i));
  Subspace current = Subspace::span(d, ideal_basis);
  obj->powers_.push_back(current);
  while (current.dim() > 0) {
    std::vector<Vec> products;
    for (const Vec& b : current.basis())
      for (std::size_t i = 1; i < d; ++i) {
        Vec p(d);
        for (std::size_t m = 0; m < d; ++m) {
          if (b[m].is_zero()) continue;
          for (const auto& [t, c] : obj->product_sparse(m, i)) p[t] += b[m] * c;
        }
        products.push_back(std::move(p));
      }
    Subspace next = Subspace::span(d, std::move(products));
    if (next.dim() == current.dim())
      fail(Err::NotNilpotent, "ideal powers stabilize at dimension " +
                                  std::to_string(next.dim()) + " > 0");
    obj->powers_.push_back(next);
    current = obj->powers_.back();
  }
  obj->height_ = obj->powers_.size() - 2;

  obj->num_.resize(d * d * d);
  for (std::size_t e = 0; e < d * d; ++e)
    for (std::size_t k = 0; k < d; ++k) obj->num_[e * d + k] = obj->table_[e][k].to_double();

  return obj;
}

/// The zero object of the category: the one-dimensional algebra.
inline AlgebraRef reals() {
  static const AlgebraRef r = LocalAlgebra::make({"1"}, {Vec{Rat(1)}});
  return r;
}

/// Dual numbers: 1, eps with eps^2 = 0.
inline AlgebraRef dual_numbers() {
  static const AlgebraRef d = [] {
    MulTable t(4, Vec(2));
    t[0] = {Rat(1), Rat(0)};  // 1*1
    t[1] = {Rat(0), Rat(1)};  // 1*eps
    t[2] = {Rat(0), Rat(1)};  // eps*1
    t[3] = {Rat(0), Rat(0)};  // eps*eps
    return LocalAlgebra::make({"1", "eps"}, std::move(t));
  }();
  return d;
}

// ---------------------------------------------------------------------------
// Elements. The coefficient scalar is a template parameter: Rat for the exact
// structural mode, double for numeric evaluation, and ElementT<S> itself for
// the nested evaluation towers used by the functor-composition witness.

template <class S>
struct ElementT {
  AlgebraRef algebra;
  std::vector<S> coeffs;
};

using Element = ElementT<Rat>;
using NumElement = ElementT<double>;

inline Rat scale_by_rat(const Rat& s, const Rat& c) { return s * c; }
inline double scale_by_rat(double s, const Rat& c) { return s * c.to_double(); }
template <class S>
ElementT<S> scale_by_rat(const ElementT<S>& e, const Rat& c);

inline bool scalar_is_zero(const Rat& s) { return s.is_zero(); }
inline bool scalar_is_zero(double s) { return s == 0.0; }
template <class S>
bool scalar_is_zero(const ElementT<S>& e) {
  for (const S& c : e.coeffs)
    if (!scalar_is_zero(c)) return false;
  return true;
}

/// Innermost binary64 view of a scalar; used for domain checks.
inline double leading_double(const Rat& s) { return s.to_double(); }
inline double leading_double(double s) { return s; }
template <class S>
double leading_double(const ElementT<S>& e) {
  return leading_double(e.coeffs[0]);
}

inline Rat scalar_zero_like(const Rat&) { return Rat(0); }
inline double scalar_zero_like(double) { return 0.0; }
template <class S>
ElementT<S> scalar_zero_like(const ElementT<S>& proto) {
  ElementT<S> z;
  z.algebra = proto.algebra;
  z.coeffs.reserve(proto.coeffs.size());
  for (const S& c : proto.coeffs) z.coeffs.push_back(scalar_zero_like(c));
  return z;
}

inline Rat scalar_from_rat(const Rat&, const Rat& c) { return c; }
inline double scalar_from_rat(double, const Rat& c) { return c.to_double(); }
template <class S>
ElementT<S> scalar_from_rat(const ElementT<S>& proto, const Rat& c) {
  ElementT<S> e = scalar_zero_like(proto);
  e.coeffs[0] = scalar_from_rat(proto.coeffs[0], c);
  return e;
}

template <class S>
ElementT<S> el_zero_like(const ElementT<S>& proto) {
  return scalar_zero_like(proto);
}

inline Element el_zero(const AlgebraRef& a) {
  return Element{a, Vec(a->dim())};
}
inline NumElement el_zero_num(const AlgebraRef& a) {
  return NumElement{a, std::vector<double>(a->dim())};
}

inline Element el_scalar(const AlgebraRef& a, const Rat& c) {
  Element e = el_zero(a);
  e.coeffs[0] = c;
  return e;
}
inline NumElement el_scalar_num(const AlgebraRef& a, double c) {
  NumElement e = el_zero_num(a);
  e.coeffs[0] = c;
  return e;
}

inline Element el_one(const AlgebraRef& a) { return el_scalar(a, Rat(1)); }

inline Element el_basis(const AlgebraRef& a, std::size_t i) {
  Element e = el_zero(a);
  e.coeffs[i] = Rat(1);
  return e;
}

inline Element el_from_vec(const AlgebraRef& a, Vec v) {
  if (v.size() != a->dim()) fail(Err::DimensionMismatch, "el_from_vec");
  return Element{a, std::move(v)};
}

template <class S>
void check_same_algebra(const ElementT<S>& x, const ElementT<S>& y, const char* op) {
  if (!same_algebra(x.algebra, y.algebra))
    fail(Err::AlgebraMismatch, std::string(op) + " on elements of different algebras");
}

template <class S>
ElementT<S> add(const ElementT<S>& x, const ElementT<S>& y) {
  check_same_algebra(x, y, "add");
  ElementT<S> r = x;
  for (std::size_t i = 0; i < r.coeffs.size(); ++i) r.coeffs[i] = r.coeffs[i] + y.coeffs[i];
  return r;
}

template <class S>
ElementT<S> sub(const ElementT<S>& x, const ElementT<S>& y) {
  check_same_algebra(x, y, "sub");
  ElementT<S> r = x;
  for (std::size_t i = 0; i < r.coeffs.size(); ++i) r.coeffs[i] = r.coeffs[i] - y.coeffs[i];
  return r;
}

template <class S>
ElementT<S> neg(const ElementT<S>& x) {
  ElementT<S> r = x;
  for (auto& c : r.coeffs) c = scalar_zero_like(c) - c;
  return r;
}

template <class S, class K>
ElementT<S> scale(const ElementT<S>& x, const K& k) {
  ElementT<S> r = x;
  for (auto& c : r.coeffs) c = c * k;
  return r;
}

template <class S>
ElementT<S> scale_by_rat(const ElementT<S>& e, const Rat& c) {
  ElementT<S> r = e;
  for (auto& x : r.coeffs) x = scale_by_rat(x, c);
  return r;
}

template <class S>
ElementT<S> mul(const ElementT<S>& x, const ElementT<S>& y) {
  check_same_algebra(x, y, "mul");
  const LocalAlgebra& A = *x.algebra;
  const std::size_t d = A.dim();
  ElementT<S> r;
  r.algebra = x.algebra;
  r.coeffs.assign(d, scalar_zero_like(x.coeffs[0]));
  if constexpr (std::is_same_v<S, double>) {
    for (std::size_t i = 0; i < d; ++i) {
      if (x.coeffs[i] == 0.0) continue;
      for (std::size_t j = 0; j < d; ++j) {
        if (y.coeffs[j] == 0.0) continue;
        const double c = x.coeffs[i] * y.coeffs[j];
        const double* p = A.product_num(i, j);
        for (std::size_t k = 0; k < d; ++k)
          if (p[k] != 0.0) r.coeffs[k] += c * p[k];
      }
    }
  } else {
    for (std::size_t i = 0; i < d; ++i) {
      if (scalar_is_zero(x.coeffs[i])) continue;
      for (std::size_t j = 0; j < d; ++j) {
        if (scalar_is_zero(y.coeffs[j])) continue;
        const S c = x.coeffs[i] * y.coeffs[j];
        for (const auto& [k, p] : A.product_sparse(i, j))
          r.coeffs[k] = r.coeffs[k] + scale_by_rat(c, p);
      }
    }
  }
  return r;
}

template <class S>
ElementT<S> operator+(const ElementT<S>& a, const ElementT<S>& b) { return add(a, b); }
template <class S>
ElementT<S> operator-(const ElementT<S>& a, const ElementT<S>& b) { return sub(a, b); }
template <class S>
ElementT<S> operator-(const ElementT<S>& a) { return neg(a); }
template <class S>
ElementT<S> operator*(const ElementT<S>& a, const ElementT<S>& b) { return mul(a, b); }

inline bool operator==(const Element& a, const Element& b) {
  return same_algebra(a.algebra, b.algebra) && a.coeffs == b.coeffs;
}

/// Finite part / nilpotent part split a = alpha + a_bar along the direct
/// sum decomposition; recomposition is exact by construction.
template <class S>
std::pair<S, ElementT<S>> decompose(const ElementT<S>& a) {
  ElementT<S> nil = a;
  S fin = a.coeffs[0];
  nil.coeffs[0] = scalar_zero_like(fin);
  return {fin, nil};
}

template <class S>
S finite_part(const ElementT<S>& a) {
  return a.coeffs[0];
}

template <class S>
ElementT<S> nilpotent_part(const ElementT<S>& a) {
  ElementT<S> nil = a;
  nil.coeffs[0] = scalar_zero_like(nil.coeffs[0]);
  return nil;
}

inline Rat scalar_invert(const Rat& a) { return a.inverse(); }
inline double scalar_invert(double a) {
  if (a == 0.0) fail(Err::NotInvertible, "division by zero");
  return 1.0 / a;
}

/// a^{-1} for a = alpha + n with alpha invertible: alpha^{-1} * sum over
/// k <= height of (-n/alpha)^k. Fails with NotInvertible when the finite
/// part vanishes (the element lies in the maximal ideal).
template <class S>
ElementT<S> invert(const ElementT<S>& a) {
  const auto [alpha, n] = decompose(a);
  if (scalar_is_zero(alpha))
    fail(Err::NotInvertible, "element lies in the maximal ideal");
  const S ia = scalar_invert(alpha);
  const std::size_t ell = a.algebra->height();
  ElementT<S> acc = scalar_from_rat(a, Rat(0));
  acc.algebra = a.algebra;
  ElementT<S> pw = scalar_from_rat(a, Rat(1));  // (-n * ia)^k
  ElementT<S> step = neg(scale(n, ia));
  S factor = ia;
  for (std::size_t k = 0; k <= ell; ++k) {
    acc = add(acc, scale(pw, factor));
    if (k < ell) pw = mul(pw, step);
  }
  return acc;
}

template <class S>
ElementT<S> scalar_invert(const ElementT<S>& a) {
  return invert(a);
}

template <class S>
ElementT<S> el_pow(const ElementT<S>& a, unsigned k) {
  ElementT<S> r = scalar_from_rat(a, Rat(1));
  ElementT<S> b = a;
  while (k > 0) {
    if (k & 1u) r = mul(r, b);
    k >>= 1u;
    if (k) b = mul(b, b);
  }
  return r;
}

inline double max_abs_diff(const NumElement& a, const NumElement& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
    const double d = std::abs(a.coeffs[i] - b.coeffs[i]);
    if (d > m) m = d;
  }
  return m;
}

}  // namespace weil

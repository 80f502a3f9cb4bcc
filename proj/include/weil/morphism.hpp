#pragma once
// Morphisms of local algebras as exact matrices, with full verification
// (unital + multiplicative on every basis pair), and the generic machinery
// for presenting a subalgebra spanned by chosen ideal vectors as a local
// algebra in its own right.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "weil/algebra.hpp"

namespace weil {

/// A linear map target <- source, (target.dim x source.dim). Only maps that
/// pass verify_morphism are morphisms; construction does not verify.
struct AlgMorphism {
  AlgebraRef source;
  AlgebraRef target;
  Mat matrix;

  Vec apply_vec(const Vec& x) const { return matrix.apply(x); }

  template <class S>
  ElementT<S> apply(const ElementT<S>& x) const {
    if (!same_algebra(x.algebra, source)) fail(Err::AlgebraMismatch, "morphism apply");
    ElementT<S> r;
    r.algebra = target;
    r.coeffs.assign(target->dim(), scalar_zero_like(x.coeffs[0]));
    for (std::size_t j = 0; j < source->dim(); ++j) {
      if (scalar_is_zero(x.coeffs[j])) continue;
      for (std::size_t i = 0; i < target->dim(); ++i) {
        const Rat& m = matrix.at(i, j);
        if (!m.is_zero()) r.coeffs[i] = r.coeffs[i] + scale_by_rat(x.coeffs[j], m);
      }
    }
    return r;
  }
};

inline AlgMorphism identity_morphism(const AlgebraRef& a) {
  return AlgMorphism{a, a, Mat::identity(a->dim())};
}

/// The unique morphism A -> R, alpha + a_bar |-> alpha; its kernel is I_A.
inline AlgMorphism zero_morphism(const AlgebraRef& a) {
  Mat m(1, a->dim());
  m.at(0, 0) = Rat(1);
  return AlgMorphism{a, reals(), m};
}

/// The unique morphism R -> A (unit inclusion).
inline AlgMorphism unit_inclusion(const AlgebraRef& a) {
  Mat m(a->dim(), 1);
  m.at(0, 0) = Rat(1);
  return AlgMorphism{reals(), a, m};
}

inline AlgMorphism compose(const AlgMorphism& g, const AlgMorphism& f) {
  if (!same_algebra(g.source, f.target))
    fail(Err::AlgebraMismatch, "compose: inner algebras differ");
  return AlgMorphism{f.source, g.target, g.matrix * f.matrix};
}

inline bool morphism_equal(const AlgMorphism& f, const AlgMorphism& g) {
  return same_algebra(f.source, g.source) && same_algebra(f.target, g.target) &&
         f.matrix == g.matrix;
}

struct MorphismReport {
  bool ok = false;
  std::string detail;
};

/// Checks shape, unitality, multiplicativity on all basis pairs, and (as a
/// consequence check) that the ideal maps into the ideal. On failure the
/// report names the violated basis pair.
inline MorphismReport verify_morphism(const AlgMorphism& f) {
  const LocalAlgebra& A = *f.source;
  const LocalAlgebra& B = *f.target;
  if (f.matrix.rows != B.dim() || f.matrix.cols != A.dim())
    return {false, "matrix shape does not match source/target dimensions"};
  if (f.matrix.column(0) != unit_vec(B.dim(), 0)) return {false, "not unital: f(1) != 1"};
  std::vector<Vec> cols(A.dim());
  for (std::size_t i = 0; i < A.dim(); ++i) cols[i] = f.matrix.column(i);
  for (std::size_t i = 1; i < A.dim(); ++i)
    for (std::size_t j = i; j < A.dim(); ++j) {
      const Vec lhs = f.matrix.apply(A.product(i, j));
      const Vec rhs = B.mul_vec(cols[i], cols[j]);
      if (lhs != rhs)
        return {false, "multiplicativity fails at basis pair (" + A.label(i) + ", " +
                           A.label(j) + ")"};
    }
  for (std::size_t i = 1; i < A.dim(); ++i)
    if (!cols[i][0].is_zero())
      return {false, "image of ideal element " + A.label(i) + " leaves the ideal"};
  return {true, ""};
}

inline void require_morphism(const AlgMorphism& f, const char* context) {
  const MorphismReport r = verify_morphism(f);
  if (!r.ok) fail(Err::MorphismInvalid, std::string(context) + ": " + r.detail);
}

inline bool is_epimorphism(const AlgMorphism& f) {
  return rank(f.matrix) == f.target->dim();
}

/// Label helper: a vector that is exactly a parent basis vector keeps the
/// parent label, anything else gets the fallback.
inline std::string label_for_vector(const LocalAlgebra& parent, const Vec& v,
                                    const std::string& fallback) {
  std::size_t nz = 0, idx = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!v[i].is_zero()) {
      ++nz;
      idx = i;
    }
  if (nz == 1 && v[idx] == Rat(1)) return parent.label(idx);
  return fallback;
}

/// Presents R + span(ideal_vectors) as a local algebra on the ordered basis
/// [1, ideal_vectors...]; products are computed in the parent and re-solved
/// in that basis. Fails with NotClosed if the span is not multiplicatively
/// closed (or the vectors are dependent / touch the unit coordinate).
/// Returns the algebra together with the inclusion morphism into the parent.
inline std::pair<AlgebraRef, AlgMorphism> algebra_on_basis(
    const AlgebraRef& parent, const std::vector<Vec>& ideal_vectors,
    std::vector<std::string> labels = {}) {
  const std::size_t dp = parent->dim();
  const std::size_t m = ideal_vectors.size() + 1;
  std::vector<Vec> full;
  full.reserve(m);
  full.push_back(unit_vec(dp, 0));
  for (const Vec& v : ideal_vectors) {
    if (v.size() != dp) fail(Err::DimensionMismatch, "algebra_on_basis");
    if (!v[0].is_zero())
      fail(Err::NotClosed, "basis vector has a component on the unit");
    full.push_back(v);
  }
  const Mat inc = Mat::from_columns(dp, full);
  if (rank(inc) != m) fail(Err::NotClosed, "basis vectors are dependent");

  if (labels.empty()) {
    labels.push_back("1");
    for (std::size_t i = 0; i < ideal_vectors.size(); ++i)
      labels.push_back(
          label_for_vector(*parent, ideal_vectors[i], "s" + std::to_string(i + 1)));
  } else if (labels.size() != m) {
    fail(Err::InvalidTable, "algebra_on_basis: wrong label count");
  }

  MulTable table(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const Vec prod = parent->mul_vec(full[i], full[j]);
      const auto x = solve(inc, prod);
      if (!x)
        fail(Err::NotClosed, "product of basis vectors " + std::to_string(i) + ", " +
                                 std::to_string(j) + " leaves the span");
      table[i * m + j] = *x;
      table[j * m + i] = *x;
    }
  AlgebraRef alg = LocalAlgebra::make(std::move(labels), std::move(table));
  return {alg, AlgMorphism{alg, parent, inc}};
}

}  // namespace weil

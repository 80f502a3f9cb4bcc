#pragma once
// Ideal arithmetic inside a local algebra: generation, sums, intersections,
// quotient algebras, and the kernel / image / cokernel constructions.

#include <string>
#include <utility>
#include <vector>

#include "weil/morphism.hpp"

namespace weil {

/// A proper ideal J of A, stored as the canonical subspace of coordinate
/// space. Invariants enforced at construction: J has no component on the
/// unit and A*J is contained in J.
class Ideal {
 public:
  static Ideal from_subspace(AlgebraRef algebra, Subspace space) {
    const std::size_t d = algebra->dim();
    if (space.ambient() != d) fail(Err::DimensionMismatch, "ideal subspace");
    for (const Vec& b : space.basis()) {
      if (!b[0].is_zero())
        fail(Err::NotProper, "ideal basis vector has a component on the unit");
      for (std::size_t i = 1; i < d; ++i) {
        const Vec prod = algebra->mul_vec(b, unit_vec(d, i));
        if (!space.contains(prod))
          fail(Err::NotClosed, "subspace is not closed under multiplication by " +
                                   algebra->label(i));
      }
    }
    Ideal j;
    j.algebra_ = std::move(algebra);
    j.space_ = std::move(space);
    return j;
  }

  static Ideal zero(AlgebraRef algebra) {
    const std::size_t d = algebra->dim();
    return from_subspace(std::move(algebra), Subspace(d));
  }

  const AlgebraRef& algebra() const { return algebra_; }
  const Subspace& space() const { return space_; }
  std::size_t dim() const { return space_.dim(); }
  bool contains(const Vec& v) const { return space_.contains(v); }

 private:
  Ideal() = default;
  AlgebraRef algebra_;
  Subspace space_;
};

/// Smallest ideal of A containing the generators: the span closed under
/// multiplication by basis elements until stable. Generators must lie in the
/// maximal ideal, otherwise they would generate the unit ideal.
inline Ideal ideal_generate(const AlgebraRef& a, const std::vector<Element>& gens) {
  const std::size_t d = a->dim();
  std::vector<Vec> vecs;
  for (const Element& g : gens) {
    if (!same_algebra(g.algebra, a)) fail(Err::AlgebraMismatch, "ideal_generate");
    if (!g.coeffs[0].is_zero())
      fail(Err::GeneratorNotInMaximalIdeal, "generator has nonzero finite part");
    vecs.push_back(g.coeffs);
  }
  Subspace span = Subspace::span(d, vecs);
  for (;;) {
    std::vector<Vec> next = span.basis();
    const std::size_t before = span.dim();
    for (const Vec& b : span.basis())
      for (std::size_t i = 1; i < d; ++i) next.push_back(a->mul_vec(b, unit_vec(d, i)));
    span = Subspace::span(d, std::move(next));
    if (span.dim() == before) break;
  }
  return Ideal::from_subspace(a, std::move(span));
}

inline Ideal ideal_sum(const Ideal& j1, const Ideal& j2) {
  if (!same_algebra(j1.algebra(), j2.algebra())) fail(Err::AlgebraMismatch, "ideal_sum");
  return Ideal::from_subspace(j1.algebra(), subspace_sum(j1.space(), j2.space()));
}

inline Ideal ideal_intersect(const Ideal& j1, const Ideal& j2) {
  if (!same_algebra(j1.algebra(), j2.algebra()))
    fail(Err::AlgebraMismatch, "ideal_intersect");
  return Ideal::from_subspace(j1.algebra(), intersect(j1.space(), j2.space()));
}

struct QuotientResult {
  AlgebraRef algebra;
  AlgMorphism projection;
};

/// A/J with the natural projection. The quotient basis is the unit plus the
/// non-pivot coordinates of J's echelon basis (a deterministic complement of
/// J inside the maximal ideal), so tables are reproducible.
inline QuotientResult quotient_algebra(const AlgebraRef& a, const Ideal& j) {
  if (!same_algebra(j.algebra(), a)) fail(Err::AlgebraMismatch, "quotient_algebra");
  const std::size_t d = a->dim();
  std::vector<bool> is_pivot(d, false);
  for (const Vec& b : j.space().basis()) {
    std::size_t p = 0;
    while (p < d && b[p].is_zero()) ++p;
    is_pivot[p] = true;
  }
  std::vector<std::size_t> comp;  // complement coordinates, ascending
  for (std::size_t i = 1; i < d; ++i)
    if (!is_pivot[i]) comp.push_back(i);
  const std::size_t q = comp.size() + 1;

  auto project = [&](const Vec& v) {
    const Vec r = j.space().reduce(v);
    Vec out(q);
    out[0] = r[0];
    for (std::size_t c = 0; c < comp.size(); ++c) out[c + 1] = r[comp[c]];
    return out;
  };

  Mat proj(q, d);
  for (std::size_t i = 0; i < d; ++i) {
    const Vec col = project(unit_vec(d, i));
    for (std::size_t r = 0; r < q; ++r) proj.at(r, i) = col[r];
  }

  std::vector<std::string> labels{"1"};
  for (std::size_t c : comp) labels.push_back(a->label(c));

  MulTable table(q * q);
  auto rep = [&](std::size_t i) {
    return i == 0 ? unit_vec(d, 0) : unit_vec(d, comp[i - 1]);
  };
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t k = 0; k <= i; ++k) {
      Vec pr = project(a->mul_vec(rep(i), rep(k)));
      table[i * q + k] = pr;
      table[k * q + i] = std::move(pr);
    }
  AlgebraRef quot = LocalAlgebra::make(std::move(labels), std::move(table));
  AlgMorphism pi{a, quot, std::move(proj)};
  require_morphism(pi, "quotient projection");
  return {quot, std::move(pi)};
}

/// The natural epimorphism A/J1 -> A/J2 for quotients of one algebra with
/// nested kernels (J1 inside J2): the unique map commuting with the
/// projections.
inline AlgMorphism quotient_descent(const QuotientResult& q1, const QuotientResult& q2) {
  if (!same_algebra(q1.projection.source, q2.projection.source))
    fail(Err::SourceMismatch, "quotient_descent: different parent algebras");
  auto sol = solve_left(q1.projection.matrix, q2.projection.matrix);
  if (!sol) fail(Err::NotProper, "quotient_descent: kernels are not nested");
  if (!sol->unique) fail(Err::NonUniqueFactorization, "quotient_descent");
  AlgMorphism f{q1.algebra, q2.algebra, sol->x};
  require_morphism(f, "quotient_descent");
  return f;
}

/// A subalgebra R + V presented inside its parent.
struct Subalgebra {
  AlgebraRef parent;
  Subspace ideal_part;

  std::size_t dim() const { return ideal_part.dim() + 1; }
};

struct KernelResult {
  Ideal ker;      // kernel in the category of algebras without unit
  Subalgebra Ker; // R + ker: the kernel in the category of local algebras
};

inline KernelResult kernel(const AlgMorphism& f) {
  require_morphism(f, "kernel");
  Subspace null = kernel_subspace(f.matrix);
  // For a verified morphism the null space already sits inside the ideal;
  // the intersection keeps that explicit.
  Subspace ker_space = intersect(null, f.source->ideal_power(1));
  Ideal j = Ideal::from_subspace(f.source, ker_space);
  return {j, Subalgebra{f.source, std::move(ker_space)}};
}

/// Image subalgebra R + f(I_source), with its multiplicative closure checked.
inline Subalgebra image(const AlgMorphism& f) {
  require_morphism(f, "image");
  std::vector<Vec> cols;
  for (std::size_t i = 1; i < f.source->dim(); ++i) cols.push_back(f.matrix.column(i));
  Subspace sp = Subspace::span(f.target->dim(), std::move(cols));
  for (const Vec& x : sp.basis())
    for (const Vec& y : sp.basis())
      if (!sp.contains(f.target->mul_vec(x, y)))
        fail(Err::NotClosed, "image span not closed under multiplication");
  return Subalgebra{f.target, std::move(sp)};
}

/// Cok f = target / <f(I_source)>. In a local ring every proper ideal sits
/// inside the maximal one, so the generated ideal realizes the intersection
/// of all proper ideals containing the image of the source ideal.
inline QuotientResult cokernel(const AlgMorphism& f) {
  require_morphism(f, "cokernel");
  std::vector<Element> gens;
  for (std::size_t i = 1; i < f.source->dim(); ++i)
    gens.push_back(el_from_vec(f.target, f.matrix.column(i)));
  const Ideal j = ideal_generate(f.target, gens);
  return quotient_algebra(f.target, j);
}

}  // namespace weil

#pragma once
// Categorical constructions on local algebras: the biproduct A1 x_R A2, the
// relative product over a pair of epimorphisms, pullbacks, pushouts, tensor
// products, their action on morphism pairs, mediating-morphism search for
// universal properties, and the tensor-over-pullback distributivity witness.
//
// Every constructed table goes back through LocalAlgebra::make and every leg
// through verify_morphism, so a construction that returns at all satisfies
// its diagram.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "weil/ideal.hpp"

namespace weil {

enum class ConstructionKind { Biproduct, Relative, Pullback, Pushout, Tensor };

inline const char* kind_name(ConstructionKind k) {
  switch (k) {
    case ConstructionKind::Biproduct: return "biproduct";
    case ConstructionKind::Relative: return "relative";
    case ConstructionKind::Pullback: return "pullback";
    case ConstructionKind::Pushout: return "pushout";
    case ConstructionKind::Tensor: return "tensor";
  }
  return "?";
}

struct ConstructionResult {
  AlgebraRef algebra;
  std::map<std::string, AlgMorphism> legs;
  ConstructionKind kind = ConstructionKind::Biproduct;
  std::vector<AlgebraRef> factors;     // the input algebras A1, A2
  std::vector<AlgMorphism> inputs;     // the defining morphisms, if any
  // Pullback: the inclusion into biproduct(A1, A2).
  // Pushout: the natural projection A -> A/(ker+ker).
  std::optional<AlgMorphism> inner;

  const AlgMorphism& leg(const std::string& name) const {
    auto it = legs.find(name);
    if (it == legs.end()) fail(Err::UsageError, "construction has no leg " + name);
    return it->second;
  }
};

inline Mat vstack(const Mat& a, const Mat& b) {
  if (a.cols != b.cols) fail(Err::DimensionMismatch, "vstack");
  Mat r(a.rows + b.rows, a.cols);
  std::copy(a.a.begin(), a.a.end(), r.a.begin());
  std::copy(b.a.begin(), b.a.end(), r.a.begin() + static_cast<long>(a.a.size()));
  return r;
}

// ---------------------------------------------------------------------------
// Biproduct: R + I_{A1} x I_{A2}, simultaneously product and coproduct.

inline ConstructionResult biproduct(const AlgebraRef& a1, const AlgebraRef& a2) {
  const std::size_t d1 = a1->dim(), d2 = a2->dim();
  const std::size_t d = d1 + d2 - 1;
  const bool suffix = d1 > 1 && d2 > 1;

  std::vector<std::string> labels{"1"};
  for (std::size_t i = 1; i < d1; ++i)
    labels.push_back(suffix ? a1->label(i) + "#1" : a1->label(i));
  for (std::size_t j = 1; j < d2; ++j)
    labels.push_back(suffix ? a2->label(j) + "#2" : a2->label(j));

  // Global coordinates: 0 unit, 1..d1-1 the A1 ideal, d1..d the A2 ideal.
  auto g1 = [&](std::size_t i) { return i; };
  auto g2 = [&](std::size_t j) { return d1 - 1 + j; };

  MulTable table(d * d, Vec(d));
  for (std::size_t m = 0; m < d; ++m) {
    table[0 * d + m] = unit_vec(d, m);
    table[m * d + 0] = unit_vec(d, m);
  }
  for (std::size_t i = 1; i < d1; ++i)
    for (std::size_t j = 1; j < d1; ++j) {
      const Vec& p = a1->product(i, j);
      Vec v(d);
      for (std::size_t k = 1; k < d1; ++k) v[g1(k)] = p[k];
      table[g1(i) * d + g1(j)] = std::move(v);
    }
  for (std::size_t i = 1; i < d2; ++i)
    for (std::size_t j = 1; j < d2; ++j) {
      const Vec& p = a2->product(i, j);
      Vec v(d);
      for (std::size_t k = 1; k < d2; ++k) v[g2(k)] = p[k];
      table[g2(i) * d + g2(j)] = std::move(v);
    }
  // Cross products I_{A1} * I_{A2} vanish: already zero.

  ConstructionResult r;
  r.kind = ConstructionKind::Biproduct;
  r.factors = {a1, a2};
  r.algebra = LocalAlgebra::make(std::move(labels), std::move(table));

  Mat pr1(d1, d), pr2(d2, d), in1(d, d1), in2(d, d2);
  pr1.at(0, 0) = Rat(1);
  pr2.at(0, 0) = Rat(1);
  in1.at(0, 0) = Rat(1);
  in2.at(0, 0) = Rat(1);
  for (std::size_t i = 1; i < d1; ++i) {
    pr1.at(i, g1(i)) = Rat(1);
    in1.at(g1(i), i) = Rat(1);
  }
  for (std::size_t j = 1; j < d2; ++j) {
    pr2.at(j, g2(j)) = Rat(1);
    in2.at(g2(j), j) = Rat(1);
  }
  r.legs.emplace("Pr1", AlgMorphism{r.algebra, a1, std::move(pr1)});
  r.legs.emplace("Pr2", AlgMorphism{r.algebra, a2, std::move(pr2)});
  r.legs.emplace("In1", AlgMorphism{a1, r.algebra, std::move(in1)});
  r.legs.emplace("In2", AlgMorphism{a2, r.algebra, std::move(in2)});
  for (const auto& [name, leg] : r.legs) require_morphism(leg, name.c_str());
  return r;
}

// ---------------------------------------------------------------------------
// Tensor product. Basis pairs e_i (x) f_j in row-major order, so the unit
// (0,0) comes first and the remaining pairs span the maximal ideal.

inline std::size_t tensor_index(std::size_t d2, std::size_t i, std::size_t j) {
  return i * d2 + j;
}

inline ConstructionResult tensor_product(const AlgebraRef& a1, const AlgebraRef& a2) {
  const std::size_t d1 = a1->dim(), d2 = a2->dim();
  const std::size_t d = d1 * d2;

  std::vector<std::string> labels(d);
  for (std::size_t i = 0; i < d1; ++i)
    for (std::size_t j = 0; j < d2; ++j) {
      std::string lab;
      if (i == 0 && j == 0) lab = "1";
      else if (d2 == 1) lab = a1->label(i);
      else if (d1 == 1) lab = a2->label(j);
      else if (j == 0) lab = a1->label(i) + "#1";
      else if (i == 0) lab = a2->label(j) + "#2";
      else lab = a1->label(i) + "#1*" + a2->label(j) + "#2";
      labels[tensor_index(d2, i, j)] = std::move(lab);
    }

  MulTable table(d * d, Vec(d));
  for (std::size_t i = 0; i < d1; ++i)
    for (std::size_t j = 0; j < d2; ++j)
      for (std::size_t k = 0; k < d1; ++k)
        for (std::size_t l = 0; l < d2; ++l) {
          const Vec& p1 = a1->product(i, k);
          const Vec& p2 = a2->product(j, l);
          Vec v(d);
          for (std::size_t p = 0; p < d1; ++p) {
            if (p1[p].is_zero()) continue;
            for (std::size_t q = 0; q < d2; ++q)
              if (!p2[q].is_zero()) v[tensor_index(d2, p, q)] = p1[p] * p2[q];
          }
          table[tensor_index(d2, i, j) * d + tensor_index(d2, k, l)] = std::move(v);
        }

  ConstructionResult r;
  r.kind = ConstructionKind::Tensor;
  r.factors = {a1, a2};
  r.algebra = LocalAlgebra::make(std::move(labels), std::move(table));

  Mat in1(d, d1), in2(d, d2);
  for (std::size_t i = 0; i < d1; ++i) in1.at(tensor_index(d2, i, 0), i) = Rat(1);
  for (std::size_t j = 0; j < d2; ++j) in2.at(tensor_index(d2, 0, j), j) = Rat(1);
  r.legs.emplace("In1", AlgMorphism{a1, r.algebra, std::move(in1)});
  r.legs.emplace("In2", AlgMorphism{a2, r.algebra, std::move(in2)});
  for (const auto& [name, leg] : r.legs) require_morphism(leg, name.c_str());
  return r;
}

// ---------------------------------------------------------------------------
// Relative product: B x_R Ker(pi1) x_R Ker(pi2) for epimorphisms pi_i onto a
// common B. With pi_i the zero morphisms this reproduces the biproduct table.

inline ConstructionResult relative_product(const AlgMorphism& pi1, const AlgMorphism& pi2) {
  require_morphism(pi1, "relative_product pi1");
  require_morphism(pi2, "relative_product pi2");
  if (!same_algebra(pi1.target, pi2.target))
    fail(Err::AlgebraMismatch, "relative_product: targets differ");
  if (!is_epimorphism(pi1) || !is_epimorphism(pi2))
    fail(Err::NotEpimorphism, "relative_product requires epimorphisms");

  const AlgebraRef& b = pi1.target;
  const std::vector<Vec> k1 = kernel(pi1).ker.space().basis();
  const std::vector<Vec> k2 = kernel(pi2).ker.space().basis();
  auto [k1alg, k1inc] = algebra_on_basis(pi1.source, k1);
  auto [k2alg, k2inc] = algebra_on_basis(pi2.source, k2);

  const std::size_t db = b->dim(), n1 = k1.size(), n2 = k2.size();
  const std::size_t d = db + n1 + n2;
  auto gb = [&](std::size_t i) { return i; };            // 1..db-1
  auto gk1 = [&](std::size_t i) { return db - 1 + i; };  // 1..n1 (kernel algebra coords)
  auto gk2 = [&](std::size_t i) { return db - 1 + n1 + i; };

  std::vector<std::string> labels{"1"};
  for (std::size_t i = 1; i < db; ++i) labels.push_back(b->label(i));
  for (std::size_t i = 1; i <= n1; ++i) labels.push_back(k1alg->label(i) + "#1");
  for (std::size_t i = 1; i <= n2; ++i) labels.push_back(k2alg->label(i) + "#2");

  MulTable table(d * d, Vec(d));
  for (std::size_t m = 0; m < d; ++m) {
    table[0 * d + m] = unit_vec(d, m);
    table[m * d + 0] = unit_vec(d, m);
  }
  for (std::size_t i = 1; i < db; ++i)
    for (std::size_t j = 1; j < db; ++j) {
      const Vec& p = b->product(i, j);
      Vec v(d);
      for (std::size_t k = 1; k < db; ++k) v[gb(k)] = p[k];
      table[gb(i) * d + gb(j)] = std::move(v);
    }
  for (std::size_t i = 1; i <= n1; ++i)
    for (std::size_t j = 1; j <= n1; ++j) {
      const Vec& p = k1alg->product(i, j);
      Vec v(d);
      for (std::size_t k = 1; k <= n1; ++k) v[gk1(k)] = p[k];
      table[gk1(i) * d + gk1(j)] = std::move(v);
    }
  for (std::size_t i = 1; i <= n2; ++i)
    for (std::size_t j = 1; j <= n2; ++j) {
      const Vec& p = k2alg->product(i, j);
      Vec v(d);
      for (std::size_t k = 1; k <= n2; ++k) v[gk2(k)] = p[k];
      table[gk2(i) * d + gk2(j)] = std::move(v);
    }

  ConstructionResult r;
  r.kind = ConstructionKind::Relative;
  r.factors = {pi1.source, pi2.source};
  r.inputs = {pi1, pi2};
  r.algebra = LocalAlgebra::make(std::move(labels), std::move(table));

  Mat prb(db, d);
  prb.at(0, 0) = Rat(1);
  for (std::size_t i = 1; i < db; ++i) prb.at(i, gb(i)) = Rat(1);
  r.legs.emplace("PrB", AlgMorphism{r.algebra, b, std::move(prb)});
  require_morphism(r.leg("PrB"), "PrB");
  return r;
}

// ---------------------------------------------------------------------------
// Pullback: R + the equalizer of phi1, phi2 inside I_{A1} x I_{A2}, realized
// as a subalgebra of the biproduct. Epimorphisms are not required.

inline ConstructionResult pullback(const AlgMorphism& phi1, const AlgMorphism& phi2) {
  require_morphism(phi1, "pullback phi1");
  require_morphism(phi2, "pullback phi2");
  if (!same_algebra(phi1.target, phi2.target))
    fail(Err::AlgebraMismatch, "pullback: targets differ");

  const AlgebraRef& a1 = phi1.source;
  const AlgebraRef& a2 = phi2.source;
  const std::size_t d1 = a1->dim(), d2 = a2->dim(), db = phi1.target->dim();
  ConstructionResult bp = biproduct(a1, a2);
  const std::size_t dbp = bp.algebra->dim();

  // Equalizer of the ideal parts: kernel of (a1_, a2_) |-> phi1 a1_ - phi2 a2_.
  Mat l(db, (d1 - 1) + (d2 - 1));
  for (std::size_t i = 1; i < d1; ++i)
    for (std::size_t r = 0; r < db; ++r) l.at(r, i - 1) = phi1.matrix.at(r, i);
  for (std::size_t j = 1; j < d2; ++j)
    for (std::size_t r = 0; r < db; ++r) l.at(r, d1 - 1 + j - 1) = -phi2.matrix.at(r, j);

  std::vector<Vec> basis;
  for (const Vec& k : kernel_basis(l)) {
    Vec v(dbp);
    for (std::size_t c = 0; c < k.size(); ++c) v[c + 1] = k[c];
    basis.push_back(std::move(v));
  }

  auto [alg, inc] = algebra_on_basis(bp.algebra, basis);

  ConstructionResult r;
  r.kind = ConstructionKind::Pullback;
  r.factors = {a1, a2};
  r.inputs = {phi1, phi2};
  r.algebra = alg;
  r.inner = inc;
  r.legs.emplace("Pr1", compose(bp.leg("Pr1"), inc));
  r.legs.emplace("Pr2", compose(bp.leg("Pr2"), inc));
  for (const auto& [name, leg] : r.legs) require_morphism(leg, name.c_str());
  // Diagram commutes: phi1 o Pr1 = phi2 o Pr2.
  if (!(compose(phi1, r.leg("Pr1")).matrix == compose(phi2, r.leg("Pr2")).matrix))
    fail(Err::SquareDoesNotCommute, "pullback: phi1 o Pr1 != phi2 o Pr2");
  return r;
}

// ---------------------------------------------------------------------------
// Pushout: A/(ker pi1 + ker pi2) with the unique legs Ep_i through which the
// natural projection factors.

inline ConstructionResult pushout(const AlgMorphism& pi1, const AlgMorphism& pi2) {
  require_morphism(pi1, "pushout pi1");
  require_morphism(pi2, "pushout pi2");
  if (!same_algebra(pi1.source, pi2.source))
    fail(Err::SourceMismatch, "pushout: sources differ");
  if (!is_epimorphism(pi1) || !is_epimorphism(pi2))
    fail(Err::NotEpimorphism, "pushout requires epimorphisms");

  const AlgebraRef& a = pi1.source;
  const Ideal k = ideal_sum(kernel(pi1).ker, kernel(pi2).ker);
  auto [p, pi] = quotient_algebra(a, k);

  ConstructionResult r;
  r.kind = ConstructionKind::Pushout;
  r.factors = {pi1.target, pi2.target};
  r.inputs = {pi1, pi2};
  r.algebra = p;
  r.inner = pi;

  for (int i = 0; i < 2; ++i) {
    const AlgMorphism& pii = i == 0 ? pi1 : pi2;
    auto sol = solve_left(pii.matrix, pi.matrix);
    if (!sol) fail(Err::MorphismInvalid, "pushout: projection does not factor");
    if (!sol->unique)
      fail(Err::NonUniqueFactorization, "pushout: leg not unique (pi_i not epi?)");
    AlgMorphism ep{pii.target, p, sol->x};
    require_morphism(ep, i == 0 ? "Ep1" : "Ep2");
    r.legs.emplace(i == 0 ? "Ep1" : "Ep2", std::move(ep));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Functorial action on morphism pairs.

inline void require_square(const AlgMorphism& left, const AlgMorphism& right,
                           const std::string& name) {
  if (!(left.matrix == right.matrix) || !same_algebra(left.source, right.source) ||
      !same_algebra(left.target, right.target))
    fail(Err::SquareDoesNotCommute, name);
}

/// The induced morphism between two constructions of the same kind, per the
/// relevant diagram. For relative, pullback and pushout the connecting
/// morphism eta is required and the commuting squares are checked exactly.
inline AlgMorphism map_pair(ConstructionKind kind, const ConstructionResult& src,
                            const ConstructionResult& dst, const AlgMorphism& xi1,
                            const AlgMorphism& xi2,
                            const std::optional<AlgMorphism>& eta = std::nullopt) {
  if (src.kind != kind || dst.kind != kind)
    fail(Err::UsageError, "map_pair: constructions are not of the stated kind");
  require_morphism(xi1, "map_pair xi1");
  require_morphism(xi2, "map_pair xi2");
  if (!same_algebra(xi1.source, src.factors[0]) || !same_algebra(xi1.target, dst.factors[0]) ||
      !same_algebra(xi2.source, src.factors[1]) || !same_algebra(xi2.target, dst.factors[1]))
    fail(Err::AlgebraMismatch, "map_pair: xi_i do not connect the factors");

  const std::size_t ds = src.algebra->dim(), dd = dst.algebra->dim();
  Mat m(dd, ds);
  m.at(0, 0) = Rat(1);

  switch (kind) {
    case ConstructionKind::Biproduct: {
      const std::size_t d1 = src.factors[0]->dim(), d2 = src.factors[1]->dim();
      const std::size_t e1 = dst.factors[0]->dim();
      for (std::size_t i = 1; i < d1; ++i) {
        const Vec col = xi1.matrix.column(i);
        for (std::size_t k = 1; k < dst.factors[0]->dim(); ++k) m.at(k, i) = col[k];
      }
      for (std::size_t j = 1; j < d2; ++j) {
        const Vec col = xi2.matrix.column(j);
        for (std::size_t k = 1; k < dst.factors[1]->dim(); ++k)
          m.at(e1 - 1 + k, d1 - 1 + j) = col[k];
      }
      break;
    }
    case ConstructionKind::Tensor: {
      const std::size_t d2 = src.factors[1]->dim();
      const std::size_t e2 = dst.factors[1]->dim();
      for (std::size_t i = 0; i < src.factors[0]->dim(); ++i)
        for (std::size_t j = 0; j < d2; ++j) {
          const std::size_t col = tensor_index(d2, i, j);
          for (std::size_t p = 0; p < dst.factors[0]->dim(); ++p) {
            const Rat& x = xi1.matrix.at(p, i);
            if (x.is_zero()) continue;
            for (std::size_t q = 0; q < e2; ++q) {
              const Rat& y = xi2.matrix.at(q, j);
              if (!y.is_zero()) m.at(tensor_index(e2, p, q), col) = x * y;
            }
          }
        }
      m.at(0, 0) = Rat(1);  // overwritten consistently by the (0,0) pair
      break;
    }
    case ConstructionKind::Relative: {
      if (!eta) fail(Err::UsageError, "map_pair(relative) needs eta");
      require_morphism(*eta, "map_pair eta");
      require_square(compose(*eta, src.inputs[0]), compose(dst.inputs[0], xi1),
                     "eta o pi_A1 != pi_C1 o xi1");
      require_square(compose(*eta, src.inputs[1]), compose(dst.inputs[1], xi2),
                     "eta o pi_A2 != pi_C2 o xi2");
      const std::size_t db = src.inputs[0].target->dim();
      const std::size_t eb = dst.inputs[0].target->dim();
      for (std::size_t i = 1; i < db; ++i) {
        const Vec col = eta->matrix.column(i);
        for (std::size_t k = 1; k < eb; ++k) m.at(k, i) = col[k];
      }
      const std::vector<Vec> sk1 = kernel(src.inputs[0]).ker.space().basis();
      const std::vector<Vec> sk2 = kernel(src.inputs[1]).ker.space().basis();
      const std::vector<Vec> dk1 = kernel(dst.inputs[0]).ker.space().basis();
      const std::vector<Vec> dk2 = kernel(dst.inputs[1]).ker.space().basis();
      const Mat dk1m = Mat::from_columns(dst.factors[0]->dim(), dk1);
      const Mat dk2m = Mat::from_columns(dst.factors[1]->dim(), dk2);
      for (std::size_t i = 0; i < sk1.size(); ++i) {
        const auto x = solve(dk1m, xi1.matrix.apply(sk1[i]));
        if (!x) fail(Err::SquareDoesNotCommute, "xi1 does not map ker pi_A1 into ker pi_C1");
        for (std::size_t k = 0; k < x->size(); ++k) m.at(eb + k, db + i) = (*x)[k];
      }
      for (std::size_t i = 0; i < sk2.size(); ++i) {
        const auto x = solve(dk2m, xi2.matrix.apply(sk2[i]));
        if (!x) fail(Err::SquareDoesNotCommute, "xi2 does not map ker pi_A2 into ker pi_C2");
        for (std::size_t k = 0; k < x->size(); ++k)
          m.at(eb + dk1.size() + k, db + sk1.size() + i) = (*x)[k];
      }
      break;
    }
    case ConstructionKind::Pullback: {
      if (!eta) fail(Err::UsageError, "map_pair(pullback) needs eta");
      require_morphism(*eta, "map_pair eta");
      require_square(compose(*eta, src.inputs[0]), compose(dst.inputs[0], xi1),
                     "eta o phi_A1 != phi_C1 o xi1");
      require_square(compose(*eta, src.inputs[1]), compose(dst.inputs[1], xi2),
                     "eta o phi_A2 != phi_C2 o xi2");
      const std::size_t d1 = src.factors[0]->dim(), d2 = src.factors[1]->dim();
      const std::size_t e1 = dst.factors[0]->dim(), e2 = dst.factors[1]->dim();
      const Mat& sinc = src.inner->matrix;  // biproduct(A1,A2) x dim(srcP)
      const Mat& dinc = dst.inner->matrix;
      for (std::size_t c = 1; c < ds; ++c) {
        // Split the embedded source basis vector into its A1/A2 ideal parts.
        Vec u1(d1), u2(d2);
        for (std::size_t i = 1; i < d1; ++i) u1[i] = sinc.at(i, c);
        for (std::size_t j = 1; j < d2; ++j) u2[j] = sinc.at(d1 - 1 + j, c);
        const Vec w1 = xi1.matrix.apply(u1);
        const Vec w2 = xi2.matrix.apply(u2);
        Vec w((e1 - 1) + (e2 - 1) + 1);
        for (std::size_t i = 1; i < e1; ++i) w[i] = w1[i];
        for (std::size_t j = 1; j < e2; ++j) w[e1 - 1 + j] = w2[j];
        const auto x = solve(dinc, w);
        if (!x) fail(Err::SquareDoesNotCommute, "image leaves the destination pullback");
        for (std::size_t k = 0; k < dd; ++k) m.at(k, c) = (*x)[k];
      }
      break;
    }
    case ConstructionKind::Pushout: {
      if (!eta) fail(Err::UsageError, "map_pair(pushout) needs eta");
      require_morphism(*eta, "map_pair eta");
      require_square(compose(xi1, src.inputs[0]), compose(dst.inputs[0], *eta),
                     "xi1 o pi_A1 != pi_C1 o eta");
      require_square(compose(xi2, src.inputs[1]), compose(dst.inputs[1], *eta),
                     "xi2 o pi_A2 != pi_C2 o eta");
      const Mat n = compose(*dst.inner, *eta).matrix;
      auto sol = solve_left(src.inner->matrix, n);
      if (!sol || !sol->unique)
        fail(Err::NonUniqueFactorization, "pushout map does not descend uniquely");
      m = sol->x;
      break;
    }
  }

  AlgMorphism out{src.algebra, dst.algebra, std::move(m)};
  require_morphism(out, "map_pair result");
  return out;
}

// ---------------------------------------------------------------------------
// Universal properties: mediating morphism through a construction.

/// For biproduct / pullback: cone = (sigma1 : X -> A1, sigma2 : X -> A2);
/// for pushout: cocone = (sigma1 : A1 -> X, sigma2 : A2 -> X). Returns the
/// unique mediating morphism, or nullopt when the (co)cone does not satisfy
/// the required commutation. A solvable-but-nonunique system signals a bug in
/// the construction and throws NonUniqueFactorization.
inline std::optional<AlgMorphism> factor_through(const ConstructionResult& c,
                                                 const std::vector<AlgMorphism>& cone) {
  if (cone.size() != 2) fail(Err::UsageError, "factor_through expects two morphisms");
  require_morphism(cone[0], "factor_through sigma1");
  require_morphism(cone[1], "factor_through sigma2");

  switch (c.kind) {
    case ConstructionKind::Biproduct:
    case ConstructionKind::Pullback: {
      if (!same_algebra(cone[0].source, cone[1].source))
        fail(Err::SourceMismatch, "cone legs have different sources");
      if (!same_algebra(cone[0].target, c.factors[0]) ||
          !same_algebra(cone[1].target, c.factors[1]))
        fail(Err::AlgebraMismatch, "cone legs do not hit the factors");
      if (c.kind == ConstructionKind::Pullback) {
        const Mat lhs = compose(c.inputs[0], cone[0]).matrix;
        const Mat rhs = compose(c.inputs[1], cone[1]).matrix;
        if (!(lhs == rhs)) return std::nullopt;  // cone does not commute
      }
      const Mat stacked = vstack(c.leg("Pr1").matrix, c.leg("Pr2").matrix);
      const Mat rhs = vstack(cone[0].matrix, cone[1].matrix);
      auto sol = solve_matrix(stacked, rhs);
      if (!sol) return std::nullopt;
      if (!sol->unique) fail(Err::NonUniqueFactorization, "mediator not unique");
      AlgMorphism tau{cone[0].source, c.algebra, sol->x};
      require_morphism(tau, "mediating morphism");
      if (!(compose(c.leg("Pr1"), tau).matrix == cone[0].matrix) ||
          !(compose(c.leg("Pr2"), tau).matrix == cone[1].matrix))
        return std::nullopt;
      return tau;
    }
    case ConstructionKind::Pushout: {
      if (!same_algebra(cone[0].target, cone[1].target))
        fail(Err::AlgebraMismatch, "cocone legs have different targets");
      if (!same_algebra(cone[0].source, c.factors[0]) ||
          !same_algebra(cone[1].source, c.factors[1]))
        fail(Err::AlgebraMismatch, "cocone legs do not start at the factors");
      const Mat lhs = compose(cone[0], c.inputs[0]).matrix;
      const Mat rhs = compose(cone[1], c.inputs[1]).matrix;
      if (!(lhs == rhs)) return std::nullopt;
      auto sol = solve_left(c.inner->matrix, lhs);
      if (!sol) return std::nullopt;
      if (!sol->unique) fail(Err::NonUniqueFactorization, "mediator not unique");
      AlgMorphism tau{c.algebra, cone[0].target, sol->x};
      require_morphism(tau, "mediating morphism");
      if (!(compose(tau, c.leg("Ep1")).matrix == cone[0].matrix) ||
          !(compose(tau, c.leg("Ep2")).matrix == cone[1].matrix))
        return std::nullopt;
      return tau;
    }
    default:
      fail(Err::UsageError, "factor_through: unsupported construction kind");
  }
}

// ---------------------------------------------------------------------------
// Distributivity of the tensor product over the pullback: the explicit
// isomorphism A (x) (A1 pullback A2)  ->  (A (x) A1) pullback (A (x) A2).

struct DistributivityWitness {
  ConstructionResult lhs;    // pullback of Id_A (x) phi_i
  ConstructionResult rhs;    // A (x) pullback(phi1, phi2)
  ConstructionResult inner;  // pullback(phi1, phi2)
  AlgMorphism iso;           // rhs -> lhs.algebra, verified bijective morphism
};

inline DistributivityWitness distributivity_witness(const AlgebraRef& a,
                                                    const AlgMorphism& phi1,
                                                    const AlgMorphism& phi2) {
  const ConstructionResult p = pullback(phi1, phi2);
  const ConstructionResult t1 = tensor_product(a, phi1.source);
  const ConstructionResult t2 = tensor_product(a, phi2.source);
  const ConstructionResult tb = tensor_product(a, phi1.target);
  const AlgMorphism psi1 = map_pair(ConstructionKind::Tensor, t1, tb, identity_morphism(a), phi1);
  const AlgMorphism psi2 = map_pair(ConstructionKind::Tensor, t2, tb, identity_morphism(a), phi2);
  ConstructionResult lhs = pullback(psi1, psi2);
  const ConstructionResult rhs = tensor_product(a, p.algebra);

  const std::size_t da = a->dim();
  const std::size_t d1 = phi1.source->dim(), d2 = phi2.source->dim();
  const std::size_t dp = p.algebra->dim();
  const std::size_t e1 = t1.algebra->dim(), e2 = t2.algebra->dim();
  const Mat& pinc = p.inner->matrix;  // biproduct(A1,A2) x dp

  Mat m(lhs.algebra->dim(), rhs.algebra->dim());
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t q = 0; q < dp; ++q) {
      const std::size_t col = tensor_index(dp, i, q);
      // The pullback basis vector q as an element pair (x1, x2) of A1 x A2.
      Vec x1(d1), x2(d2);
      x1[0] = pinc.at(0, q);
      x2[0] = pinc.at(0, q);
      for (std::size_t k = 1; k < d1; ++k) x1[k] = pinc.at(k, q);
      for (std::size_t k = 1; k < d2; ++k) x2[k] = pinc.at(d1 - 1 + k, q);
      // e_i (x) (x1, x2) = (e_i (x) x1, e_i (x) x2) in T1 x T2.
      Vec w1(e1), w2(e2);
      for (std::size_t k = 0; k < d1; ++k)
        if (!x1[k].is_zero()) w1[tensor_index(d1, i, k)] = x1[k];
      for (std::size_t k = 0; k < d2; ++k)
        if (!x2[k].is_zero()) w2[tensor_index(d2, i, k)] = x2[k];
      if (!(w1[0] == w2[0]))
        fail(Err::SquareDoesNotCommute, "distributivity: finite parts disagree");
      Vec w((e1 - 1) + (e2 - 1) + 1);
      w[0] = w1[0];
      for (std::size_t k = 1; k < e1; ++k) w[k] = w1[k];
      for (std::size_t k = 1; k < e2; ++k) w[e1 - 1 + k] = w2[k];
      const auto x = solve(lhs.inner->matrix, w);
      if (!x) fail(Err::SquareDoesNotCommute, "distributivity: image misses the pullback");
      for (std::size_t r = 0; r < x->size(); ++r) m.at(r, col) = (*x)[r];
    }

  if (lhs.algebra->dim() != rhs.algebra->dim() || rank(m) != rhs.algebra->dim())
    fail(Err::MorphismInvalid, "distributivity witness is not bijective");
  AlgMorphism iso{rhs.algebra, lhs.algebra, std::move(m)};
  require_morphism(iso, "distributivity witness");
  return {std::move(lhs), rhs, p, std::move(iso)};
}

}  // namespace weil

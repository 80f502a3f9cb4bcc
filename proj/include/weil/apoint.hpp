#pragma once
// The points-proches engine. An A-point on coordinate m-space is a base
// point plus one nilpotent algebra element per coordinate; evaluation of a
// smooth expression through an A-point is performed homomorphically, with
// elementary calls expanded as truncated Taylor series up to the height of
// the algebra. Lifting a smooth map is evaluation of its components.
//
// The scalar is generic: double and Rat give the numeric and exact modes,
// and ElementT<S> itself gives the nested towers used to witness that the
// tensor product of algebras composes the corresponding functors.

#include <map>
#include <vector>

#include "weil/construct.hpp"
#include "weil/expr.hpp"
#include "weil/truncated.hpp"

namespace weil {

template <class S>
struct APointT {
  AlgebraRef algebra;
  std::vector<S> base;
  std::vector<ElementT<S>> nilpotents;  // one per coordinate, finite part 0

  std::size_t arity() const { return base.size(); }
};

using APoint = APointT<double>;
using ExactAPoint = APointT<Rat>;

template <class S>
APointT<S> make_apoint(AlgebraRef algebra, std::vector<S> base,
                       std::vector<ElementT<S>> nilpotents) {
  if (base.size() != nilpotents.size())
    fail(Err::DimensionMismatch, "point needs one nilpotent per coordinate");
  for (auto& n : nilpotents) {
    if (!same_algebra(n.algebra, algebra))
      fail(Err::AlgebraMismatch, "nilpotent over the wrong algebra");
    if (!scalar_is_zero(finite_part(n)))
      fail(Err::NotProper, "nilpotent coordinate value has nonzero finite part");
  }
  return APointT<S>{std::move(algebra), std::move(base), std::move(nilpotents)};
}

/// The target mapping: an A-point over its base point.
template <class S>
const std::vector<S>& target(const APointT<S>& u) {
  return u.base;
}

struct SmoothMap {
  std::size_t arity_in = 0;
  std::size_t arity_out = 0;
  std::vector<Expr> components;
};

inline SmoothMap make_map(std::size_t arity_in, std::vector<Expr> components) {
  SmoothMap m{arity_in, components.size(), std::move(components)};
  for (const Expr& c : m.components)
    if (max_var_index(c) >= arity_in && arity_in > 0)
      fail(Err::UsageError, "map component uses a variable beyond its arity");
  return m;
}

/// psi o phi by substitution of components.
inline SmoothMap compose_maps(const SmoothMap& psi, const SmoothMap& phi) {
  if (psi.arity_in != phi.arity_out)
    fail(Err::DimensionMismatch, "compose_maps: arities do not match");
  std::vector<Expr> comps;
  comps.reserve(psi.components.size());
  for (const Expr& c : psi.components) comps.push_back(substitute(c, phi.components));
  return SmoothMap{phi.arity_in, psi.arity_out, std::move(comps)};
}

// ---------------------------------------------------------------------------
// Elementary calls: k-th derivatives in closed form, generically over the
// scalar. For an element argument the derivative value is itself a truncated
// Taylor expansion over the finite part, which recurses down the tower.

inline double eval_fn_derivative(Fn f, unsigned order, double x) {
  switch (f) {
    case Fn::Exp: return std::exp(x);
    case Fn::Log: {
      if (x <= 0.0) fail(Err::DomainError, "log of non-positive finite part");
      if (order == 0) return std::log(x);
      double c = 1.0;  // (order-1)! * (-1)^(order-1)
      for (unsigned k = 2; k < order; ++k) c *= static_cast<double>(k);
      if (order % 2 == 0) c = -c;
      return c / std::pow(x, static_cast<double>(order));
    }
    case Fn::Sin: {
      switch (order % 4) {
        case 0: return std::sin(x);
        case 1: return std::cos(x);
        case 2: return -std::sin(x);
        default: return -std::cos(x);
      }
    }
    case Fn::Cos: {
      switch (order % 4) {
        case 0: return std::cos(x);
        case 1: return -std::sin(x);
        case 2: return -std::cos(x);
        default: return std::sin(x);
      }
    }
    case Fn::Sqrt: {
      if (x <= 0.0) fail(Err::DomainError, "sqrt of non-positive finite part");
      double c = 1.0;  // (1/2)(1/2 - 1)...(1/2 - order + 1)
      for (unsigned k = 0; k < order; ++k) c *= 0.5 - static_cast<double>(k);
      return c * std::pow(x, 0.5 - static_cast<double>(order));
    }
  }
  fail(Err::UsageError, "bad function");
}

inline double eval_fn(Fn f, unsigned order, double x) { return eval_fn_derivative(f, order, x); }

inline Rat eval_fn(Fn, unsigned, const Rat&) {
  fail(Err::ExactModeUnsupported, "elementary call in exact mode");
}

/// g^(order) evaluated at an algebra element a = alpha + n:
/// sum_{k<=height} g^(order+k)(alpha) n^k / k!.
template <class S>
ElementT<S> eval_fn(Fn f, unsigned order, const ElementT<S>& a) {
  const auto [alpha, n] = decompose(a);
  const std::size_t ell = a.algebra->height();
  ElementT<S> acc = scalar_zero_like(a);
  ElementT<S> pw = scalar_from_rat(a, Rat(1));  // n^k
  Rat kfact(1);
  for (unsigned k = 0; k <= ell; ++k) {
    if (k > 0) {
      pw = mul(pw, n);
      kfact *= Rat(static_cast<long>(k));
    }
    const S coeff = eval_fn(f, order + k, alpha);
    acc = add(acc, scale_by_rat(scale(pw, coeff), kfact.inverse()));
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Homomorphic evaluation of an expression through an A-point (Taylor-mode
// evaluation truncated at the height of the algebra).

template <class S>
struct EvalContext {
  AlgebraRef algebra;
  std::vector<ElementT<S>> vars;  // base*1 + nilpotent, per coordinate
};

template <class S>
EvalContext<S> eval_context(const APointT<S>& u) {
  EvalContext<S> ctx;
  ctx.algebra = u.algebra;
  for (std::size_t i = 0; i < u.arity(); ++i) {
    ElementT<S> v = u.nilpotents[i];
    v.coeffs[0] = u.base[i];
    ctx.vars.push_back(std::move(v));
  }
  return ctx;
}

template <class S>
ElementT<S> eval_element(const Expr& e, const EvalContext<S>& ctx) {
  switch (e.kind()) {
    case Expr::Kind::Const: {
      if (ctx.vars.empty()) {
        ElementT<S> c;
        c.algebra = ctx.algebra;
        if constexpr (std::is_same_v<S, Rat> || std::is_same_v<S, double>) {
          c.coeffs.assign(ctx.algebra->dim(), S{});
          c.coeffs[0] = scalar_from_rat(S{}, e.value());
          return c;
        } else {
          fail(Err::UsageError, "nested evaluation needs at least one variable");
        }
      }
      return scalar_from_rat(ctx.vars[0], e.value());
    }
    case Expr::Kind::Var:
      if (e.var() >= ctx.vars.size())
        fail(Err::UsageError, "variable index beyond point arity");
      return ctx.vars[e.var()];
    case Expr::Kind::Add:
      return add(eval_element(e.child(0), ctx), eval_element(e.child(1), ctx));
    case Expr::Kind::Sub:
      return sub(eval_element(e.child(0), ctx), eval_element(e.child(1), ctx));
    case Expr::Kind::Mul:
      return mul(eval_element(e.child(0), ctx), eval_element(e.child(1), ctx));
    case Expr::Kind::Div: {
      if constexpr (std::is_same_v<S, Rat>)
        fail(Err::ExactModeUnsupported, "division in exact mode");
      const ElementT<S> den = eval_element(e.child(1), ctx);
      if (scalar_is_zero(finite_part(den)))
        fail(Err::PoleAtPoint, "denominator vanishes at the base point");
      return mul(eval_element(e.child(0), ctx), invert(den));
    }
    case Expr::Kind::Neg: return neg(eval_element(e.child(0), ctx));
    case Expr::Kind::Pow: return el_pow(eval_element(e.child(0), ctx), e.exponent());
    case Expr::Kind::Call: {
      if constexpr (std::is_same_v<S, Rat>)
        fail(Err::ExactModeUnsupported, "elementary call in exact mode");
      return eval_fn(e.fn(), 0, eval_element(e.child(0), ctx));
    }
  }
  fail(Err::UsageError, "eval_element: bad node");
}

/// u(f) per the Taylor-polynomial evaluation rule; the finite part of the
/// result is always f at the base point.
template <class S>
ElementT<S> eval_apoint(const APointT<S>& u, const Expr& f) {
  return eval_element(f, eval_context(u));
}

/// The lifted map on A-points: base moves by the map, nilpotents are the
/// nilpotent parts of the evaluated components.
template <class S>
APointT<S> lift_map(const SmoothMap& phi, const APointT<S>& u) {
  if (phi.arity_in != u.arity())
    fail(Err::DimensionMismatch, "lift_map: arity mismatch");
  APointT<S> out;
  out.algebra = u.algebra;
  const EvalContext<S> ctx = eval_context(u);
  for (const Expr& comp : phi.components) {
    ElementT<S> v = eval_element(comp, ctx);
    out.base.push_back(finite_part(v));
    v.coeffs[0] = scalar_zero_like(v.coeffs[0]);
    out.nilpotents.push_back(std::move(v));
  }
  return out;
}

/// Push an A-point through an algebra morphism: same base, nilpotents
/// mapped by the matrix (the natural action of morphisms on points).
template <class S>
APointT<S> kappa_action(const AlgMorphism& kappa, const APointT<S>& u) {
  require_morphism(kappa, "kappa_action");
  if (!same_algebra(u.algebra, kappa.source))
    fail(Err::AlgebraMismatch, "kappa_action: point is not over the source");
  APointT<S> out;
  out.algebra = kappa.target;
  out.base = u.base;
  for (const auto& n : u.nilpotents) out.nilpotents.push_back(kappa.apply(n));
  return out;
}

// ---------------------------------------------------------------------------
// Jets: reading Taylor coefficients off an element of a truncated polynomial
// algebra over R.

template <class S>
std::map<Expo, S> jet_extract(const ElementT<S>& result, const TruncSpec& spec) {
  if (spec.base->dim() != 1)
    fail(Err::WrongAlgebraKind, "jet extraction needs a truncated algebra over R");
  const AlgebraRef jet_alg = build_truncated(spec);
  if (!same_algebra(result.algebra, jet_alg))
    fail(Err::WrongAlgebraKind, "element does not live in the requested jet algebra");
  const std::vector<Expo> monos = spec.monomials();
  std::map<Expo, S> out;
  for (std::size_t m = 0; m < monos.size(); ++m) out[monos[m]] = result.coeffs[m];
  return out;
}

/// The canonical jet point over P_k R [t_1..t_m] at x0: u(x_i) = t_i.
inline APoint jet_point(const TruncSpec& spec, const std::vector<double>& x0) {
  if (spec.base->dim() != 1) fail(Err::WrongAlgebraKind, "jet point needs base R");
  if (x0.size() != spec.n_vars) fail(Err::DimensionMismatch, "jet point arity");
  const AlgebraRef a = build_truncated(spec);
  const std::vector<Expo> monos = spec.monomials();
  std::vector<NumElement> nil;
  for (std::size_t v = 0; v < spec.n_vars; ++v) {
    NumElement n = el_zero_num(a);
    Expo e(spec.n_vars, 0);
    e[v] = 1;
    for (std::size_t m = 0; m < monos.size(); ++m)
      if (monos[m] == e) n.coeffs[m] = 1.0;
    nil.push_back(std::move(n));
  }
  return make_apoint(a, x0, std::move(nil));
}

// ---------------------------------------------------------------------------
// Functor-level witnesses.

struct WitnessReport {
  double max_discrepancy = 0.0;
  bool exact = false;  // true when computed in exact arithmetic and zero
};

namespace detail {
inline double disc(const Rat& a, const Rat& b) { return (a - b).is_zero() ? 0.0 : 1.0; }
inline double disc(double a, double b) { return std::abs(a - b); }
}  // namespace detail

/// Compares direct evaluation over A1 (x) A2 with the nested evaluation
/// (over A2 with coefficients that are A1-elements) under the canonical
/// coordinate identification e_i (x) f_j <-> (inner i, outer j).
template <class S>
WitnessReport tensor_compose_witness(const Expr& f, const AlgebraRef& a1,
                                     const AlgebraRef& a2, const APointT<S>& u) {
  const ConstructionResult t = tensor_product(a1, a2);
  if (!same_algebra(u.algebra, t.algebra))
    fail(Err::WrongAlgebraKind, "point is not over the tensor algebra");
  const std::size_t d1 = a1->dim(), d2 = a2->dim();

  const ElementT<S> direct = eval_apoint(u, f);

  using Inner = ElementT<S>;
  ElementT<S> inner_proto;
  inner_proto.algebra = a1;
  inner_proto.coeffs.assign(d1, S{});

  EvalContext<Inner> ctx;
  ctx.algebra = a2;
  for (std::size_t v = 0; v < u.arity(); ++v) {
    ElementT<Inner> var;
    var.algebra = a2;
    var.coeffs.assign(d2, inner_proto);
    for (std::size_t i = 0; i < d1; ++i)
      for (std::size_t j = 0; j < d2; ++j)
        var.coeffs[j].coeffs[i] = u.nilpotents[v].coeffs[tensor_index(d2, i, j)];
    var.coeffs[0].coeffs[0] = var.coeffs[0].coeffs[0] + u.base[v];
    ctx.vars.push_back(std::move(var));
  }
  const ElementT<Inner> nested = eval_element(f, ctx);

  WitnessReport rep;
  double m = 0.0;
  for (std::size_t i = 0; i < d1; ++i)
    for (std::size_t j = 0; j < d2; ++j) {
      const double d = detail::disc(direct.coeffs[tensor_index(d2, i, j)],
                                    nested.coeffs[j].coeffs[i]);
      if (d > m) m = d;
    }
  rep.max_discrepancy = m;
  rep.exact = std::is_same_v<S, Rat> && m == 0.0;
  return rep;
}

/// Checks concretely that the pullback commutes with taking points: the two
/// projected points have matching images under phi_1, phi_2, and evaluation
/// commutes with both projections.
template <class S>
WitnessReport pullback_points_witness(const ConstructionResult& pb, const Expr& f,
                                      const APointT<S>& u) {
  if (pb.kind != ConstructionKind::Pullback)
    fail(Err::UsageError, "witness needs a pullback construction");
  const APointT<S> u1 = kappa_action(pb.leg("Pr1"), u);
  const APointT<S> u2 = kappa_action(pb.leg("Pr2"), u);
  const APointT<S> w1 = kappa_action(pb.inputs[0], u1);
  const APointT<S> w2 = kappa_action(pb.inputs[1], u2);

  double m = 0.0;
  for (std::size_t v = 0; v < u.arity(); ++v) {
    m = std::max(m, detail::disc(w1.base[v], w2.base[v]));
    for (std::size_t k = 0; k < w1.nilpotents[v].coeffs.size(); ++k)
      m = std::max(m, detail::disc(w1.nilpotents[v].coeffs[k], w2.nilpotents[v].coeffs[k]));
  }

  const ElementT<S> e = eval_apoint(u, f);
  const ElementT<S> e1 = eval_apoint(u1, f);
  const ElementT<S> e2 = eval_apoint(u2, f);
  const ElementT<S> p1 = pb.leg("Pr1").apply(e);
  const ElementT<S> p2 = pb.leg("Pr2").apply(e);
  for (std::size_t k = 0; k < e1.coeffs.size(); ++k)
    m = std::max(m, detail::disc(p1.coeffs[k], e1.coeffs[k]));
  for (std::size_t k = 0; k < e2.coeffs.size(); ++k)
    m = std::max(m, detail::disc(p2.coeffs[k], e2.coeffs[k]));

  WitnessReport rep;
  rep.max_discrepancy = m;
  rep.exact = std::is_same_v<S, Rat> && m == 0.0;
  return rep;
}

}  // namespace weil

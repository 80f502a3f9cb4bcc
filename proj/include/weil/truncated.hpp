#pragma once
// Algebras of generalized truncated polynomials over a local base algebra:
// total-degree and per-variable truncations, the coefficient-forgetting
// morphisms of the inclusion lattice, the tensor factorization isomorphism,
// and the B/C families carrying different algebra structures on the same
// free module.

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "weil/construct.hpp"

namespace weil {

using Expo = std::vector<unsigned>;

namespace detail {

inline unsigned expo_total(const Expo& e) {
  unsigned t = 0;
  for (unsigned x : e) t += x;
  return t;
}

inline void gen_degree(std::size_t nvars, unsigned deg, Expo& cur,
                       std::vector<Expo>& out) {
  if (cur.size() + 1 == nvars) {
    cur.push_back(deg);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (unsigned a = deg + 1; a-- > 0;) {
    cur.push_back(a);
    gen_degree(nvars, deg - a, cur, out);
    cur.pop_back();
  }
}

}  // namespace detail

/// Monomial exponent vectors of total degree <= k, graded (degree-major)
/// with descending-lex order inside each degree: 1, x, y, x^2, xy, y^2, ...
inline std::vector<Expo> monomials_total(std::size_t nvars, unsigned k) {
  std::vector<Expo> out;
  for (unsigned deg = 0; deg <= k; ++deg) {
    Expo cur;
    detail::gen_degree(nvars, deg, cur, out);
  }
  return out;
}

/// Monomials with per-variable exponent bounds, same graded order.
inline std::vector<Expo> monomials_multi(const std::vector<unsigned>& ks) {
  const unsigned total = std::accumulate(ks.begin(), ks.end(), 0u);
  std::vector<Expo> all = monomials_total(ks.size(), total);
  std::vector<Expo> out;
  for (Expo& e : all) {
    bool ok = true;
    for (std::size_t i = 0; i < ks.size(); ++i)
      if (e[i] > ks[i]) ok = false;
    if (ok) out.push_back(std::move(e));
  }
  return out;
}

inline std::string variable_name(std::size_t nvars, std::size_t i) {
  static const char* xyz[] = {"x", "y", "z"};
  if (nvars <= 3) return xyz[i];
  return "x" + std::to_string(i + 1);
}

inline std::string monomial_label(const Expo& e, std::size_t nvars) {
  std::string s;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    if (!s.empty()) s += "*";
    s += variable_name(nvars, i);
    if (e[i] > 1) s += "^" + std::to_string(e[i]);
  }
  return s;
}

/// A request for a truncated polynomial algebra over a base local algebra:
/// either a total degree bound or per-variable bounds.
struct TruncSpec {
  AlgebraRef base;
  std::size_t n_vars = 1;
  std::optional<unsigned> total;
  std::vector<unsigned> degrees;

  static TruncSpec total_degree(AlgebraRef a, std::size_t n, unsigned k) {
    if (n == 0) fail(Err::ParameterOutOfRange, "need at least one variable");
    TruncSpec s;
    s.base = std::move(a);
    s.n_vars = n;
    s.total = k;
    return s;
  }

  static TruncSpec per_variable(AlgebraRef a, std::vector<unsigned> ks) {
    if (ks.empty()) fail(Err::ParameterOutOfRange, "need at least one variable");
    TruncSpec s;
    s.base = std::move(a);
    s.n_vars = ks.size();
    s.degrees = std::move(ks);
    return s;
  }

  std::vector<Expo> monomials() const {
    return total ? monomials_total(n_vars, *total) : monomials_multi(degrees);
  }

  bool contains(const Expo& e) const {
    if (total) return detail::expo_total(e) <= *total;
    for (std::size_t i = 0; i < degrees.size(); ++i)
      if (e[i] > degrees[i]) return false;
    return true;
  }
};

/// Basis order is monomial-major (graded), base-algebra index minor, so the
/// unit comes first and everything else spans the maximal ideal.
inline AlgebraRef build_truncated(const TruncSpec& spec) {
  const AlgebraRef& a = spec.base;
  const std::size_t da = a->dim();
  const std::vector<Expo> monos = spec.monomials();
  const std::size_t nm = monos.size();
  const std::size_t d = da * nm;

  std::map<Expo, std::size_t> mono_index;
  for (std::size_t m = 0; m < nm; ++m) mono_index.emplace(monos[m], m);

  auto idx = [&](std::size_t ai, std::size_t mi) { return mi * da + ai; };

  std::vector<std::string> labels(d);
  for (std::size_t m = 0; m < nm; ++m) {
    const std::string ml = monomial_label(monos[m], spec.n_vars);
    for (std::size_t ai = 0; ai < da; ++ai) {
      std::string lab;
      if (ml.empty()) lab = a->label(ai);
      else if (ai == 0) lab = ml;
      else lab = a->label(ai) + "*" + ml;
      labels[idx(ai, m)] = std::move(lab);
    }
  }

  MulTable table(d * d, Vec(d));
  for (std::size_t m1 = 0; m1 < nm; ++m1)
    for (std::size_t m2 = 0; m2 <= m1; ++m2) {
      Expo sum(monos[m1]);
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += monos[m2][i];
      const bool keep = spec.contains(sum);
      std::size_t ms = 0;
      if (keep) ms = mono_index.at(sum);
      for (std::size_t ai = 0; ai < da; ++ai)
        for (std::size_t bi = 0; bi < da; ++bi) {
          Vec v(d);
          if (keep) {
            const Vec& p = a->product(ai, bi);
            for (std::size_t c = 0; c < da; ++c)
              if (!p[c].is_zero()) v[idx(c, ms)] = p[c];
          }
          table[idx(ai, m1) * d + idx(bi, m2)] = v;
          table[idx(bi, m2) * d + idx(ai, m1)] = std::move(v);
        }
    }
  return LocalAlgebra::make(std::move(labels), std::move(table));
}

inline AlgebraRef build_truncated_total(const AlgebraRef& a, std::size_t n, unsigned k) {
  return build_truncated(TruncSpec::total_degree(a, n, k));
}

inline AlgebraRef build_truncated_multi(const AlgebraRef& a,
                                        const std::vector<unsigned>& ks) {
  return build_truncated(TruncSpec::per_variable(a, ks));
}

/// The coefficient-forgetting epimorphism between two truncations of the
/// same polynomial algebra, when the bounds nest. In degree-bound terms the
/// admissible cases are: total k -> total k'  iff  k >= k'; per-variable ->
/// per-variable iff componentwise >=; total k -> per-variable (k_1..k_n) iff
/// k >= k_1+...+k_n; per-variable -> total k' iff every k_i >= k'.
inline AlgMorphism truncation_morphism(const TruncSpec& src, const TruncSpec& dst) {
  if (!same_algebra(src.base, dst.base))
    fail(Err::SourceMismatch, "truncation_morphism: different base algebras");
  if (src.n_vars != dst.n_vars)
    fail(Err::SourceMismatch, "truncation_morphism: different variable counts");

  auto bad = [&](const std::string& why) {
    fail(Err::InclusionFails, why);
  };
  if (src.total && dst.total) {
    if (*src.total < *dst.total)
      bad("need k >= k' (" + std::to_string(*src.total) + " < " +
          std::to_string(*dst.total) + ")");
  } else if (!src.total && !dst.total) {
    for (std::size_t i = 0; i < src.degrees.size(); ++i)
      if (src.degrees[i] < dst.degrees[i])
        bad("need k_i >= k'_i at variable " + variable_name(src.n_vars, i));
  } else if (src.total && !dst.total) {
    const unsigned need =
        std::accumulate(dst.degrees.begin(), dst.degrees.end(), 0u);
    if (*src.total < need)
      bad("need k >= sum(k_i) (" + std::to_string(*src.total) + " < " +
          std::to_string(need) + ")");
  } else {
    for (std::size_t i = 0; i < src.degrees.size(); ++i)
      if (src.degrees[i] < *dst.total)
        bad("need k_i >= k at variable " + variable_name(src.n_vars, i));
  }

  const AlgebraRef s = build_truncated(src);
  const AlgebraRef t = build_truncated(dst);
  const std::size_t da = src.base->dim();
  const std::vector<Expo> sm = src.monomials();
  const std::vector<Expo> tm = dst.monomials();
  std::map<Expo, std::size_t> tindex;
  for (std::size_t m = 0; m < tm.size(); ++m) tindex.emplace(tm[m], m);

  Mat m(t->dim(), s->dim());
  for (std::size_t mi = 0; mi < sm.size(); ++mi) {
    const auto it = tindex.find(sm[mi]);
    if (it == tindex.end()) continue;
    for (std::size_t ai = 0; ai < da; ++ai)
      m.at(it->second * da + ai, mi * da + ai) = Rat(1);
  }
  AlgMorphism tau{s, t, std::move(m)};
  require_morphism(tau, "truncation morphism");
  return tau;
}

/// Explicit isomorphism P_{k1,...,kn} A -> P_{k1} A [x1] (x) P_{k2} R [x2]
/// (x) ... built from monomial factorization; a pure basis permutation.
inline AlgMorphism tensor_split_iso(const AlgebraRef& a, const std::vector<unsigned>& ks) {
  if (ks.empty()) fail(Err::ParameterOutOfRange, "tensor_split_iso: no variables");
  const AlgebraRef multi = build_truncated_multi(a, ks);
  AlgebraRef chain = build_truncated_multi(a, {ks[0]});
  std::vector<std::size_t> factor_dims{chain->dim()};
  for (std::size_t i = 1; i < ks.size(); ++i) {
    const AlgebraRef fac = build_truncated_multi(reals(), {ks[i]});
    factor_dims.push_back(fac->dim());
    chain = tensor_product(chain, fac).algebra;
  }

  const std::size_t da = a->dim();
  const std::vector<Expo> monos = monomials_multi(ks);
  Mat m(chain->dim(), multi->dim());
  for (std::size_t mi = 0; mi < monos.size(); ++mi)
    for (std::size_t ai = 0; ai < da; ++ai) {
      // chain coordinate of e_ai * x^e: fold the per-variable indices.
      std::size_t c = monos[mi][0] * da + ai;
      for (std::size_t v = 1; v < ks.size(); ++v)
        c = c * factor_dims[v] + monos[mi][v];
      m.at(c, mi * da + ai) = Rat(1);
    }
  AlgMorphism iso{multi, chain, std::move(m)};
  if (rank(iso.matrix) != multi->dim())
    fail(Err::MorphismInvalid, "tensor_split_iso is not bijective");
  require_morphism(iso, "tensor_split_iso");
  return iso;
}

// ---------------------------------------------------------------------------
// The B/C families: two local algebra structures on the free A-module of
// rank m = r + t - s + 1.

inline void check_family_params(unsigned r, unsigned t, unsigned s) {
  if (r < 1 || t < 1 || s < 1 || s > std::min(r, t))
    fail(Err::ParameterOutOfRange, "family parameters need 1 <= s <= min(r, t)");
}

/// Monomial model of C^s_{r,t}: span of A, z..z^s, x^{s+1}..x^r, y^{s+1}..y^t
/// inside P_{r,t,s} A [x,y,z] / <xy, xz, yz>.
inline AlgebraRef build_C_model(unsigned r, unsigned t, unsigned s, const AlgebraRef& a) {
  check_family_params(r, t, s);
  const AlgebraRef p = build_truncated_multi(a, {r, t, s});
  const std::size_t da = a->dim();
  const std::vector<Expo> monos = monomials_multi({r, t, s});
  std::map<Expo, std::size_t> mono_index;
  for (std::size_t m = 0; m < monos.size(); ++m) mono_index.emplace(monos[m], m);

  auto mixed = [](const Expo& e) {
    int letters = 0;
    for (unsigned v : e)
      if (v > 0) ++letters;
    return letters > 1;
  };
  std::vector<Element> gens;
  for (std::size_t m = 0; m < monos.size(); ++m)
    if (mixed(monos[m])) gens.push_back(el_basis(p, m * da));
  const Ideal j = ideal_generate(p, gens);
  auto [q, piq] = quotient_algebra(p, j);

  auto class_vec = [&, q = q, piq = piq](const Expo& e, std::size_t ai) {
    return piq.matrix.column(mono_index.at(e) * da + ai);
  };
  std::vector<Vec> basis;
  std::vector<std::string> labels{"1"};
  for (std::size_t ai = 1; ai < da; ++ai) {
    basis.push_back(class_vec({0, 0, 0}, ai));
    labels.push_back(a->label(ai));
  }
  auto push_powers = [&](std::size_t var, unsigned lo, unsigned hi) {
    for (unsigned i = lo; i <= hi; ++i) {
      Expo e(3, 0);
      e[var] = i;
      for (std::size_t ai = 0; ai < da; ++ai) {
        basis.push_back(class_vec(e, ai));
        const std::string ml = monomial_label(e, 3);
        labels.push_back(ai == 0 ? ml : a->label(ai) + "*" + ml);
      }
    }
  };
  push_powers(2, 1, s);      // z, .., z^s
  push_powers(0, s + 1, r);  // x^{s+1}, .., x^r
  push_powers(1, s + 1, t);  // y^{s+1}, .., y^t
  return algebra_on_basis(q, basis, std::move(labels)).first;
}

/// Monomial model of B^s_{r,t}: span of A, (x^i + y^i) for i <= s, and the
/// pure powers x^{s+1}..x^r, y^{s+1}..y^t inside P_{r,t} A [x,y] / <xy>.
inline AlgebraRef build_B_model(unsigned r, unsigned t, unsigned s, const AlgebraRef& a) {
  check_family_params(r, t, s);
  const AlgebraRef p = build_truncated_multi(a, {r, t});
  const std::size_t da = a->dim();
  const std::vector<Expo> monos = monomials_multi({r, t});
  std::map<Expo, std::size_t> mono_index;
  for (std::size_t m = 0; m < monos.size(); ++m) mono_index.emplace(monos[m], m);

  std::vector<Element> gens;
  for (std::size_t m = 0; m < monos.size(); ++m)
    if (monos[m][0] > 0 && monos[m][1] > 0) gens.push_back(el_basis(p, m * da));
  const Ideal j = ideal_generate(p, gens);
  auto [q, piq] = quotient_algebra(p, j);

  auto class_vec = [&, q = q, piq = piq](unsigned ex, unsigned ey, std::size_t ai) {
    return piq.matrix.column(mono_index.at(Expo{ex, ey}) * da + ai);
  };
  std::vector<Vec> basis;
  std::vector<std::string> labels{"1"};
  for (std::size_t ai = 1; ai < da; ++ai) {
    basis.push_back(class_vec(0, 0, ai));
    labels.push_back(a->label(ai));
  }
  for (unsigned i = 1; i <= s; ++i)
    for (std::size_t ai = 0; ai < da; ++ai) {
      basis.push_back(add_vec(class_vec(i, 0, ai), class_vec(0, i, ai)));
      const std::string ml = "(" + monomial_label(Expo{i, 0}, 2) + "+" +
                             monomial_label(Expo{0, i}, 2) + ")";
      labels.push_back(ai == 0 ? ml : a->label(ai) + "*" + ml);
    }
  for (unsigned i = s + 1; i <= r; ++i)
    for (std::size_t ai = 0; ai < da; ++ai) {
      basis.push_back(class_vec(i, 0, ai));
      const std::string ml = monomial_label(Expo{i, 0}, 2);
      labels.push_back(ai == 0 ? ml : a->label(ai) + "*" + ml);
    }
  for (unsigned i = s + 1; i <= t; ++i)
    for (std::size_t ai = 0; ai < da; ++ai) {
      basis.push_back(class_vec(0, i, ai));
      const std::string ml = monomial_label(Expo{0, i}, 2);
      labels.push_back(ai == 0 ? ml : a->label(ai) + "*" + ml);
    }
  return algebra_on_basis(q, basis, std::move(labels)).first;
}

/// The truncation pair tau^s_r : P_r A [x] -> P_s A [z], tau^s_t likewise,
/// sharing one target object.
inline std::pair<AlgMorphism, AlgMorphism> family_truncations(unsigned r, unsigned t,
                                                              unsigned s,
                                                              const AlgebraRef& a) {
  AlgMorphism tau_r = truncation_morphism(TruncSpec::total_degree(a, 1, r),
                                          TruncSpec::total_degree(a, 1, s));
  AlgMorphism tau_t = truncation_morphism(TruncSpec::total_degree(a, 1, t),
                                          TruncSpec::total_degree(a, 1, s));
  tau_t.target = tau_r.target;  // same table; share the object
  return {std::move(tau_r), std::move(tau_t)};
}

/// C^s_{r,t} as the relative product of the two truncations. Over base R
/// (and in the degenerate case of empty kernels) the result is cross-checked
/// against the monomial model and returned with the model's labels. Over a
/// base with nontrivial ideal the quotient-induced model structure genuinely
/// differs from the relative product (I_A times a kernel generator survives
/// in the quotient but dies across biproduct slots), so only the categorical
/// construction is returned there.
inline ConstructionResult build_C(unsigned r, unsigned t, unsigned s, const AlgebraRef& a) {
  check_family_params(r, t, s);
  auto [tau_r, tau_t] = family_truncations(r, t, s, a);
  ConstructionResult c = relative_product(tau_r, tau_t);
  if (a->dim() > 1 && !(s == r && s == t)) return c;
  const AlgebraRef model = build_C_model(r, t, s, a);
  if (!c.algebra->same_table(*model))
    fail(Err::InvalidTable, "C family: categorical table disagrees with monomial model");
  // Keep the monomial labels; retarget the legs onto the relabeled object.
  ConstructionResult out;
  out.kind = c.kind;
  out.factors = c.factors;
  out.inputs = c.inputs;
  out.algebra = model;
  for (auto& [name, leg] : c.legs)
    out.legs.emplace(name, AlgMorphism{model, leg.target, leg.matrix});
  return out;
}

/// B^s_{r,t} as the pullback of the two truncations, cross-checked against
/// the monomial model table.
inline ConstructionResult build_B(unsigned r, unsigned t, unsigned s, const AlgebraRef& a) {
  check_family_params(r, t, s);
  auto [tau_r, tau_t] = family_truncations(r, t, s, a);
  ConstructionResult b = pullback(tau_r, tau_t);
  const AlgebraRef model = build_B_model(r, t, s, a);
  if (!b.algebra->same_table(*model))
    fail(Err::InvalidTable, "B family: categorical table disagrees with monomial model");
  ConstructionResult out;
  out.kind = b.kind;
  out.factors = b.factors;
  out.inputs = b.inputs;
  out.algebra = model;
  for (auto& [name, leg] : b.legs)
    out.legs.emplace(name, AlgMorphism{model, leg.target, leg.matrix});
  if (b.inner)
    out.inner = AlgMorphism{model, b.inner->target, b.inner->matrix};
  return out;
}

}  // namespace weil

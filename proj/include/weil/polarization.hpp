#pragma once
// The polarization calculus: inclusion-exclusion finite differences
// recovering multilinear derivative data, finite-difference multidirectional
// derivatives with Richardson extrapolation, a modified-Taylor remainder
// check, and a decision procedure for homogeneity of polynomials. This
// module is an oracle for the evaluation engine and deliberately shares no
// code path with it.

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "weil/expr.hpp"

namespace weil {

inline constexpr unsigned kMaxPolarizationOrder = 16;

namespace detail {

template <class T, class F>
T polarize_with(F&& f, unsigned n, const std::vector<T>& q,
                const std::vector<std::vector<T>>& dirs) {
  if (n > kMaxPolarizationOrder)
    fail(Err::OrderTooLarge, "polarization order capped at 16 (2^n evaluations)");
  if (dirs.size() != n) fail(Err::DimensionMismatch, "need n directions");
  for (const auto& v : dirs)
    if (v.size() != q.size()) fail(Err::DimensionMismatch, "direction dimension");
  T total{};
  const std::size_t subsets = std::size_t{1} << n;
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    std::vector<T> p = q;
    unsigned bits = 0;
    for (unsigned i = 0; i < n; ++i)
      if (mask & (std::size_t{1} << i)) {
        ++bits;
        for (std::size_t c = 0; c < p.size(); ++c) p[c] = p[c] + dirs[i][c];
      }
    const T val = f(p);
    if ((n - bits) % 2 == 0) total = total + val;
    else total = total - val;
  }
  return total;
}

}  // namespace detail

/// delta^n f (q; v_1..v_n): exact for polynomial expressions at rational
/// inputs. n = 0 returns f(q).
inline Rat polarize_exact(const Expr& f, unsigned n, const std::vector<Rat>& q,
                          const std::vector<std::vector<Rat>>& dirs) {
  return detail::polarize_with<Rat>([&](const std::vector<Rat>& p) { return eval_exact(f, p); },
                                    n, q, dirs);
}

inline double polarize_num(const Expr& f, unsigned n, const std::vector<double>& q,
                           const std::vector<std::vector<double>>& dirs) {
  return detail::polarize_with<double>(
      [&](const std::vector<double>& p) { return eval_double(f, p); }, n, q, dirs);
}

/// Delta^n f (q; v): the polarization with one repeated direction.
inline Rat unidirectional_exact(const Expr& f, unsigned n, const std::vector<Rat>& q,
                                const std::vector<Rat>& v) {
  return polarize_exact(f, n, q, std::vector<std::vector<Rat>>(n, v));
}

inline double unidirectional_num(const Expr& f, unsigned n, const std::vector<double>& q,
                                 const std::vector<double>& v) {
  return polarize_num(f, n, q, std::vector<std::vector<double>>(n, v));
}

// ---------------------------------------------------------------------------
// Multidirectional derivative d^n f = lim_{s->0} s^-n delta^n f (q; s v).
// The limit is approximated by Richardson extrapolation over s = step/2^j.

struct FdResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = false;
};

inline FdResult multidir_derivative_fd(const Expr& f, unsigned n,
                                       const std::vector<double>& q,
                                       const std::vector<std::vector<double>>& dirs,
                                       double step = 0.5, unsigned levels = 8) {
  if (levels < 2) fail(Err::ParameterOutOfRange, "need at least two levels");
  // The polarization is taken at the symmetric base point q - (s/2) sum(v_i),
  // which mirrors the 2^n evaluation stencil around q. The sequence still
  // converges to the same derivative limit, but the error series is even in s,
  // so the tableau weights are powers of four.
  std::vector<double> est(levels);
  for (unsigned j = 0; j < levels; ++j) {
    const double s = step / static_cast<double>(1u << j);
    std::vector<std::vector<double>> scaled = dirs;
    for (auto& v : scaled)
      for (double& c : v) c *= s;
    std::vector<double> centered = q;
    for (const auto& v : scaled)
      for (std::size_t c = 0; c < centered.size(); ++c) centered[c] -= v[c] / 2.0;
    est[j] = polarize_num(f, n, centered, scaled) / std::pow(s, static_cast<double>(n));
  }
  // Deep tableau entries trade truncation error for rounding noise from the
  // smallest steps; return the entry with the smallest successive difference.
  std::vector<std::vector<double>> t(levels);
  for (unsigned j = 0; j < levels; ++j) t[j] = {est[j]};
  for (unsigned k = 1; k < levels; ++k) {
    const double w = std::pow(4.0, static_cast<double>(k));
    for (unsigned j = 0; j + k < levels; ++j)
      t[j].push_back((w * t[j + 1][k - 1] - t[j][k - 1]) / (w - 1.0));
  }
  FdResult r;
  r.value = t[0][1];
  r.error_estimate = std::abs(t[0][1] - t[0][0]);
  for (unsigned k = 2; k < levels; ++k) {
    const double err = std::abs(t[0][k] - t[0][k - 1]);
    if (err <= r.error_estimate) {
      r.value = t[0][k];
      r.error_estimate = err;
    }
  }
  const double scale = std::max(1.0, std::abs(r.value));
  r.converged = r.error_estimate <= 1e-6 * scale;
  return r;
}

/// Exact multidirectional derivative of a polynomial: E(s) = s^-n delta^n f
/// at scaled directions is a polynomial in s, so Lagrange extrapolation to
/// s = 0 over deg+1 rational nodes recovers the limit exactly.
inline Rat multidir_derivative_exact(const Expr& f, unsigned n, const std::vector<Rat>& q,
                                     const std::vector<std::vector<Rat>>& dirs) {
  if (!is_polynomial(f))
    fail(Err::ExactModeUnsupported, "exact derivative needs a polynomial expression");
  const unsigned deg = degree_bound(f);
  const unsigned nodes = deg >= n ? deg - n + 1 : 1;
  std::vector<Rat> svals, evals;
  for (unsigned j = 0; j < nodes; ++j) {
    const Rat s = Rat(1, static_cast<long>(j + 2));
    std::vector<std::vector<Rat>> scaled = dirs;
    for (auto& v : scaled)
      for (Rat& c : v) c *= s;
    Rat e = polarize_exact(f, n, q, scaled);
    Rat sn(1);
    for (unsigned k = 0; k < n; ++k) sn *= s;
    svals.push_back(s);
    evals.push_back(e / sn);
  }
  // Lagrange interpolation evaluated at s = 0.
  Rat total(0);
  for (unsigned i = 0; i < nodes; ++i) {
    Rat w(1);
    for (unsigned j = 0; j < nodes; ++j) {
      if (i == j) continue;
      w *= (-svals[j]) / (svals[i] - svals[j]);
    }
    total += evals[i] * w;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Modified Taylor remainder check: along a shrinking sequence q_j -> q0 the
// ratio r(q_j, q0) / |q_j - q0|^n must fall toward zero.

struct RemainderReport {
  std::vector<double> ratios;
  bool pass = false;
};

/// D^k f(q0; vhat) estimates for the remainder check. The default is the
/// finite-difference route, keeping this module an oracle independent of the
/// evaluation engine; callers with access to jets may substitute those.
using DerivativeProvider =
    std::function<double(unsigned k, const std::vector<double>& vhat)>;

inline RemainderReport taylor_remainder_check(const Expr& f, unsigned n,
                                              const std::vector<double>& q0,
                                              const std::vector<std::vector<double>>& seq,
                                              const DerivativeProvider& provider = {}) {
  RemainderReport rep;
  const DerivativeProvider estimate =
      provider ? provider : [&](unsigned k, const std::vector<double>& vhat) {
        return multidir_derivative_fd(f, k, q0, std::vector<std::vector<double>>(k, vhat),
                                      0.5, 8)
            .value;
      };
  // Derivative estimates are cached per direction: the sequences used here
  // shrink along one ray, so each D^k is computed once.
  std::vector<std::vector<double>> cached_dir;
  std::vector<double> cached_dk;
  for (const auto& qj : seq) {
    if (qj.size() != q0.size()) fail(Err::DimensionMismatch, "sequence point dimension");
    std::vector<double> v(q0.size());
    double norm2 = 0.0;
    for (std::size_t c = 0; c < q0.size(); ++c) {
      v[c] = qj[c] - q0[c];
      norm2 += v[c] * v[c];
    }
    const double norm = std::sqrt(norm2);
    if (norm == 0.0) fail(Err::ParameterOutOfRange, "sequence point equals q0");
    std::vector<double> vhat(v);
    for (double& c : vhat) c /= norm;

    // Taylor polynomial via directional derivatives along the unit direction;
    // D^k f(q0; v) = |v|^k D^k f(q0; vhat) by homogeneity.
    if (cached_dir.empty() || cached_dir[0] != vhat) {
      cached_dir.assign(1, vhat);
      cached_dk.clear();
      for (unsigned k = 1; k <= n; ++k) cached_dk.push_back(estimate(k, vhat));
    }
    double taylor = eval_double(f, q0);
    double kfact = 1.0;
    double normk = 1.0;
    for (unsigned k = 1; k <= n; ++k) {
      kfact *= static_cast<double>(k);
      normk *= norm;
      taylor += cached_dk[k - 1] * normk / kfact;
    }
    const double r = eval_double(f, qj) - taylor;
    rep.ratios.push_back(std::abs(r) / std::pow(norm, static_cast<double>(n)));
  }
  // Monotone-trend criterion: final ratio under a tenth of the initial one
  // and the last three ratios non-increasing.
  if (rep.ratios.size() >= 3) {
    const double first = rep.ratios.front();
    const double last = rep.ratios.back();
    const std::size_t m = rep.ratios.size();
    const bool tail_mono = rep.ratios[m - 2] >= rep.ratios[m - 1] - 1e-12 &&
                           rep.ratios[m - 3] >= rep.ratios[m - 2] - 1e-12;
    rep.pass = last < 0.1 * first && tail_mono;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Homogeneity decision for polynomials: f is homogeneous of degree n at q
// iff Delta^n f(q; v) = n! f(q+v) identically in v; two polynomials of
// bounded degree agree iff they agree on a large enough grid.

inline bool homogeneity_check(const Expr& f, unsigned n, const std::vector<Rat>& q) {
  if (!is_polynomial(f)) fail(Err::ExactModeUnsupported, "homogeneity needs a polynomial");
  const std::size_t m = q.size();
  const unsigned deg = std::max(degree_bound(f), n);
  Rat nfact(1);
  for (unsigned k = 2; k <= n; ++k) nfact *= Rat(static_cast<long>(k));

  std::vector<unsigned> idx(m, 0);
  const unsigned points = deg + 2;
  for (;;) {
    std::vector<Rat> v(m);
    for (std::size_t c = 0; c < m; ++c) v[c] = Rat(static_cast<long>(idx[c]));
    std::vector<Rat> qv(q);
    for (std::size_t c = 0; c < m; ++c) qv[c] += v[c];
    const Rat lhs = unidirectional_exact(f, n, q, v);
    const Rat rhs = nfact * eval_exact(f, qv);
    if (!(lhs == rhs)) return false;
    // advance the grid counter
    std::size_t c = 0;
    while (c < m && ++idx[c] == points) {
      idx[c] = 0;
      ++c;
    }
    if (c == m) break;
  }
  return true;
}

/// Multilinearity spot check of delta^n at q: additivity in one slot.
inline bool polarization_multilinear_at(const Expr& f, unsigned n, const std::vector<Rat>& q,
                                        const std::vector<std::vector<Rat>>& dirs,
                                        const std::vector<Rat>& extra, std::size_t slot) {
  std::vector<std::vector<Rat>> a = dirs, b = dirs, c = dirs;
  b[slot] = extra;
  for (std::size_t i = 0; i < extra.size(); ++i) c[slot][i] = dirs[slot][i] + extra[i];
  const Rat lhs = polarize_exact(f, n, q, c);
  const Rat rhs = polarize_exact(f, n, q, a) + polarize_exact(f, n, q, b);
  return lhs == rhs;
}

}  // namespace weil

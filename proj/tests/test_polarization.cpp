#include <catch2/catch_amalgamated.hpp>

#include "generators.hpp"
#include "weil/apoint.hpp"
#include "weil/polarization.hpp"

using namespace weil;
using namespace weil::testgen;

namespace {
const std::vector<std::string> vx{"x"};
const std::vector<std::string> vxy{"x", "y"};

std::vector<Rat> rq(std::initializer_list<long> xs) {
  std::vector<Rat> v;
  for (long x : xs) v.push_back(Rat(x));
  return v;
}
}  // namespace

TEST_CASE("polarization examples") {
  SECTION("second polarization of q^2 is 2 v1 v2") {
    const Expr f = parse_expr("x^2", vx);
    Rng rng(701);
    for (int i = 0; i < 10; ++i) {
      const Rat q = random_rat(rng), v1 = random_rat(rng), v2 = random_rat(rng);
      CHECK(polarize_exact(f, 2, {q}, {{v1}, {v2}}) == Rat(2) * v1 * v2);
    }
  }
  SECTION("order zero is the function itself") {
    const Expr f = parse_expr("x^2 + 1", vx);
    CHECK(polarize_exact(f, 0, rq({3}), {}) == Rat(10));
  }
  SECTION("q^3 at 1 with unit steps") {
    const Expr f = parse_expr("x^3", vx);
    CHECK(unidirectional_exact(f, 2, rq({1}), rq({1})) == Rat(12));  // 27 - 16 + 1
  }
}

TEST_CASE("unidirectional examples") {
  CHECK(unidirectional_exact(parse_expr("x^2", vx), 2, rq({0}), rq({5})) == Rat(50));
  // first difference
  const Expr f = parse_expr("x^3 - x", vx);
  Rng rng(702);
  for (int i = 0; i < 10; ++i) {
    const Rat q = random_rat(rng), v = random_rat(rng);
    std::vector<Rat> qv{q + v};
    CHECK(unidirectional_exact(f, 1, {q}, {v}) ==
          eval_exact(f, qv) - eval_exact(f, {q}));
  }
}

TEST_CASE("polarization order is capped") {
  CHECK_THROWS_AS(
      polarize_num(parse_expr("x", vx), 17, {0.0}, std::vector<std::vector<double>>(17, {1.0})),
      Error);
}

TEST_CASE("polarization is symmetric in the directions", "[property]") {
  Rng rng(703);
  for (int trial = 0; trial < 20; ++trial) {
    const Expr f = random_poly_expr(rng, 2);
    const std::vector<Rat> q{random_rat(rng), random_rat(rng)};
    std::vector<std::vector<Rat>> dirs{{random_rat(rng), random_rat(rng)},
                                       {random_rat(rng), random_rat(rng)},
                                       {random_rat(rng), random_rat(rng)}};
    const Rat a = polarize_exact(f, 3, q, dirs);
    std::swap(dirs[0], dirs[2]);
    CHECK(polarize_exact(f, 3, q, dirs) == a);
    std::swap(dirs[0], dirs[1]);
    CHECK(polarize_exact(f, 3, q, dirs) == a);
  }
}

TEST_CASE("finite differences annihilate low degree", "[property]") {
  Rng rng(704);
  for (int trial = 0; trial < 20; ++trial) {
    Expr f = random_poly_expr(rng, 1, 2);
    const unsigned deg = degree_bound(f);
    const unsigned n = deg + 1;
    if (n > 6) continue;
    CHECK(unidirectional_exact(f, n, {random_rat(rng)}, {random_nonzero_rat(rng)}) ==
          Rat(0));
  }
}

TEST_CASE("homogeneous polynomials satisfy the n! identity", "[property]") {
  Rng rng(705);
  for (int trial = 0; trial < 25; ++trial) {
    std::uniform_int_distribution<unsigned> ord(1, 4);
    std::uniform_int_distribution<std::size_t> nv(1, 3);
    const unsigned n = ord(rng);
    const std::size_t m = nv(rng);
    std::vector<Rat> q;
    for (std::size_t i = 0; i < m; ++i) q.push_back(random_rat(rng));
    const Expr f = random_homogeneous(rng, n, q);
    Rat nfact(1);
    for (unsigned k = 2; k <= n; ++k) nfact *= Rat(static_cast<long>(k));
    for (int rep = 0; rep < 4; ++rep) {
      std::vector<Rat> v;
      for (std::size_t i = 0; i < m; ++i) v.push_back(random_rat(rng));
      std::vector<Rat> qv(q);
      for (std::size_t i = 0; i < m; ++i) qv[i] += v[i];
      CHECK(unidirectional_exact(f, n, q, v) == nfact * eval_exact(f, qv));
    }
    // multilinearity of the full polarization at q
    std::vector<std::vector<Rat>> dirs;
    for (unsigned k = 0; k < n; ++k) {
      std::vector<Rat> v;
      for (std::size_t i = 0; i < m; ++i) v.push_back(random_rat(rng));
      dirs.push_back(std::move(v));
    }
    std::vector<Rat> extra;
    for (std::size_t i = 0; i < m; ++i) extra.push_back(random_rat(rng));
    CHECK(polarization_multilinear_at(f, n, q, dirs, extra, 0));
  }
}

TEST_CASE("homogeneity decision") {
  CHECK(homogeneity_check(parse_expr("x^2 + x*y", vxy), 2, rq({0, 0})));
  CHECK_FALSE(homogeneity_check(parse_expr("x^2 + x", vx), 2, rq({0})));
  // shifted: (x-1)^3 is homogeneous of degree 3 at q = 1
  CHECK(homogeneity_check(parse_expr("(x - 1)^3", vx), 3, rq({1})));
  CHECK_FALSE(homogeneity_check(parse_expr("(x - 1)^3", vx), 3, rq({0})));
}

TEST_CASE("finite-difference derivative examples") {
  SECTION("quadratic saturates at any step") {
    const FdResult r = multidir_derivative_fd(parse_expr("x^2", vx), 2, {0.7}, {{1.0}, {1.0}});
    CHECK(r.value == Catch::Approx(2.0).epsilon(1e-10));
    CHECK(r.converged);
  }
  SECTION("third derivative of exp at 0") {
    const FdResult r =
        multidir_derivative_fd(parse_expr("exp(x)", vx), 3, {0.0}, {{1.0}, {1.0}, {1.0}});
    CHECK(r.value == Catch::Approx(1.0).epsilon(1e-6));
  }
  SECTION("mixed bilinear case is exact") {
    const FdResult r = multidir_derivative_fd(parse_expr("x*y", vxy), 2, {0.0, 0.0},
                                              {{1.0, 0.0}, {0.0, 1.0}});
    CHECK(r.value == Catch::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("exact polynomial derivatives by saturation") {
  CHECK(multidir_derivative_exact(parse_expr("x^2", vx), 2, rq({5}), {rq({1}), rq({1})}) ==
        Rat(2));
  CHECK(multidir_derivative_exact(parse_expr("x*y", vxy), 2, rq({0, 0}),
                                  {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}}) == Rat(1));
  // cubic: d^2 (x^3) (q; e, e) = 6q
  CHECK(multidir_derivative_exact(parse_expr("x^3", vx), 2, rq({2}), {rq({1}), rq({1})}) ==
        Rat(12));
}

TEST_CASE("taylor remainder ratios fall for exp and sin") {
  std::vector<std::vector<double>> seq;
  for (int j = 1; j <= 10; ++j) seq.push_back({std::pow(2.0, -j)});
  SECTION("exp, order 2: ratios behave like q/6") {
    const RemainderReport rep =
        taylor_remainder_check(parse_expr("exp(x)", vx), 2, {0.0}, seq);
    REQUIRE(rep.ratios.size() == 10);
    CHECK(rep.pass);
    CHECK(rep.ratios.back() < 0.1 * rep.ratios.front());
    CHECK(rep.ratios.front() == Catch::Approx(0.5 / 6.0).epsilon(0.2));
  }
  SECTION("sin, order 3 at 0") {
    // the true ratio is ~ q^2/120; stop while it still dominates the
    // finite-difference noise floor of the derivative estimates
    std::vector<std::vector<double>> seq8(seq.begin(), seq.begin() + 8);
    const RemainderReport rep =
        taylor_remainder_check(parse_expr("sin(x)", vx), 3, {0.0}, seq8);
    CHECK(rep.pass);
    CHECK(rep.ratios.back() < 0.1 * rep.ratios.front());
  }
  SECTION("polynomials of degree <= n have vanishing remainder") {
    std::vector<std::vector<double>> shifted;
    for (int j = 1; j <= 10; ++j) shifted.push_back({0.5 + std::pow(2.0, -j)});
    const RemainderReport rep =
        taylor_remainder_check(parse_expr("x^2 - 3*x + 1", vx), 2, {0.5}, shifted);
    for (double r : rep.ratios) CHECK(std::abs(r) < 1e-6);
  }
}

TEST_CASE("cross-oracle: polarization derivatives match jet coefficients", "[property]") {
  Rng rng(706);
  SECTION("polynomials, exactly") {
    for (int trial = 0; trial < 15; ++trial) {
      const Expr f = random_poly_expr(rng, 1);
      const unsigned deg = degree_bound(f);
      const unsigned k = std::min(deg, 4u);
      const Rat q = random_rat(rng);
      // jet through P_k at q (exact evaluation via exact point)
      const TruncSpec spec = TruncSpec::total_degree(reals(), 1, std::max(k, 1u));
      const AlgebraRef a = build_truncated(spec);
      Element t = el_zero(a);
      t.coeffs[1] = Rat(1);
      const ExactAPoint u = make_apoint(a, std::vector<Rat>{q}, {t});
      const auto jet = jet_extract(eval_apoint(u, f), spec);
      // polarization route: d^k f(q; e..e) = k! * coefficient of t^k
      Rat kfact(1);
      for (unsigned i = 2; i <= k; ++i) kfact *= Rat(static_cast<long>(i));
      const Rat viaPol = multidir_derivative_exact(
          f, k, {q}, std::vector<std::vector<Rat>>(k, {Rat(1)}));
      CHECK(viaPol == kfact * jet.at({k}));
    }
  }
  SECTION("transcendentals, within 1e-8") {
    const std::vector<std::pair<std::string, double>> cases = {
        {"exp(x)", 0.2}, {"sin(x)", 0.4}, {"log(1 + x)", 0.1}};
    for (const auto& [text, x0] : cases) {
      const Expr f = parse_expr(text, vx);
      const TruncSpec spec = TruncSpec::total_degree(reals(), 1, 3);
      const auto jet = jet_extract(eval_apoint(jet_point(spec, {x0}), f), spec);
      for (unsigned k = 1; k <= 3; ++k) {
        double kfact = 1.0;
        for (unsigned i = 2; i <= k; ++i) kfact *= i;
        const FdResult fd = multidir_derivative_fd(
            f, k, {x0}, std::vector<std::vector<double>>(k, {1.0}));
        CHECK(fd.value == Catch::Approx(kfact * jet.at({k})).margin(1e-8));
      }
    }
  }
}

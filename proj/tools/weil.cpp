// weil: exact computations with local algebras from the command line.
//
// Subcommands: verify, invariants, construct, truncated, family, lift, jet,
// polarize, check. Reports go to stdout as single-line key=value records;
// exit status is 0 on success, 1 on verification failure, 2 on usage errors.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "weil/weil.hpp"

namespace fs = std::filesystem;
using namespace weil;

namespace {

std::string join_sizes(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s;
}

std::string invariant_line(const LocalAlgebra& a) {
  return "dim=" + std::to_string(a.dim()) + " height=" + std::to_string(a.height()) +
         " hilbert=" + join_sizes(a.hilbert_vector());
}

void write_algebra(const AlgebraRef& a, const fs::path& out) {
  save_json(algebra_to_json(*a), out);
  std::cout << "wrote=" << out.string() << "\n";
}

fs::path leg_path(const fs::path& out, const std::string& leg) {
  fs::path p = out;
  p.replace_extension("");
  return fs::path(p.string() + "." + leg + ".json");
}

void emit_construction(const ConstructionResult& r, const std::optional<std::string>& out) {
  std::cout << "kind=" << kind_name(r.kind) << " " << invariant_line(*r.algebra) << "\n";
  if (!out) return;
  const fs::path outp(*out);
  write_algebra(r.algebra, outp);
  for (const auto& [name, leg] : r.legs) {
    save_json(morphism_to_json(leg), leg_path(outp, name));
    std::cout << "wrote=" << leg_path(outp, name).string() << " leg=" << name << "\n";
  }
}

/// Variable resolution for the CLI: x1..xm always work; for m = 1 plain "x"
/// is an alias. Returns exprs over indices 0..m-1.
Expr parse_component(const std::string& text, std::size_t m) {
  if (m == 1) {
    // parse with both names mapping to index 0
    const std::vector<std::string> names{"x", "x1"};
    Expr e = parse_expr(text, names);
    // remap var index 1 -> 0
    std::vector<Expr> repl{Expr::variable(0), Expr::variable(0)};
    return substitute(e, repl);
  }
  std::vector<std::string> names;
  for (std::size_t i = 0; i < m; ++i) names.push_back("x" + std::to_string(i + 1));
  return parse_expr(text, names);
}

SmoothMap parse_map(const std::string& text, std::size_t m) {
  std::vector<Expr> comps;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    const auto eq = item.find('=');
    const std::string rhs = eq == std::string::npos ? item : item.substr(eq + 1);
    comps.push_back(parse_component(rhs, m));
  }
  if (comps.empty()) fail(Err::UsageError, "empty map");
  return make_map(m, std::move(comps));
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

json load_inline_or_file(const std::string& arg) {
  if (!arg.empty() && (arg[0] == '{' || arg[0] == '[')) return json::parse(arg);
  return Workspace::load_file(arg);
}

// ---------------------------------------------------------------------------
// check suites: quick self-contained property runs with a fixed seed.

int run_check(const std::string& suite) {
  std::mt19937 rng(20240915);
  auto rrat = [&]() {
    std::uniform_int_distribution<long> num(-3, 3), den(1, 3);
    return Rat(num(rng), den(rng));
  };
  int failures = 0;
  auto report = [&](const std::string& name, bool ok) {
    std::cout << "check=" << name << " result=" << (ok ? "pass" : "fail") << "\n";
    if (!ok) ++failures;
  };
  const bool all = suite == "all";

  if (all || suite == "linalg") {
    bool ok = true;
    for (int t = 0; t < 25 && ok; ++t) {
      std::uniform_int_distribution<std::size_t> dims(1, 5), cnt(0, 4);
      const std::size_t n = dims(rng);
      std::vector<Vec> us, vs;
      for (std::size_t i = cnt(rng); i > 0; --i) {
        Vec v(n);
        for (Rat& c : v) c = rrat();
        us.push_back(v);
      }
      for (std::size_t i = cnt(rng); i > 0; --i) {
        Vec v(n);
        for (Rat& c : v) c = rrat();
        vs.push_back(v);
      }
      const Subspace u = Subspace::span(n, us), v = Subspace::span(n, vs);
      ok = u.dim() + v.dim() == subspace_sum(u, v).dim() + intersect(u, v).dim();
    }
    report("grassmann_identity", ok);
  }
  if (all || suite == "algebra") {
    bool ok = true;
    const std::vector<AlgebraRef> algs{dual_numbers(), build_truncated_total(reals(), 1, 2),
                                       build_truncated_multi(reals(), {1, 1})};
    for (const AlgebraRef& a : algs)
      for (int t = 0; t < 10 && ok; ++t) {
        Element x = el_zero(a), y = el_zero(a);
        for (Rat& c : x.coeffs) c = rrat();
        for (Rat& c : y.coeffs) c = rrat();
        ok = mul(x, y) == mul(y, x);
        if (ok && !x.coeffs[0].is_zero()) ok = mul(x, invert(x)) == el_one(a);
      }
    report("commutativity_and_inverses", ok);
  }
  if (all || suite == "constructions") {
    const AlgebraRef d = dual_numbers();
    const AlgebraRef p2 = build_truncated_total(reals(), 1, 2);
    bool ok = pullback(zero_morphism(d), zero_morphism(p2))
                  .algebra->same_table(*biproduct(d, p2).algebra);
    ok = ok && relative_product(zero_morphism(d), zero_morphism(p2))
                   .algebra->same_table(*biproduct(d, p2).algebra);
    const ConstructionResult b = biproduct(d, p2);
    ok = ok && compose(b.leg("Pr1"), b.leg("In1")).matrix == Mat::identity(2);
    report("product_laws", ok);

    ok = true;
    for (unsigned r = 1; r <= 3 && ok; ++r)
      for (unsigned t = 1; t <= 3 && ok; ++t)
        for (unsigned s = 1; s <= std::min(r, t) && ok; ++s) {
          const ConstructionResult bb = build_B(r, t, s, reals());
          const ConstructionResult cc = build_C(r, t, s, reals());
          ok = bb.algebra->dim() == r + t - s + 1 && cc.algebra->dim() == r + t - s + 1;
        }
    report("family_agreement", ok);
  }
  if (all || suite == "prolongation") {
    bool ok = true;
    const AlgebraRef d = dual_numbers();
    const std::vector<std::string> suite12 = {
        "x^2", "x^3 - 2*x + 1", "exp(x)", "sin(x)", "cos(x)*sin(x)", "log(x)",
        "sqrt(x)", "1/(1 - x)", "exp(sin(x))", "x*exp(-x^2)", "log(1 + x^2)",
        "sqrt(1 + x^2)/(2 + cos(x))"};
    for (const std::string& text : suite12) {
      const Expr f = parse_expr(text, {"x"});
      const double x0 = 0.4;
      NumElement n = el_zero_num(d);
      n.coeffs[1] = 1.0;
      const APoint u = make_apoint(d, std::vector<double>{x0}, {n});
      const double h = 1e-5;
      const double fd = (eval_double(f, {x0 + h}) - eval_double(f, {x0 - h})) / (2 * h);
      const double ad = eval_apoint(u, f).coeffs[1];
      if (std::abs(ad - fd) > 1e-6 * std::max(1.0, std::abs(fd))) ok = false;
    }
    report("dual_derivatives", ok);
  }
  if (all || suite == "polarization") {
    const Expr f = parse_expr("x^3", {"x"});
    bool ok = unidirectional_exact(f, 2, {Rat(1)}, {Rat(1)}) == Rat(12);
    ok = ok && homogeneity_check(parse_expr("x^2 + x*y", {"x", "y"}), 2, {Rat(0), Rat(0)});
    report("polarization_identities", ok);
  }
  std::cout << "result=" << (failures == 0 ? "pass" : "fail") << " failures="
            << failures << "\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact computations with finite-dimensional local algebras"};
  app.require_subcommand(1);
  Workspace ws;

  // --- verify ---
  std::string verify_file;
  auto* cmd_verify = app.add_subcommand("verify", "verify an algebra or morphism file");
  cmd_verify->add_option("file", verify_file, "JSON file")->required();

  // --- invariants ---
  std::string inv_ref;
  auto* cmd_inv = app.add_subcommand("invariants", "dim, height, hilbert vector");
  cmd_inv->add_option("algebra", inv_ref, "algebra file or builtin (R, dual)")->required();

  // --- construct ---
  std::string con_kind, con_a, con_b, con_request;
  std::optional<std::string> con_out;
  auto* cmd_con = app.add_subcommand("construct", "categorical constructions");
  cmd_con->add_option("kind", con_kind,
                      "product|relative|pullback|pushout|tensor (omit with --request)");
  cmd_con->add_option("lhs", con_a, "algebra (product/tensor) or morphism file");
  cmd_con->add_option("rhs", con_b, "algebra (product/tensor) or morphism file");
  cmd_con->add_option("--request", con_request, "construction request JSON file");
  cmd_con->add_option("-o,--output", con_out, "output algebra file (legs beside it)");

  // --- truncated ---
  std::string tr_base = "R";
  std::size_t tr_vars = 1;
  std::optional<unsigned> tr_total;
  std::string tr_degrees;
  std::optional<std::string> tr_out;
  auto* cmd_tr = app.add_subcommand("truncated", "truncated polynomial algebras");
  cmd_tr->add_option("--base", tr_base, "base algebra file or builtin")->capture_default_str();
  cmd_tr->add_option("--vars", tr_vars, "number of variables")->capture_default_str();
  cmd_tr->add_option("--total-degree", tr_total, "total degree bound");
  cmd_tr->add_option("--degrees", tr_degrees, "per-variable bounds k1,k2,...");
  cmd_tr->add_option("-o,--output", tr_out, "output file");

  // --- family ---
  bool fam_b = false, fam_c = false;
  std::vector<unsigned> fam_params;
  std::string fam_base = "R";
  std::optional<std::string> fam_out;
  auto* cmd_fam = app.add_subcommand("family", "the B/C families on the rank-m module");
  cmd_fam->add_flag("--B", fam_b, "build B^s_{r,t} (pullback model)");
  cmd_fam->add_flag("--C", fam_c, "build C^s_{r,t} (relative product model)");
  cmd_fam->add_option("params", fam_params, "r t s")->expected(3);
  cmd_fam->add_option("--base", fam_base, "base algebra")->capture_default_str();
  cmd_fam->add_option("-o,--output", fam_out, "output file");

  // --- lift ---
  std::string lift_alg, lift_map_text, lift_point;
  bool lift_exact = false;
  auto* cmd_lift = app.add_subcommand("lift", "lift a smooth map through an algebra");
  cmd_lift->add_option("--algebra", lift_alg, "algebra file or builtin")->required();
  cmd_lift->add_option("--map", lift_map_text, "components, e.g. \"y1 = x1^2; y2 = exp(x1)\"")
      ->required();
  cmd_lift->add_option("--point", lift_point, "point JSON (inline or file)")->required();
  cmd_lift->add_flag("--exact", lift_exact, "exact rational mode (polynomial maps only)");

  // --- jet ---
  unsigned jet_order = 1;
  std::size_t jet_vars = 1;
  std::string jet_expr, jet_at;
  auto* cmd_jet = app.add_subcommand("jet", "Taylor coefficients through a jet algebra");
  cmd_jet->add_option("--order", jet_order, "truncation order k")->required();
  cmd_jet->add_option("--vars", jet_vars, "number of variables")->capture_default_str();
  cmd_jet->add_option("--expr", jet_expr, "expression")->required();
  cmd_jet->add_option("--at", jet_at, "base point a1,...,am")->required();

  // --- polarize ---
  std::string pol_expr, pol_at, pol_dirs, pol_uni;
  unsigned pol_order = 1;
  bool pol_fd = false;
  double pol_step = 0.5;
  auto* cmd_pol = app.add_subcommand("polarize", "polarizations and derivatives");
  cmd_pol->add_option("--expr", pol_expr, "expression")->required();
  cmd_pol->add_option("--order", pol_order, "order n")->required();
  cmd_pol->add_option("--at", pol_at, "base point q1,...,qm")->required();
  cmd_pol->add_option("--dirs", pol_dirs, "directions \"v1;v2;...\" (components comma-separated)");
  cmd_pol->add_option("--unidirectional", pol_uni, "one repeated direction");
  cmd_pol->add_flag("--fd", pol_fd, "finite-difference multidirectional derivative");
  cmd_pol->add_option("--step", pol_step, "initial step for --fd")->capture_default_str();

  // --- check ---
  std::string check_suite = "all";
  auto* cmd_check = app.add_subcommand("check", "run a named property suite");
  cmd_check->add_option("suite", check_suite,
                        "linalg|algebra|constructions|prolongation|polarization|all")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*cmd_verify) {
      const json j = Workspace::load_file(verify_file);
      const fs::path dir = fs::path(verify_file).parent_path();
      if (j.contains("mul")) {
        const AlgebraRef a = algebra_from_json(j);
        std::cout << "ok=true kind=algebra " << invariant_line(*a) << "\n";
      } else if (j.contains("matrix")) {
        const AlgMorphism f = morphism_from_json(j, ws, dir);
        std::cout << "ok=true kind=morphism source_dim=" << f.source->dim()
                  << " target_dim=" << f.target->dim()
                  << " epi=" << (is_epimorphism(f) ? "true" : "false") << "\n";
      } else if (j.contains("nilpotents")) {
        const AlgebraRef a = ws.algebra_ref_json(j.at("algebra"), dir);
        point_from_json<double>(j, a);
        std::cout << "ok=true kind=point\n";
      } else if (j.contains("basis") && j.contains("algebra")) {
        const Ideal id = ideal_from_json(j, ws, dir);
        std::cout << "ok=true kind=ideal dim=" << id.dim() << "\n";
      } else {
        fail(Err::SchemaError, "unrecognized file kind");
      }
    } else if (*cmd_inv) {
      const AlgebraRef a = ws.algebra(inv_ref);
      std::cout << invariant_line(*a) << "\n";
    } else if (*cmd_con) {
      ConstructionResult r;
      std::string kind = con_kind;
      fs::path dir = ".";
      std::string lhs = con_a, rhs = con_b;
      if (!con_request.empty()) {
        const json req = Workspace::load_file(con_request);
        dir = fs::path(con_request).parent_path();
        kind = req.at("kind").get<std::string>();
        if (req.contains("phi1")) lhs = req.at("phi1").get<std::string>();
        if (req.contains("pi1")) lhs = req.at("pi1").get<std::string>();
        if (req.contains("a1")) lhs = req.at("a1").get<std::string>();
        if (req.contains("phi2")) rhs = req.at("phi2").get<std::string>();
        if (req.contains("pi2")) rhs = req.at("pi2").get<std::string>();
        if (req.contains("a2")) rhs = req.at("a2").get<std::string>();
      }
      if (kind.empty() || lhs.empty() || rhs.empty())
        fail(Err::UsageError, "construct needs a kind and two inputs");
      auto load_morphism = [&](const std::string& ref) {
        const json j = Workspace::load_file(ref);
        return morphism_from_json(j, ws, fs::path(ref).parent_path());
      };
      if (kind == "product" || kind == "biproduct")
        r = biproduct(ws.algebra(lhs, dir), ws.algebra(rhs, dir));
      else if (kind == "tensor")
        r = tensor_product(ws.algebra(lhs, dir), ws.algebra(rhs, dir));
      else if (kind == "relative")
        r = relative_product(load_morphism(lhs), load_morphism(rhs));
      else if (kind == "pullback")
        r = pullback(load_morphism(lhs), load_morphism(rhs));
      else if (kind == "pushout")
        r = pushout(load_morphism(lhs), load_morphism(rhs));
      else
        fail(Err::UsageError, "unknown construction kind '" + kind + "'");
      emit_construction(r, con_out);
    } else if (*cmd_tr) {
      TruncSpec spec;
      const AlgebraRef base = ws.algebra(tr_base);
      if (tr_total && !tr_degrees.empty())
        fail(Err::UsageError, "give either --total-degree or --degrees");
      if (tr_total) {
        spec = TruncSpec::total_degree(base, tr_vars, *tr_total);
      } else if (!tr_degrees.empty()) {
        std::vector<unsigned> ks;
        std::stringstream ss(tr_degrees);
        std::string item;
        while (std::getline(ss, item, ',')) ks.push_back(static_cast<unsigned>(std::stoul(item)));
        spec = TruncSpec::per_variable(base, ks);
      } else {
        fail(Err::UsageError, "need --total-degree or --degrees");
      }
      const AlgebraRef a = build_truncated(spec);
      std::cout << invariant_line(*a) << "\n";
      if (tr_out) write_algebra(a, *tr_out);
    } else if (*cmd_fam) {
      if (fam_b == fam_c) fail(Err::UsageError, "choose exactly one of --B / --C");
      const AlgebraRef base = ws.algebra(fam_base);
      const unsigned r = fam_params.at(0), t = fam_params.at(1), s = fam_params.at(2);
      const ConstructionResult res =
          fam_b ? build_B(r, t, s, base) : build_C(r, t, s, base);
      std::cout << "family=" << (fam_b ? "B" : "C") << " r=" << r << " t=" << t
                << " s=" << s << " module_rank=" << (r + t - s + 1) << " "
                << invariant_line(*res.algebra) << "\n";
      // Non-isomorphism certificate against the sibling structure.
      const ConstructionResult sib =
          fam_b ? build_C(r, t, s, base) : build_B(r, t, s, base);
      const auto h1 = res.algebra->hilbert_vector();
      const auto h2 = sib.algebra->hilbert_vector();
      auto pad = [](std::vector<std::size_t> v, std::size_t n) {
        v.resize(n, 0);
        return v;
      };
      const std::size_t n = std::max(h1.size(), h2.size());
      if (pad(h1, n) != pad(h2, n) ||
          res.algebra->height() != sib.algebra->height())
        std::cout << "certificate=not_isomorphic_to_sibling invariant=hilbert_or_height"
                  << " this=" << join_sizes(h1) << " sibling=" << join_sizes(h2) << "\n";
      else
        std::cout << "certificate=undetermined\n";
      if (fam_out) emit_construction(res, fam_out);
    } else if (*cmd_lift) {
      const AlgebraRef a = ws.algebra(lift_alg);
      const json pj = load_inline_or_file(lift_point);
      if (lift_exact) {
        const ExactAPoint u = point_from_json<Rat>(pj, a);
        const SmoothMap m = parse_map(lift_map_text, u.arity());
        const ExactAPoint v = lift_map(m, u);
        std::string base = "[", nil = "[";
        for (std::size_t i = 0; i < v.base.size(); ++i) {
          base += (i ? "," : "") + v.base[i].str();
          nil += (i ? "," : "");
          nil += "[";
          for (std::size_t c = 1; c < v.nilpotents[i].coeffs.size(); ++c)
            nil += (c > 1 ? "," : "") + v.nilpotents[i].coeffs[c].str();
          nil += "]";
        }
        std::cout << "base=" << base << "] nilpotents=" << nil << "]\n";
      } else {
        const APoint u = point_from_json<double>(pj, a);
        const SmoothMap m = parse_map(lift_map_text, u.arity());
        const APoint v = lift_map(m, u);
        std::string base = "[", nil = "[";
        for (std::size_t i = 0; i < v.base.size(); ++i) {
          base += (i ? "," : "") + format_double(v.base[i]);
          nil += (i ? "," : "");
          nil += "[";
          for (std::size_t c = 1; c < v.nilpotents[i].coeffs.size(); ++c)
            nil += (c > 1 ? "," : "") + format_double(v.nilpotents[i].coeffs[c]);
          nil += "]";
        }
        std::cout << "base=" << base << "] nilpotents=" << nil << "]\n";
      }
    } else if (*cmd_jet) {
      const TruncSpec spec = TruncSpec::total_degree(reals(), jet_vars, jet_order);
      const std::vector<double> at = parse_doubles(jet_at);
      const Expr f = parse_component(jet_expr, jet_vars);
      const APoint u = jet_point(spec, at);
      const auto jet = jet_extract(eval_apoint(u, f), spec);
      for (const auto& mono : spec.monomials()) {
        std::string key;
        for (std::size_t i = 0; i < mono.size(); ++i)
          key += (i ? "," : "") + std::to_string(mono[i]);
        std::cout << "j[" << key << "]=" << format_double(jet.at(mono)) << "\n";
      }
    } else if (*cmd_pol) {
      const std::vector<double> q = parse_doubles(pol_at);
      const Expr f = parse_component(pol_expr, q.size());
      std::vector<std::vector<double>> dirs;
      if (!pol_uni.empty()) {
        dirs.assign(pol_order, parse_doubles(pol_uni));
      } else if (!pol_dirs.empty()) {
        std::stringstream ss(pol_dirs);
        std::string item;
        while (std::getline(ss, item, ';')) dirs.push_back(parse_doubles(item));
      } else if (pol_order > 0) {
        fail(Err::UsageError, "need --dirs or --unidirectional");
      }
      if (pol_fd) {
        const FdResult r = multidir_derivative_fd(f, pol_order, q, dirs, pol_step);
        std::cout << "derivative=" << format_double(r.value)
                  << " error=" << format_double(r.error_estimate)
                  << " converged=" << (r.converged ? "true" : "false") << "\n";
      } else {
        const double v = polarize_num(f, pol_order, q, dirs);
        std::cout << "polarization=" << format_double(v) << "\n";
      }
    } else if (*cmd_check) {
      return run_check(check_suite);
    }
  } catch (const Error& e) {
    std::cout << "ok=false error=" << e.what() << "\n";
    return e.kind() == Err::UsageError ? 2 : 1;
  } catch (const std::exception& e) {
    std::cout << "ok=false error=" << e.what() << "\n";
    return 1;
  }
  return 0;
}

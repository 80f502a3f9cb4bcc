#pragma once
// JSON persistence for algebras, morphisms, ideals and points, plus the
// Workspace registry the CLI works through. Files are canonical: UTF-8,
// sorted keys, rationals as strings, so identical inputs give byte-identical
// outputs.

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "weil/apoint.hpp"
#include "weil/ideal.hpp"

namespace weil {

using nlohmann::json;

inline std::string format_double(double x) {
  std::ostringstream os;
  os.precision(15);
  os << x;
  return os.str();
}

inline Rat rat_from_json(const json& j, const std::string& path) {
  try {
    if (j.is_string()) return Rat::parse(j.get<std::string>());
    if (j.is_number_integer()) return Rat(j.get<long>());
  } catch (const Error& e) {
    fail(Err::SchemaError, path + ": " + e.what());
  }
  fail(Err::SchemaError, path + ": expected a rational string");
}

inline json rat_to_json(const Rat& r) { return r.str(); }

// ---------------------------------------------------------------------------
// Algebra files: { "basis": [...], "dim": d, "mul": [[[..], ..], ..] } where
// mul[i][j] is the coefficient vector of e_i * e_j.

inline json algebra_to_json(const LocalAlgebra& a) {
  const std::size_t d = a.dim();
  json mul = json::array();
  for (std::size_t i = 0; i < d; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < d; ++j) {
      json entry = json::array();
      for (const Rat& c : a.product(i, j)) entry.push_back(rat_to_json(c));
      row.push_back(std::move(entry));
    }
    mul.push_back(std::move(row));
  }
  return json{{"basis", a.labels()}, {"dim", d}, {"mul", std::move(mul)}};
}

inline AlgebraRef algebra_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("basis") || !j.contains("mul"))
    fail(Err::SchemaError, "$: algebra needs dim, basis, mul");
  if (!j["dim"].is_number_unsigned() && !j["dim"].is_number_integer())
    fail(Err::SchemaError, "$.dim: expected an integer");
  const std::size_t d = j["dim"].get<std::size_t>();
  if (!j["basis"].is_array() || j["basis"].size() != d)
    fail(Err::SchemaError, "$.basis: expected " + std::to_string(d) + " labels");
  std::vector<std::string> labels;
  for (const auto& l : j["basis"]) {
    if (!l.is_string()) fail(Err::SchemaError, "$.basis: labels must be strings");
    labels.push_back(l.get<std::string>());
  }
  if (!j["mul"].is_array() || j["mul"].size() != d)
    fail(Err::SchemaError, "$.mul: expected " + std::to_string(d) + " rows");
  MulTable table(d * d);
  for (std::size_t i = 0; i < d; ++i) {
    const json& row = j["mul"][i];
    if (!row.is_array() || row.size() != d)
      fail(Err::SchemaError, "$.mul[" + std::to_string(i) + "]: expected " +
                                 std::to_string(d) + " entries");
    for (std::size_t k = 0; k < d; ++k) {
      const json& entry = row[k];
      const std::string path = "$.mul[" + std::to_string(i) + "][" + std::to_string(k) + "]";
      if (!entry.is_array() || entry.size() != d)
        fail(Err::SchemaError, path + ": expected a vector of length " + std::to_string(d));
      Vec v(d);
      for (std::size_t c = 0; c < d; ++c)
        v[c] = rat_from_json(entry[c], path + "[" + std::to_string(c) + "]");
      table[i * d + k] = std::move(v);
    }
  }
  return LocalAlgebra::make(std::move(labels), std::move(table));
}

// ---------------------------------------------------------------------------
// Workspace: named registry of loaded objects. Algebra references inside
// files may be embedded objects, file paths (relative to the referring
// file), or the built-in names "R" and "dual".

class Workspace {
 public:
  AlgebraRef algebra(const std::string& ref, const std::filesystem::path& base_dir = ".") {
    if (ref == "R") return reals();
    if (ref == "dual") return dual_numbers();
    const std::filesystem::path p = resolve(ref, base_dir);
    const std::string key = p.string();
    auto it = algebras_.find(key);
    if (it != algebras_.end()) return it->second;
    AlgebraRef a = algebra_from_json(load_file(p));
    algebras_.emplace(key, a);
    return a;
  }

  AlgebraRef algebra_ref_json(const json& j, const std::filesystem::path& base_dir) {
    if (j.is_string()) return algebra(j.get<std::string>(), base_dir);
    return algebra_from_json(j);
  }

  static json load_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) fail(Err::SchemaError, "cannot open " + p.string());
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      fail(Err::SchemaError, p.string() + ": " + e.what());
    }
    return j;
  }

 private:
  static std::filesystem::path resolve(const std::string& ref,
                                       const std::filesystem::path& base_dir) {
    std::filesystem::path p(ref);
    if (p.is_relative()) p = base_dir / p;
    return p.lexically_normal();
  }

  std::map<std::string, AlgebraRef> algebras_;
};

// ---------------------------------------------------------------------------
// Morphisms: { "matrix": [[..], ..], "source": <ref|object>, "target": ... }
// with a row-major (target.dim x source.dim) matrix.

inline json morphism_to_json(const AlgMorphism& f) {
  json rows = json::array();
  for (std::size_t i = 0; i < f.matrix.rows; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < f.matrix.cols; ++j) row.push_back(rat_to_json(f.matrix.at(i, j)));
    rows.push_back(std::move(row));
  }
  return json{{"matrix", std::move(rows)},
              {"source", algebra_to_json(*f.source)},
              {"target", algebra_to_json(*f.target)}};
}

inline AlgMorphism morphism_from_json(const json& j, Workspace& ws,
                                      const std::filesystem::path& base_dir = ".") {
  if (!j.is_object() || !j.contains("matrix") || !j.contains("source") || !j.contains("target"))
    fail(Err::SchemaError, "$: morphism needs matrix, source, target");
  AlgebraRef src = ws.algebra_ref_json(j["source"], base_dir);
  AlgebraRef tgt = ws.algebra_ref_json(j["target"], base_dir);
  const json& rows = j["matrix"];
  if (!rows.is_array() || rows.size() != tgt->dim())
    fail(Err::SchemaError, "$.matrix: expected " + std::to_string(tgt->dim()) + " rows");
  Mat m(tgt->dim(), src->dim());
  for (std::size_t i = 0; i < m.rows; ++i) {
    if (!rows[i].is_array() || rows[i].size() != src->dim())
      fail(Err::SchemaError, "$.matrix[" + std::to_string(i) + "]: expected " +
                                 std::to_string(src->dim()) + " entries");
    for (std::size_t c = 0; c < m.cols; ++c)
      m.at(i, c) = rat_from_json(rows[i][c],
                                 "$.matrix[" + std::to_string(i) + "][" + std::to_string(c) + "]");
  }
  AlgMorphism f{std::move(src), std::move(tgt), std::move(m)};
  require_morphism(f, "morphism file");
  return f;
}

// ---------------------------------------------------------------------------
// Ideals: { "algebra": <ref|object>, "basis": [[rational strings], ...] }.

inline json ideal_to_json(const Ideal& id) {
  json basis = json::array();
  for (const Vec& b : id.space().basis()) {
    json row = json::array();
    for (const Rat& c : b) row.push_back(rat_to_json(c));
    basis.push_back(std::move(row));
  }
  return json{{"algebra", algebra_to_json(*id.algebra())}, {"basis", std::move(basis)}};
}

inline Ideal ideal_from_json(const json& j, Workspace& ws,
                             const std::filesystem::path& base_dir = ".") {
  if (!j.is_object() || !j.contains("algebra") || !j.contains("basis"))
    fail(Err::SchemaError, "$: ideal needs algebra, basis");
  AlgebraRef a = ws.algebra_ref_json(j["algebra"], base_dir);
  std::vector<Vec> vecs;
  for (std::size_t r = 0; r < j["basis"].size(); ++r) {
    const json& row = j["basis"][r];
    if (!row.is_array() || row.size() != a->dim())
      fail(Err::SchemaError, "$.basis[" + std::to_string(r) + "]: expected a vector of length " +
                                 std::to_string(a->dim()));
    Vec v(a->dim());
    for (std::size_t c = 0; c < a->dim(); ++c)
      v[c] = rat_from_json(row[c],
                           "$.basis[" + std::to_string(r) + "][" + std::to_string(c) + "]");
    vecs.push_back(std::move(v));
  }
  return Ideal::from_subspace(a, Subspace::span(a->dim(), std::move(vecs)));
}

// ---------------------------------------------------------------------------
// Points: { "algebra": <ref|object>, "base": [...], "nilpotents": [[...]] }.
// Base entries and coefficients may be numbers (numeric mode) or rational
// strings (exact mode).

inline json point_to_json(const APoint& u) {
  json base = json::array();
  for (double b : u.base) base.push_back(b);
  json nil = json::array();
  for (const NumElement& n : u.nilpotents) {
    json row = json::array();
    for (double c : n.coeffs) row.push_back(c);
    nil.push_back(std::move(row));
  }
  return json{{"algebra", algebra_to_json(*u.algebra)},
              {"base", std::move(base)},
              {"nilpotents", std::move(nil)}};
}

inline json point_to_json(const ExactAPoint& u) {
  json base = json::array();
  for (const Rat& b : u.base) base.push_back(rat_to_json(b));
  json nil = json::array();
  for (const Element& n : u.nilpotents) {
    json row = json::array();
    for (const Rat& c : n.coeffs) row.push_back(rat_to_json(c));
    nil.push_back(std::move(row));
  }
  return json{{"algebra", algebra_to_json(*u.algebra)},
              {"base", std::move(base)},
              {"nilpotents", std::move(nil)}};
}

template <class S>
S point_scalar_from_json(const json& j, const std::string& path);

template <>
inline double point_scalar_from_json<double>(const json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return Rat::parse(j.get<std::string>()).to_double();
  fail(Err::SchemaError, path + ": expected a number or rational string");
}

template <>
inline Rat point_scalar_from_json<Rat>(const json& j, const std::string& path) {
  if (j.is_string()) return Rat::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rat(j.get<long>());
  fail(Err::SchemaError, path + ": exact mode needs rational strings");
}

template <class S>
APointT<S> point_from_json(const json& j, const AlgebraRef& algebra) {
  if (!j.is_object() || !j.contains("base") || !j.contains("nilpotents"))
    fail(Err::SchemaError, "$: point needs base, nilpotents");
  std::vector<S> base;
  for (std::size_t i = 0; i < j["base"].size(); ++i)
    base.push_back(point_scalar_from_json<S>(j["base"][i], "$.base[" + std::to_string(i) + "]"));
  std::vector<ElementT<S>> nils;
  if (!j["nilpotents"].is_array() || j["nilpotents"].size() != base.size())
    fail(Err::SchemaError, "$.nilpotents: expected one row per coordinate");
  for (std::size_t i = 0; i < base.size(); ++i) {
    const json& row = j["nilpotents"][i];
    const std::string path = "$.nilpotents[" + std::to_string(i) + "]";
    ElementT<S> n;
    n.algebra = algebra;
    // Rows may give d coefficients (with zero finite part) or d-1 ideal
    // coefficients.
    if (!row.is_array() ||
        (row.size() != algebra->dim() && row.size() != algebra->dim() - 1))
      fail(Err::SchemaError, path + ": expected " + std::to_string(algebra->dim()) +
                                 " (or dim-1) coefficients");
    const std::size_t offset = row.size() == algebra->dim() ? 0 : 1;
    n.coeffs.assign(algebra->dim(), S{});
    for (std::size_t c = 0; c < row.size(); ++c)
      n.coeffs[c + offset] =
          point_scalar_from_json<S>(row[c], path + "[" + std::to_string(c) + "]");
    nils.push_back(std::move(n));
  }
  return make_apoint(algebra, std::move(base), std::move(nils));
}

// ---------------------------------------------------------------------------
// Canonical file output.

inline std::string canonical_dump(const json& j) { return j.dump(2) + "\n"; }

inline void save_json(const json& j, const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) fail(Err::SchemaError, "cannot write " + p.string());
  out << canonical_dump(j);
}

}  // namespace weil

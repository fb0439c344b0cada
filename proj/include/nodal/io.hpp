#pragma once

// JSON readers/writers for the instance types and CSV row formatting for
// reports. Parse failures throw ParseError naming the offending field.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nodal/eigenid.hpp"
#include "nodal/errors.hpp"
#include "nodal/signsearch.hpp"
#include "nodal/sphere.hpp"
#include "nodal/torus.hpp"

namespace nodal::io {

using json = nlohmann::json;

inline json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("<document>", e.what());
  }
}

inline json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("<file>", "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str());
}

namespace detail {

inline const json& member(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + "." + key, "missing field");
  return *it;
}

inline double number(const json& v, const std::string& field) {
  if (!v.is_number()) throw ParseError(field, "expected a number");
  return v.get<double>();
}

inline int integer(const json& v, const std::string& field) {
  if (!v.is_number_integer()) throw ParseError(field, "expected an integer");
  return v.get<int>();
}

inline const json& array(const json& v, const std::string& field) {
  if (!v.is_array()) throw ParseError(field, "expected an array");
  return v;
}

inline std::vector<double> reals(const json& v, const std::string& field) {
  std::vector<double> out;
  for (std::size_t i = 0; i < array(v, field).size(); ++i) {
    out.push_back(number(v[i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

inline std::vector<int> ints(const json& v, const std::string& field) {
  std::vector<int> out;
  for (std::size_t i = 0; i < array(v, field).size(); ++i) {
    out.push_back(integer(v[i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

inline double optional_number(const json& obj, const std::string& key, double fallback, const std::string& where) {
  const auto it = obj.find(key);
  return it == obj.end() ? fallback : number(*it, where + "." + key);
}

// Model-level validation errors are reported against the enclosing field.
template <class Fn>
auto build(const std::string& field, Fn&& fn) {
  try {
    return fn();
  } catch (const DomainError& e) {
    throw ParseError(field, e.what());
  }
}

}  // namespace detail

// ---- TrigPoly: {"dim": d, "terms": [{"k": [..], "re": r, "im": i}]}

inline torus::TrigPoly trigpoly_from_json(const json& j) {
  const int dim = detail::integer(detail::member(j, "dim", "trigpoly"), "trigpoly.dim");
  const json& terms = detail::array(detail::member(j, "terms", "trigpoly"), "trigpoly.terms");
  std::vector<std::pair<torus::FreqVector, torus::Complex>> half;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string at = "trigpoly.terms[" + std::to_string(i) + "]";
    const auto k = detail::ints(detail::member(terms[i], "k", at), at + ".k");
    const double re = detail::number(detail::member(terms[i], "re", at), at + ".re");
    const double im = detail::optional_number(terms[i], "im", 0.0, at);
    half.emplace_back(k, torus::Complex(re, im));
  }
  return detail::build("trigpoly.terms", [&] { return torus::TrigPoly::from_half(dim, half); });
}

inline json trigpoly_to_json(const torus::TrigPoly& f) {
  json terms = json::array();
  for (const auto& [k, a] : f.coeffs()) {
    if (!torus::is_representative(k)) continue;
    terms.push_back({{"k", k}, {"re", a.real()}, {"im", a.imag()}});
  }
  return {{"dim", f.dim()}, {"terms", terms}};
}

// ---- SphereFn: {"dim": d, "terms": [{"k": m, "pole": [..], "w": w}]}

inline sphere::SphereFn spherefn_from_json(const json& j) {
  const int dim = detail::integer(detail::member(j, "dim", "spherefn"), "spherefn.dim");
  const json& terms = detail::array(detail::member(j, "terms", "spherefn"), "spherefn.terms");
  std::vector<sphere::ZonalTerm> out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string at = "spherefn.terms[" + std::to_string(i) + "]";
    sphere::ZonalTerm t;
    t.degree = detail::integer(detail::member(terms[i], "k", at), at + ".k");
    t.pole = detail::reals(detail::member(terms[i], "pole", at), at + ".pole");
    t.weight = detail::number(detail::member(terms[i], "w", at), at + ".w");
    // validate per term so the error names the entry
    detail::build(at, [&] { return sphere::SphereFn::checked(dim, {t}); });
    out.push_back(std::move(t));
  }
  return detail::build("spherefn.terms", [&] { return sphere::SphereFn::checked(dim, std::move(out)); });
}

inline json spherefn_to_json(const sphere::SphereFn& f) {
  json terms = json::array();
  for (const auto& t : f.terms()) terms.push_back({{"k", t.degree}, {"pole", t.pole}, {"w", t.weight}});
  return {{"dim", f.dim()}, {"terms", terms}};
}

// ---- PlaneWaveEigen: {"dim": n, "lambda": l, "waves": [{"k": [..], "amplitude": a, "phase": p}]}

inline eigenid::PlaneWaveEigen eigen_from_json(const json& j, const std::string& at = "eigen") {
  const int dim = detail::integer(detail::member(j, "dim", at), at + ".dim");
  const double lambda = detail::number(detail::member(j, "lambda", at), at + ".lambda");
  const json& waves = detail::array(detail::member(j, "waves", at), at + ".waves");
  std::vector<eigenid::PlaneWave> out;
  for (std::size_t i = 0; i < waves.size(); ++i) {
    const std::string w = at + ".waves[" + std::to_string(i) + "]";
    eigenid::PlaneWave pw;
    pw.wavevector = detail::reals(detail::member(waves[i], "k", w), w + ".k");
    pw.amplitude = detail::optional_number(waves[i], "amplitude", 1.0, w);
    pw.phase = detail::optional_number(waves[i], "phase", 0.0, w);
    out.push_back(std::move(pw));
  }
  return detail::build(at, [&] { return eigenid::PlaneWaveEigen(dim, lambda, std::move(out)); });
}

inline json eigen_to_json(const eigenid::PlaneWaveEigen& phi) {
  json waves = json::array();
  for (const auto& w : phi.waves()) {
    waves.push_back({{"k", w.wavevector}, {"amplitude", w.amplitude}, {"phase", w.phase}});
  }
  return {{"dim", phi.dim()}, {"lambda", phi.lambda()}, {"waves", waves}};
}

// ---- EigenMix: {"dim": n, "parts": [{"coef": c, "eigen": {...}}]}

inline eigenid::EigenMix mix_from_json(const json& j) {
  const int dim = detail::integer(detail::member(j, "dim", "mix"), "mix.dim");
  const json& parts = detail::array(detail::member(j, "parts", "mix"), "mix.parts");
  std::vector<eigenid::EigenMix::Part> out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const std::string at = "mix.parts[" + std::to_string(i) + "]";
    const double coef = detail::number(detail::member(parts[i], "coef", at), at + ".coef");
    out.push_back({coef, eigen_from_json(detail::member(parts[i], "eigen", at), at + ".eigen")});
  }
  return detail::build("mix.parts", [&] { return eigenid::EigenMix(dim, std::move(out)); });
}

inline json mix_to_json(const eigenid::EigenMix& mix) {
  json parts = json::array();
  for (const auto& p : mix.parts()) parts.push_back({{"coef", p.coef}, {"eigen", eigen_to_json(p.eigen)}});
  return {{"dim", mix.dim()}, {"parts", parts}};
}

// ---- CSV

/// Shortest round-trip decimal form; identical doubles print identically.
inline std::string fmt(double v) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::stod(buf) == v) break;
  }
  return buf;
}

inline std::string ball_csv_header() { return "seed,domain,dim,resolution,center,r_lower,r_upper,bound,ratio,pass"; }

/// Center coordinates are joined with ';' so the column count is fixed.
inline std::string ball_csv_row(const signsearch::SignBallReport& r) {
  std::string center;
  for (std::size_t i = 0; i < r.center.size(); ++i) {
    if (i) center += ';';
    center += fmt(r.center[i]);
  }
  std::string row = std::to_string(r.seed) + "," + r.domain + "," + std::to_string(r.dim) + "," +
                    std::to_string(r.resolution) + "," + center + "," + fmt(r.r_lower) + "," + fmt(r.r_upper) + "," +
                    fmt(r.bound) + "," + fmt(r.ratio) + "," + (r.pass ? "true" : "false");
  return row;
}

struct ResidualRow {
  std::string case_id;
  int n = 0;
  double lambda = 0.0;
  double r_or_t = 0.0;
  double residual = 0.0;
  double tol = 0.0;
  bool pass = false;
};

inline std::string residual_csv_header() { return "case,n,lambda,r_or_t,residual,tol,pass"; }

inline std::string residual_csv_row(const ResidualRow& r) {
  return r.case_id + "," + std::to_string(r.n) + "," + fmt(r.lambda) + "," + fmt(r.r_or_t) + "," + fmt(r.residual) +
         "," + fmt(r.tol) + "," + (r.pass ? "true" : "false");
}

inline json report_to_json(const signsearch::SignBallReport& r) {
  return {{"seed", r.seed},         {"domain", r.domain},   {"dim", r.dim},
          {"resolution", r.resolution}, {"center", r.center}, {"r_lower", r.r_lower},
          {"r_upper", r.r_upper},   {"bound", r.bound},     {"ratio", r.ratio},
          {"samples_used", r.samples_used}, {"constant_sign", r.constant_sign}, {"pass", r.pass}};
}

}  // namespace nodal::io

#pragma once

// Command runner behind the nodal_radius binary. Each command builds its
// instances, runs the checks and writes report.csv / report.json (plus
// residuals.csv and probes.csv when it produces those rows) into the output
// directory.
//
// Exit codes: 0 all checks passed, 1 a bound or identity check failed,
// 2 invalid input or configuration, 3 a quadrature did not reach its
// tolerance.

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "nodal/eigenid.hpp"
#include "nodal/errors.hpp"
#include "nodal/generators.hpp"
#include "nodal/io.hpp"
#include "nodal/signsearch.hpp"
#include "nodal/sphere.hpp"
#include "nodal/svg.hpp"
#include "nodal/torus.hpp"

namespace nodal::app {

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> names = {"analyze-trig", "analyze-sphere", "analyze-mix",
                                                 "verify-identity", "sharpness", "suite"};
  return names;
}

/// Tolerance names and defaults:
///   identity  residual threshold for verify-identity rows
///   quad      target accuracy of the Coulomb ball quadrature
inline std::map<std::string, double> default_tolerances() { return {{"identity", 1e-6}, {"quad", 1e-9}}; }

struct RunConfig {
  std::string command;
  std::optional<std::string> input_path;
  std::uint64_t seed = 1;
  std::map<std::string, double> tolerances = default_tolerances();
  int resolution = 256;
  std::string output_dir = "out";
  bool emit_svg = false;

  double tol(const std::string& name) const {
    const auto it = tolerances.find(name);
    return it == tolerances.end() ? default_tolerances().at(name) : it->second;
  }

  void validate() const {
    if (std::find(commands().begin(), commands().end(), command) == commands().end()) {
      throw ParseError("command", "unknown command '" + command + "'");
    }
    for (const auto& [name, v] : tolerances) {
      if (!default_tolerances().count(name)) throw ParseError("tol." + name, "unknown tolerance");
      if (!(v > 0.0) || !std::isfinite(v)) throw ParseError("tol." + name, "must be positive");
    }
    if (resolution < 16) throw ParseError("resolution", "must be >= 16");
    const bool needs_input = command.rfind("analyze-", 0) == 0 || command == "verify-identity";
    if (needs_input && !input_path) throw ParseError("input", "command '" + command + "' needs --input");
  }
};

struct ProbeRow {
  int a = 0;
  int b = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  double best = 0.0;
  double ceiling = 0.0;
  bool pass = false;
};

/// Everything a run produces, in emission order.
struct Outcome {
  std::vector<signsearch::SignBallReport> balls;
  std::vector<std::string> ball_kinds;  // which bound each ball row is checked against
  std::vector<io::ResidualRow> residuals;
  std::vector<ProbeRow> probes;
  std::vector<std::string> accuracy_failures;
  std::map<std::string, std::string> svgs;  // file name -> document

  bool all_passed() const {
    for (const auto& b : balls) {
      if (!b.pass) return false;
    }
    for (const auto& r : residuals) {
      if (!r.pass) return false;
    }
    for (const auto& p : probes) {
      if (!p.pass) return false;
    }
    return true;
  }
};

inline std::string probe_csv_header() { return "seed,A,B,trials,best,ceiling,pass"; }

inline std::string probe_csv_row(const ProbeRow& p) {
  return std::to_string(p.seed) + "," + std::to_string(p.a) + "," + std::to_string(p.b) + "," +
         std::to_string(p.trials) + "," + io::fmt(p.best) + "," + io::fmt(p.ceiling) + "," +
         (p.pass ? "true" : "false");
}

namespace detail {

inline void add_ball(Outcome& out, signsearch::VerifyResult v, std::uint64_t seed, const std::string& kind) {
  v.report.seed = seed;
  out.balls.push_back(std::move(v.report));
  out.ball_kinds.push_back(kind);
}

inline int grid_resolution(int d, int requested) { return d >= 3 ? std::min(requested, 96) : requested; }

inline void check_trig(Outcome& out, const torus::TrigPoly& f, int resolution, std::uint64_t seed, bool svg) {
  const auto dom = signsearch::SearchDomain::torus(f.dim(), resolution);
  auto base = signsearch::largest_signfree_ball(f, dom);
  add_ball(out, signsearch::finish_verify(base, torus::bound_kozma(f)), seed, "kozma");
  add_ball(out, signsearch::finish_verify(base, torus::bound_theorem1(f)), seed, "shell-sum");
  if (svg && f.dim() == 1) out.svgs["trace.svg"] = svg::trace_1d(torus::eval_grid(f, resolution));
  if (svg && f.dim() == 2) out.svgs["raster.svg"] = svg::raster_2d(torus::eval_grid(f, resolution), resolution);
}

inline void check_sphere(Outcome& out, const sphere::SphereFn& f, int resolution, std::uint64_t seed, bool svg) {
  if (f.dim() != 3) throw ParseError("spherefn.dim", "sphere search supports dim 3 only");
  const auto dom = signsearch::SearchDomain::sphere(3, resolution);
  auto fn = [&](std::span<const double> x) { return f.eval_unchecked(x); };
  add_ball(out, signsearch::verify_bound(fn, dom, sphere::bound_theorem2(f)), seed, "sphere");
  if (svg) out.svgs["mollweide.svg"] = svg::mollweide(fn);
}

inline void check_mix(Outcome& out, const eigenid::EigenMix& mix, int resolution, std::uint64_t seed, bool svg) {
  const double bound = eigenid::bound_theorem3(mix);
  const int d = mix.dim();
  const auto dom = signsearch::SearchDomain::box(std::vector<double>(d, 0.0), std::vector<double>(d, 2.0 * bound),
                                                 resolution);
  add_ball(out, signsearch::verify_bound(mix, dom, bound), seed, "eigen-mix");
  if (svg && d == 2) {
    std::vector<double> grid(static_cast<std::size_t>(resolution) * resolution);
    const double h = 2.0 * bound / (resolution - 1);
    for (int i = 0; i < resolution; ++i) {
      for (int j = 0; j < resolution; ++j) {
        const double p[2] = {i * h, j * h};
        grid[static_cast<std::size_t>(i) * resolution + j] = mix(std::span<const double>(p, 2));
      }
    }
    out.svgs["raster.svg"] = svg::raster_2d(grid, resolution);
  }
}

inline void check_identity(Outcome& out, const std::string& id, const eigenid::PlaneWaveEigen& phi,
                           const std::vector<double>& x, double r, const RunConfig& cfg) {
  try {
    const auto c = eigenid::verify_identity(phi, x, r, cfg.tol("quad"));
    const double tol = cfg.tol("identity");
    out.residuals.push_back({id, phi.dim(), phi.lambda(), r, c.residual, tol, c.residual <= tol});
  } catch (const AccuracyError& e) {
    out.accuracy_failures.push_back(id + ": " + e.what());
  }
}

inline void check_probe(Outcome& out, int a, int b, int trials, std::uint64_t seed) {
  const auto p = signsearch::sharpness_probe(a, b, trials, seed);
  out.probes.push_back({a, b, trials, seed, p.best, p.ceiling, p.best <= p.ceiling + std::ldexp(1.0, -12)});
}

inline void run_identity_file(Outcome& out, const io::json& doc, const RunConfig& cfg) {
  const auto& cases = io::detail::array(io::detail::member(doc, "cases", "identity"), "identity.cases");
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const std::string at = "identity.cases[" + std::to_string(i) + "]";
    const auto& c = cases[i];
    std::string id = "case" + std::to_string(i);
    if (c.is_object() && c.contains("id")) {
      if (!c["id"].is_string()) throw ParseError(at + ".id", "expected a string");
      id = c["id"].get<std::string>();
    }
    const auto phi = io::eigen_from_json(io::detail::member(c, "eigen", at), at + ".eigen");
    const auto x = io::detail::reals(io::detail::member(c, "x", at), at + ".x");
    const double r = io::detail::number(io::detail::member(c, "r", at), at + ".r");
    if (static_cast<int>(x.size()) != phi.dim()) throw ParseError(at + ".x", "dimension differs from eigen.dim");
    if (phi.dim() < 3) throw ParseError(at + ".eigen.dim", "identity needs dimension >= 3");
    if (!(r > 0.0)) throw ParseError(at + ".r", "must be positive");
    check_identity(out, id, phi, x, r, cfg);
  }
}

inline void run_sharpness(Outcome& out, const std::optional<io::json>& doc, std::uint64_t seed) {
  std::vector<std::pair<int, int>> cases = {{5, 0}, {5, 1}, {3, 2}};
  int trials = 20;
  if (doc) {
    if (doc->contains("trials")) trials = io::detail::integer((*doc)["trials"], "sharpness.trials");
    if (trials < 1) throw ParseError("sharpness.trials", "must be >= 1");
    if (doc->contains("cases")) {
      cases.clear();
      const auto& arr = io::detail::array((*doc)["cases"], "sharpness.cases");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string at = "sharpness.cases[" + std::to_string(i) + "]";
        const int a = io::detail::integer(io::detail::member(arr[i], "A", at), at + ".A");
        const int b = io::detail::integer(io::detail::member(arr[i], "B", at), at + ".B");
        if (a < 1) throw ParseError(at + ".A", "must be >= 1");
        if (b < 0) throw ParseError(at + ".B", "must be >= 0");
        cases.emplace_back(a, b);
      }
    }
  }
  for (const auto& [a, b] : cases) check_probe(out, a, b, trials, seed);
}

/// Seeded desk-scale run over every check family.
inline void run_suite(Outcome& out, const RunConfig& cfg) {
  Pcg32 rng(cfg.seed);
  for (int i = 0; i < 12; ++i) {
    const int d = 1 + i % 3;
    const int res = d == 3 ? std::min(cfg.resolution, 48) : cfg.resolution;
    check_trig(out, gen::random_trigpoly(rng, d), res, cfg.seed, false);
  }
  for (int i = 0; i < 6; ++i) check_sphere(out, gen::random_spherefn(rng), std::min(cfg.resolution, 128), cfg.seed, false);
  for (int i = 0; i < 6; ++i) {
    const int d = 2 + i % 2;
    check_mix(out, gen::random_mix(rng, d), d == 2 ? std::min(cfg.resolution, 128) : 32, cfg.seed, false);
  }
  for (int i = 0; i < 6; ++i) {
    const double lam = rng.uniform(0.5, 50.0);
    const auto phi = gen::random_eigen(rng, 3, lam);
    const auto x = gen::point_in_cube(rng, 3);
    const double r = rng.uniform(0.1, 4.0 * std::numbers::pi) / std::sqrt(lam);
    check_identity(out, "suite-" + std::to_string(i), phi, x, r, cfg);
  }
  check_probe(out, 5, 1, 5, cfg.seed);
}

inline std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline void write_csv(const std::filesystem::path& path, const std::string& header,
                      const std::vector<std::string>& rows) {
  std::ofstream f(path);
  f << "# generated " << timestamp() << "\n" << header << "\n";
  for (const auto& r : rows) f << r << "\n";
}

}  // namespace detail

/// Executes the command and returns the outcome without touching the disk.
inline Outcome execute(const RunConfig& cfg) {
  cfg.validate();
  Outcome out;
  std::optional<io::json> doc;
  if (cfg.input_path) doc = io::read_file(*cfg.input_path);
  try {
    if (cfg.command == "analyze-trig") {
      const auto f = io::trigpoly_from_json(*doc);
      detail::check_trig(out, f, detail::grid_resolution(f.dim(), cfg.resolution), cfg.seed, cfg.emit_svg);
    } else if (cfg.command == "analyze-sphere") {
      detail::check_sphere(out, io::spherefn_from_json(*doc), cfg.resolution, cfg.seed, cfg.emit_svg);
    } else if (cfg.command == "analyze-mix") {
      const auto mix = io::mix_from_json(*doc);
      detail::check_mix(out, mix, detail::grid_resolution(mix.dim(), cfg.resolution), cfg.seed, cfg.emit_svg);
    } else if (cfg.command == "verify-identity") {
      detail::run_identity_file(out, *doc, cfg);
    } else if (cfg.command == "sharpness") {
      detail::run_sharpness(out, doc, cfg.seed);
    } else {
      detail::run_suite(out, cfg);
    }
  } catch (const DomainError& e) {
    throw ParseError(cfg.command, e.what());
  }
  return out;
}

/// Writes the report files for `out` into cfg.output_dir.
inline void write_reports(const RunConfig& cfg, const Outcome& out) {
  namespace fs = std::filesystem;
  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  // files from an earlier run in the same directory would read as current
  for (const char* name : {"report.csv", "residuals.csv", "probes.csv", "report.json", "trace.svg", "raster.svg",
                           "mollweide.svg"}) {
    fs::remove(dir / name);
  }
  std::vector<std::string> rows;
  for (const auto& b : out.balls) rows.push_back(io::ball_csv_row(b));
  detail::write_csv(dir / "report.csv", io::ball_csv_header(), rows);
  if (!out.residuals.empty()) {
    rows.clear();
    for (const auto& r : out.residuals) rows.push_back(io::residual_csv_row(r));
    detail::write_csv(dir / "residuals.csv", io::residual_csv_header(), rows);
  }
  if (!out.probes.empty()) {
    rows.clear();
    for (const auto& p : out.probes) rows.push_back(probe_csv_row(p));
    detail::write_csv(dir / "probes.csv", probe_csv_header(), rows);
  }
  io::json j;
  j["command"] = cfg.command;
  j["seed"] = cfg.seed;
  j["resolution"] = cfg.resolution;
  j["tolerances"] = cfg.tolerances;
  j["balls"] = io::json::array();
  for (std::size_t i = 0; i < out.balls.size(); ++i) {
    auto b = io::report_to_json(out.balls[i]);
    b["bound_kind"] = out.ball_kinds[i];
    j["balls"].push_back(std::move(b));
  }
  j["residuals"] = io::json::array();
  for (const auto& r : out.residuals) {
    j["residuals"].push_back({{"case", r.case_id}, {"n", r.n}, {"lambda", r.lambda}, {"r_or_t", r.r_or_t},
                              {"residual", r.residual}, {"tol", r.tol}, {"pass", r.pass}});
  }
  j["probes"] = io::json::array();
  for (const auto& p : out.probes) {
    j["probes"].push_back({{"A", p.a}, {"B", p.b}, {"trials", p.trials}, {"best", p.best},
                           {"ceiling", p.ceiling}, {"pass", p.pass}});
  }
  j["accuracy_failures"] = out.accuracy_failures;
  j["pass"] = out.all_passed() && out.accuracy_failures.empty();
  std::ofstream(dir / "report.json") << j.dump(2) << "\n";
  for (const auto& [name, doc] : out.svgs) std::ofstream(dir / name) << doc;
}

/// Full run: execute, write reports, map the result to an exit code.
inline int run(const RunConfig& cfg, std::ostream& log) {
  Outcome out;
  try {
    out = execute(cfg);
  } catch (const ParseError& e) {
    log << "error: " << e.what() << "\n";
    return 2;
  }
  write_reports(cfg, out);
  if (!out.accuracy_failures.empty()) {
    log << "accuracy failures:\n";
    for (const auto& a : out.accuracy_failures) log << "  " << a << "\n";
    return 3;
  }
  if (!out.all_passed()) {
    log << "check failed; see " << (std::filesystem::path(cfg.output_dir) / "report.csv").string() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace nodal::app

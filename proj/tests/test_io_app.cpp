#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "nodal/app.hpp"
#include "nodal/generators.hpp"
#include "nodal/io.hpp"

using namespace nodal;
namespace fs = std::filesystem;

namespace {

std::string data(const std::string& name) { return std::string(NODAL_DATA_DIR) + "/" + name; }

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("nodal_io_app_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// File body without the timestamp line.
std::string body(const fs::path& p) {
  const std::string s = slurp(p);
  REQUIRE(s.rfind("# generated ", 0) == 0);
  return s.substr(s.find('\n') + 1);
}

std::string parse_field(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ParseError& e) {
    return e.field();
  }
  return "<no error>";
}

int run_quiet(app::RunConfig cfg) {
  std::ostringstream log;
  return app::run(cfg, log);
}

}  // namespace

TEST_CASE("TrigPoly json round trip", "[io]") {
  Pcg32 rng(3);
  for (int i = 0; i < 20; ++i) {
    const auto f = gen::random_trigpoly(rng, 1 + i % 3);
    const auto g = io::trigpoly_from_json(io::parse_text(io::trigpoly_to_json(f).dump()));
    CHECK(g.dim() == f.dim());
    CHECK(g.coeffs() == f.coeffs());
  }
}

TEST_CASE("SphereFn, eigenfunction and mix json round trips", "[io]") {
  Pcg32 rng(8);
  const auto s = gen::random_spherefn(rng);
  const auto s2 = io::spherefn_from_json(io::spherefn_to_json(s));
  REQUIRE(s2.terms().size() == s.terms().size());
  for (std::size_t i = 0; i < s.terms().size(); ++i) {
    CHECK(s2.terms()[i].degree == s.terms()[i].degree);
    CHECK(s2.terms()[i].pole == s.terms()[i].pole);
    CHECK(s2.terms()[i].weight == s.terms()[i].weight);
  }
  const auto mix = gen::random_mix(rng, 3);
  const auto m2 = io::mix_from_json(io::parse_text(io::mix_to_json(mix).dump()));
  REQUIRE(m2.parts().size() == mix.parts().size());
  const std::vector<double> x{0.3, -0.1, 0.7};
  CHECK(m2(x) == mix(x));
  const auto e = gen::random_eigen(rng, 4, 3.0);
  CHECK(io::eigen_to_json(io::eigen_from_json(io::eigen_to_json(e))) == io::eigen_to_json(e));
}

TEST_CASE("ParseError names the offending field", "[io][errors]") {
  CHECK(parse_field([] { io::parse_text("{\"dim\": 1, "); }) == "<document>");
  CHECK(parse_field([] { io::read_file("/nonexistent/file.json"); }) == "<file>");
  CHECK(parse_field([] { io::trigpoly_from_json(io::parse_text(R"({"terms": []})")); }) == "trigpoly.dim");
  CHECK(parse_field([] {
          io::trigpoly_from_json(io::parse_text(R"({"dim": 1, "terms": [{"k": [1], "re": 1}, {"k": [2], "re": "x"}]})"));
        }) == "trigpoly.terms[1].re");
  CHECK(parse_field([] { io::trigpoly_from_json(io::parse_text(R"({"dim": 1, "terms": [{"k": [0], "re": 1}]})")); }) ==
        "trigpoly.terms");
  CHECK(parse_field([] { io::spherefn_from_json(io::read_file(data("bad_pole.json"))); }) == "spherefn.terms[0]");
  CHECK(parse_field([] {
          io::mix_from_json(io::parse_text(
              R"({"dim": 2, "parts": [{"coef": 1, "eigen": {"dim": 2, "lambda": 1, "waves": [{"k": [1, 1]}]}}]})"));
        }) == "mix.parts[0].eigen");
  CHECK(parse_field([] {
          io::eigen_from_json(io::parse_text(R"({"dim": 3, "lambda": 1, "waves": [{"k": [1, 0, 0], "phase": []}]})"));
        }) == "eigen.waves[0].phase");
}

TEST_CASE("number formatting round-trips", "[io]") {
  Pcg32 rng(99);
  for (int i = 0; i < 2000; ++i) {
    const double v = std::ldexp(rng.uniform(-1.0, 1.0), rng.uniform_int(-40, 40));
    CHECK(std::stod(io::fmt(v)) == v);
  }
  CHECK(io::fmt(0.5) == "0.5");
  CHECK(io::fmt(0.1) == "0.1");
}

TEST_CASE("ball csv row layout", "[io]") {
  signsearch::SignBallReport r;
  r.seed = 7;
  r.domain = "torus";
  r.dim = 2;
  r.resolution = 64;
  r.center = {0.25, 0.5};
  r.r_lower = 0.1;
  r.r_upper = 0.125;
  r.bound = 0.2;
  r.ratio = 0.5;
  r.pass = true;
  CHECK(io::ball_csv_row(r) == "7,torus,2,64,0.25;0.5,0.1,0.125,0.2,0.5,true");
  CHECK(io::ball_csv_header() == "seed,domain,dim,resolution,center,r_lower,r_upper,bound,ratio,pass");
}

TEST_CASE("RunConfig validation", "[app][errors]") {
  app::RunConfig cfg;
  cfg.command = "frobnicate";
  CHECK(parse_field([&] { cfg.validate(); }) == "command");
  cfg.command = "analyze-trig";
  CHECK(parse_field([&] { cfg.validate(); }) == "input");
  cfg.command = "suite";
  cfg.tolerances["quad"] = -1.0;
  CHECK(parse_field([&] { cfg.validate(); }) == "tol.quad");
  cfg.tolerances = app::default_tolerances();
  cfg.tolerances["bogus"] = 1.0;
  CHECK(parse_field([&] { cfg.validate(); }) == "tol.bogus");
  cfg.tolerances = app::default_tolerances();
  cfg.resolution = 8;
  CHECK(parse_field([&] { cfg.validate(); }) == "resolution");
  cfg.resolution = 64;
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.tol("identity") == 1e-6);
  CHECK(cfg.tol("quad") == 1e-9);
}

TEST_CASE("exit codes", "[app]") {
  app::RunConfig cfg;
  cfg.output_dir = scratch("codes").string();
  cfg.command = "analyze-trig";
  cfg.input_path = data("cos5.json");
  cfg.resolution = 512;
  CHECK(run_quiet(cfg) == 0);
  cfg.input_path = data("malformed.json");
  CHECK(run_quiet(cfg) == 2);
  cfg.command = "analyze-sphere";
  cfg.input_path = data("bad_pole.json");
  CHECK(run_quiet(cfg) == 2);
  cfg.command = "verify-identity";
  cfg.input_path = data("identity_n3.json");
  CHECK(run_quiet(cfg) == 0);
  cfg.tolerances["identity"] = 1e-20;
  CHECK(run_quiet(cfg) == 1);
  cfg.tolerances = app::default_tolerances();
  cfg.tolerances["quad"] = 1e-300;
  CHECK(run_quiet(cfg) == 3);
}

TEST_CASE("analyze-trig writes both bound rows", "[app]") {
  app::RunConfig cfg;
  cfg.output_dir = scratch("trig").string();
  cfg.command = "analyze-trig";
  cfg.input_path = data("cos5.json");
  cfg.resolution = 512;
  const auto out = app::execute(cfg);
  REQUIRE(out.balls.size() == 2);
  CHECK(out.ball_kinds[0] == "kozma");
  CHECK(out.ball_kinds[1] == "shell-sum");
  CHECK_THAT(out.balls[0].ratio, Catch::Matchers::WithinAbs(0.5, 1e-8));
  CHECK_THAT(out.balls[1].bound, Catch::Matchers::WithinAbs(0.2, 1e-15));
  app::write_reports(cfg, out);
  const auto j = io::read_file((fs::path(cfg.output_dir) / "report.json").string());
  CHECK(j["balls"].size() == 2);
  CHECK(j["pass"].get<bool>());
}

TEST_CASE("stale report files are removed", "[app]") {
  app::RunConfig cfg;
  cfg.output_dir = scratch("stale").string();
  cfg.command = "sharpness";
  cfg.input_path = data("sharpness.json");
  REQUIRE(run_quiet(cfg) == 0);
  REQUIRE(fs::exists(fs::path(cfg.output_dir) / "probes.csv"));
  cfg.command = "analyze-trig";
  cfg.input_path = data("cos5.json");
  REQUIRE(run_quiet(cfg) == 0);
  CHECK_FALSE(fs::exists(fs::path(cfg.output_dir) / "probes.csv"));
  CHECK(fs::exists(fs::path(cfg.output_dir) / "report.csv"));
}

TEST_CASE("svg output", "[app]") {
  app::RunConfig cfg;
  cfg.output_dir = scratch("svg").string();
  cfg.command = "analyze-mix";
  cfg.input_path = data("mix2d.json");
  cfg.resolution = 64;
  cfg.emit_svg = true;
  CHECK(run_quiet(cfg) == 0);
  const std::string svg = slurp(fs::path(cfg.output_dir) / "raster.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("reports are deterministic apart from the timestamp", "[app][property]") {
  for (const auto& [cmd, input] : std::vector<std::pair<std::string, std::string>>{
           {"analyze-trig", "trig2d.json"}, {"verify-identity", "identity_n3.json"}, {"sharpness", "sharpness.json"}}) {
    app::RunConfig cfg;
    cfg.command = cmd;
    cfg.input_path = data(input);
    cfg.resolution = 128;
    cfg.seed = 42;
    cfg.output_dir = scratch("det_a").string();
    REQUIRE(run_quiet(cfg) == 0);
    const fs::path a = cfg.output_dir;
    cfg.output_dir = scratch("det_b").string();
    REQUIRE(run_quiet(cfg) == 0);
    const fs::path b = cfg.output_dir;
    for (const char* f : {"report.csv", "residuals.csv", "probes.csv"}) {
      if (!fs::exists(a / f)) continue;
      CHECK(body(a / f) == body(b / f));
    }
  }
}

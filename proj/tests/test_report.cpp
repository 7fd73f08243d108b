#include <doctest.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "pklab/suites.hpp"

using namespace pklab;

namespace {

SuiteConfig quick(const std::string& suite) {
  SuiteConfig c;
  c.suite = suite;
  c.seed = 11;
  c.samples = 5;
  return c;
}

int lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("report survives a JSON round trip, including non-finite values") {
  SuiteConfig c = quick("kns-roundtrip");
  Recorder rec(c);
  rec.check("finite", "plumbing", 1e-12, Relation::at_most, 1e-10);
  rec.check("infinite", "plumbing", INFINITY, Relation::at_most, 1.0, {{"x", 1}});
  rec.measure("m", -2.5, "note");
  rec.profile({"p", {"a", "b"}, {{1.0, 2.0}, {3.0, 4.0}}});
  const SuiteReport r = std::move(rec).finish("kns-roundtrip");
  CHECK(r.checks[1].status == Status::fail);
  CHECK(r.checks[1].witness["x"] == 1);
  CHECK(r.checks[0].witness.is_null());
  const SuiteReport back = report_from_json(nlohmann::json::parse(emit_json(r)));
  CHECK(std::isinf(back.checks[1].value));
  CHECK(emit_json(back) == emit_json(r));
  CHECK(config_from_json(to_json(c)) == c);
}

TEST_CASE("CSV has a header and one row per check") {
  const auto r = run_suite(quick("trace-inequality"));
  const std::string csv = emit_csv(r);
  CHECK(lines(csv) == static_cast<int>(r.checks.size()) + 1);
  CHECK(csv.starts_with("suite,name,anchor,status,value,relation,threshold,override\n"));
}

TEST_CASE("config file parsing") {
  std::istringstream in(
      "# comment\n[suite]\nname = geodesics\nseed = 18446744073709551615\nn = 3\nsamples = 4\ngrid = 32\n"
      "[tolerances]\ngeodesics.theta-tt = 1e-6  # looser\ntrace.inequality[n=2] = -1e-9\n"
      "[model]\nfamily = perturbed-torus\neps = 0.01\n");
  const SuiteConfig c = parse_config(in);
  CHECK(c.suite == "geodesics");
  CHECK(c.seed == 18446744073709551615ull);
  CHECK(c.n == 3);
  CHECK(c.samples == 4);
  CHECK(c.grid == 32);
  CHECK(c.tolerances.at("geodesics.theta-tt") == 1e-6);
  CHECK(c.tolerances.at("trace.inequality[n=2]") == -1e-9);
  CHECK(c.model == "perturbed-torus");
  CHECK(c.model_params.at("eps") == 0.01);
  CHECK(config_from_json(to_json(c)) == c);

  for (const char* bad : {"[suite]\nseed = -1\n", "[suite]\nn = two\n", "[other]\n", "name = x\n", "[suite]\ncolour = red\n",
                          "[tolerances]\nx = abc\n", "[model]\neps = small\n"}) {
    std::istringstream b(bad);
    CHECK_THROWS_AS(parse_config(b), ConfigError);
  }
}

TEST_CASE("tolerance overrides may only loosen and must name a check") {
  SuiteConfig c = quick("trace-inequality");
  c.n = 2;
  c.tolerances["trace.inequality[n=2]"] = -1e-6;
  const auto r = run_suite(c);
  const auto it = std::find_if(r.checks.begin(), r.checks.end(), [](const auto& x) { return x.name == "trace.inequality[n=2]"; });
  REQUIRE(it != r.checks.end());
  CHECK(it->override);
  CHECK(it->threshold == -1e-6);

  c.tolerances["trace.inequality[n=2]"] = 0.0;
  CHECK_THROWS_AS(run_suite(c), ConfigError);
  c.tolerances.clear();
  c.tolerances["no.such.check"] = 1.0;
  CHECK_THROWS_AS(run_suite(c), ConfigError);
}

TEST_CASE("invalid suite parameters are rejected before running") {
  CHECK_THROWS_AS(run_suite(quick("nope")), ConfigError);
  auto c = quick("burns-bounds");
  c.n = 0;
  CHECK_THROWS_AS(run_suite(c), ConfigError);
  c = quick("elliptic");
  c.grid = 7;
  CHECK_THROWS_AS(run_suite(c), ConfigError);
  c = quick("higgs");
  c.samples = 0;
  CHECK_THROWS_AS(run_suite(c), ConfigError);
}

TEST_CASE("same config gives byte-identical reports; seed changes the draws") {
  for (const char* s : {"kns-roundtrip", "trace-inequality", "geodesics", "projbundle"}) {
    const auto a = run_suite(quick(s)), b = run_suite(quick(s));
    CHECK(emit_json(a) == emit_json(b));
  }
  auto other = quick("kns-roundtrip");
  other.seed = 12;
  CHECK(emit_json(run_suite(other)) != emit_json(run_suite(quick("kns-roundtrip"))));
}

TEST_CASE("a failing check marks the report failed") {
  SuiteConfig c = quick("x");
  Recorder rec(c);
  rec.require("ok", "plumbing", true);
  rec.check("bad", "plumbing", 0.5, Relation::at_least, 1.0);
  rec.check("nan", "plumbing", std::nan(""), Relation::at_most, 1.0);
  const auto r = std::move(rec).finish("x");
  CHECK_FALSE(r.passed());
  CHECK(r.failures() == 2);
}

TEST_CASE("profiles are exported as labeled columns") {
  auto c = quick("geodesics");
  const auto r = run_suite(c);
  REQUIRE(r.profiles.size() == 1);
  const std::string csv = emit_profile_csv(r.profiles[0]);
  CHECK(csv.starts_with("h,geodesic_residual,linear_residual\n"));
  CHECK(lines(csv) == 5);
}

TEST_CASE("model selection from the config") {
  auto c = quick("schumacher");
  c.model = "elliptic";
  const auto r = run_suite(c);
  CHECK(r.passed());
  CHECK(r.config.model == "elliptic");

  c.model = "perturbed-torus";
  c.model_params["eps"] = 0.01;
  CHECK(run_suite(c).passed());
  c.model_params["eps"] = 0.04;  // fiber metric would lose positivity
  CHECK_THROWS_AS(run_suite(c), ConfigError);
  c.model = "elliptic";
  c.model_params["eps"] = 0.01;  // the elliptic family has no parameters
  CHECK_THROWS_AS(run_suite(c), ConfigError);
  c.model_params.clear();
  c.model = "klein-bottle";
  CHECK_THROWS_AS(run_suite(c), ConfigError);

  auto other = quick("geodesics");
  other.model = "elliptic";
  CHECK_THROWS_AS(run_suite(other), ConfigError);
}

TEST_CASE("documented example configs") {
  SuiteConfig kns{"kns-roundtrip", 7, 2, 100, {}, 64, {}, {}};
  CHECK(run_suite(kns).passed());
  SuiteConfig burns{"burns-bounds", 7, 1, 100, {}, 64, {}, {}};
  const auto r = run_suite(burns);
  const auto it = std::find_if(r.checks.begin(), r.checks.end(), [](const auto& c) { return c.name == "burns.holomorphic-sectional[n=1]"; });
  REQUIRE(it != r.checks.end());
  CHECK(it->value <= -2.0 + 1e-3);
}

TEST_CASE("every anchor appears in the README result index") {
  std::ifstream in(PKLAB_README);
  REQUIRE(in);
  const std::string readme((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  SuiteConfig c = quick("all");
  c.samples = 2;
  std::set<std::string> anchors;
  for (const auto& ch : run_suite(c).checks) anchors.insert(ch.anchor);
  CHECK(anchors.size() > 30);
  anchors.erase("plumbing");
  for (const auto& a : anchors) {
    INFO(a);
    CHECK(readme.find("| " + a + " |") != std::string::npos);
  }
}

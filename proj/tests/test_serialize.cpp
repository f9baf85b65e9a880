#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstring>
#include <numbers>

#include "enteq/runconfig.hpp"
#include "enteq/serialize.hpp"

using namespace enteq;
using enteq::io::json;

TEST_CASE("mult function JSON uses the exact field names") {
  CHECK(io::mult_to_json(MultFn::zero_map(2)).dump() == R"({"kind":"zero"})");
  const json j = io::mult_to_json(MultFn::power({1.5, 0}));
  CHECK(j.at("kind") == "power");
  CHECK(j.at("alpha").get<std::vector<double>>() ==
        std::vector<double>{1.5, 0});

  const MultFn back = io::mult_from_json(j, 2);
  CHECK(back.exponents() == std::vector<double>{1.5, 0});
  CHECK(io::mult_from_json(json::parse(R"({"kind":"zero"})"), 3).is_zero());
  CHECK_THROWS_AS(io::mult_from_json(json::parse(R"({"kind":"what"})"), 1),
                  ConstraintError);
  CHECK_THROWS_AS(
      io::mult_from_json(json::parse(R"({"kind":"power","alpha":[1]})"), 2),
      DimensionError);
}

TEST_CASE("log function JSON") {
  const json j = io::log_to_json(LogFn({2, -1}));
  CHECK(j.dump() == R"({"coeffs":[2.0,-1.0]})");
  CHECK(io::log_from_json(j, 2).coeffs() == std::vector<double>{2, -1});
}

TEST_CASE("psi JSON round trip") {
  const PsiFn kinds[] = {PsiFn::constant(-1.5), PsiFn::linear({1, -1}),
                         PsiFn::neg_x_log_x(2.0),
                         PsiFn::expression("ln(s[0]) + s[1]", 2)};
  for (const PsiFn& p : kinds) {
    const PsiFn q = io::psi_from_json(io::psi_to_json(p), 2);
    CHECK(q.kind() == p.kind());
    const PosVec s = PosVec::strict({0.7, 2.3});
    CHECK(q(s) == p(s));
  }
}

TEST_CASE("descriptor round trip for every case") {
  const TriSolution fs[] = {
      TriSolution::shannon(2.0),
      TriSolution::case_projection(MultFn::power({0, 1}), LogFn({2, -1}),
                                   PsiFn::constant(0.0)),
      TriSolution::case_one(1, PsiFn::expression("ln(s[0])", 1)),
      TriSolution::case_other(MultFn::power({2}), 1.5, PsiFn::constant(-1.5)),
      TriSolution::case_zero_mu(LogFn::natural(2), PsiFn::constant(4.0)),
      TriSolution::user_expr("x[0]+y[0]+z[0]", 1)};
  for (const TriSolution& f : fs) {
    const json j = io::solution_to_json(f);
    CHECK(j.at("k").get<std::size_t>() == f.dim());
    const TriSolution g = io::solution_from_json(j);
    CHECK(g.kind() == f.kind());
    CHECK(g.dim() == f.dim());
    // same values at a strictly positive probe point
    std::vector<double> ones(f.dim(), 1.25);
    const PosVec p = PosVec::strict(ones);
    CHECK(f(p, p, p) == g(p, p, p));
  }
}

TEST_CASE("descriptor loading policies") {
  // psi(s) = s violates the mu == 1 normalization
  const json broken = json::parse(
      R"({"k":1,"case":"one","psi":{"kind":"linear","a":[1.0]}})");
  CHECK_THROWS_AS(io::solution_from_json(broken), ConstraintError);
  CHECK_NOTHROW(
      io::solution_from_json(broken, io::ConstraintPolicy::Permit));

  CHECK_THROWS_AS(io::solution_from_json(json::parse(R"({"k":1})")),
                  ConstraintError);
  CHECK_THROWS_AS(
      io::solution_from_json(json::parse(R"({"k":0,"case":"shannon"})")),
      ConstraintError);
  CHECK_THROWS_AS(
      io::solution_from_json(json::parse(R"({"k":1,"case":"nope"})")),
      ConstraintError);
  CHECK_THROWS_AS(
      io::solution_from_json(json::parse(R"({"k":2,"case":"shannon"})")),
      ConstraintError);
}

TEST_CASE("17-digit floats round-trip exactly") {
  const double values[] = {0.1,
                           1.0 / 3.0,
                           -std::numbers::pi,
                           1e-300,
                           -1.2345678901234567e300,
                           5e-324,
                           0.0,
                           123456789.12345679};
  for (const double v : values) {
    const std::string s = io::format17(v);
    const double back = std::strtod(s.c_str(), nullptr);
    CHECK(std::memcmp(&back, &v, sizeof v) == 0);
  }
}

TEST_CASE("report text carries the spec'd fields and parses back exactly") {
  ResidualReport r;
  r.equation = "modified";
  r.samples = 1000;
  r.max_abs_residual = 1.0 / 3.0;
  r.mean_abs_residual = 1e-17;
  r.argmax_index = 7;
  r.argmax_point = {{0.1, 0.2}, {1.5, 2.5}, {3.0, 4.0}};
  r.tolerance = 1e-9;
  r.pass = false;
  r.seed = 42;

  CheckOutcome outcome;
  outcome.primary = r;
  outcome.pass = false;
  RunConfig config;
  config.spec.k = 2;
  config.spec.count = 1000;
  config.spec.seed = 42;
  config.equation = "modified";
  config.descriptor_path = "x.json";

  const json desc = json::parse(R"({"k":2,"case":"one",
      "psi":{"kind":"const","c":0.0}})");
  const std::string text = io::report_to_text(outcome, config, desc);
  const json parsed = json::parse(text);

  for (const char* field :
       {"equation", "samples", "max_abs_residual", "mean_abs_residual",
        "argmax", "tolerance", "pass", "seed", "config", "descriptor",
        "version"})
    CHECK(parsed.contains(field));

  CHECK(parsed.at("max_abs_residual").get<double>() == r.max_abs_residual);
  CHECK(parsed.at("mean_abs_residual").get<double>() == r.mean_abs_residual);
  CHECK(parsed.at("pass").get<bool>() == false);
  CHECK(parsed.at("argmax").at(1).at(1).get<double>() == 2.5);
  CHECK(parsed.at("config").at("seed").get<std::uint64_t>() == 42);
  CHECK(parsed.at("descriptor").at("case").get<std::string>() == "one");

  const RunConfig rc = io::config_from_json(parsed.at("config"));
  CHECK(rc.spec.count == config.spec.count);
  CHECK(rc.spec.seed == config.spec.seed);
  CHECK(rc.equation == config.equation);
  CHECK(region_name(rc.spec.region) == std::string("cone"));
}

TEST_CASE("witness and classification writers emit valid JSON") {
  Witness w;
  w.claim = "mult-symmetry";
  w.found = true;
  w.point = {{0.25}};
  w.violation = 0.5;
  w.samples_searched = 100;
  w.seed = 3;
  const json jw = json::parse(io::witness_to_text(w));
  CHECK(jw.at("claim") == "mult-symmetry");
  CHECK(jw.at("found") == true);
  CHECK(jw.at("violation").get<double>() == 0.5);

  Classification c;
  c.kind = "other";
  c.alpha = 3.0;
  c.b = 2.0;
  c.fit_residual = 1e-12;
  c.note = "quote\" and \\backslash";
  const json jc = json::parse(io::classification_to_text(c));
  CHECK(jc.at("case") == "other");
  CHECK(jc.at("alpha").at(0).get<double>() == 3.0);
  CHECK(jc.at("note").get<std::string>() == c.note);
}

TEST_CASE("numeric list parsing") {
  CHECK(io::parse_double_list("1,2.5,-3e2") ==
        std::vector<double>{1, 2.5, -300});
  CHECK(io::parse_double_list("7") == std::vector<double>{7});
  CHECK_THROWS_AS(io::parse_double_list("1,,2"), ConstraintError);
  CHECK_THROWS_AS(io::parse_double_list("1,abc"), ConstraintError);
}

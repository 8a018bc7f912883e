#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spectra/io.hpp"

using namespace spectra;
using io::json;

TEST_CASE("parse_matrix_function variants") {
  const MatrixFunction c =
      io::parse_matrix_function(json::parse(R"({"constant": [[2.0, 0.0], [0.0, 3.0]]})"), 2);
  CHECK(c(0.5)(1, 1) == 3.0);

  const MatrixFunction s = io::parse_matrix_function(json(4.5), 1);
  CHECK(s(0.0)(0, 0) == 4.5);

  const MatrixFunction pw = io::parse_matrix_function(
      json::parse(R"({"piecewise": {"breaks": [0.5], "values": [[[0.0]], [[1.0]]]}})"), 1);
  CHECK(pw(0.25)(0, 0) == 0.0);
  CHECK(pw(0.75)(0, 0) == 1.0);

  const MatrixFunction sa = io::parse_matrix_function(
      json::parse(R"({"sampled": {"values": [[[0.0]], [[1.0]]]}})"), 1);
  CHECK(sa(0.5)(0, 0) == doctest::Approx(0.5));

  CHECK_THROWS_AS(io::parse_matrix_function(json::parse(R"({"constant": [[1.0, 0.0]]})"), 2),
                  io::ConfigError);
  CHECK_THROWS_AS(io::parse_matrix_function(json::parse(R"({"constant": [[1.0]]})"), 2),
                  io::ConfigError);
  CHECK_THROWS_AS(io::parse_matrix_function(json::parse(R"({"weird": 1})"), 1),
                  io::ConfigError);
}

TEST_CASE("parse_problem covers every kind") {
  const json so = json::parse(R"({
    "kind": "second_order", "n": 1,
    "Lambda": {"constant": [[1.0]]},
    "B": {"constant": [[15.0]]},
    "bc": {"type": "sturm_liouville", "alpha": 0.0, "beta": 3.141592653589793}
  })");
  const io::ProblemFile pf = io::parse_problem(so);
  CHECK(std::holds_alternative<SecondOrderProblem>(pf.tmpl));

  const json fo = json::parse(R"({
    "kind": "first_order", "n": 1,
    "B": {"constant": [[0.0, 0.0], [0.0, 0.0]]},
    "bc": {"type": "bolza", "alpha": 0.0, "beta": 3.141592653589793}
  })");
  CHECK(std::holds_alternative<FirstOrderProblem>(io::parse_problem(fo).tmpl));

  const json el = json::parse(R"({
    "kind": "elliptic",
    "geometry": {"rectangle": {"L1": 1.0, "L2": 2.0}},
    "b": {"constant": 5.0}
  })");
  const io::ProblemFile ep = io::parse_problem(el);
  REQUIRE(std::holds_alternative<EllipticProblem>(ep.tmpl));
  const auto& rect =
      std::get<Rectangle>(std::get<EllipticProblem>(ep.tmpl).geometry);
  CHECK(rect.L2 == 2.0);
}

TEST_CASE("parse_problem reads optional sections") {
  const json j = json::parse(R"({
    "kind": "second_order", "n": 1,
    "Lambda": {"constant": [[1.0]]},
    "B": {"constant": [[10.0]]},
    "bc": {"type": "generalized_periodic", "M": [[-1.0]], "N": [[-1.0]]},
    "B1": 10.0, "B2": 80.0, "Bbar": 0.0,
    "theorem": "3.5",
    "asserts": {"bounded_difference": true},
    "nonlinearity": {"name": "example311", "params": {"B1": 10.0, "B2": 80.0}}
  })");
  const io::ProblemFile pf = io::parse_problem(j);
  REQUIRE(pf.B1.has_value());
  REQUIRE(pf.B2.has_value());
  REQUIRE(pf.Bbar.has_value());
  CHECK((*pf.B2)(0.0)(0, 0) == 80.0);
  CHECK(pf.theorem == "3.5");
  CHECK(pf.assert_bounded_difference);
  CHECK_FALSE(pf.assert_convex_after_shift);
  REQUIRE(pf.nonlinear.has_value());
  Vector x(1);
  x << 0.0;
  CHECK(pf.nonlinear->f.force(0.0, x).norm() == 0.0);
}

TEST_CASE("parse_problem rejects malformed documents") {
  CHECK_THROWS_AS(io::parse_problem(json::parse(R"({"n": 1})")), io::ConfigError);
  CHECK_THROWS_AS(io::parse_problem(json::parse(R"({"kind": "wave"})")), io::ConfigError);
  // Validation failures surface as ConfigError too.
  CHECK_THROWS_AS(io::parse_problem(json::parse(R"({
    "kind": "second_order", "n": 1,
    "Lambda": {"constant": [[-1.0]]},
    "B": {"constant": [[0.0]]},
    "bc": {"type": "sturm_liouville", "alpha": 0.0, "beta": 3.141592653589793}
  })")),
                  io::ConfigError);
  // Nonlinearities need a second-order template.
  CHECK_THROWS_AS(io::parse_problem(json::parse(R"({
    "kind": "elliptic",
    "geometry": {"interval": {"length": 1.0}},
    "b": {"constant": 0.0},
    "nonlinearity": {"name": "linear", "params": {"Bhat": 1.0}}
  })")),
                  io::ConfigError);
}

TEST_CASE("reports carry the expected fields") {
  IndexResult r;
  r.index = 2;
  r.nu = 1;
  r.crossings = {{-3.5, 1}, {-1.0, 1}};
  r.anchor_name = "lambda_min";
  r.anchor_value = -20.0;
  r.validation_method = "galerkin_fd";
  r.validated = true;
  const json jr = io::report(r);
  CHECK(jr["index"] == 2);
  CHECK(jr["nu"] == 1);
  CHECK(jr["crossings"].size() == 2);
  CHECK(jr["validation"]["validated"] == true);

  const std::string csv = io::crossings_csv(r);
  CHECK(csv.find("parameter,multiplicity") == 0);
  CHECK(csv.find("-3.5,1") != std::string::npos);

  CertificateReport cr;
  cr.theorem = "3.10";
  cr.hypotheses.push_back({"nu(B2) = 0", "B2: (2, 0)", HypothesisRecord::Status::Pass});
  cr.verdict = CertificateReport::Verdict::Certified;
  const json jc = io::report(cr);
  CHECK(jc["verdict"] == "certified");
  CHECK(jc["hypotheses"][0]["status"] == "pass");
}

TEST_CASE("the bundled worked examples parse and load") {
  const std::string base = std::string(SPECTRA_SOURCE_DIR) + "/docs/problems/";
  for (const char* name :
       {"dirichlet_basic.json", "antiperiodic_existence.json",
        "rectangle_mode_gap.json"}) {
    const json j = io::load_file(base + name);
    CHECK_NOTHROW(io::parse_problem(j));
  }
  const io::ProblemFile ap =
      io::parse_problem(io::load_file(base + "antiperiodic_existence.json"));
  CHECK(ap.theorem == "3.10");
  CHECK(ap.nonlinear.has_value());

  CHECK_THROWS_AS(io::load_file(base + "missing.json"), io::ConfigError);
}

#pragma once

#include "spectra/nonlinear.hpp"
#include "spectra/oracles.hpp"

#include <json.hpp>

namespace spectra::io {

using json = nlohmann::ordered_json;

/// Parsed contents of a problem file: the linear template, plus whatever
/// optional sections (coefficient pairs, nonlinearity, certification flags)
/// the file carries.
struct ProblemFile {
  LinearTemplate tmpl;
  std::optional<MatrixFunction> B1, B2, Bbar, B0;
  std::optional<NonlinearProblem> nonlinear;
  bool assert_bounded_difference = false;
  bool assert_convex_after_shift = false;
  bool assert_sublinear_remainder = false;
  std::string theorem;  // optional default for certify
};

/// Throws ConfigError on any schema violation.
struct ConfigError : Error {
  using Error::Error;
};

MatrixFunction parse_matrix_function(const json& j, int expected_dim);
ProblemFile parse_problem(const json& j);
json load_file(const std::string& path);

/// Named built-in nonlinearities usable from problem files.
Nonlinearity make_nonlinearity(const std::string& name, const json& params,
                               const SecondOrderProblem& linear);

json report(const IndexResult& r);
json report(const NullityResult& r);
json report(const CertificateReport& r);
json report(const Solution& r);
json report(const OracleResult& r);

/// Crossing table as CSV lines (parameter, multiplicity).
std::string crossings_csv(const IndexResult& r);

}  // namespace spectra::io

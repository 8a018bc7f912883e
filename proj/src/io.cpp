#include "spectra/io.hpp"

#include <cmath>
#include <fstream>

namespace spectra::io {

namespace {

Matrix parse_matrix(const json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("matrix: expected array of rows");
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j[0].size());
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (static_cast<int>(j[r].size()) != cols) {
      throw ConfigError("matrix: ragged rows");
    }
    for (int c = 0; c < cols; ++c) {
      if (!j[r][c].is_number()) throw ConfigError("matrix: nonnumeric entry");
      m(r, c) = j[r][c].get<double>();
    }
  }
  return m;
}

double parse_angle(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) {
    throw ConfigError(std::string("bc: missing numeric angle ") + key);
  }
  return j[key].get<double>();
}

ScalarField parse_field(const json& j) {
  if (j.contains("constant")) {
    if (!j["constant"].is_number()) throw ConfigError("b: constant must be a number");
    return ScalarField::constant(j["constant"].get<double>());
  }
  if (j.contains("sampled1d")) {
    std::vector<double> v = j["sampled1d"].get<std::vector<double>>();
    return ScalarField::sampled1d(std::move(v));
  }
  if (j.contains("sampled2d")) {
    return ScalarField::sampled2d(parse_matrix(j["sampled2d"]));
  }
  throw ConfigError("b: expected constant | sampled1d | sampled2d");
}

SecondOrderBC parse_second_order_bc(const json& j, int n) {
  if (!j.contains("type")) throw ConfigError("bc: missing type");
  const std::string type = j["type"].get<std::string>();
  if (type == "sturm_liouville") {
    return SturmLiouville{parse_angle(j, "alpha"), parse_angle(j, "beta")};
  }
  if (type == "generalized_periodic") {
    if (!j.contains("M") || !j.contains("N")) {
      throw ConfigError("bc: generalized_periodic needs M and N");
    }
    const Matrix M = parse_matrix(j["M"]);
    const Matrix N = parse_matrix(j["N"]);
    if (M.rows() != n || N.rows() != n) throw ConfigError("bc: M/N dimension mismatch");
    return GeneralizedPeriodic{M, N};
  }
  throw ConfigError("bc: unknown second-order type " + type);
}

FirstOrderBC parse_first_order_bc(const json& j, int two_n) {
  if (!j.contains("type")) throw ConfigError("bc: missing type");
  const std::string type = j["type"].get<std::string>();
  if (type == "bolza") {
    return Bolza{parse_angle(j, "alpha"), parse_angle(j, "beta")};
  }
  if (type == "symplectic") {
    if (!j.contains("P")) throw ConfigError("bc: symplectic needs P");
    const Matrix P = parse_matrix(j["P"]);
    if (P.rows() != two_n) throw ConfigError("bc: P dimension mismatch");
    return Symplectic{P};
  }
  throw ConfigError("bc: unknown first-order type " + type);
}

std::optional<MatrixFunction> maybe_matrix_function(const json& j, const char* key,
                                                    int dim) {
  if (!j.contains(key)) return std::nullopt;
  return parse_matrix_function(j[key], dim);
}

json json_crossings(const std::vector<Crossing>& cs) {
  json arr = json::array();
  for (const auto& c : cs) {
    arr.push_back({{"parameter", c.parameter}, {"multiplicity", c.multiplicity}});
  }
  return arr;
}

json json_tolerances(const SweepTolerances& t) {
  return {{"rank_tol", t.rank_tol},
          {"crossing_accept", t.crossing_accept},
          {"localization", t.localization},
          {"grid_per_unit", t.grid_per_unit}};
}

}  // namespace

MatrixFunction parse_matrix_function(const json& j, int expected_dim) {
  auto check = [&](const Matrix& m) {
    if (expected_dim > 0 && m.rows() != expected_dim) {
      throw ConfigError("matrix function: dimension mismatch");
    }
    if (m.rows() != m.cols()) throw ConfigError("matrix function: not square");
  };
  try {
    if (j.is_number()) {  // scalar shorthand for 1x1
      return MatrixFunction::constant(Matrix::Constant(1, 1, j.get<double>()));
    }
    if (j.contains("constant")) {
      Matrix m = parse_matrix(j["constant"]);
      check(m);
      return MatrixFunction::constant(std::move(m));
    }
    if (j.contains("piecewise")) {
      const json& pw = j["piecewise"];
      if (!pw.contains("breaks") || !pw.contains("values")) {
        throw ConfigError("piecewise: needs breaks and values");
      }
      std::vector<double> breaks = pw["breaks"].get<std::vector<double>>();
      std::vector<Matrix> values;
      for (const auto& v : pw["values"]) {
        values.push_back(parse_matrix(v));
        check(values.back());
      }
      return MatrixFunction::piecewise(std::move(breaks), std::move(values));
    }
    if (j.contains("sampled")) {
      std::vector<Matrix> values;
      for (const auto& v : j["sampled"]["values"]) {
        values.push_back(parse_matrix(v));
        check(values.back());
      }
      return MatrixFunction::sampled(std::move(values));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("matrix function: ") + e.what());
  }
  throw ConfigError("matrix function: expected constant | piecewise | sampled");
}

Nonlinearity make_nonlinearity(const std::string& name, const json& params,
                               const SecondOrderProblem& linear) {
  const int n = linear.Lambda.dim();
  Nonlinearity f;
  if (name == "linear") {
    const MatrixFunction Bhat = parse_matrix_function(params.at("Bhat"), n);
    Vector h = Vector::Zero(n);
    if (params.contains("h")) {
      const auto hv = params["h"].get<std::vector<double>>();
      if (static_cast<int>(hv.size()) != n) throw ConfigError("nonlinearity: h size");
      for (int i = 0; i < n; ++i) h(i) = hv[i];
    }
    f.force = [Bhat, h](double t, const Vector& x) -> Vector { return Bhat(t) * x + h; };
    f.jacobian = [Bhat](double t, const Vector&) -> Matrix { return Bhat(t); };
    f.slope = [Bhat](double t, const Vector&) -> Matrix { return Bhat(t); };
    f.remainder = [h](double, const Vector&) -> Vector { return h; };
    return f;
  }
  if (name == "example311") {
    const MatrixFunction B1 = parse_matrix_function(params.at("B1"), n);
    const MatrixFunction B2 = parse_matrix_function(params.at("B2"), n);
    auto slope = [B1, B2](double t, const Vector& x) -> Matrix {
      const double r2 = x.squaredNorm();
      const double c = std::cos(r2), s = std::sin(r2);
      return c * c * B1(t) + s * s * B2(t);
    };
    auto remainder = [](double t, const Vector& x) -> Vector {
      return x / (1.0 + x.squaredNorm()) * std::sin(x.norm() * t);
    };
    f.slope = slope;
    f.remainder = remainder;
    f.force = [slope, remainder](double t, const Vector& x) -> Vector {
      return slope(t, x) * x + remainder(t, x);
    };
    f.jacobian = [B1, B2](double t, const Vector& x) -> Matrix {
      const double r2 = x.squaredNorm();
      const double r = std::sqrt(r2);
      const double c = std::cos(r2), s = std::sin(r2);
      const Matrix D = B2(t) - B1(t);
      Matrix Jm = c * c * B1(t) + s * s * B2(t);
      Jm += (2.0 * s * c) * (D * x) * (2.0 * x.transpose());
      // remainder derivative
      const double denom = 1.0 + r2;
      const double sin_rt = std::sin(r * t);
      Jm += (sin_rt / denom) * Matrix::Identity(x.size(), x.size());
      Jm -= (2.0 * sin_rt / (denom * denom)) * x * x.transpose();
      if (r > 1e-12) {
        Jm += (t * std::cos(r * t) / (denom * r)) * x * x.transpose();
      }
      return Jm;
    };
    return f;
  }
  if (name == "scalar_duffing") {
    if (n != 1) throw ConfigError("nonlinearity: scalar_duffing needs n = 1");
    const double b = params.value("b", 0.0);
    const double delta = params.value("delta", 0.0);
    const double forcing = params.value("f", 0.0);
    f.force = [b, delta, forcing](double, const Vector& x) -> Vector {
      Vector g(1);
      g(0) = b * x(0) + delta * x(0) / std::sqrt(1.0 + x(0) * x(0)) + forcing;
      return g;
    };
    f.jacobian = [b, delta](double, const Vector& x) -> Matrix {
      Matrix Jm(1, 1);
      Jm(0, 0) = b + delta * std::pow(1.0 + x(0) * x(0), -1.5);
      return Jm;
    };
    f.potential = [b, delta, forcing](double, const Vector& x) {
      return 0.5 * b * x(0) * x(0) +
             delta * (std::sqrt(1.0 + x(0) * x(0)) - 1.0) + forcing * x(0);
    };
    return f;
  }
  throw ConfigError("nonlinearity: unknown name " + name);
}

ProblemFile parse_problem(const json& j) {
  if (!j.contains("kind")) throw ConfigError("problem: missing kind");
  const std::string kind = j["kind"].get<std::string>();
  std::optional<LinearTemplate> tmpl;
  int coeff_dim = 0;

  try {
    if (kind == "second_order") {
      const int n = j.at("n").get<int>();
      coeff_dim = n;
      SecondOrderProblem p{parse_matrix_function(j.at("Lambda"), n),
                           parse_matrix_function(j.at("B"), n),
                           parse_second_order_bc(j.at("bc"), n)};
      validate(p);
      tmpl = p;
    } else if (kind == "first_order") {
      const int n = j.at("n").get<int>();
      coeff_dim = 2 * n;
      FirstOrderProblem p{parse_matrix_function(j.at("B"), 2 * n),
                          parse_first_order_bc(j.at("bc"), 2 * n)};
      validate(p);
      tmpl = p;
    } else if (kind == "elliptic") {
      const json& g = j.at("geometry");
      EllipticGeometry geom = [&]() -> EllipticGeometry {
        if (g.contains("interval")) {
          return Interval{g["interval"].value("length", 1.0)};
        }
        if (g.contains("rectangle")) {
          return Rectangle{g["rectangle"].value("L1", 1.0),
                           g["rectangle"].value("L2", 1.0)};
        }
        throw ConfigError("geometry: expected interval | rectangle");
      }();
      coeff_dim = 1;
      EllipticProblem p{geom, parse_field(j.at("b"))};
      validate(p);
      tmpl = p;
    } else {
      throw ConfigError("problem: unknown kind " + kind);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("problem: ") + e.what());
  } catch (const Error& e) {
    throw ConfigError(std::string("problem: ") + e.what());
  }

  ProblemFile out{*tmpl, {}, {}, {}, {}, {}, false, false, false, ""};
  out.B1 = maybe_matrix_function(j, "B1", coeff_dim);
  out.B2 = maybe_matrix_function(j, "B2", coeff_dim);
  out.Bbar = maybe_matrix_function(j, "Bbar", coeff_dim);
  out.B0 = maybe_matrix_function(j, "B0", coeff_dim);
  if (j.contains("asserts")) {
    const json& a = j["asserts"];
    out.assert_bounded_difference = a.value("bounded_difference", false);
    out.assert_convex_after_shift = a.value("convex_after_shift", false);
    out.assert_sublinear_remainder = a.value("sublinear_remainder", false);
  }
  out.theorem = j.value("theorem", "");
  if (j.contains("nonlinearity")) {
    const auto* so = std::get_if<SecondOrderProblem>(&out.tmpl);
    if (so == nullptr) {
      throw ConfigError("nonlinearity: requires a second_order template");
    }
    const json& nl = j["nonlinearity"];
    out.nonlinear = NonlinearProblem{
        *so, make_nonlinearity(nl.at("name").get<std::string>(),
                               nl.value("params", json::object()), *so)};
  }
  return out;
}

json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("parse error in ") + path + ": " + e.what());
  }
}

json report(const IndexResult& r) {
  return {{"index", r.index},
          {"nu", r.nu},
          {"crossings", json_crossings(r.crossings)},
          {"anchor", {{"name", r.anchor_name}, {"value", r.anchor_value}}},
          {"validation", {{"method", r.validation_method}, {"validated", r.validated}}},
          {"tolerances", json_tolerances(r.tolerances)}};
}

json report(const NullityResult& r) {
  json basis = json::array();
  for (int c = 0; c < r.kernel_initial_conditions.cols(); ++c) {
    json col = json::array();
    for (int i = 0; i < r.kernel_initial_conditions.rows(); ++i) {
      col.push_back(r.kernel_initial_conditions(i, c));
    }
    basis.push_back(col);
  }
  return {{"nu", r.nu}, {"kernel_initial_conditions", basis}};
}

json report(const CertificateReport& r) {
  json hyps = json::array();
  for (const auto& h : r.hypotheses) {
    const char* status = h.status == HypothesisRecord::Status::Pass  ? "pass"
                         : h.status == HypothesisRecord::Status::Fail ? "fail"
                         : h.status == HypothesisRecord::Status::UserAsserted
                             ? "user-asserted"
                             : "missing";
    hyps.push_back(
        {{"hypothesis", h.description}, {"computed", h.computed}, {"status", status}});
  }
  json out = {{"theorem", r.theorem},
              {"hypotheses", hyps},
              {"verdict", r.verdict == CertificateReport::Verdict::Certified ? "certified"
                          : r.verdict == CertificateReport::Verdict::Refuted
                              ? "refuted"
                              : "inconclusive"}};
  if (r.second_solution) out["second_solution"] = *r.second_solution;
  return out;
}

json report(const Solution& r) {
  json states = json::array();
  for (int c = 0; c < r.states.cols(); ++c) {
    json col = json::array();
    for (int i = 0; i < r.states.rows(); ++i) col.push_back(r.states(i, c));
    states.push_back(col);
  }
  return {{"grid", r.grid},
          {"states", states},
          {"residual", r.residual},
          {"boundary_residual", r.boundary_residual},
          {"refinement_difference", r.refinement_difference},
          {"start_shift", r.start_shift},
          {"distinct_solutions", r.distinct_solutions}};
}

json report(const OracleResult& r) {
  return {{"index", r.index}, {"nu", r.nu}, {"scalar_j_start", r.scalar_j_start}};
}

std::string crossings_csv(const IndexResult& r) {
  std::string out = "parameter,multiplicity\n";
  for (const auto& c : r.crossings) {
    json row = c.parameter;  // shortest round-trip formatting
    out += row.dump() + "," + std::to_string(c.multiplicity) + "\n";
  }
  return out;
}

}  // namespace spectra::io

#include "spectra/io.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace {

using spectra::io::json;

constexpr const char* kVersion = "0.1.0";

struct Output {
  std::string out_path;    // empty = stdout
  std::string csv_path;    // crossings table, index command only
  bool no_timing = false;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  int emit(const std::string& command, const std::string& digest, json results,
           int exit_code) {
    json rep = {{"command", command},
                {"input_digest", digest},
                {"version", kVersion},
                {"results", std::move(results)}};
    if (!no_timing) {
      rep["timing_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    }
    const std::string text = rep.dump(2) + "\n";
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(out_path);
      f << text;
    }
    return exit_code;
  }
};

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  std::ostringstream s;
  s << std::hex << h;
  return s.str();
}

spectra::IndexResult index_of_template(const spectra::LinearTemplate& tmpl) {
  return std::visit(
      [](const auto& t) -> spectra::IndexResult {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, spectra::SecondOrderProblem>) {
          return spectra::index_sweep(t);
        } else if constexpr (std::is_same_v<T, spectra::FirstOrderProblem>) {
          return spectra::index_first_order(t);
        } else {
          return spectra::elliptic_index(t);
        }
      },
      tmpl);
}

std::vector<double> parse_alphas(const std::string& csv) {
  std::vector<double> out;
  std::stringstream s(csv);
  std::string tok;
  while (std::getline(s, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

spectra::ConstantSpectrum spectrum_from(const std::vector<double>& alphas,
                                        double lambda) {
  spectra::ConstantSpectrum spec;
  spec.lambda = lambda;
  spec.eigenvalues.resize(alphas.size());
  std::vector<double> sorted = alphas;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) spec.eigenvalues(i) = sorted[i];
  return spec;
}

/// Oracle-equivalence corpus: constant-coefficient engines against the
/// closed-form counts. Returns the number of mismatches.
int run_selftest(json& results) {
  std::mt19937 rng(2026);
  std::uniform_real_distribution<double> alpha_dist(-20.0, 120.0);
  int mismatches = 0;
  json cases = json::array();
  auto check = [&](const std::string& name, int ei, int en, int oi, int on) {
    const bool ok = ei == oi && en == on;
    if (!ok) ++mismatches;
    cases.push_back({{"case", name},
                     {"engine", {{"index", ei}, {"nu", en}}},
                     {"oracle", {{"index", oi}, {"nu", on}}},
                     {"match", ok}});
  };

  for (int trial = 0; trial < 6; ++trial) {
    const int n = 1 + trial % 2;
    spectra::Matrix A = spectra::Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) A(i, i) = alpha_dist(rng);
    spectra::ConstantSpectrum spec{A.diagonal(), 1.0};
    std::sort(spec.eigenvalues.data(), spec.eigenvalues.data() + n);

    // Dirichlet
    {
      spectra::SecondOrderProblem p{
          spectra::MatrixFunction::constant(spectra::Matrix::Identity(n, n)),
          spectra::MatrixFunction::constant(A), spectra::SturmLiouville{0.0, M_PI}};
      const auto e = spectra::index_sweep(p);
      const auto o = spectra::dirichlet_constant(spec);
      check("dirichlet", e.index, e.nu, o.index, o.nu);
    }
    // Periodic / antiperiodic
    for (double sign : {1.0, -1.0}) {
      spectra::SecondOrderProblem p{
          spectra::MatrixFunction::constant(spectra::Matrix::Identity(n, n)),
          spectra::MatrixFunction::constant(A),
          spectra::GeneralizedPeriodic{sign * spectra::Matrix::Identity(n, n),
                                       sign * spectra::Matrix::Identity(n, n)}};
      const auto e = spectra::index_sweep(p);
      const spectra::FloquetCase c =
          sign > 0 ? spectra::FloquetCase{spectra::Periodic{}}
                   : spectra::FloquetCase{spectra::Antiperiodic{}};
      const auto o = spectra::example38(c, spec);
      check(sign > 0 ? "periodic" : "antiperiodic", e.index, e.nu, o.index, o.nu);
    }
  }
  // Scalar end coupling
  for (double a : {2.0, -0.5, 3.0}) {
    spectra::Matrix A(1, 1);
    A(0, 0) = alpha_dist(rng);
    spectra::ConstantSpectrum spec{A.diagonal(), 1.0};
    spectra::SecondOrderProblem p{
        spectra::MatrixFunction::constant(spectra::Matrix::Identity(1, 1)),
        spectra::MatrixFunction::constant(A),
        spectra::GeneralizedPeriodic{a * spectra::Matrix::Identity(1, 1),
                                     (1.0 / a) * spectra::Matrix::Identity(1, 1)}};
    const auto e = spectra::index_sweep(p);
    const auto o = spectra::example38(spectra::ScalarCoupling{a}, spec);
    check("scalar_coupling", e.index, e.nu, o.index, o.nu);
  }
  // Rectangles
  for (double b : {0.0, 15.0, 2.5 * M_PI * M_PI}) {
    spectra::EllipticProblem p{spectra::Rectangle{1.0, 1.0},
                               spectra::ScalarField::constant(b)};
    const auto e = spectra::elliptic_index(p);
    const auto o = spectra::rectangle_constant(b, 1.0, 1.0);
    check("rectangle", e.index, e.nu, o.index, o.nu);
  }
  results = {{"cases", cases}, {"mismatches", mismatches}};
  return mismatches;
}

spectra::CertifyData certify_data_from(const spectra::io::ProblemFile& pf) {
  if (!pf.B1 || !pf.B2) {
    throw spectra::io::ConfigError("certify: problem file must define B1 and B2");
  }
  spectra::CertifyData data{*pf.B1,
                            *pf.B2,
                            pf.Bbar,
                            pf.B0,
                            pf.assert_bounded_difference,
                            pf.assert_convex_after_shift,
                            pf.assert_sublinear_remainder};
  return data;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Index and nullity computations for self-adjoint boundary-value problems"};
  app.require_subcommand(1);
  app.fallthrough();

  Output output;
  int threads = 0;
  app.add_option("--out", output.out_path, "Write the report to this file");
  app.add_flag("--no-timing", output.no_timing, "Omit timing from the report");
  app.add_option("--threads", threads, "Worker threads for parameter sweeps");

  std::string problem_path, theorem, oracle_case, alphas_csv;
  double lambda_scale = 1.0, coupling_a = 2.0, field_b = 0.0, L1 = 1.0, L2 = 1.0;
  spectra::SolveOptions solve_opts;

  auto* cmd_index = app.add_subcommand("index", "Index and nullity of a problem file");
  cmd_index->add_option("problem", problem_path)->required();
  cmd_index->add_option("--csv", output.csv_path, "Write the crossing table as CSV");

  auto* cmd_rel = app.add_subcommand("rel-index", "Relative index of the B1, B2 pair");
  cmd_rel->add_option("problem", problem_path)->required();

  auto* cmd_null = app.add_subcommand("nullity", "Nullity of a problem file");
  cmd_null->add_option("problem", problem_path)->required();

  auto* cmd_oracle = app.add_subcommand("oracle", "Closed-form constant-coefficient counts");
  cmd_oracle->add_option("--case", oracle_case,
                         "periodic | antiperiodic | scalar | dirichlet | rectangle")
      ->required();
  cmd_oracle->add_option("--alphas", alphas_csv, "Comma-separated eigenvalues");
  cmd_oracle->add_option("--lambda", lambda_scale, "Leading-coefficient scale");
  cmd_oracle->add_option("--a", coupling_a, "Scalar end coupling");
  cmd_oracle->add_option("--b", field_b, "Constant potential (rectangle case)");
  cmd_oracle->add_option("--L1", L1);
  cmd_oracle->add_option("--L2", L2);

  auto* cmd_certify = app.add_subcommand("certify", "Existence-theorem hypothesis check");
  cmd_certify->add_option("problem", problem_path)->required();
  cmd_certify->add_option("--theorem", theorem, "Theorem id, overrides the file");

  auto* cmd_solve = app.add_subcommand("solve", "Homotopy-Newton collocation solver");
  cmd_solve->add_option("problem", problem_path)->required();
  cmd_solve->add_option("--grid", solve_opts.grid);
  cmd_solve->add_option("--tol", solve_opts.tol);
  cmd_solve->add_option("--homotopy-steps", solve_opts.homotopy_steps);
  cmd_solve->add_option("--multistart", solve_opts.multistart);

  auto* cmd_dual = app.add_subcommand("dual-solve", "Dual variational minimizer");
  cmd_dual->add_option("problem", problem_path)->required();
  cmd_dual->add_option("--grid", solve_opts.grid);
  cmd_dual->add_option("--tol", solve_opts.tol);

  auto* cmd_selftest = app.add_subcommand("selftest", "Oracle-equivalence corpus");

  CLI11_PARSE(app, argc, argv);

  if (threads <= 0) {
    if (const char* env = std::getenv("SPECTRA_INDEX_THREADS")) {
      threads = std::atoi(env);
    }
  }
  if (threads > 0) spectra::set_sweep_threads(threads);

  const std::string digest = problem_path.empty() ? "" : file_digest(problem_path);
  try {
    if (cmd_selftest->parsed()) {
      json results;
      const int mismatches = run_selftest(results);
      return output.emit("selftest", digest, results, mismatches == 0 ? 0 : 1);
    }
    if (cmd_oracle->parsed()) {
      spectra::OracleResult r;
      if (oracle_case == "rectangle") {
        r = spectra::rectangle_constant(field_b, L1, L2);
      } else {
        const auto spec = spectrum_from(parse_alphas(alphas_csv), lambda_scale);
        if (oracle_case == "periodic") {
          r = spectra::example38(spectra::Periodic{}, spec);
        } else if (oracle_case == "antiperiodic") {
          r = spectra::example38(spectra::Antiperiodic{}, spec);
        } else if (oracle_case == "scalar") {
          r = spectra::example38(spectra::ScalarCoupling{coupling_a}, spec);
        } else if (oracle_case == "dirichlet") {
          r = spectra::dirichlet_constant(spec);
        } else {
          throw spectra::io::ConfigError("oracle: unknown case " + oracle_case);
        }
      }
      return output.emit("oracle", digest, spectra::io::report(r), 0);
    }

    const spectra::io::ProblemFile pf =
        spectra::io::parse_problem(spectra::io::load_file(problem_path));

    if (cmd_index->parsed()) {
      const spectra::IndexResult r = index_of_template(pf.tmpl);
      if (!output.csv_path.empty()) {
        std::ofstream csv(output.csv_path);
        csv << spectra::io::crossings_csv(r);
      }
      return output.emit("index", digest, spectra::io::report(r), 0);
    }
    if (cmd_null->parsed()) {
      json results;
      if (const auto* so = std::get_if<spectra::SecondOrderProblem>(&pf.tmpl)) {
        results = spectra::io::report(spectra::nullity(*so));
      } else if (const auto* fo = std::get_if<spectra::FirstOrderProblem>(&pf.tmpl)) {
        results = spectra::io::report(spectra::nullity(*fo));
      } else {
        const auto r = spectra::elliptic_index(std::get<spectra::EllipticProblem>(pf.tmpl));
        results = {{"nu", r.nu}, {"kernel_initial_conditions", json::array()}};
      }
      return output.emit("nullity", digest, results, 0);
    }
    if (cmd_rel->parsed()) {
      if (!pf.B1 || !pf.B2) {
        throw spectra::io::ConfigError("rel-index: problem file must define B1 and B2");
      }
      int value = 0;
      if (const auto* so = std::get_if<spectra::SecondOrderProblem>(&pf.tmpl)) {
        value = spectra::relative_index(*so, *pf.B1, *pf.B2);
      } else if (const auto* fo = std::get_if<spectra::FirstOrderProblem>(&pf.tmpl)) {
        value = spectra::relative_index(*fo, *pf.B1, *pf.B2);
      } else {
        throw spectra::io::ConfigError("rel-index: elliptic templates unsupported");
      }
      return output.emit("rel-index", digest, {{"relative_index", value}}, 0);
    }
    if (cmd_certify->parsed()) {
      const std::string id = theorem.empty() ? pf.theorem : theorem;
      if (id.empty()) {
        throw spectra::io::ConfigError("certify: no theorem id given");
      }
      const auto rep = spectra::certify(id, pf.tmpl, certify_data_from(pf));
      const int code =
          rep.verdict == spectra::CertificateReport::Verdict::Certified ? 0 : 1;
      return output.emit("certify", digest, spectra::io::report(rep), code);
    }
    if (cmd_solve->parsed() || cmd_dual->parsed()) {
      if (!pf.nonlinear) {
        throw spectra::io::ConfigError("solve: problem file has no nonlinearity");
      }
      const spectra::Solution s = cmd_solve->parsed()
                                      ? spectra::solve_bvp(*pf.nonlinear, solve_opts)
                                      : spectra::dual_solve(*pf.nonlinear, solve_opts);
      return output.emit(cmd_solve->parsed() ? "solve" : "dual-solve", digest,
                        spectra::io::report(s), 0);
    }
  } catch (const spectra::io::ConfigError& e) {
    (void)output.emit(app.get_subcommands().front()->get_name(), digest,
                      {{"error", "ConfigError"}, {"message", e.what()}}, 2);
    return 2;
  } catch (const spectra::Error& e) {
    (void)output.emit(app.get_subcommands().front()->get_name(), digest,
                      {{"error", spectra::error_name(e)}, {"message", e.what()}}, 3);
    return 3;
  }
  return 2;
}

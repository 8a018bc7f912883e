#pragma once

#include "spectra/elliptic.hpp"

#include <functional>
#include <string>

namespace spectra {

/// Pointwise data of (Lambda x')' + g(t, x) = 0 riding on a linear template.
/// `force` is g; `jacobian` its x-derivative. When the asymptotic splitting
/// g = B(t,x) x + h(t,x) is available, `slope` and `remainder` supply it and
/// are cross-checked against `force` on sample boxes. `potential` (with
/// d potential / dx = force) enables the dual solver.
struct Nonlinearity {
  std::function<Vector(double, const Vector&)> force;
  std::function<Matrix(double, const Vector&)> jacobian;
  std::function<Matrix(double, const Vector&)> slope;
  std::function<Vector(double, const Vector&)> remainder;
  std::function<double(double, const Vector&)> potential;
};

struct NonlinearProblem {
  SecondOrderProblem linear;  // Lambda, anchor coefficient B1, boundary data
  Nonlinearity f;
};

using LinearTemplate =
    std::variant<SecondOrderProblem, FirstOrderProblem, EllipticProblem>;

/// Inputs of the existence certifiers: asymptotic bounds B1 <= B2, the
/// optional slope-at-zero Bbar, the optional comparison coefficient B0, and
/// the analytic hypotheses the machine cannot check.
struct CertifyData {
  MatrixFunction B1;
  MatrixFunction B2;
  std::optional<MatrixFunction> Bbar;
  std::optional<MatrixFunction> B0;
  bool assert_bounded_difference = false;   // g(t,x) - B(t,x) x bounded
  bool assert_convex_after_shift = false;   // V(t,x) - (B1 x, x)/2 convex
  bool assert_sublinear_remainder = false;  // h(t,x) = o(|x|)
};

struct HypothesisRecord {
  std::string description;
  std::string computed;
  enum class Status { Pass, Fail, UserAsserted, Missing } status =
      Status::Pass;
};

struct CertificateReport {
  std::string theorem;
  std::vector<HypothesisRecord> hypotheses;
  enum class Verdict { Certified, Refuted, Inconclusive } verdict =
      Verdict::Inconclusive;
  /// Multiplicity clause outcome where the theorem has one (informational).
  std::optional<bool> second_solution;
};

/// Hypothesis check for the existence theorems. Failures are verdicts, never
/// errors. Theorem ids: 1.6/3.4/4.3/4.7/5.3 (asymptotically linear),
/// 1.7/3.5/3.12/4.4/4.8/5.4 (adds the slope-at-zero window), 3.10 (sublinear
/// remainder variant), 1.9/5.6 (convex dual setting), 5.5 (three-solution
/// setting).
CertificateReport certify(const std::string& theorem, const LinearTemplate& tmpl,
                          const CertifyData& data);

struct SolveOptions {
  int grid = 256;          // intervals of the coarse grid
  double tol = 1e-8;       // accepted discrete residual
  int homotopy_steps = 10;
  int multistart = 1;      // extra random Newton starts (distinct-count report)
};

struct Solution {
  std::vector<double> grid;  // nodes in [0,1]
  Matrix states;             // n x (nodes)
  double residual = 0.0;     // weighted l2 of the discrete equations
  double boundary_residual = 0.0;
  double refinement_difference = 0.0;  // coarse vs fine solution, weighted l2
  double start_shift = 0.0;            // -eps id applied to make nu(B1) = 0
  int distinct_solutions = 1;
};

/// Homotopy-Newton collocation for (Lambda x')' + g(t,x) = 0: continuation
/// from the linear problem with coefficient B1 (the template's B) to the full
/// nonlinearity, damped Newton at every step, accepted only when the discrete
/// residual passes `tol` on the coarse and once-refined grids.
Solution solve_bvp(const NonlinearProblem& p, const SolveOptions& opts = {});

/// Pointwise strongly convex integrand data for the dual functional.
struct PointwiseConvex {
  std::function<double(double, const Vector&)> value;
  std::function<Vector(double, const Vector&)> gradient;
  std::function<Matrix(double, const Vector&)> hessian;
};

struct ConjugatePoint {
  Vector u;
  Vector y;            // maximizer, grad N(y) = u
  double value = 0.0;  // N*(u)
  double duality_gap = 0.0;  // probe-certified suboptimality bound
  int iterations = 0;
};

/// Pointwise Fenchel conjugate by Newton on grad N(y) = u from y0 = u.
ConjugatePoint fenchel_conjugate(const PointwiseConvex& N, const Vector& u,
                                 double t);

/// Dual variational solver for Dirichlet problems with convex-after-shift
/// potential: minimizes psi(u) = <L^-1 u, u>/2 + sum N*(u) over the grid and
/// recovers the primal solution from stationarity. Requires nu(B1) = 0.
Solution dual_solve(const NonlinearProblem& p, const SolveOptions& opts = {});

}  // namespace spectra

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spectra/io.hpp"
#include "spectra/nonlinear.hpp"

using namespace spectra;

namespace {

MatrixFunction id_fn(int n) { return MatrixFunction::constant(Matrix::Identity(n, n)); }
MatrixFunction zero_fn(int n) { return MatrixFunction::constant(Matrix::Zero(n, n)); }
MatrixFunction const_fn(double v, int n) {
  return MatrixFunction::constant(v * Matrix::Identity(n, n));
}

SecondOrderProblem antiperiodic(const MatrixFunction& B) {
  const int n = B.dim();
  return SecondOrderProblem{
      id_fn(n), B,
      GeneralizedPeriodic{-Matrix::Identity(n, n), -Matrix::Identity(n, n)}};
}

SecondOrderProblem dirichlet(const MatrixFunction& B) {
  return SecondOrderProblem{id_fn(B.dim()), B, SturmLiouville{0.0, M_PI}};
}

CertifyData window_free(const MatrixFunction& B1, const MatrixFunction& B2) {
  return CertifyData{B1, B2, {}, {}, false, false, false};
}

}  // namespace

TEST_CASE("certify accepts the asymptotically linear antiperiodic instance") {
  const double lo = M_PI * M_PI + 0.1;
  const double hi = 9.0 * M_PI * M_PI - 0.1;
  CertifyData data = window_free(const_fn(lo, 1), const_fn(hi, 1));
  data.assert_bounded_difference = true;
  data.assert_sublinear_remainder = true;
  const CertificateReport r =
      certify("3.10", antiperiodic(const_fn(lo, 1)), data);
  CHECK(r.verdict == CertificateReport::Verdict::Certified);
}

TEST_CASE("certify refutes the mutated instance sitting on a crossing") {
  const double lo = M_PI * M_PI + 0.1;
  CertifyData data = window_free(const_fn(lo, 1), const_fn(9.0 * M_PI * M_PI, 1));
  data.assert_bounded_difference = true;
  data.assert_sublinear_remainder = true;
  const CertificateReport r =
      certify("3.10", antiperiodic(const_fn(lo, 1)), data);
  CHECK(r.verdict == CertificateReport::Verdict::Refuted);
  bool found_fail = false;
  for (const auto& h : r.hypotheses) {
    if (h.status == HypothesisRecord::Status::Fail) found_fail = true;
  }
  CHECK(found_fail);
}

TEST_CASE("certify is inconclusive when analytic hypotheses are not asserted") {
  const double lo = M_PI * M_PI + 0.1;
  const CertifyData data =
      window_free(const_fn(lo, 1), const_fn(9.0 * M_PI * M_PI - 0.1, 1));
  const CertificateReport r =
      certify("3.10", antiperiodic(const_fn(lo, 1)), data);
  CHECK(r.verdict == CertificateReport::Verdict::Inconclusive);
}

TEST_CASE("certify handles the windowed theorem with a slope at zero") {
  const double lo = M_PI * M_PI + 0.1;
  CertifyData data = window_free(const_fn(lo, 1), const_fn(9.0 * M_PI * M_PI - 0.1, 1));
  data.Bbar = zero_fn(1);
  data.assert_bounded_difference = true;
  const CertificateReport r = certify("3.5", antiperiodic(const_fn(lo, 1)), data);
  CHECK(r.verdict == CertificateReport::Verdict::Certified);
  REQUIRE(r.second_solution.has_value());
  CHECK(*r.second_solution);
}

TEST_CASE("certify handles the convex dual theorem") {
  CertifyData data = window_free(const_fn(15.0, 1), const_fn(15.0, 1));
  data.assert_convex_after_shift = true;
  const CertificateReport r = certify("1.9", dirichlet(const_fn(15.0, 1)), data);
  CHECK(r.verdict == CertificateReport::Verdict::Certified);
}

TEST_CASE("solve_bvp returns the trivial solution of an unforced problem") {
  NonlinearProblem p{dirichlet(const_fn(5.0, 1)),
                     io::make_nonlinearity("linear", {{"Bhat", 5.0}},
                                           dirichlet(const_fn(5.0, 1)))};
  const Solution s = solve_bvp(p);
  CHECK(s.residual <= 1e-8);
  CHECK(s.states.cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("solve_bvp recovers a manufactured forced solution") {
  // x'' + pi^2 sin(pi t) = 0 with Dirichlet data: x(t) = sin(pi t).
  Nonlinearity f;
  f.force = [](double t, const Vector& x) -> Vector {
    Vector g(1);
    g(0) = M_PI * M_PI * std::sin(M_PI * t);
    (void)x;
    return g;
  };
  f.jacobian = [](double, const Vector&) -> Matrix { return Matrix::Zero(1, 1); };
  NonlinearProblem p{dirichlet(zero_fn(1)), f};
  const Solution s = solve_bvp(p);
  CHECK(s.residual <= 1e-8);
  double max_err = 0.0;
  for (std::size_t k = 0; k < s.grid.size(); ++k) {
    max_err = std::max(max_err,
                       std::abs(s.states(0, static_cast<int>(k)) -
                                std::sin(M_PI * s.grid[k])));
  }
  CHECK(max_err <= 1e-3);
  CHECK(s.refinement_difference <= 1e-2);
}

TEST_CASE("solve_bvp handles the trigonometric slope nonlinearity") {
  const double lo = M_PI * M_PI + 0.1;
  const SecondOrderProblem linear = antiperiodic(const_fn(lo, 1));
  const io::json params = {{"B1", lo}, {"B2", 9.0 * M_PI * M_PI - 0.1}};
  NonlinearProblem p{linear, io::make_nonlinearity("example311", params, linear)};
  const Solution s = solve_bvp(p);
  CHECK(s.residual <= 1e-8);
  CHECK(s.boundary_residual <= 1e-6);
}

TEST_CASE("fenchel_conjugate closed forms") {
  PointwiseConvex quad;
  quad.value = [](double, const Vector& y) { return 0.5 * y.squaredNorm(); };
  quad.gradient = [](double, const Vector& y) -> Vector { return y; };
  quad.hessian = [](double, const Vector& y) -> Matrix {
    return Matrix::Identity(y.size(), y.size());
  };
  Vector u(2);
  u << 1.0, -2.0;
  const ConjugatePoint c = fenchel_conjugate(quad, u, 0.0);
  CHECK((c.y - u).norm() <= 1e-10);
  CHECK(c.value == doctest::Approx(0.5 * u.squaredNorm()).epsilon(1e-10));
  CHECK(c.duality_gap <= 1e-8);

  PointwiseConvex quartic;
  quartic.value = [](double, const Vector& y) {
    const double v = y(0);
    return 0.25 * v * v * v * v + 0.5 * v * v;
  };
  quartic.gradient = [](double, const Vector& y) -> Vector {
    Vector g(1);
    g(0) = y(0) * y(0) * y(0) + y(0);
    return g;
  };
  quartic.hessian = [](double, const Vector& y) -> Matrix {
    Matrix H(1, 1);
    H(0, 0) = 3.0 * y(0) * y(0) + 1.0;
    return H;
  };
  Vector two(1);
  two << 2.0;
  const ConjugatePoint q = fenchel_conjugate(quartic, two, 0.0);
  CHECK(q.y(0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(q.value == doctest::Approx(1.25).epsilon(1e-10));
  CHECK(q.duality_gap <= 1e-8);
}

TEST_CASE("fenchel_conjugate rejects non-convex integrands") {
  PointwiseConvex concave;
  concave.value = [](double, const Vector& y) { return -0.5 * y.squaredNorm(); };
  concave.gradient = [](double, const Vector& y) -> Vector { return -y; };
  concave.hessian = [](double, const Vector& y) -> Matrix {
    return -Matrix::Identity(y.size(), y.size());
  };
  Vector u(1);
  u << 1.0;
  CHECK_THROWS_AS(fenchel_conjugate(concave, u, 0.0), NotStronglyConvex);
}

TEST_CASE("dual_solve matches the primal solver on convex instances") {
  const SecondOrderProblem linear = dirichlet(zero_fn(1));

  // Unforced strongly convex problem: the zero solution.
  {
    const io::json params = {{"b", 5.0}, {"delta", 0.0}, {"f", 0.0}};
    NonlinearProblem p{linear, io::make_nonlinearity("scalar_duffing", params, linear)};
    const Solution s = dual_solve(p);
    CHECK(s.residual <= 1e-6);
    CHECK(s.states.cwiseAbs().maxCoeff() <= 1e-6);
  }

  // Forced problem: dual and primal answers agree pointwise.
  {
    const io::json params = {{"b", 5.0}, {"delta", 1.0}, {"f", 0.8}};
    NonlinearProblem p{linear, io::make_nonlinearity("scalar_duffing", params, linear)};
    const Solution d = dual_solve(p);
    const Solution s = solve_bvp(p);
    CHECK(d.residual <= 1e-6);
    CHECK(s.residual <= 1e-8);
    // The primal solver may report a refined grid; compare at shared nodes.
    REQUIRE((s.states.cols() - 1) % (d.states.cols() - 1) == 0);
    const int stride =
        static_cast<int>((s.states.cols() - 1) / (d.states.cols() - 1));
    double max_diff = 0.0;
    for (int c = 0; c < d.states.cols(); ++c) {
      max_diff = std::max(
          max_diff, (d.states.col(c) - s.states.col(c * stride)).norm());
    }
    CHECK(max_diff <= 1e-5);
  }
}

TEST_CASE("dual_solve refuses non-Dirichlet templates") {
  const SecondOrderProblem linear = antiperiodic(zero_fn(1));
  const io::json params = {{"b", 5.0}, {"delta", 0.0}, {"f", 0.0}};
  NonlinearProblem p{linear, io::make_nonlinearity("scalar_duffing", params, linear)};
  CHECK_THROWS_AS(dual_solve(p), DomainError);
}

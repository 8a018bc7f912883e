#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spectra/elliptic.hpp"
#include "spectra/oracles.hpp"

using namespace spectra;

TEST_CASE("assemble is diagonal for b = 0 and shifts exactly for constant b") {
  const EllipticProblem p{Interval{1.0}, ScalarField::constant(0.0)};
  const GalerkinOperator g = assemble(p, 8);
  REQUIRE(g.matrix.rows() == 8);
  for (int j = 0; j < 8; ++j) {
    CHECK(g.matrix(j, j) ==
          doctest::Approx((j + 1.0) * (j + 1.0) * M_PI * M_PI).epsilon(1e-12));
    for (int k = 0; k < 8; ++k) {
      if (j != k) CHECK(g.matrix(j, k) == 0.0);
    }
  }

  const EllipticProblem ps{Interval{1.0}, ScalarField::constant(3.0)};
  const GalerkinOperator gs = assemble(ps, 8);
  CHECK((gs.matrix - (g.matrix - 3.0 * Matrix::Identity(8, 8))).norm() == 0.0);
}

TEST_CASE("assemble reproduces the sine-potential matrix elements") {
  // b(x) = sin(pi x) on [0,1]: entry (j,k) of the potential part is
  // 2 int_0^1 sin(pi x) sin(j pi x) sin(k pi x) dx, computable in closed form.
  const int K = 64;  // fine truncation so the quadrature resolves low modes
  const int Q = 1 << 12;
  std::vector<double> samples(Q + 1);
  for (int q = 0; q <= Q; ++q) samples[q] = std::sin(M_PI * q / double(Q));
  const EllipticProblem p{Interval{1.0}, ScalarField::sampled1d(samples)};
  const GalerkinOperator g = assemble(p, K);

  auto f = [](int m) {
    if (m == 0) return 0.0;
    return (1.0 - std::cos(m * M_PI)) / (m * M_PI);
  };
  for (int j = 1; j <= 4; ++j) {
    for (int k = 1; k <= 4; ++k) {
      const double integral =
          0.25 * (f(1 - j + k) + f(j + k - 1) + f(1 + j - k) - f(1 + j + k));
      const double expected =
          (j == k ? j * j * M_PI * M_PI : 0.0) - 2.0 * integral;
      CHECK(g.matrix(j - 1, k - 1) == doctest::Approx(expected).epsilon(1e-5));
    }
  }
}

TEST_CASE("assemble rejects tiny truncations") {
  CHECK_THROWS_AS(assemble(EllipticProblem{Interval{1.0}, ScalarField::constant(0.0)}, 2),
                  DimensionMismatch);
}

TEST_CASE("elliptic_index interval examples") {
  const IndexResult zero =
      elliptic_index(EllipticProblem{Interval{1.0}, ScalarField::constant(0.0)});
  CHECK(zero.index == 0);
  CHECK(zero.nu == 0);
  CHECK(zero.validated);

  // b = pi^2 on the unit interval sits exactly on the ground mode.
  const IndexResult on = elliptic_index(
      EllipticProblem{Interval{1.0}, ScalarField::constant(M_PI * M_PI)});
  CHECK(on.index == 0);
  CHECK(on.nu == 1);

  // Longer interval: modes (j pi / 2)^2 ~ 2.47, 9.87, ...
  const IndexResult longer =
      elliptic_index(EllipticProblem{Interval{2.0}, ScalarField::constant(3.0)});
  CHECK(longer.index == 1);
  CHECK(longer.nu == 0);
  const IndexResult two =
      elliptic_index(EllipticProblem{Interval{2.0}, ScalarField::constant(11.0)});
  CHECK(two.index == 2);
  CHECK(two.nu == 0);
}

TEST_CASE("elliptic_index rectangle examples agree with the closed form") {
  const IndexResult r = elliptic_index(
      EllipticProblem{Rectangle{1.0, 1.0}, ScalarField::constant(2.5 * M_PI * M_PI)});
  CHECK(r.index == 1);
  CHECK(r.nu == 0);

  const OracleResult o = rectangle_constant(2.5 * M_PI * M_PI, 1.0, 1.0);
  CHECK(r.index == o.index);
  CHECK(r.nu == o.nu);

  const IndexResult deg = elliptic_index(
      EllipticProblem{Rectangle{1.0, 1.0}, ScalarField::constant(5.0 * M_PI * M_PI)});
  CHECK(deg.index == 1);
  CHECK(deg.nu == 2);
}

TEST_CASE("elliptic index is monotone in the potential") {
  const double values[] = {0.0, 5.0, 15.0, 45.0, 95.0};
  int prev_i = 0, prev_nu = 0;
  for (double b : values) {
    const IndexResult r =
        elliptic_index(EllipticProblem{Rectangle{1.0, 1.0}, ScalarField::constant(b)});
    CHECK(prev_i + prev_nu <= r.index + r.nu);
    CHECK(prev_i <= r.index);
    prev_i = r.index;
    prev_nu = r.nu;
  }
}

TEST_CASE("galerkin_count and lambda_lower_bound for elliptic problems") {
  const EllipticProblem p{Interval{1.0}, ScalarField::constant(15.0)};
  const GalerkinCount gc = galerkin_count(p);
  CHECK(gc.positives == 1);
  CHECK(gc.zeros == 0);

  const double lo = lambda_lower_bound(p);
  CHECK(lo <= -15.0);
  // Shifted operator must be positive definite (all form eigenvalues above 0).
  const GalerkinOperator g = assemble(
      EllipticProblem{Interval{1.0},
                      ScalarField::constant(15.0 + lo)},
      16);
  CHECK(sym_eig(g.matrix).eigenvalues(0) > 0.0);
}

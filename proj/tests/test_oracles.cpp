#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spectra/oracles.hpp"

using namespace spectra;

namespace {

ConstantSpectrum spec_of(std::initializer_list<double> vals, double lambda = 1.0) {
  Vector v(static_cast<int>(vals.size()));
  int k = 0;
  for (double x : vals) v(k++) = x;
  return ConstantSpectrum{v, lambda};
}

}  // namespace

TEST_CASE("periodic counts") {
  const OracleResult zero = example38(Periodic{}, spec_of({0.0, 0.0}));
  CHECK(zero.index == 0);
  CHECK(zero.nu == 2);

  // Positive eigenvalues count once each; 39.5 clears 4 pi^2 once more.
  const OracleResult r = example38(Periodic{}, spec_of({5.0, 39.5}));
  CHECK(r.index == 4);
  CHECK(r.nu == 0);

  // Exactly on a crossing: alpha = 4 pi^2 contributes nu = 2.
  const OracleResult on = example38(Periodic{}, spec_of({4.0 * M_PI * M_PI}));
  CHECK(on.nu == 2);
  CHECK(on.index == 1);

  // Negative eigenvalues contribute nothing.
  const OracleResult neg = example38(Periodic{}, spec_of({-3.0}));
  CHECK(neg.index == 0);
  CHECK(neg.nu == 0);
}

TEST_CASE("periodic counts scale with lambda") {
  // lambda = 2 doubles the crossing values 4 lambda j^2 pi^2.
  const double just_below = 8.0 * M_PI * M_PI - 0.01;
  CHECK(example38(Periodic{}, spec_of({just_below}, 2.0)).index == 1);
  CHECK(example38(Periodic{}, spec_of({just_below + 0.02}, 2.0)).index == 3);
}

TEST_CASE("antiperiodic counts") {
  const OracleResult zero = example38(Antiperiodic{}, spec_of({0.0, 0.0}));
  CHECK(zero.index == 0);
  CHECK(zero.nu == 0);

  // alpha = pi^2 sits exactly on the first crossing (j = 1, odd squares).
  const OracleResult on = example38(Antiperiodic{}, spec_of({M_PI * M_PI}));
  CHECK(on.index == 0);
  CHECK(on.nu == 2);

  const OracleResult r = example38(Antiperiodic{}, spec_of({10.0}));
  CHECK(r.index == 2);
  CHECK(r.nu == 0);
}

TEST_CASE("scalar coupling counts and domain guard") {
  CHECK_THROWS_AS(example38(ScalarCoupling{0.0}, spec_of({1.0})), DomainError);
  CHECK_THROWS_AS(example38(ScalarCoupling{1.0}, spec_of({1.0})), DomainError);
  CHECK_THROWS_AS(example38(ScalarCoupling{-1.0}, spec_of({1.0})), DomainError);

  // a = 2: mu0 = arccos(4/5); smallest crossing mu0^2 ~ 0.427.
  const double mu0 = std::acos(0.8);
  const OracleResult below = example38(ScalarCoupling{2.0}, spec_of({0.4}));
  CHECK(below.index == 0);
  const OracleResult above = example38(ScalarCoupling{2.0}, spec_of({0.45}));
  CHECK(above.index == 1);
  const OracleResult on = example38(ScalarCoupling{2.0}, spec_of({mu0 * mu0}));
  CHECK(on.nu == 1);

  // a = -0.5: cos(mu0) = -0.8, crossings mu0^2 ~ 6.24 and (2pi - mu0)^2 ~ 14.3.
  const OracleResult neg = example38(ScalarCoupling{-0.5}, spec_of({50.0}));
  CHECK(neg.index == 2);
  CHECK(neg.nu == 0);
}

TEST_CASE("dirichlet counts") {
  const OracleResult zero = dirichlet_constant(spec_of({0.0}));
  CHECK(zero.index == 0);
  CHECK(zero.nu == 0);

  const OracleResult on = dirichlet_constant(spec_of({M_PI * M_PI}));
  CHECK(on.index == 0);
  CHECK(on.nu == 1);

  // 15 clears pi^2 only; 50 clears pi^2 and 4 pi^2.
  const OracleResult r = dirichlet_constant(spec_of({15.0, 50.0}));
  CHECK(r.index == 3);
  CHECK(r.nu == 0);
}

TEST_CASE("rectangle counts") {
  const OracleResult zero = rectangle_constant(0.0, 1.0, 1.0);
  CHECK(zero.index == 0);
  CHECK(zero.nu == 0);

  // 2.5 pi^2 clears only the ground mode 2 pi^2.
  const OracleResult r = rectangle_constant(2.5 * M_PI * M_PI, 1.0, 1.0);
  CHECK(r.index == 1);
  CHECK(r.nu == 0);

  // Exactly on the ground mode: nu = 1. The value is written in the same
  // association order the crossing family uses, so equality is exact.
  const OracleResult on = rectangle_constant(M_PI * M_PI * 2.0, 1.0, 1.0);
  CHECK(on.index == 0);
  CHECK(on.nu == 1);

  // 5 pi^2 is the doubly degenerate (1,2)/(2,1) pair.
  const OracleResult pair = rectangle_constant(M_PI * M_PI * 5.0, 1.0, 1.0);
  CHECK(pair.index == 1);
  CHECK(pair.nu == 2);

  // Anisotropic rectangle: modes pi^2 (j^2 / 4 + k^2).
  const OracleResult aniso = rectangle_constant(1.3 * M_PI * M_PI, 2.0, 1.0);
  CHECK(aniso.index == 1);
  CHECK(aniso.nu == 0);
}

TEST_CASE("oracles reject malformed spectra") {
  CHECK_THROWS_AS(dirichlet_constant(spec_of({2.0, 1.0})), InvalidMatrix);
  CHECK_THROWS_AS(dirichlet_constant(spec_of({1.0}, -1.0)), PositivityViolation);
  CHECK_THROWS_AS(rectangle_constant(1.0, -1.0, 1.0), PositivityViolation);
}

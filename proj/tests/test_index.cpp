#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "spectra/index.hpp"

using namespace spectra;

namespace {

MatrixFunction id_fn(int n) { return MatrixFunction::constant(Matrix::Identity(n, n)); }
MatrixFunction zero_fn(int n) { return MatrixFunction::constant(Matrix::Zero(n, n)); }
MatrixFunction const_fn(double v, int n) {
  return MatrixFunction::constant(v * Matrix::Identity(n, n));
}

SecondOrderProblem dirichlet(const MatrixFunction& B) {
  return SecondOrderProblem{id_fn(B.dim()), B, SturmLiouville{0.0, M_PI}};
}

Matrix random_symmetric(int n, std::mt19937& rng, double scale = 1.0) {
  std::normal_distribution<double> d(0.0, scale);
  Matrix A(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) A(i, j) = d(rng);
  }
  return 0.5 * (A + A.transpose());
}

}  // namespace

TEST_CASE("lambda_lower_bound clears the spectrum") {
  CHECK(lambda_lower_bound(dirichlet(zero_fn(1))) <= -1.0);
  CHECK(lambda_lower_bound(dirichlet(const_fn(10.0, 2))) <= -11.0);
  const SecondOrderProblem robin{id_fn(1), zero_fn(1),
                                 SturmLiouville{M_PI / 4.0, 3.0 * M_PI / 4.0}};
  CHECK_NOTHROW(lambda_lower_bound(robin));
}

TEST_CASE("the shifted form is negative definite at the lower bound") {
  for (double b : {0.0, 25.0}) {
    SecondOrderProblem p = dirichlet(const_fn(b, 1));
    const double lo = lambda_lower_bound(p);
    p.B = shift(p.B, lo);
    const DiscreteInertia in = second_order_form_inertia(p, 256);
    CHECK(in.positives == 0);
    CHECK(in.zeros == 0);
  }
}

TEST_CASE("index_sweep classical second-order values") {
  const IndexResult zero = index_sweep(dirichlet(zero_fn(1)));
  CHECK(zero.index == 0);
  CHECK(zero.nu == 0);
  CHECK(zero.validated);

  const IndexResult one = index_sweep(dirichlet(const_fn(15.0, 1)));
  CHECK(one.index == 1);
  CHECK(one.nu == 0);

  Matrix D = Matrix::Zero(2, 2);
  D(0, 0) = 5.0;
  D(1, 1) = 39.5;
  const SecondOrderProblem per{
      id_fn(2), MatrixFunction::constant(D),
      GeneralizedPeriodic{Matrix::Identity(2, 2), Matrix::Identity(2, 2)}};
  const IndexResult pr = index_sweep(per);
  CHECK(pr.index == 4);
  CHECK(pr.nu == 0);
}

TEST_CASE("relative_index_monotone counts pencil crossings") {
  const SecondOrderProblem tmpl = dirichlet(zero_fn(1));

  // s * 2 pi^2 passes through pi^2 at s = 1/2.
  CHECK(relative_index_monotone(tmpl, path(zero_fn(1), const_fn(2.0 * M_PI * M_PI, 1)))
        == 1);
  // Staying below the first crossing value contributes nothing.
  CHECK(relative_index_monotone(tmpl, path(zero_fn(1), const_fn(5.0, 1))) == 0);
  // A short monotone step off a degenerate start counts exactly its nullity.
  CHECK(relative_index_monotone(
            tmpl, path(const_fn(M_PI * M_PI, 1), const_fn(M_PI * M_PI + 0.5, 1)))
        == 1);
  CHECK_THROWS_AS(relative_index_monotone(tmpl, path(id_fn(1), id_fn(1))),
                  NotMonotone);
}

TEST_CASE("relative_index reproduces index differences") {
  const SecondOrderProblem tmpl = dirichlet(zero_fn(1));
  const MatrixFunction b1 = const_fn(5.0, 1);
  const MatrixFunction b2 = const_fn(45.0, 1);

  CHECK(relative_index(tmpl, b1, b1) == 0);
  CHECK(relative_index(tmpl, b1, b2) == -relative_index(tmpl, b2, b1));

  const int i1 = index_sweep(dirichlet(b1)).index;
  const int i2 = index_sweep(dirichlet(b2)).index;
  CHECK(relative_index(tmpl, b1, b2) == i2 - i1);
}

TEST_CASE("relative_index is additive and k-independent") {
  std::mt19937 rng(41);
  const SecondOrderProblem tmpl{id_fn(2), zero_fn(2), SturmLiouville{0.0, M_PI}};
  for (int trial = 0; trial < 5; ++trial) {
    const MatrixFunction a = MatrixFunction::constant(random_symmetric(2, rng, 15.0));
    const MatrixFunction b = MatrixFunction::constant(random_symmetric(2, rng, 15.0));
    const MatrixFunction c = MatrixFunction::constant(random_symmetric(2, rng, 15.0));
    CHECK(relative_index(tmpl, a, b) + relative_index(tmpl, b, c) ==
          relative_index(tmpl, a, c));

    // Recompute the two-sweep difference against a larger cap by hand.
    const double k = 1.0 + std::max({a.sup_norm(), b.sup_norm()}) + 5.0;
    const MatrixFunction cap = const_fn(k, 2);
    const int by_hand = relative_index_monotone(tmpl, path(a, cap)) -
                        relative_index_monotone(tmpl, path(b, cap));
    CHECK(relative_index(tmpl, a, b) == by_hand);
  }
}

TEST_CASE("ekeland_index examples and additivity") {
  const SecondOrderProblem tmpl = dirichlet(zero_fn(1));
  const EkelandIndex e =
      ekeland_index(tmpl, const_fn(2.0 * M_PI * M_PI, 1), zero_fn(1));
  CHECK(e.relative == 1);
  CHECK(e.nu == 0);

  // i_rel(B) - i_rel(B0') differs from I(B0', B) only through nu(B0').
  const MatrixFunction mid = const_fn(15.0, 1);
  const EkelandIndex em = ekeland_index(tmpl, const_fn(2.0 * M_PI * M_PI, 1), mid);
  CHECK(em.relative ==
        relative_index(tmpl, mid, const_fn(2.0 * M_PI * M_PI, 1)) -
            index_sweep(dirichlet(mid)).nu);
}

TEST_CASE("monotonicity of the index on random ordered pairs") {
  std::mt19937 rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 1 + trial % 2;
    const Matrix B1 = random_symmetric(n, rng, 20.0);
    const Matrix B2 = B1 + (0.5 + trial) * Matrix::Identity(n, n);
    const IndexResult r1 = index_sweep(dirichlet(MatrixFunction::constant(B1)));
    const IndexResult r2 = index_sweep(dirichlet(MatrixFunction::constant(B2)));
    CHECK(r1.index + r1.nu <= r2.index);
  }
}

TEST_CASE("index_first_order on Bolza problems uses the second-order anchor") {
  // The reference coefficient itself: the index equals the anchor.
  Matrix D = Matrix::Zero(2, 2);
  D(1, 1) = 1.0;
  const FirstOrderProblem ref{MatrixFunction::constant(D), Bolza{0.0, M_PI / 2.0}};
  const IndexResult r = index_first_order(ref);
  CHECK(r.anchor_value == 0.0);
  CHECK(r.index == 0);

  // Cross-system agreement: a second-order problem and its first-order form
  // carry the same index and nullity.
  std::mt19937 rng(47);
  for (int trial = 0; trial < 4; ++trial) {
    const int n = 1 + trial % 2;
    const Matrix B = random_symmetric(n, rng, 25.0);
    const double alpha = (trial % 2 == 0) ? 0.0 : M_PI / 3.0;
    const double beta = (trial < 2) ? M_PI : 2.0 * M_PI / 3.0;
    const SecondOrderProblem p{id_fn(n), MatrixFunction::constant(B),
                               SturmLiouville{alpha, beta}};
    Matrix S = Matrix::Zero(2 * n, 2 * n);
    S.topLeftCorner(n, n) = B;
    S.bottomRightCorner(n, n) = Matrix::Identity(n, n);
    const FirstOrderProblem fp{MatrixFunction::constant(S), Bolza{alpha, beta}};
    const IndexResult rs = index_sweep(p);
    const IndexResult rf = index_first_order(fp);
    CHECK(rs.index == rf.index);
    CHECK(rs.nu == rf.nu);
  }
}

TEST_CASE("index_first_order on symplectic coupling reports the anchored value") {
  const FirstOrderProblem p{zero_fn(2), Symplectic{Matrix::Identity(2, 2)}};
  const IndexResult r = index_first_order(p, 3);
  CHECK(r.index == 3);
  CHECK(r.nu == 2);
}

TEST_CASE("galerkin_count matches the sweep on classical cases") {
  const GalerkinCount g0 = galerkin_count(dirichlet(zero_fn(1)));
  CHECK(g0.positives == 0);
  CHECK(g0.zeros == 0);

  const GalerkinCount g1 = galerkin_count(dirichlet(const_fn(15.0, 1)));
  CHECK(g1.positives == 1);
  CHECK(g1.zeros == 0);

  const GalerkinCount gz = galerkin_count(dirichlet(const_fn(M_PI * M_PI, 1)));
  CHECK(gz.positives == 0);
  CHECK(gz.zeros == 1);
}

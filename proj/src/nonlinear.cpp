#include "spectra/nonlinear.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <type_traits>

namespace spectra {

namespace {

// ---------------------------------------------------------------------------
// Certification
// ---------------------------------------------------------------------------

struct IndexPair {
  int i = 0;
  int nu = 0;
};

EllipticProblem elliptic_with(const EllipticProblem& tmpl, const MatrixFunction& B) {
  if (B.dim() != 1) {
    throw DomainError("certify: elliptic templates take scalar coefficients");
  }
  if (B.kind() == MatrixFunction::Kind::Constant) {
    return {tmpl.geometry, ScalarField::constant(B(0.0)(0, 0))};
  }
  if (!std::holds_alternative<Interval>(tmpl.geometry)) {
    throw DomainError("certify: nonconstant rectangle coefficients unsupported");
  }
  std::vector<double> samples;
  samples.reserve(kValidationGrid);
  for (int k = 0; k < kValidationGrid; ++k) {
    samples.push_back(B(k / double(kValidationGrid - 1))(0, 0));
  }
  return {tmpl.geometry, ScalarField::sampled1d(std::move(samples))};
}

IndexPair pair_of(const LinearTemplate& tmpl, const MatrixFunction& B) {
  return std::visit(
      [&](const auto& t) -> IndexPair {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, SecondOrderProblem>) {
          const IndexResult r = index_sweep(SecondOrderProblem{t.Lambda, B, t.bc});
          return {r.index, r.nu};
        } else if constexpr (std::is_same_v<T, FirstOrderProblem>) {
          const IndexResult r = index_first_order(FirstOrderProblem{B, t.bc});
          return {r.index, r.nu};
        } else {
          const IndexResult r = elliptic_index(elliptic_with(t, B));
          return {r.index, r.nu};
        }
      },
      tmpl);
}

int state_dimension(const LinearTemplate& tmpl) {
  return std::visit(
      [](const auto& t) -> int {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, SecondOrderProblem>) {
          return t.Lambda.dim();
        } else if constexpr (std::is_same_v<T, FirstOrderProblem>) {
          return t.B.dim() / 2;
        } else {
          return 1;
        }
      },
      tmpl);
}

std::string pair_str(const IndexPair& p) {
  std::ostringstream s;
  s << "(i, nu) = (" << p.i << ", " << p.nu << ")";
  return s.str();
}

}  // namespace

CertificateReport certify(const std::string& theorem, const LinearTemplate& tmpl,
                          const CertifyData& data) {
  static const std::vector<std::string> kAsymptotic = {"1.6", "3.4", "4.3",
                                                       "4.7", "5.3"};
  static const std::vector<std::string> kWindowed = {"1.7", "3.5", "3.12",
                                                     "4.4", "4.8", "5.4"};
  static const std::vector<std::string> kConvex = {"1.9", "5.6"};
  auto in = [&](const std::vector<std::string>& v) {
    return std::find(v.begin(), v.end(), theorem) != v.end();
  };
  const bool asymptotic = in(kAsymptotic) || theorem == "3.10";
  const bool windowed = in(kWindowed);
  const bool convex = in(kConvex);
  const bool three_solution = theorem == "5.5";
  if (!asymptotic && !windowed && !convex && !three_solution) {
    throw DomainError("certify: unknown theorem id " + theorem);
  }

  CertificateReport rep;
  rep.theorem = theorem;
  bool any_fail = false;
  bool any_missing = false;
  auto record = [&](const std::string& what, const std::string& computed,
                    bool pass) {
    rep.hypotheses.push_back(
        {what, computed,
         pass ? HypothesisRecord::Status::Pass : HypothesisRecord::Status::Fail});
    if (!pass) any_fail = true;
  };
  auto asserted = [&](const std::string& what, bool flag) {
    rep.hypotheses.push_back({what, flag ? "asserted by caller" : "not asserted",
                              flag ? HypothesisRecord::Status::UserAsserted
                                   : HypothesisRecord::Status::Missing});
    if (!flag) any_missing = true;
  };

  const PencilPath ordering = path(data.B1, data.B2);
  {
    std::ostringstream s;
    s << "min eig(B2 - B1) = " << ordering.eps;
    if (three_solution) {
      record("B1 < B2 uniformly", s.str(), ordering.monotone);
    } else {
      record("B1 <= B2 pointwise", s.str(), ordering.eps >= -1e-12);
    }
  }

  const IndexPair p1 = pair_of(tmpl, data.B1);
  const IndexPair p2 = pair_of(tmpl, data.B2);
  record("nu(B2) = 0", "B2: " + pair_str(p2), p2.nu == 0);

  if (convex) {
    record("i(B1) + nu(B1) = i(B2)",
           "B1: " + pair_str(p1) + "; B2: " + pair_str(p2),
           p1.i + p1.nu == p2.i);
    if (data.B0) {
      const IndexPair p0 = pair_of(tmpl, *data.B0);
      record("i(B0) > i(B1) + nu(B1)", "B0: " + pair_str(p0),
             p0.i > p1.i + p1.nu);
    }
    asserted("potential minus the B1 quadratic form is convex",
             data.assert_convex_after_shift);
  } else {
    record("i(B1) = i(B2)", "B1: " + pair_str(p1) + "; B2: " + pair_str(p2),
           p1.i == p2.i);
    if (three_solution) {
      record("nu(B1) = 0", "B1: " + pair_str(p1), p1.nu == 0);
    }
    asserted("difference between the nonlinearity and its slope field is bounded",
             data.assert_bounded_difference);
    if (theorem == "3.10") {
      // An asymptotic growth condition cannot be decided from finitely many
      // samples, so it is caller-asserted by design.
      asserted("remainder is sublinear at infinity",
               data.assert_sublinear_remainder);
    }
  }

  if (windowed || three_solution) {
    if (!data.Bbar) {
      rep.hypotheses.push_back({"slope at zero supplied", "Bbar missing",
                                HypothesisRecord::Status::Missing});
      any_missing = true;
    } else {
      const IndexPair pb = pair_of(tmpl, *data.Bbar);
      if (three_solution) {
        const PencilPath lower = path(data.B1, *data.Bbar);
        record("Bbar > B1 uniformly",
               "min eig(Bbar - B1) = " + std::to_string(lower.eps),
               lower.monotone);
        record("nu(Bbar) = 0", "Bbar: " + pair_str(pb), pb.nu == 0);
        record("i(Bbar) > i(B1)", "Bbar: " + pair_str(pb), pb.i > p1.i);
      } else {
        const bool excluded = p1.i < pb.i || p1.i > pb.i + pb.nu;
        record("i(B1) outside [i(Bbar), i(Bbar) + nu(Bbar)]",
               "B1: " + pair_str(p1) + "; Bbar: " + pair_str(pb), excluded);
        const int n = state_dimension(tmpl);
        const int gap_needed =
            (theorem == "3.12" || theorem == "4.8") ? 2 * n : n;
        rep.second_solution =
            pb.nu == 0 && std::abs(p1.i - pb.i) >= gap_needed;
      }
    }
  }

  rep.verdict = any_fail ? CertificateReport::Verdict::Refuted
              : any_missing ? CertificateReport::Verdict::Inconclusive
                            : CertificateReport::Verdict::Certified;
  return rep;
}

// ---------------------------------------------------------------------------
// Finite-difference collocation
// ---------------------------------------------------------------------------

namespace {

using Pointwise = std::function<Vector(double, const Vector&)>;
using PointwiseJac = std::function<Matrix(double, const Vector&)>;
using Triplet = Eigen::Triplet<double>;
using Sparse = Eigen::SparseMatrix<double>;

struct Collocation {
  const SecondOrderProblem* lin;
  int N = 0;  // intervals
  int n = 0;
  double h = 0.0;
  std::vector<Matrix> lam_half;  // Lambda at midpoints, N entries

  Collocation(const SecondOrderProblem& p, int intervals)
      : lin(&p), N(intervals), n(p.Lambda.dim()), h(1.0 / intervals) {
    lam_half.reserve(N);
    for (int e = 0; e < N; ++e) lam_half.push_back(p.Lambda((e + 0.5) * h));
  }

  int dim() const { return (N + 1) * n; }

  Vector node(const Vector& X, int k) const { return X.segment(k * n, n); }

  /// Residual of the discrete system; rows grouped as
  /// [start BC, interior 1..N-1, end BC].
  Vector residual(const Vector& X, const Pointwise& g) const {
    Vector F = Vector::Zero(dim());
    for (int k = 1; k < N; ++k) {
      const Vector xk = node(X, k);
      Vector r = (lam_half[k] * (node(X, k + 1) - xk) -
                  lam_half[k - 1] * (xk - node(X, k - 1))) /
                     (h * h) +
                 g(k * h, xk);
      F.segment(k * n, n) = r;
    }
    const Vector x0 = node(X, 0), x1 = node(X, 1), x2 = node(X, 2);
    const Vector xN = node(X, N), xNm1 = node(X, N - 1), xNm2 = node(X, N - 2);
    if (const auto* sl = std::get_if<SturmLiouville>(&lin->bc)) {
      if (std::abs(sl->alpha) < 1e-12) {
        F.head(n) = x0;
      } else {
        const double cot_a = std::cos(sl->alpha) / std::sin(sl->alpha);
        F.head(n) = lin->Lambda(0.0) * (-3.0 * x0 + 4.0 * x1 - x2) / (2.0 * h) -
                    cot_a * x0;
      }
      if (std::abs(std::sin(sl->beta)) < 1e-12) {
        F.tail(n) = xN;
      } else {
        const double cot_b = std::cos(sl->beta) / std::sin(sl->beta);
        F.tail(n) = lin->Lambda(1.0) * (3.0 * xN - 4.0 * xNm1 + xNm2) / (2.0 * h) -
                    cot_b * xN;
      }
    } else {
      const auto& gp = std::get<GeneralizedPeriodic>(lin->bc);
      F.head(n) = xN - gp.M * x0;
      F.tail(n) = lin->Lambda(1.0) * (3.0 * xN - 4.0 * xNm1 + xNm2) / (2.0 * h) -
                  lin->Lambda(1.0) * gp.N * (-3.0 * x0 + 4.0 * x1 - x2) / (2.0 * h);
    }
    return F;
  }

  Sparse jacobian(const Vector& X, const PointwiseJac& dg) const {
    std::vector<Triplet> trips;
    trips.reserve((3 * (N - 1) + 8) * n * n);
    auto add_block = [&](int row_node, int col_node, const Matrix& M) {
      for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
          if (M(r, c) != 0.0) {
            trips.emplace_back(row_node * n + r, col_node * n + c, M(r, c));
          }
        }
      }
    };
    for (int k = 1; k < N; ++k) {
      add_block(k, k + 1, lam_half[k] / (h * h));
      add_block(k, k - 1, lam_half[k - 1] / (h * h));
      add_block(k, k,
                -(lam_half[k] + lam_half[k - 1]) / (h * h) + dg(k * h, node(X, k)));
    }
    const Matrix I = Matrix::Identity(n, n);
    if (const auto* sl = std::get_if<SturmLiouville>(&lin->bc)) {
      if (std::abs(sl->alpha) < 1e-12) {
        add_block(0, 0, I);
      } else {
        const double cot_a = std::cos(sl->alpha) / std::sin(sl->alpha);
        const Matrix L0 = lin->Lambda(0.0);
        add_block(0, 0, -1.5 / h * L0 - cot_a * I);
        add_block(0, 1, 2.0 / h * L0);
        add_block(0, 2, -0.5 / h * L0);
      }
      if (std::abs(std::sin(sl->beta)) < 1e-12) {
        add_block(N, N, I);
      } else {
        const double cot_b = std::cos(sl->beta) / std::sin(sl->beta);
        const Matrix L1 = lin->Lambda(1.0);
        add_block(N, N, 1.5 / h * L1 - cot_b * I);
        add_block(N, N - 1, -2.0 / h * L1);
        add_block(N, N - 2, 0.5 / h * L1);
      }
    } else {
      const auto& gp = std::get<GeneralizedPeriodic>(lin->bc);
      add_block(0, N, I);
      add_block(0, 0, -gp.M);
      const Matrix L1 = lin->Lambda(1.0);
      const Matrix LN = L1 * gp.N;
      add_block(N, N, 1.5 / h * L1);
      add_block(N, N - 1, -2.0 / h * L1);
      add_block(N, N - 2, 0.5 / h * L1);
      add_block(N, 0, 1.5 / h * LN);
      add_block(N, 1, -2.0 / h * LN);
      add_block(N, 2, 0.5 / h * LN);
    }
    Sparse J(dim(), dim());
    J.setFromTriplets(trips.begin(), trips.end());
    return J;
  }

  double interior_norm(const Vector& F) const {
    double s = 0.0;
    for (int k = 1; k < N; ++k) s += F.segment(k * n, n).squaredNorm();
    return std::sqrt(h * s);
  }

  double boundary_norm(const Vector& F) const {
    return std::sqrt(F.head(n).squaredNorm() + F.tail(n).squaredNorm());
  }
};

/// Damped Newton on the collocation system. Returns false on divergence;
/// throws SingularJacobian with the homotopy parameter on factorization
/// failure.
bool newton(const Collocation& disc, Vector& X, const Pointwise& g,
            const PointwiseJac& dg, double tol, double homotopy_lambda) {
  Vector F = disc.residual(X, g);
  for (int it = 0; it < 50; ++it) {
    const double fn = F.norm();
    if (disc.interior_norm(F) <= tol && disc.boundary_norm(F) <= tol) return true;
    Eigen::SparseLU<Sparse> lu(disc.jacobian(X, dg));
    if (lu.info() != Eigen::Success) {
      std::ostringstream s;
      s << "solve_bvp: singular collocation Jacobian at homotopy lambda = "
        << homotopy_lambda;
      throw SingularJacobian(s.str());
    }
    const Vector step = lu.solve(-F);
    if (!step.allFinite()) return false;
    double damping = 1.0;
    for (int half = 0; half < 30; ++half) {
      const Vector Xn = X + damping * step;
      const Vector Fn = disc.residual(Xn, g);
      if (Fn.norm() <= (1.0 - 0.25 * damping) * fn) {
        X = Xn;
        F = Fn;
        damping = -1.0;
        break;
      }
      damping *= 0.5;
    }
    if (damping > 0.0) return false;
  }
  return false;
}

struct GridSolve {
  Vector X;
  double residual;
  double boundary_residual;
};

GridSolve solve_on_grid(const SecondOrderProblem& lin, const Nonlinearity& f,
                        int N, double tol) {
  const Collocation disc(lin, N);
  Vector X = Vector::Zero(disc.dim());
  double lambda = 1.0;
  double step = 0.1;
  while (lambda > 0.0) {
    const double target = std::max(0.0, lambda - step);
    auto g = [&](double t, const Vector& x) -> Vector {
      return target * (lin.B(t) * x) + (1.0 - target) * f.force(t, x);
    };
    auto dg = [&](double t, const Vector& x) -> Matrix {
      return target * lin.B(t) + (1.0 - target) * f.jacobian(t, x);
    };
    Vector trial = X;
    bool ok = false;
    try {
      ok = newton(disc, trial, g, dg, tol, target);
    } catch (const SingularJacobian&) {
      if (step < 1e-6) throw;
      ok = false;
    }
    if (ok) {
      X = trial;
      lambda = target;
      step = std::min(2.0 * step, 0.25);
    } else {
      step *= 0.5;
      if (step < 1e-6) {
        throw ContinuationStalled("solve_bvp: homotopy step underflow at lambda = " +
                                  std::to_string(lambda));
      }
    }
  }
  auto g0 = [&](double t, const Vector& x) { return f.force(t, x); };
  const Vector F = disc.residual(X, g0);
  return {std::move(X), disc.interior_norm(F), disc.boundary_norm(F)};
}

Vector refine_onto(const Vector& coarse, int N, int n) {
  // Linear interpolation of the coarse nodes onto the doubled grid.
  Vector fine = Vector::Zero((2 * N + 1) * n);
  for (int k = 0; k <= 2 * N; ++k) {
    if (k % 2 == 0) {
      fine.segment(k * n, n) = coarse.segment((k / 2) * n, n);
    } else {
      fine.segment(k * n, n) = 0.5 * (coarse.segment((k / 2) * n, n) +
                                      coarse.segment((k / 2 + 1) * n, n));
    }
  }
  return fine;
}

double grid_distance(const Vector& a, const Vector& b, int nodes) {
  return std::sqrt((a - b).squaredNorm() / nodes);
}

SecondOrderProblem shifted_start(const SecondOrderProblem& lin, double& eps_used) {
  eps_used = 0.0;
  if (nullity(lin).nu == 0) return lin;
  double eps = 1e-3;
  for (int k = 0; k < 10; ++k) {
    const SecondOrderProblem shifted{lin.Lambda, shift(lin.B, -eps), lin.bc};
    if (nullity(shifted).nu == 0) {
      eps_used = eps;
      return shifted;
    }
    eps *= 2.0;
  }
  throw NoConvergence("solve_bvp: could not make the homotopy start nondegenerate");
}

Solution pack_solution(const Vector& X, int N, int n, double residual,
                       double boundary_residual) {
  Solution out;
  out.grid.reserve(N + 1);
  out.states.resize(n, N + 1);
  for (int k = 0; k <= N; ++k) {
    out.grid.push_back(k / double(N));
    out.states.col(k) = X.segment(k * n, n);
  }
  out.residual = residual;
  out.boundary_residual = boundary_residual;
  return out;
}

}  // namespace

Solution solve_bvp(const NonlinearProblem& p, const SolveOptions& opts) {
  validate(p.linear);
  if (!p.f.force || !p.f.jacobian) {
    throw DomainError("solve_bvp: force and jacobian callbacks are required");
  }
  const int n = p.linear.Lambda.dim();
  const int N = std::max(8, opts.grid);
  double eps_used = 0.0;
  const SecondOrderProblem start = shifted_start(p.linear, eps_used);

  const GridSolve coarse = solve_on_grid(start, p.f, N, opts.tol);
  const GridSolve fine = solve_on_grid(start, p.f, 2 * N, opts.tol);
  if (coarse.residual > opts.tol || fine.residual > opts.tol) {
    throw NewtonDiverged("solve_bvp: residual tolerance not met after refinement");
  }

  Solution out = pack_solution(fine.X, 2 * N, n, fine.residual,
                               fine.boundary_residual);
  out.start_shift = eps_used;
  out.refinement_difference =
      grid_distance(refine_onto(coarse.X, N, n), fine.X, 2 * N + 1);

  if (opts.multistart > 1) {
    const Collocation disc(start, N);
    auto g0 = [&](double t, const Vector& x) { return p.f.force(t, x); };
    auto dg0 = [&](double t, const Vector& x) { return p.f.jacobian(t, x); };
    std::vector<Vector> found;
    found.push_back(coarse.X);
    std::mt19937 rng(12345);
    const double scale =
        1.0 + 10.0 * coarse.X.cwiseAbs().maxCoeff() + p.linear.B.sup_norm();
    std::normal_distribution<double> dist(0.0, scale);
    for (int s = 1; s < opts.multistart; ++s) {
      Vector X0(disc.dim());
      for (int i = 0; i < X0.size(); ++i) X0(i) = dist(rng);
      bool ok = false;
      try {
        ok = newton(disc, X0, g0, dg0, opts.tol, 0.0);
      } catch (const SingularJacobian&) {
        ok = false;
      }
      if (!ok) continue;
      bool fresh = true;
      for (const auto& prev : found) {
        if (grid_distance(prev, X0, N + 1) <=
            1e-4 * (1.0 + prev.norm() / std::sqrt(double(N + 1)))) {
          fresh = false;
          break;
        }
      }
      if (fresh) found.push_back(std::move(X0));
    }
    out.distinct_solutions = static_cast<int>(found.size());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fenchel conjugate and the dual minimizer
// ---------------------------------------------------------------------------

ConjugatePoint fenchel_conjugate(const PointwiseConvex& N, const Vector& u,
                                 double t) {
  if (!N.value || !N.gradient || !N.hessian) {
    throw DomainError("fenchel_conjugate: value, gradient, hessian required");
  }
  ConjugatePoint out;
  out.u = u;
  Vector y = u;
  const double tol = 1e-12 * (1.0 + u.norm());
  for (int it = 0; it < 100; ++it) {
    const Vector r = N.gradient(t, y) - u;
    if (r.norm() <= tol) {
      out.iterations = it;
      out.y = y;
      out.value = u.dot(y) - N.value(t, y);
      // Probe certificate: no sampled point may beat the reported maximum.
      const double delta = 1e-5 * (1.0 + y.norm());
      double best_excess = 0.0;
      for (int i = 0; i < y.size(); ++i) {
        for (double sgn : {-1.0, 1.0}) {
          Vector probe = y;
          probe(i) += sgn * delta;
          best_excess = std::max(
              best_excess, u.dot(probe) - N.value(t, probe) - out.value);
        }
      }
      out.duality_gap = best_excess;
      return out;
    }
    const Matrix H = N.hessian(t, y);
    const EigenDecomposition ed = sym_eig(0.5 * (H + H.transpose()));
    if (ed.eigenvalues.minCoeff() <= 0.0) {
      throw NotStronglyConvex("fenchel_conjugate: nonpositive curvature at iterate");
    }
    y -= H.ldlt().solve(r);
    if (!y.allFinite()) {
      throw NumericalBlowup("fenchel_conjugate: iterate left the finite range");
    }
  }
  throw NoConvergence("fenchel_conjugate: Newton did not converge");
}

Solution dual_solve(const NonlinearProblem& p, const SolveOptions& opts) {
  validate(p.linear);
  const auto* sl = std::get_if<SturmLiouville>(&p.linear.bc);
  if (sl == nullptr || std::abs(sl->alpha) > 1e-12 ||
      std::abs(std::sin(sl->beta)) > 1e-12) {
    throw DomainError("dual_solve: only Dirichlet end conditions are supported");
  }
  if (!p.f.potential || !p.f.force || !p.f.jacobian) {
    throw DomainError("dual_solve: potential, force, jacobian are required");
  }
  if (nullity(p.linear).nu != 0) {
    throw DomainError("dual_solve: the anchor coefficient must have nu = 0");
  }
  const int n = p.linear.Lambda.dim();
  const int N = std::max(8, opts.grid);
  const double h = 1.0 / N;
  const int m = N - 1;
  const int dim = m * n;

  // Symmetric interior operator of (Lambda x')' + B1 x.
  Matrix L = Matrix::Zero(dim, dim);
  std::vector<Matrix> lam_half;
  for (int e = 0; e < N; ++e) lam_half.push_back(p.linear.Lambda((e + 0.5) * h));
  for (int k = 1; k < N; ++k) {
    const int r = (k - 1) * n;
    L.block(r, r, n, n) =
        -(lam_half[k] + lam_half[k - 1]) / (h * h) + p.linear.B(k * h);
    if (k < N - 1) {
      L.block(r, r + n, n, n) = lam_half[k] / (h * h);
      L.block(r + n, r, n, n) = lam_half[k] / (h * h);
    }
  }
  const Eigen::LDLT<Matrix> solver(L);

  const PointwiseConvex Nc{
      [&](double t, const Vector& x) {
        return p.f.potential(t, x) - 0.5 * x.dot(p.linear.B(t) * x);
      },
      [&](double t, const Vector& x) -> Vector {
        return p.f.force(t, x) - p.linear.B(t) * x;
      },
      [&](double t, const Vector& x) -> Matrix {
        return p.f.jacobian(t, x) - p.linear.B(t);
      }};

  double gap_sum = 0.0;
  auto evaluate = [&](const Vector& u, Vector& grad) {
    const Vector xt = solver.solve(u);
    double psi = 0.5 * h * xt.dot(u);
    grad.resize(dim);
    double gaps = 0.0;
    for (int k = 1; k < N; ++k) {
      const ConjugatePoint cp =
          fenchel_conjugate(Nc, u.segment((k - 1) * n, n), k * h);
      psi += h * cp.value;
      gaps += h * cp.duality_gap;
      grad.segment((k - 1) * n, n) = h * (xt.segment((k - 1) * n, n) + cp.y);
    }
    gap_sum = gaps;
    return psi;
  };

  Vector u = Vector::Zero(dim);
  Vector grad;
  double psi = evaluate(u, grad);
  double bb_step = 1.0;
  Vector prev_u, prev_grad;
  for (int it = 0; it < 200000; ++it) {
    if (grad.norm() <= 1e-7) break;
    if (it == 200000 - 1) {
      throw NoConvergence("dual_solve: gradient norm did not reach tolerance");
    }
    double step = bb_step;
    bool accepted = false;
    for (int shrink = 0; shrink < 60; ++shrink) {
      const Vector trial = u - step * grad;
      Vector trial_grad;
      const double trial_psi = evaluate(trial, trial_grad);
      if (trial_psi <= psi - 1e-4 * step * grad.squaredNorm()) {
        prev_u = u;
        prev_grad = grad;
        u = trial;
        grad = trial_grad;
        psi = trial_psi;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      throw LineSearchFailed("dual_solve: backtracking stalled");
    }
    const Vector s = u - prev_u;
    const Vector g = grad - prev_grad;
    const double sg = s.dot(g);
    bb_step = sg > 0.0 ? std::clamp(s.squaredNorm() / sg, 1e-10, 1e8) : 1.0;
  }
  if (gap_sum > 1e-8) {
    throw PrimalResidualLarge("dual_solve: Fenchel gap above the duality budget");
  }

  // Primal recovery x = -L^{-1} u, then a short Newton polish of the primal
  // collocation system to push the residual below the acceptance bound.
  const Vector xt = solver.solve(u);
  const Collocation disc(p.linear, N);
  Vector X = Vector::Zero(disc.dim());
  for (int k = 1; k < N; ++k) X.segment(k * n, n) = -xt.segment((k - 1) * n, n);
  auto g0 = [&](double t, const Vector& x) { return p.f.force(t, x); };
  auto dg0 = [&](double t, const Vector& x) { return p.f.jacobian(t, x); };
  (void)newton(disc, X, g0, dg0, 1e-10, 0.0);
  const Vector F = disc.residual(X, g0);
  const double residual = disc.interior_norm(F);
  if (residual > 1e-6) {
    throw PrimalResidualLarge("dual_solve: primal residual above 1e-6");
  }
  Solution out = pack_solution(X, N, n, residual, disc.boundary_norm(F));
  return out;
}

}  // namespace spectra

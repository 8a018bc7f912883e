#include "spectra/spectral.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace spectra {

namespace {

Matrix lambda_inverse(const Matrix& lambda_t) {
  return lambda_t.inverse();
}

/// Exact propagator of z' = J S z over [t0, t1] for piecewise-constant S.
Matrix exact_step(const MatrixFunction& S, const Matrix& J, double t0, double t1) {
  if (S.kind() == MatrixFunction::Kind::Constant) {
    return expm((t1 - t0) * J * S.values().front());
  }
  // Piecewise: multiply exponentials over the pieces meeting [t0, t1).
  Matrix acc = Matrix::Identity(S.dim(), S.dim());
  double t = t0;
  const auto& breaks = S.breakpoints();
  while (t < t1 - 1e-15) {
    double next = t1;
    for (double b : breaks) {
      if (b > t + 1e-15 && b < next) next = b;
    }
    acc = expm((next - t) * J * S(0.5 * (t + next))) * acc;
    t = next;
  }
  return acc;
}

double defect_of(const std::vector<Matrix>& gamma, const Matrix& J) {
  double d = 0.0;
  for (const auto& g : gamma) {
    d = std::max(d, (g.transpose() * J * g - J).norm());
  }
  return d;
}

Matrix rk4_end(const MatrixFunction& S, const Matrix& J, int steps) {
  const int dim = S.dim();
  Matrix state = Matrix::Identity(dim, dim);
  const double h = 1.0 / steps;
  for (int k = 0; k < steps; ++k) {
    const double t = k * h;
    const Matrix ca = J * S(t);
    const Matrix cm = J * S(t + 0.5 * h);
    const Matrix cb = J * S(t + h);
    const Matrix k1 = ca * state;
    const Matrix k2 = cm * (state + 0.5 * h * k1);
    const Matrix k3 = cm * (state + 0.5 * h * k2);
    const Matrix k4 = cb * (state + h * k3);
    state += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!state.allFinite()) throw NumericalBlowup("monodromy: integration blew up");
  }
  return state;
}

}  // namespace

Matrix initial_subspace(const AngleBC& bc, int n) {
  Matrix V(2 * n, n);
  const Matrix I = Matrix::Identity(n, n);
  if (bc.frame == AngleBC::Frame::SecondOrder) {
    // z = (y, x): x(0) cos(a) - y(0) sin(a) = 0 holds on span{(cos(a) c, sin(a) c)}.
    V.topRows(n) = std::cos(bc.alpha) * I;
    V.bottomRows(n) = std::sin(bc.alpha) * I;
  } else {
    // x = (x1, x2): x1(0) cos(a) + x2(0) sin(a) = 0.
    V.topRows(n) = -std::sin(bc.alpha) * I;
    V.bottomRows(n) = std::cos(bc.alpha) * I;
  }
  return V;
}

Matrix terminal_form(const AngleBC& bc, int n) {
  Matrix W(n, 2 * n);
  const Matrix I = Matrix::Identity(n, n);
  if (bc.frame == AngleBC::Frame::SecondOrder) {
    // x(1) cos(b) - y(1) sin(b) = 0.
    W.leftCols(n) = -std::sin(bc.beta) * I;
    W.rightCols(n) = std::cos(bc.beta) * I;
  } else {
    // x1(1) cos(b) + x2(1) sin(b) = 0.
    W.leftCols(n) = std::cos(bc.beta) * I;
    W.rightCols(n) = std::sin(bc.beta) * I;
  }
  return W;
}

HamiltonianSystem to_first_order(const SecondOrderProblem& p) {
  const int n = p.Lambda.dim();
  // S(t) = diag(Lambda(t)^{-1}, B(t)) on z = (y, x), y = Lambda x'.
  auto build = [&](const Matrix& lam, const Matrix& b) {
    Matrix S = Matrix::Zero(2 * n, 2 * n);
    S.topLeftCorner(n, n) = lambda_inverse(lam);
    S.bottomRightCorner(n, n) = b;
    return S;
  };
  MatrixFunction S = [&] {
    if (p.Lambda.kind() == MatrixFunction::Kind::Constant &&
        p.B.kind() == MatrixFunction::Kind::Constant) {
      return MatrixFunction::constant(build(p.Lambda(0.0), p.B(0.0)));
    }
    if (p.Lambda.kind() == MatrixFunction::Kind::Constant &&
        p.B.kind() == MatrixFunction::Kind::PiecewiseConstant) {
      std::vector<Matrix> values;
      for (const auto& b : p.B.values()) values.push_back(build(p.Lambda(0.0), b));
      return MatrixFunction::piecewise(p.B.breakpoints(), std::move(values));
    }
    std::vector<Matrix> values;
    values.reserve(kValidationGrid);
    for (int k = 0; k < kValidationGrid; ++k) {
      const double t = k / double(kValidationGrid - 1);
      values.push_back(build(p.Lambda(t), p.B(t)));
    }
    return MatrixFunction::sampled(std::move(values));
  }();
  if (const auto* sl = std::get_if<SturmLiouville>(&p.bc)) {
    return {std::move(S), AngleBC{sl->alpha, sl->beta, AngleBC::Frame::SecondOrder}};
  }
  const auto& gp = std::get<GeneralizedPeriodic>(p.bc);
  Matrix p_eff = Matrix::Zero(2 * n, 2 * n);
  p_eff.topLeftCorner(n, n) = p.Lambda(1.0) * gp.N * p.Lambda(0.0).inverse();
  p_eff.bottomRightCorner(n, n) = gp.M;
  return {std::move(S), p_eff};
}

HamiltonianSystem to_first_order(const FirstOrderProblem& p) {
  if (const auto* bz = std::get_if<Bolza>(&p.bc)) {
    return {p.B, AngleBC{bz->alpha, bz->beta, AngleBC::Frame::FirstOrder}};
  }
  return {p.B, std::get<Symplectic>(p.bc).P};
}

Monodromy monodromy(const MatrixFunction& S, int resolution) {
  const int dim = S.dim();
  if (dim % 2 != 0) throw DimensionMismatch("monodromy: coefficient must be 2n x 2n");
  const Matrix J = symplectic_form(dim);
  Monodromy out;

  if (S.kind() != MatrixFunction::Kind::GridSampled) {
    const int samples = 64;
    out.times.reserve(samples + 1);
    out.gamma.reserve(samples + 1);
    Matrix g = Matrix::Identity(dim, dim);
    out.times.push_back(0.0);
    out.gamma.push_back(g);
    for (int k = 0; k < samples; ++k) {
      const double t0 = k / double(samples);
      const double t1 = (k + 1) / double(samples);
      g = exact_step(S, J, t0, t1) * g;
      out.times.push_back(t1);
      out.gamma.push_back(g);
    }
    out.symplectic_defect = defect_of(out.gamma, J);
    return out;
  }

  auto C = [&](double t) { return Matrix(J * S(t)); };
  int steps = std::max(resolution, 16);
  std::vector<Matrix> phi = integrate_linear(C, steps);
  Matrix prev_end = phi.back();
  const int cap = 1 << 17;
  while (true) {
    const int next_steps = steps * 2;
    std::vector<Matrix> refined = integrate_linear(C, next_steps);
    const double change = (refined.back() - prev_end).norm();
    const double defect = (refined.back().transpose() * J * refined.back() - J).norm();
    prev_end = refined.back();
    phi = std::move(refined);
    steps = next_steps;
    if (change <= 1e-9 * (1.0 + prev_end.norm()) && defect <= 1e-8) break;
    if (steps >= cap) {
      throw ResolutionExceeded("monodromy: gamma(1) did not settle by the step cap");
    }
  }
  // Keep every 64th sample to bound the footprint.
  const int stride = std::max(1, steps / 64);
  for (int k = 0; k <= steps; k += stride) {
    out.times.push_back(k / double(steps));
    out.gamma.push_back(phi[k]);
  }
  if (out.times.back() != 1.0) {
    out.times.push_back(1.0);
    out.gamma.push_back(phi.back());
  }
  out.symplectic_defect = defect_of(out.gamma, J);
  if (out.symplectic_defect > 1e-8) {
    throw ResolutionExceeded("monodromy: symplectic defect will not settle");
  }
  return out;
}

Matrix monodromy_end(const MatrixFunction& S, int resolution) {
  const int dim = S.dim();
  if (dim % 2 != 0) throw DimensionMismatch("monodromy_end: coefficient must be 2n x 2n");
  const Matrix J = symplectic_form(dim);
  if (S.kind() != MatrixFunction::Kind::GridSampled) {
    return exact_step(S, J, 0.0, 1.0);
  }
  return rk4_end(S, J, std::max(resolution, 16));
}

Matrix matching_matrix_end(const Matrix& gamma_one, const ReducedBC& bc) {
  const int dim = static_cast<int>(gamma_one.rows());
  if (const auto* angle = std::get_if<AngleBC>(&bc)) {
    const int n = dim / 2;
    return terminal_form(*angle, n) * gamma_one * initial_subspace(*angle, n);
  }
  const Matrix& P = std::get<Matrix>(bc);
  if (P.rows() != dim) throw DimensionMismatch("matching_matrix: P dimension mismatch");
  return gamma_one - P;
}

MatchingMatrix matching_matrix(const Monodromy& m, const ReducedBC& bc) {
  MatchingMatrix out;
  out.matrix = matching_matrix_end(m.at_one(), bc);
  Eigen::JacobiSVD<Matrix> svd(out.matrix, Eigen::ComputeFullV);
  const Vector sigma = svd.singularValues();
  const double smax = sigma.size() > 0 ? sigma(0) : 0.0;
  const double cut = smax < kKernelRankTol ? kKernelRankTol : kKernelRankTol * smax;
  int deficiency = 0;
  for (int i = 0; i < sigma.size(); ++i) {
    if (sigma(i) <= cut) ++deficiency;
  }
  if (deficiency > 0) {
    out.kernel_basis = svd.matrixV().rightCols(deficiency);
  }
  return out;
}

NullityResult nullity(const HamiltonianSystem& sys) {
  const Monodromy m = monodromy(sys.S);
  const MatchingMatrix mm = matching_matrix(m, sys.bc);
  NullityResult out;
  if (!mm.kernel_basis) {
    out.kernel_initial_conditions = Matrix::Zero(sys.S.dim(), 0);
    return out;
  }
  out.nu = static_cast<int>(mm.kernel_basis->cols());
  if (const auto* angle = std::get_if<AngleBC>(&sys.bc)) {
    out.kernel_initial_conditions =
        initial_subspace(*angle, sys.S.dim() / 2) * (*mm.kernel_basis);
  } else {
    out.kernel_initial_conditions = *mm.kernel_basis;
  }
  return out;
}

NullityResult nullity(const SecondOrderProblem& p) {
  validate(p);
  const NullityResult out = nullity(to_first_order(p));
  const int n = p.Lambda.dim();
  if (const auto* sl = std::get_if<SturmLiouville>(&p.bc)) {
    (void)sl;
    if (out.nu > n) throw Error("nullity: internal error, nu > n for angle conditions");
  } else if (out.nu > 2 * n) {
    throw Error("nullity: internal error, nu > 2n for periodic conditions");
  }
  return out;
}

NullityResult nullity(const FirstOrderProblem& p) {
  validate(p);
  const NullityResult out = nullity(to_first_order(p));
  const int n = p.B.dim() / 2;
  if (std::holds_alternative<Bolza>(p.bc)) {
    if (out.nu > n) throw Error("nullity: internal error, nu > n for Bolza conditions");
  } else if (out.nu > 2 * n) {
    throw Error("nullity: internal error, nu > 2n for symplectic conditions");
  }
  return out;
}

}  // namespace spectra

#include "spectra/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <atomic>
#include <cmath>
#include <thread>

namespace spectra {

namespace {

void require_square(const Matrix& S, const char* who) {
  if (S.rows() != S.cols() || S.rows() == 0) {
    throw InvalidMatrix(std::string(who) + ": matrix must be square and nonempty");
  }
}

std::atomic<int> g_sweep_threads{1};

}  // namespace

Matrix symplectic_form(int two_n) {
  if (two_n <= 0 || two_n % 2 != 0) {
    throw InvalidMatrix("symplectic_form: dimension must be positive and even");
  }
  const int n = two_n / 2;
  Matrix J = Matrix::Zero(two_n, two_n);
  J.topRightCorner(n, n) = -Matrix::Identity(n, n);
  J.bottomLeftCorner(n, n) = Matrix::Identity(n, n);
  return J;
}

EigenDecomposition sym_eig(const Matrix& S) {
  require_square(S, "sym_eig");
  const double scale = S.norm();
  if ((S - S.transpose()).norm() > 1e-12 * (1.0 + scale)) {
    throw InvalidMatrix("sym_eig: matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (S + S.transpose()));
  if (solver.info() != Eigen::Success) {
    throw InvalidMatrix("sym_eig: eigensolver failed");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

RankInfo rank_deficiency(const Matrix& S, double tol) {
  require_square(S, "rank_deficiency");
  if (!(tol > 0.0 && tol < 1.0)) {
    throw InvalidMatrix("rank_deficiency: tol must lie in (0, 1)");
  }
  Eigen::JacobiSVD<Matrix> svd(S);
  Vector sigma = svd.singularValues();
  const double smax = sigma.size() > 0 ? sigma(0) : 0.0;
  const double cut = smax < tol ? tol : tol * smax;
  int deficiency = 0;
  for (int i = 0; i < sigma.size(); ++i) {
    if (sigma(i) <= cut) ++deficiency;
  }
  return {deficiency, sigma};
}

std::vector<Matrix> integrate_linear(const std::function<Matrix(double)>& C,
                                     int steps) {
  if (steps < 16) {
    throw InvalidMatrix("integrate_linear: steps must be >= 16");
  }
  const double h = 1.0 / steps;
  Matrix c0 = C(0.0);
  require_square(c0, "integrate_linear");
  const auto dim = c0.rows();
  std::vector<Matrix> phi;
  phi.reserve(steps + 1);
  phi.push_back(Matrix::Identity(dim, dim));
  Matrix state = phi.back();
  for (int k = 0; k < steps; ++k) {
    const double t = k * h;
    const Matrix ca = C(t);
    const Matrix cm = C(t + 0.5 * h);
    const Matrix cb = C(t + h);
    if (!ca.allFinite() || !cm.allFinite() || !cb.allFinite()) {
      throw NumericalBlowup("integrate_linear: non-finite coefficient sample");
    }
    const Matrix k1 = ca * state;
    const Matrix k2 = cm * (state + 0.5 * h * k1);
    const Matrix k3 = cm * (state + 0.5 * h * k2);
    const Matrix k4 = cb * (state + h * k3);
    state += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!state.allFinite()) {
      throw NumericalBlowup("integrate_linear: state blew up");
    }
    phi.push_back(state);
  }
  return phi;
}

Matrix expm(const Matrix& S) {
  require_square(S, "expm");
  const auto dim = S.rows();
  const Matrix I = Matrix::Identity(dim, dim);
  const double norm = S.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  Matrix A = S;
  // [6/6] Pade is accurate for ||A|| <= ~0.5 well past 1e-12.
  if (norm > 0.5) {
    squarings = std::max(0, 1 + static_cast<int>(std::ceil(std::log2(norm / 0.5))));
    A /= std::pow(2.0, squarings);
  }
  static const double c[] = {1.0,        1.0 / 2.0,   5.0 / 44.0, 1.0 / 66.0,
                             1.0 / 792.0, 1.0 / 15840.0, 1.0 / 665280.0};
  const Matrix A2 = A * A;
  const Matrix A4 = A2 * A2;
  const Matrix A6 = A2 * A4;
  const Matrix U = A * (c[1] * I + c[3] * A2 + c[5] * A4);
  const Matrix V = c[0] * I + c[2] * A2 + c[4] * A4 + c[6] * A6;
  Matrix R = (V - U).partialPivLu().solve(V + U);
  for (int i = 0; i < squarings; ++i) R = R * R;
  return R;
}

Inertia inertia_of(const Matrix& S, double zero_band) {
  EigenDecomposition d = sym_eig(S);
  Inertia out;
  for (int i = 0; i < d.eigenvalues.size(); ++i) {
    const double v = d.eigenvalues(i);
    if (v < -zero_band) {
      ++out.negative;
    } else if (v > zero_band) {
      ++out.positive;
    } else {
      ++out.zero;
    }
  }
  return out;
}

void parallel_for(int count, const std::function<void(int)>& fn, int threads) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

int sweep_threads() { return g_sweep_threads.load(); }

void set_sweep_threads(int threads) {
  g_sweep_threads.store(std::max(1, threads));
}

}  // namespace spectra

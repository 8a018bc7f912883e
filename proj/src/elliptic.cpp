#include "spectra/elliptic.hpp"

#include <cmath>
#include <sstream>

namespace spectra {

namespace {

/// Composite Simpson weights for Q (even) intervals on [0,1].
std::vector<double> simpson_weights(int Q) {
  std::vector<double> w(Q + 1);
  const double h = 1.0 / Q;
  w[0] = w[Q] = h / 3.0;
  for (int q = 1; q < Q; ++q) w[q] = (q % 2 == 1 ? 4.0 : 2.0) * h / 3.0;
  return w;
}

double zero_tol(const EllipticProblem& p) { return 1e-6 * (1.0 + p.b.sup_abs()); }

struct Counts {
  int negatives;
  int zeros;
};

Counts counts_of(const Vector& eigenvalues, double tol) {
  Counts c{0, 0};
  for (int i = 0; i < eigenvalues.size(); ++i) {
    if (eigenvalues(i) < -tol) {
      ++c.negatives;
    } else if (eigenvalues(i) <= tol) {
      ++c.zeros;
    }
  }
  return c;
}

MatrixFunction field_as_coefficient(const ScalarField& b) {
  if (b.is_constant()) {
    return MatrixFunction::constant(Matrix::Constant(1, 1, b.constant_value()));
  }
  std::vector<Matrix> values;
  values.reserve(kValidationGrid);
  for (int k = 0; k < kValidationGrid; ++k) {
    values.push_back(Matrix::Constant(1, 1, b(k / double(kValidationGrid - 1))));
  }
  return MatrixFunction::sampled(std::move(values));
}

SecondOrderProblem interval_as_second_order(const EllipticProblem& p) {
  const double L = std::get<Interval>(p.geometry).length;
  return {MatrixFunction::constant(Matrix::Constant(1, 1, 1.0 / (L * L))),
          field_as_coefficient(p.b), SturmLiouville{0.0, M_PI}};
}

}  // namespace

GalerkinOperator assemble(const EllipticProblem& p, int K) {
  validate(p);
  if (K < 4) throw DimensionMismatch("assemble: truncation must be at least 4");
  const double pi = M_PI;
  GalerkinOperator op;
  op.K = K;

  if (const auto* iv = std::get_if<Interval>(&p.geometry)) {
    const double L = iv->length;
    Matrix A = Matrix::Zero(K, K);
    for (int j = 1; j <= K; ++j) A(j - 1, j - 1) = (j * pi / L) * (j * pi / L);
    if (p.b.is_constant()) {
      A.diagonal().array() -= p.b.constant_value();
      op.matrix = std::move(A);
      return op;
    }
    const int Q = 4 * K;
    const std::vector<double> w = simpson_weights(Q);
    Matrix S(K, Q + 1);
    Vector d(Q + 1);
    for (int q = 0; q <= Q; ++q) {
      const double u = q / double(Q);
      d(q) = 2.0 * w[q] * p.b(u);
      for (int j = 1; j <= K; ++j) S(j - 1, q) = std::sin(j * pi * u);
    }
    A -= S * d.asDiagonal() * S.transpose();
    op.matrix = std::move(A);
    op.quadrature = Q + 1;
    return op;
  }

  const auto& rect = std::get<Rectangle>(p.geometry);
  const int dim = K * K;
  auto idx = [K](int j, int m) { return (j - 1) * K + (m - 1); };
  Matrix A = Matrix::Zero(dim, dim);
  for (int j = 1; j <= K; ++j) {
    for (int m = 1; m <= K; ++m) {
      A(idx(j, m), idx(j, m)) =
          pi * pi * (double(j) * j / (rect.L1 * rect.L1) +
                     double(m) * m / (rect.L2 * rect.L2));
    }
  }
  if (p.b.is_constant()) {
    A.diagonal().array() -= p.b.constant_value();
    op.matrix = std::move(A);
    return op;
  }
  const int Q = 4 * K;
  const std::vector<double> w = simpson_weights(Q);
  Matrix Su(K, Q + 1), Sv(K, Q + 1);
  for (int q = 0; q <= Q; ++q) {
    const double u = q / double(Q);
    for (int j = 1; j <= K; ++j) {
      Su(j - 1, q) = std::sin(j * pi * u);
      Sv(j - 1, q) = Su(j - 1, q);
    }
  }
  // c[p](m,n) = sum_q w_q b(u_p, v_q) sin(m pi v_q) sin(n pi v_q)
  std::vector<Matrix> c(Q + 1);
  parallel_for(
      Q + 1,
      [&](int pquad) {
        Vector d(Q + 1);
        for (int q = 0; q <= Q; ++q) {
          d(q) = w[q] * p.b(pquad / double(Q), q / double(Q));
        }
        c[pquad] = Sv * d.asDiagonal() * Sv.transpose();
      },
      sweep_threads());
  parallel_for(
      K,
      [&](int j0) {
        const int j = j0 + 1;
        for (int k = j; k <= K; ++k) {
          Matrix block = Matrix::Zero(K, K);
          for (int pquad = 0; pquad <= Q; ++pquad) {
            block += (4.0 * w[pquad] * Su(j - 1, pquad) * Su(k - 1, pquad)) * c[pquad];
          }
          A.block(idx(j, 1), idx(k, 1), K, K) -= block;
          if (k != j) {
            A.block(idx(k, 1), idx(j, 1), K, K) -= block.transpose();
          }
        }
      },
      sweep_threads());
  op.matrix = 0.5 * (A + A.transpose());
  op.quadrature = Q + 1;
  return op;
}

GalerkinCount galerkin_count(const EllipticProblem& p, int truncation) {
  validate(p);
  const double tol = zero_tol(p);
  const bool rectangular = std::holds_alternative<Rectangle>(p.geometry);
  const int cap = rectangular ? 64 : 1024;
  int K = std::max(4, truncation);
  Counts history[3] = {{-1, -1}, {-2, -2}, {-3, -3}};
  while (K <= cap) {
    const GalerkinOperator op = assemble(p, K);
    const Counts c = counts_of(sym_eig(op.matrix).eigenvalues, tol);
    history[0] = history[1];
    history[1] = history[2];
    history[2] = c;
    const bool stable_twice = history[0].negatives == history[2].negatives &&
                              history[0].zeros == history[2].zeros &&
                              history[1].negatives == history[2].negatives &&
                              history[1].zeros == history[2].zeros;
    if (stable_twice) return {c.negatives, c.zeros, K};
    K *= 2;
  }
  throw NoConvergence("galerkin_count: elliptic counts did not stabilize");
}

double lambda_lower_bound(const EllipticProblem& p) {
  validate(p);
  const double lambda_min = -(p.b.sup_abs() + 1.0);
  const GalerkinOperator op = assemble(p, 16);
  const double min_eig = sym_eig(op.matrix).eigenvalues.minCoeff();
  if (min_eig <= lambda_min) {
    throw VerificationFailed("lambda_lower_bound: elliptic spectrum reaches the bound");
  }
  return lambda_min;
}

IndexResult elliptic_index(const EllipticProblem& p) {
  validate(p);
  const double tol = zero_tol(p);
  const GalerkinCount gc = galerkin_count(p);
  IndexResult out;
  out.index = gc.positives;
  out.nu = gc.zeros;
  out.anchor_name = "sine_truncation";
  out.anchor_value = gc.truncation;
  out.tolerances.rank_tol = tol;

  // Negative spectrum at the accepted truncation, clustered into crossings.
  const Vector eigs = sym_eig(assemble(p, gc.truncation).matrix).eigenvalues;
  for (int i = 0; i < eigs.size() && eigs(i) < -tol; ++i) {
    if (!out.crossings.empty() &&
        eigs(i) - out.crossings.back().parameter <= tol) {
      ++out.crossings.back().multiplicity;
    } else {
      out.crossings.push_back({eigs(i), 1});
    }
  }

  if (std::holds_alternative<Interval>(p.geometry)) {
    const IndexResult ref = index_sweep(interval_as_second_order(p));
    if (ref.index != out.index || ref.nu != out.nu) {
      std::ostringstream msg;
      msg << "elliptic_index: sine counts (" << out.index << "," << out.nu
          << ") disagree with the second-order engine (" << ref.index << ","
          << ref.nu << ")";
      throw ValidatorDisagreement(msg.str());
    }
    out.validation_method = "second_order_engine";
  } else {
    out.validation_method = "truncation_stability";
  }
  out.validated = true;
  return out;
}

IndexResult index_sweep(const EllipticProblem& p) { return elliptic_index(p); }

}  // namespace spectra

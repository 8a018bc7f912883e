#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "spectra/errors.hpp"

namespace spectra {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Spectral decomposition S = Q diag(lambda) Q^T with ascending eigenvalues
/// and orthonormal columns in Q.
struct EigenDecomposition {
  Vector eigenvalues;
  Matrix eigenvectors;
};

struct RankInfo {
  int deficiency = 0;
  Vector singular_values;  // descending
};

/// Standard skew form J = [0 -I; I 0] of size 2n x 2n.
Matrix symplectic_form(int two_n);

/// Symmetric eigendecomposition. Throws InvalidMatrix unless S is square and
/// symmetric to 1e-12 relative.
EigenDecomposition sym_eig(const Matrix& S);

/// Number of singular values at or below tol * sigma_max (absolute tol when
/// sigma_max < tol), together with the descending singular values.
RankInfo rank_deficiency(const Matrix& S, double tol = 1e-8);

/// State-transition matrices Phi(t_k), t_k = k/steps, of z' = C(t) z with
/// Phi(0) = I. Classical fourth-order Runge-Kutta, coefficient sampled at the
/// stage nodes.
std::vector<Matrix> integrate_linear(const std::function<Matrix(double)>& C,
                                     int steps);

/// Matrix exponential by scaling and squaring with a diagonal Pade
/// approximant.
Matrix expm(const Matrix& S);

/// Inertia of a symmetric matrix: eigenvalue counts below/at/above zero,
/// with |lambda| <= zero_band treated as zero.
struct Inertia {
  int negative = 0;
  int zero = 0;
  int positive = 0;
};

Inertia inertia_of(const Matrix& S, double zero_band);

/// Runs fn(i) for i in [0, count) across up to `threads` worker threads.
/// fn must not touch shared mutable state outside its own index range.
void parallel_for(int count, const std::function<void(int)>& fn, int threads);

/// Global thread budget used by parameter sweeps. Defaults to 1; the CLI
/// sets it from --threads / SPECTRA_INDEX_THREADS.
int sweep_threads();
void set_sweep_threads(int threads);

}  // namespace spectra

#pragma once

#include "spectra/problems.hpp"

namespace spectra {

/// Sampled fundamental solution gamma(t) of z' = J S(t) z with gamma(0) = I.
struct Monodromy {
  std::vector<double> times;
  std::vector<Matrix> gamma;
  double symplectic_defect = 0.0;  // max_k ||gamma^T J gamma - J||

  const Matrix& at_one() const { return gamma.back(); }
};

/// Boundary data of the linearized first-order system. Angle conditions keep
/// the (alpha, beta) pair together with the state-ordering frame; coupled end
/// conditions carry the symplectic end matrix.
struct AngleBC {
  double alpha = 0.0;
  double beta = M_PI;
  // SecondOrder: state z = (y, x) with y = Lambda x'.
  // FirstOrder: state x = (x1, x2).
  enum class Frame { SecondOrder, FirstOrder } frame = Frame::SecondOrder;
};

using ReducedBC = std::variant<AngleBC, Matrix>;  // Matrix = end coupling P

/// First-order form of a boundary-value problem: z' = J S(t) z plus matching
/// data. For second-order problems S = diag(Lambda^{-1}, B) on z = (y, x).
struct HamiltonianSystem {
  MatrixFunction S;  // symmetric 2n x 2n
  ReducedBC bc;
};

HamiltonianSystem to_first_order(const SecondOrderProblem& p);
HamiltonianSystem to_first_order(const FirstOrderProblem& p);

/// Columns spanning the admissible initial subspace (2n x n).
Matrix initial_subspace(const AngleBC& bc, int n);
/// Rows expressing the terminal condition (n x 2n).
Matrix terminal_form(const AngleBC& bc, int n);

/// Fundamental solution of z' = J S(t) z. Constant and piecewise-constant
/// coefficients integrate by exact matrix exponentials; grid-sampled ones by
/// RK4 with the resolution doubled until gamma(1) is stable to 1e-9 and the
/// symplectic defect is within 1e-8 (ResolutionExceeded past the cap).
Monodromy monodromy(const MatrixFunction& S, int resolution = 2048);

/// Fast variant for parameter scans: coarse gamma(1) only, no stability loop.
Matrix monodromy_end(const MatrixFunction& S, int resolution = 256);

struct MatchingMatrix {
  Matrix matrix;                        // n x n (angle) or 2n x 2n (coupled)
  std::optional<Matrix> kernel_basis;   // columns: null vectors of matrix
};

MatchingMatrix matching_matrix(const Monodromy& m, const ReducedBC& bc);
Matrix matching_matrix_end(const Matrix& gamma_one, const ReducedBC& bc);

struct NullityResult {
  int nu = 0;
  /// Initial-condition vectors z(0) of the recovered kernel, one per column.
  Matrix kernel_initial_conditions;
};

NullityResult nullity(const SecondOrderProblem& p);
NullityResult nullity(const FirstOrderProblem& p);
NullityResult nullity(const HamiltonianSystem& sys);

/// Relative tolerance used to read kernel multiplicities from singular
/// values.
inline constexpr double kKernelRankTol = 1e-8;

}  // namespace spectra

#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "spectra/numerics.hpp"

namespace spectra {

/// Time-dependent symmetric coefficient on [0,1]. Samples are symmetrized on
/// construction; piecewise breakpoints carry half-open [t_k, t_{k+1})
/// semantics and grid samples interpolate linearly.
class MatrixFunction {
 public:
  enum class Kind { Constant, PiecewiseConstant, GridSampled };

  static MatrixFunction constant(Matrix value);
  static MatrixFunction piecewise(std::vector<double> breakpoints,
                                  std::vector<Matrix> values);
  static MatrixFunction sampled(std::vector<Matrix> grid_values);

  Matrix operator()(double t) const;
  int dim() const { return dim_; }
  Kind kind() const { return kind_; }

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<Matrix>& values() const { return values_; }

  /// max_t ||value(t)||_2 over the validation grid (exact for constant and
  /// piecewise-constant variants).
  double sup_norm() const;
  /// min_t lambda_min(value(t)) over the validation grid.
  double min_eigenvalue() const;

 private:
  MatrixFunction(Kind kind, std::vector<double> breakpoints,
                 std::vector<Matrix> values);

  Kind kind_;
  int dim_ = 0;
  std::vector<double> breakpoints_;  // piecewise only; interior breaks in (0,1)
  std::vector<Matrix> values_;
};

MatrixFunction shift(const MatrixFunction& B, double lambda);

/// Linear segment B(s) = (1-s) B0 + s B1 between two coefficients.
struct PencilPath {
  MatrixFunction b0;
  MatrixFunction b1;
  bool monotone = false;  // B1 - B0 >= eps * id on the sample grid
  double eps = 0.0;

  MatrixFunction at(double s) const;
};

PencilPath path(const MatrixFunction& b0, const MatrixFunction& b1);

struct SturmLiouville {
  double alpha = 0.0;       // [0, pi)
  double beta = M_PI;       // (0, pi]
};

struct GeneralizedPeriodic {
  Matrix M;
  Matrix N;
};

using SecondOrderBC = std::variant<SturmLiouville, GeneralizedPeriodic>;

struct SecondOrderProblem {
  MatrixFunction Lambda;
  MatrixFunction B;
  SecondOrderBC bc;
};

struct Bolza {
  double alpha = 0.0;  // [0, pi)
  double beta = M_PI;  // (0, pi]
};

struct Symplectic {
  Matrix P;
};

using FirstOrderBC = std::variant<Bolza, Symplectic>;

struct FirstOrderProblem {
  MatrixFunction B;  // 2n x 2n
  FirstOrderBC bc;
};

/// Scalar potential on an interval [0,L] or rectangle [0,L1]x[0,L2], stored
/// in normalized coordinates on [0,1]^d.
class ScalarField {
 public:
  static ScalarField constant(double value);
  static ScalarField sampled1d(std::vector<double> values);
  static ScalarField sampled2d(Matrix values);  // values(i,j) at (x_i, y_j)

  double operator()(double u) const;
  double operator()(double u, double v) const;
  bool is_constant() const { return kind_ == Kind::Constant; }
  double constant_value() const { return constant_; }
  double sup_abs() const;

 private:
  enum class Kind { Constant, Grid1D, Grid2D };
  Kind kind_ = Kind::Constant;
  double constant_ = 0.0;
  std::vector<double> grid1d_;
  Matrix grid2d_;
};

struct Interval {
  double length = 1.0;
};

struct Rectangle {
  double L1 = 1.0;
  double L2 = 1.0;
};

using EllipticGeometry = std::variant<Interval, Rectangle>;

struct EllipticProblem {
  EllipticGeometry geometry;
  ScalarField b;
};

/// Type-invariant checks. Each overload throws a diagnostic error
/// (PositivityViolation, CompatibilityViolation, NotSymplectic,
/// AngleOutOfRange, ...) on failure and is idempotent on valid input.
void validate(const SecondOrderProblem& p);
void validate(const FirstOrderProblem& p);
void validate(const EllipticProblem& p);

/// Number of uniform sample points used by validation and pointwise bounds.
inline constexpr int kValidationGrid = 257;

}  // namespace spectra

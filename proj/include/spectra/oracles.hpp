#pragma once

#include "spectra/numerics.hpp"

#include <variant>

namespace spectra {

/// Eigenvalues of a constant symmetric coefficient, ascending, with the
/// positive scale of the leading coefficient.
struct ConstantSpectrum {
  Vector eigenvalues;
  double lambda = 1.0;
};

struct Periodic {};
struct Antiperiodic {};
struct ScalarCoupling {
  double a = 2.0;  // end coupling x(1) = a x(0); a not in {0, +1, -1}
};

using FloquetCase = std::variant<Periodic, Antiperiodic, ScalarCoupling>;

struct OracleResult {
  int index = 0;
  int nu = 0;
  /// Smallest j used by the ScalarCoupling crossing families (calibration
  /// outcome, recorded so results are self-describing).
  int scalar_j_start = 0;
};

/// Closed-form counts for constant-coefficient periodic-type problems.
/// Comparisons against the crossing values are exact on the given reals.
OracleResult example38(const FloquetCase& c, const ConstantSpectrum& spec);

/// Closed-form counts for x'' + Bx = 0 with x(0) = x(1) = 0, B constant.
OracleResult dirichlet_constant(const ConstantSpectrum& spec);

/// Closed-form counts for the Dirichlet Laplacian plus constant b on a
/// rectangle.
OracleResult rectangle_constant(double b, double L1, double L2);

}  // namespace spectra

#pragma once

#include "spectra/index.hpp"

namespace spectra {

/// Tensor sine-basis discretization of -Laplace - b with Dirichlet conditions.
struct GalerkinOperator {
  int K = 0;           // modes per axis
  Matrix matrix;       // K x K (interval) or K^2 x K^2 (rectangle), symmetric
  int quadrature = 0;  // Simpson points per axis (0 when b is constant)
};

GalerkinOperator assemble(const EllipticProblem& p, int K);

/// (i, nu) of the Dirichlet problem Laplace u + b u + lambda u = 0 by sine
/// Galerkin truncation, K doubled until both counts are stable twice.
/// Interval instances are cross-checked against the second-order engine.
IndexResult elliptic_index(const EllipticProblem& p);

}  // namespace spectra

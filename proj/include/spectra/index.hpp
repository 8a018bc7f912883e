#pragma once

#include "spectra/spectral.hpp"

namespace spectra {

struct Crossing {
  double parameter = 0.0;
  int multiplicity = 0;
};

struct CrossingSet {
  std::vector<Crossing> crossings;  // sorted by parameter
  double localization_width = 0.0;
};

struct SweepTolerances {
  double rank_tol = kKernelRankTol;
  double crossing_accept = 1e-6;      // sigma <= accept * (1 + sigma_max)
  double localization = 1e-11;        // refinement width, units of the interval
  int grid_per_unit = 512;
};

struct IndexResult {
  int index = 0;
  int nu = 0;
  std::vector<Crossing> crossings;
  std::string anchor_name;
  double anchor_value = 0.0;
  std::string validation_method;
  bool validated = false;
  SweepTolerances tolerances;
};

/// Lower sweep endpoint with nu(B + lambda id) = 0 guaranteed for all
/// lambda <= lambda_min; verified a posteriori against the discretized
/// quadratic form (VerificationFailed on a bound bug).
double lambda_lower_bound(const SecondOrderProblem& p);
double lambda_lower_bound(const EllipticProblem& p);

/// (i, nu) by sweeping nu(B + lambda id) for lambda in [lambda_min, 0).
/// Every accepted result agrees with the finite-element validator
/// (ValidatorDisagreement otherwise).
IndexResult index_sweep(const SecondOrderProblem& p);
IndexResult index_sweep(const EllipticProblem& p);

/// Sum of crossing multiplicities over s in [0,1) along a monotone pencil,
/// start endpoint included.
int relative_index_monotone(const SecondOrderProblem& tmpl, const PencilPath& path);
int relative_index_monotone(const FirstOrderProblem& tmpl, const PencilPath& path);

/// I(B1, B2) for general pairs via two monotone sweeps against k id.
int relative_index(const SecondOrderProblem& tmpl, const MatrixFunction& B1,
                   const MatrixFunction& B2);
int relative_index(const FirstOrderProblem& tmpl, const MatrixFunction& B1,
                   const MatrixFunction& B2);

struct EkelandIndex {
  int relative = 0;  // i_rel = I(B0 -> B) - nu(B0)
  int nu = 0;        // nu(B)
};

EkelandIndex ekeland_index(const SecondOrderProblem& tmpl, const MatrixFunction& B,
                           const MatrixFunction& B0);
EkelandIndex ekeland_index(const FirstOrderProblem& tmpl, const MatrixFunction& B,
                           const MatrixFunction& B0);

/// Anchored first-order index. The Bolza anchor is i^s_{I,alpha,beta}(0); the
/// symplectic-periodic anchor is a configuration value (default 0) recorded in
/// the result, and all certifier logic consumes only index differences.
IndexResult index_first_order(const FirstOrderProblem& p,
                              int symplectic_anchor = 0);

struct GalerkinCount {
  int positives = 0;  // = i
  int zeros = 0;      // = nu
  int truncation = 0; // accepted resolution
};

/// Independent finite-element eigenvalue-count validator for second-order and
/// elliptic problems.
GalerkinCount galerkin_count(const SecondOrderProblem& p, int truncation = 256);
GalerkinCount galerkin_count(const EllipticProblem& p, int truncation = 8);

/// Eigenvalue counts of the discretized quadratic form of A + B at a given
/// resolution (no convergence loop); exposed for the a-posteriori bound check.
struct DiscreteInertia {
  int negatives = 0;
  int zeros = 0;
  int positives = 0;
};
DiscreteInertia second_order_form_inertia(const SecondOrderProblem& p, int N);

}  // namespace spectra

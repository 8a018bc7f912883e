#pragma once

#include <stdexcept>
#include <string>

namespace spectra {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidMatrix : Error {
  using Error::Error;
};
struct NumericalBlowup : Error {
  using Error::Error;
};
struct ShapeMismatch : Error {
  using Error::Error;
};
struct DimensionMismatch : Error {
  using Error::Error;
};
struct PositivityViolation : Error {
  using Error::Error;
};
struct CompatibilityViolation : Error {
  using Error::Error;
};
struct NotSymplectic : Error {
  using Error::Error;
};
struct AngleOutOfRange : Error {
  using Error::Error;
};
struct ResolutionExceeded : Error {
  using Error::Error;
};
struct ValidatorDisagreement : Error {
  using Error::Error;
};
struct NotMonotone : Error {
  using Error::Error;
};
struct VerificationFailed : Error {
  using Error::Error;
};
struct NoConvergence : Error {
  using Error::Error;
};
struct DomainError : Error {
  using Error::Error;
};
struct ContinuationStalled : Error {
  using Error::Error;
};
struct NewtonDiverged : Error {
  using Error::Error;
};
struct SingularJacobian : Error {
  using Error::Error;
};
struct NotStronglyConvex : Error {
  using Error::Error;
};
struct LineSearchFailed : Error {
  using Error::Error;
};
struct PrimalResidualLarge : Error {
  using Error::Error;
};

/// Stable diagnostic name of the concrete error type, for reports.
const char* error_name(const Error& e);

}  // namespace spectra

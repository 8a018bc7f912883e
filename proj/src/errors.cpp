#include "spectra/errors.hpp"

namespace spectra {

const char* error_name(const Error& e) {
#define SPECTRA_NAME_CASE(T) \
  if (dynamic_cast<const T*>(&e) != nullptr) return #T;
  SPECTRA_NAME_CASE(InvalidMatrix)
  SPECTRA_NAME_CASE(NumericalBlowup)
  SPECTRA_NAME_CASE(ShapeMismatch)
  SPECTRA_NAME_CASE(DimensionMismatch)
  SPECTRA_NAME_CASE(PositivityViolation)
  SPECTRA_NAME_CASE(CompatibilityViolation)
  SPECTRA_NAME_CASE(NotSymplectic)
  SPECTRA_NAME_CASE(AngleOutOfRange)
  SPECTRA_NAME_CASE(ResolutionExceeded)
  SPECTRA_NAME_CASE(ValidatorDisagreement)
  SPECTRA_NAME_CASE(NotMonotone)
  SPECTRA_NAME_CASE(VerificationFailed)
  SPECTRA_NAME_CASE(NoConvergence)
  SPECTRA_NAME_CASE(DomainError)
  SPECTRA_NAME_CASE(ContinuationStalled)
  SPECTRA_NAME_CASE(NewtonDiverged)
  SPECTRA_NAME_CASE(SingularJacobian)
  SPECTRA_NAME_CASE(NotStronglyConvex)
  SPECTRA_NAME_CASE(LineSearchFailed)
  SPECTRA_NAME_CASE(PrimalResidualLarge)
#undef SPECTRA_NAME_CASE
  return "Error";
}

}  // namespace spectra

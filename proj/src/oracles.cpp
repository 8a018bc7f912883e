#include "spectra/oracles.hpp"

#include <cmath>

namespace spectra {

namespace {

void check_spectrum(const ConstantSpectrum& spec) {
  if (spec.lambda <= 0.0) throw PositivityViolation("oracle: lambda must be positive");
  for (int k = 0; k + 1 < spec.eigenvalues.size(); ++k) {
    if (spec.eigenvalues(k) > spec.eigenvalues(k + 1)) {
      throw InvalidMatrix("oracle: eigenvalues must be ascending");
    }
  }
  if (!spec.eigenvalues.allFinite()) throw InvalidMatrix("oracle: nonfinite eigenvalue");
}

/// Counts crossing values of the family `value(j)`, j = j0, j0+1, ...,
/// strictly below / exactly at alpha. value(j) must be increasing in j.
void count_family(double alpha, int j0, const std::function<double(int)>& value,
                  int& below, int& at) {
  for (int j = j0;; ++j) {
    const double v = value(j);
    if (v < alpha) {
      ++below;
    } else if (v == alpha) {
      ++at;
    } else {
      return;
    }
  }
}

}  // namespace

OracleResult example38(const FloquetCase& c, const ConstantSpectrum& spec) {
  check_spectrum(spec);
  const double lam = spec.lambda;
  const double pi = M_PI;
  OracleResult out;

  if (std::holds_alternative<Periodic>(c)) {
    for (int k = 0; k < spec.eigenvalues.size(); ++k) {
      const double a = spec.eigenvalues(k);
      if (a > 0.0) ++out.index;
      if (a == 0.0) ++out.nu;
      int below = 0, at = 0;
      count_family(a, 1, [&](int j) { return 4.0 * lam * j * j * pi * pi; }, below, at);
      out.index += 2 * below;
      out.nu += 2 * at;
    }
    return out;
  }

  if (std::holds_alternative<Antiperiodic>(c)) {
    for (int k = 0; k < spec.eigenvalues.size(); ++k) {
      const double a = spec.eigenvalues(k);
      int below = 0, at = 0;
      count_family(a, 1,
                   [&](int j) { return lam * (2 * j - 1) * (2 * j - 1) * pi * pi; },
                   below, at);
      out.index += 2 * below;
      out.nu += 2 * at;
    }
    return out;
  }

  const double a_c = std::get<ScalarCoupling>(c).a;
  if (a_c == 0.0 || a_c == 1.0 || a_c == -1.0) {
    throw DomainError("example38: scalar coupling must avoid {0, +1, -1}");
  }
  const double cos_mu = 2.0 / (1.0 / a_c + a_c);
  if (std::abs(cos_mu) > 1.0) {
    throw DomainError("example38: arccos argument outside [-1, 1]");
  }
  const double mu0 = std::acos(cos_mu);
  out.scalar_j_start = 0;
  for (int k = 0; k < spec.eigenvalues.size(); ++k) {
    const double a = spec.eigenvalues(k);
    int below = 0, at = 0;
    count_family(a, out.scalar_j_start,
                 [&](int j) {
                   const double w = 2.0 * j * pi + mu0;
                   return lam * w * w;
                 },
                 below, at);
    count_family(a, out.scalar_j_start,
                 [&](int j) {
                   const double w = 2.0 * j * pi + 2.0 * pi - mu0;
                   return lam * w * w;
                 },
                 below, at);
    out.index += below;
    out.nu += at;
  }
  return out;
}

OracleResult dirichlet_constant(const ConstantSpectrum& spec) {
  check_spectrum(spec);
  const double pi = M_PI;
  OracleResult out;
  for (int k = 0; k < spec.eigenvalues.size(); ++k) {
    const double a = spec.eigenvalues(k);
    int below = 0, at = 0;
    count_family(a, 1, [&](int j) { return spec.lambda * j * j * pi * pi; }, below, at);
    out.index += below;
    out.nu += at;
  }
  return out;
}

OracleResult rectangle_constant(double b, double L1, double L2) {
  if (L1 <= 0.0 || L2 <= 0.0) throw PositivityViolation("rectangle_constant: lengths");
  const double pi = M_PI;
  OracleResult out;
  if (!(b > 0.0)) return out;
  const int jmax = static_cast<int>(std::ceil(L1 * std::sqrt(b) / pi)) + 1;
  for (int j = 1; j <= jmax; ++j) {
    const double row = pi * pi * (double(j) * j / (L1 * L1));
    if (row > b) break;
    int below = 0, at = 0;
    count_family(b, 1,
                 [&](int k) {
                   return pi * pi * (double(j) * j / (L1 * L1) + double(k) * k / (L2 * L2));
                 },
                 below, at);
    out.index += below;
    out.nu += at;
  }
  return out;
}

}  // namespace spectra

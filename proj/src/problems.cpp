#include "spectra/problems.hpp"

#include <algorithm>
#include <cmath>

namespace spectra {

namespace {

Matrix symmetrized(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw InvalidMatrix("MatrixFunction: samples must be square");
  }
  if (!m.allFinite()) {
    throw InvalidMatrix("MatrixFunction: samples must be finite");
  }
  if ((m - m.transpose()).norm() > 1e-12 * (1.0 + m.norm())) {
    throw InvalidMatrix("MatrixFunction: samples must be symmetric to 1e-12");
  }
  return 0.5 * (m + m.transpose());
}

double spectral_norm(const Matrix& m) {
  return sym_eig(m).eigenvalues.cwiseAbs().maxCoeff();
}

}  // namespace

MatrixFunction::MatrixFunction(Kind kind, std::vector<double> breakpoints,
                               std::vector<Matrix> values)
    : kind_(kind), breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  if (values_.empty()) throw InvalidMatrix("MatrixFunction: no values");
  for (auto& v : values_) v = symmetrized(v);
  dim_ = static_cast<int>(values_.front().rows());
  for (const auto& v : values_) {
    if (v.rows() != dim_) throw ShapeMismatch("MatrixFunction: mixed dimensions");
  }
}

MatrixFunction MatrixFunction::constant(Matrix value) {
  return MatrixFunction(Kind::Constant, {}, {std::move(value)});
}

MatrixFunction MatrixFunction::piecewise(std::vector<double> breakpoints,
                                         std::vector<Matrix> values) {
  if (values.size() != breakpoints.size() + 1) {
    throw ShapeMismatch("MatrixFunction: need one more value than breakpoints");
  }
  if (!std::is_sorted(breakpoints.begin(), breakpoints.end())) {
    throw InvalidMatrix("MatrixFunction: breakpoints must be sorted");
  }
  for (double b : breakpoints) {
    if (!(b > 0.0 && b < 1.0)) {
      throw InvalidMatrix("MatrixFunction: breakpoints must lie in (0,1)");
    }
  }
  return MatrixFunction(Kind::PiecewiseConstant, std::move(breakpoints),
                        std::move(values));
}

MatrixFunction MatrixFunction::sampled(std::vector<Matrix> grid_values) {
  if (grid_values.size() < 2) {
    throw InvalidMatrix("MatrixFunction: sampled variant needs >= 2 grid values");
  }
  return MatrixFunction(Kind::GridSampled, {}, std::move(grid_values));
}

Matrix MatrixFunction::operator()(double t) const {
  t = std::clamp(t, 0.0, 1.0);
  switch (kind_) {
    case Kind::Constant:
      return values_.front();
    case Kind::PiecewiseConstant: {
      // half-open pieces [t_k, t_{k+1})
      std::size_t idx = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t) -
                        breakpoints_.begin();
      if (t >= 1.0) idx = breakpoints_.size();
      return values_[idx];
    }
    case Kind::GridSampled: {
      const double pos = t * (values_.size() - 1);
      const auto lo = static_cast<std::size_t>(std::floor(pos));
      if (lo + 1 >= values_.size()) return values_.back();
      const double w = pos - lo;
      return (1.0 - w) * values_[lo] + w * values_[lo + 1];
    }
  }
  throw Error("MatrixFunction: unreachable");
}

double MatrixFunction::sup_norm() const {
  if (kind_ != Kind::GridSampled) {
    double best = 0.0;
    for (const auto& v : values_) best = std::max(best, spectral_norm(v));
    return best;
  }
  double best = 0.0;
  for (int k = 0; k < kValidationGrid; ++k) {
    best = std::max(best, spectral_norm((*this)(k / double(kValidationGrid - 1))));
  }
  return best;
}

double MatrixFunction::min_eigenvalue() const {
  double best = std::numeric_limits<double>::infinity();
  if (kind_ != Kind::GridSampled) {
    for (const auto& v : values_) {
      best = std::min(best, sym_eig(v).eigenvalues.minCoeff());
    }
    return best;
  }
  for (int k = 0; k < kValidationGrid; ++k) {
    const Matrix v = (*this)(k / double(kValidationGrid - 1));
    best = std::min(best, sym_eig(v).eigenvalues.minCoeff());
  }
  return best;
}

MatrixFunction shift(const MatrixFunction& B, double lambda) {
  const Matrix bump = lambda * Matrix::Identity(B.dim(), B.dim());
  std::vector<Matrix> values = B.values();
  for (auto& v : values) v += bump;
  switch (B.kind()) {
    case MatrixFunction::Kind::Constant:
      return MatrixFunction::constant(values.front());
    case MatrixFunction::Kind::PiecewiseConstant:
      return MatrixFunction::piecewise(B.breakpoints(), std::move(values));
    case MatrixFunction::Kind::GridSampled:
      return MatrixFunction::sampled(std::move(values));
  }
  throw Error("shift: unreachable");
}

MatrixFunction PencilPath::at(double s) const {
  // Combine on the union structure; generic fallback samples the grid.
  if (b0.kind() == MatrixFunction::Kind::Constant &&
      b1.kind() == MatrixFunction::Kind::Constant) {
    return MatrixFunction::constant((1.0 - s) * b0.values().front() +
                                    s * b1.values().front());
  }
  if (b0.kind() == MatrixFunction::Kind::PiecewiseConstant &&
      b1.kind() == MatrixFunction::Kind::PiecewiseConstant &&
      b0.breakpoints() == b1.breakpoints()) {
    std::vector<Matrix> values;
    values.reserve(b0.values().size());
    for (std::size_t k = 0; k < b0.values().size(); ++k) {
      values.push_back((1.0 - s) * b0.values()[k] + s * b1.values()[k]);
    }
    return MatrixFunction::piecewise(b0.breakpoints(), std::move(values));
  }
  if (b0.kind() == MatrixFunction::Kind::Constant &&
      b1.kind() == MatrixFunction::Kind::PiecewiseConstant) {
    std::vector<Matrix> values;
    for (const auto& v : b1.values()) {
      values.push_back((1.0 - s) * b0.values().front() + s * v);
    }
    return MatrixFunction::piecewise(b1.breakpoints(), std::move(values));
  }
  if (b0.kind() == MatrixFunction::Kind::PiecewiseConstant &&
      b1.kind() == MatrixFunction::Kind::Constant) {
    std::vector<Matrix> values;
    for (const auto& v : b0.values()) {
      values.push_back((1.0 - s) * v + s * b1.values().front());
    }
    return MatrixFunction::piecewise(b0.breakpoints(), std::move(values));
  }
  std::vector<Matrix> values;
  values.reserve(kValidationGrid);
  for (int k = 0; k < kValidationGrid; ++k) {
    const double t = k / double(kValidationGrid - 1);
    values.push_back((1.0 - s) * b0(t) + s * b1(t));
  }
  return MatrixFunction::sampled(std::move(values));
}

PencilPath path(const MatrixFunction& b0, const MatrixFunction& b1) {
  if (b0.dim() != b1.dim()) throw ShapeMismatch("path: coefficient shapes differ");
  double eps = std::numeric_limits<double>::infinity();
  for (int k = 0; k < kValidationGrid; ++k) {
    const double t = k / double(kValidationGrid - 1);
    eps = std::min(eps, sym_eig(b1(t) - b0(t)).eigenvalues.minCoeff());
  }
  PencilPath out{b0, b1, eps > 0.0, eps > 0.0 ? eps : 0.0};
  return out;
}

ScalarField ScalarField::constant(double value) {
  ScalarField f;
  f.kind_ = Kind::Constant;
  f.constant_ = value;
  return f;
}

ScalarField ScalarField::sampled1d(std::vector<double> values) {
  if (values.size() < 2) throw InvalidMatrix("ScalarField: need >= 2 samples");
  ScalarField f;
  f.kind_ = Kind::Grid1D;
  f.grid1d_ = std::move(values);
  return f;
}

ScalarField ScalarField::sampled2d(Matrix values) {
  if (values.rows() < 2 || values.cols() < 2) {
    throw InvalidMatrix("ScalarField: need a >= 2x2 sample grid");
  }
  ScalarField f;
  f.kind_ = Kind::Grid2D;
  f.grid2d_ = std::move(values);
  return f;
}

double ScalarField::operator()(double u) const {
  u = std::clamp(u, 0.0, 1.0);
  switch (kind_) {
    case Kind::Constant:
      return constant_;
    case Kind::Grid1D: {
      const double pos = u * (grid1d_.size() - 1);
      const auto lo = static_cast<std::size_t>(std::floor(pos));
      if (lo + 1 >= grid1d_.size()) return grid1d_.back();
      const double w = pos - lo;
      return (1.0 - w) * grid1d_[lo] + w * grid1d_[lo + 1];
    }
    case Kind::Grid2D:
      return (*this)(u, 0.0);
  }
  throw Error("ScalarField: unreachable");
}

double ScalarField::operator()(double u, double v) const {
  if (kind_ != Kind::Grid2D) return (*this)(u);
  u = std::clamp(u, 0.0, 1.0);
  v = std::clamp(v, 0.0, 1.0);
  const double pu = u * (grid2d_.rows() - 1);
  const double pv = v * (grid2d_.cols() - 1);
  const auto i = std::min<Eigen::Index>(static_cast<Eigen::Index>(pu), grid2d_.rows() - 2);
  const auto j = std::min<Eigen::Index>(static_cast<Eigen::Index>(pv), grid2d_.cols() - 2);
  const double wu = pu - i;
  const double wv = pv - j;
  return (1 - wu) * (1 - wv) * grid2d_(i, j) + wu * (1 - wv) * grid2d_(i + 1, j) +
         (1 - wu) * wv * grid2d_(i, j + 1) + wu * wv * grid2d_(i + 1, j + 1);
}

double ScalarField::sup_abs() const {
  switch (kind_) {
    case Kind::Constant:
      return std::abs(constant_);
    case Kind::Grid1D: {
      double best = 0.0;
      for (double v : grid1d_) best = std::max(best, std::abs(v));
      return best;
    }
    case Kind::Grid2D:
      return grid2d_.cwiseAbs().maxCoeff();
  }
  throw Error("ScalarField: unreachable");
}

void validate(const SecondOrderProblem& p) {
  const int n = p.Lambda.dim();
  if (p.B.dim() != n) throw ShapeMismatch("validate: Lambda and B dimensions differ");
  if (p.Lambda.min_eigenvalue() <= 0.0) {
    throw PositivityViolation("validate: Lambda(t) must be positive definite");
  }
  if (const auto* sl = std::get_if<SturmLiouville>(&p.bc)) {
    if (!(sl->alpha >= 0.0 && sl->alpha < M_PI)) {
      throw AngleOutOfRange("validate: alpha must lie in [0, pi)");
    }
    if (!(sl->beta > 0.0 && sl->beta <= M_PI)) {
      throw AngleOutOfRange("validate: beta must lie in (0, pi]");
    }
  } else {
    const auto& gp = std::get<GeneralizedPeriodic>(p.bc);
    if (gp.M.rows() != n || gp.M.cols() != n || gp.N.rows() != n || gp.N.cols() != n) {
      throw ShapeMismatch("validate: M, N must be n x n");
    }
    if (std::abs(gp.M.determinant()) < 1e-12) {
      throw InvalidMatrix("validate: M must be invertible");
    }
    const Matrix defect = gp.M.transpose() * p.Lambda(1.0) * gp.N - p.Lambda(0.0);
    if (defect.norm() > 1e-10 * (1.0 + p.Lambda(0.0).norm())) {
      throw CompatibilityViolation("validate: M^T Lambda(1) N != Lambda(0)");
    }
  }
}

void validate(const FirstOrderProblem& p) {
  const int two_n = p.B.dim();
  if (two_n % 2 != 0) throw ShapeMismatch("validate: first-order B must be 2n x 2n");
  if (const auto* bz = std::get_if<Bolza>(&p.bc)) {
    if (!(bz->alpha >= 0.0 && bz->alpha < M_PI)) {
      throw AngleOutOfRange("validate: alpha must lie in [0, pi)");
    }
    if (!(bz->beta > 0.0 && bz->beta <= M_PI)) {
      throw AngleOutOfRange("validate: beta must lie in (0, pi]");
    }
  } else {
    const auto& sp = std::get<Symplectic>(p.bc);
    if (sp.P.rows() != two_n || sp.P.cols() != two_n) {
      throw ShapeMismatch("validate: P must be 2n x 2n");
    }
    const Matrix J = symplectic_form(two_n);
    if ((sp.P.transpose() * J * sp.P - J).norm() > 1e-10) {
      throw NotSymplectic("validate: P is not symplectic");
    }
  }
}

void validate(const EllipticProblem& p) {
  if (const auto* iv = std::get_if<Interval>(&p.geometry)) {
    if (!(iv->length > 0.0)) throw InvalidMatrix("validate: interval length must be positive");
  } else {
    const auto& r = std::get<Rectangle>(p.geometry);
    if (!(r.L1 > 0.0 && r.L2 > 0.0)) {
      throw InvalidMatrix("validate: rectangle sides must be positive");
    }
  }
  if (!std::isfinite(p.b.sup_abs())) {
    throw InvalidMatrix("validate: b must be bounded");
  }
}

}  // namespace spectra

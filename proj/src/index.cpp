#include "spectra/index.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

namespace spectra {

namespace {

// ---------------------------------------------------------------------------
// Finite-element validator: P1 elements, lumped mass, midpoint stiffness.
// Eigenvalue counts come from Haynsworth inertia additivity along the block
// chain, with the periodic corner handled as a bordered block.
// ---------------------------------------------------------------------------

struct ChainForm {
  std::vector<Matrix> D;   // diagonal blocks along the chain
  std::vector<Matrix> E;   // E[k] = block (k, k+1)
  std::vector<Matrix> G;   // border coupling (k, border); empty when no border
  Matrix Db;               // border diagonal block (0x0 when absent)
  std::vector<Matrix> M;   // lumped mass blocks along the chain
  Matrix Mb;               // border mass block
  double scale = 1.0;      // magnitude reference for pivot checks
};

bool is_dirichlet_start(const SturmLiouville& sl) { return std::abs(sl.alpha) < 1e-12; }
bool is_dirichlet_end(const SturmLiouville& sl) { return std::abs(std::sin(sl.beta)) < 1e-12; }

ChainForm assemble_second_order(const SecondOrderProblem& p, int N) {
  const int n = p.Lambda.dim();
  const double h = 1.0 / N;
  const Matrix I = Matrix::Identity(n, n);

  if (const auto* sl = std::get_if<SturmLiouville>(&p.bc)) {
    std::vector<Matrix> Kd(N + 1, Matrix::Zero(n, n));
    std::vector<Matrix> Ke(N, Matrix::Zero(n, n));
    std::vector<Matrix> Md(N + 1, Matrix::Zero(n, n));
    for (int e = 0; e < N; ++e) {
      const Matrix Lm = p.Lambda((e + 0.5) * h) / h;
      Kd[e] -= Lm;
      Kd[e + 1] -= Lm;
      Ke[e] = Lm;
      Kd[e] += 0.5 * h * p.B(e * h);
      Kd[e + 1] += 0.5 * h * p.B((e + 1) * h);
      Md[e] += 0.5 * h * I;
      Md[e + 1] += 0.5 * h * I;
    }
    if (!is_dirichlet_start(*sl)) Kd[0] -= (std::cos(sl->alpha) / std::sin(sl->alpha)) * I;
    if (!is_dirichlet_end(*sl)) Kd[N] += (std::cos(sl->beta) / std::sin(sl->beta)) * I;
    const int first = is_dirichlet_start(*sl) ? 1 : 0;
    const int last = is_dirichlet_end(*sl) ? N - 1 : N;
    ChainForm out;
    for (int k = first; k <= last; ++k) {
      out.D.push_back(Kd[k]);
      out.M.push_back(Md[k]);
      if (k < last) out.E.push_back(Ke[k]);
    }
    out.Db.resize(0, 0);
    out.Mb.resize(0, 0);
    out.scale = 1.0 / h + p.B.sup_norm() + p.Lambda.sup_norm() / h;
    return out;
  }

  const auto& gp = std::get<GeneralizedPeriodic>(p.bc);
  std::vector<Matrix> Kd(N, Matrix::Zero(n, n));
  std::vector<Matrix> Ke(N - 1, Matrix::Zero(n, n));
  std::vector<Matrix> Md(N, Matrix::Zero(n, n));
  for (int e = 0; e + 1 < N; ++e) {
    const Matrix Lm = p.Lambda((e + 0.5) * h) / h;
    Kd[e] -= Lm;
    Kd[e + 1] -= Lm;
    Ke[e] = Lm;
    Kd[e] += 0.5 * h * p.B(e * h);
    Kd[e + 1] += 0.5 * h * p.B((e + 1) * h);
    Md[e] += 0.5 * h * I;
    Md[e + 1] += 0.5 * h * I;
  }
  // Closing element with x_N = M x_0 substituted.
  const Matrix Lm = p.Lambda((N - 0.5) * h) / h;
  Matrix corner = Lm * gp.M;  // block (N-1, 0)
  Kd[N - 1] -= Lm;
  Kd[0] -= gp.M.transpose() * Lm * gp.M;
  Kd[N - 1] += 0.5 * h * p.B((N - 1) * h);
  Kd[0] += 0.5 * h * gp.M.transpose() * p.B(1.0) * gp.M;
  Md[N - 1] += 0.5 * h * I;
  Md[0] += 0.5 * h * gp.M.transpose() * gp.M;

  // Chain = nodes 1..N-1, border = node 0 (carries both couplings).
  ChainForm out;
  for (int k = 1; k < N; ++k) {
    out.D.push_back(Kd[k]);
    out.M.push_back(Md[k]);
    if (k + 1 < N) out.E.push_back(Ke[k]);
    if (k == 1) {
      out.G.push_back(Ke[0].transpose());
    } else if (k == N - 1) {
      out.G.push_back(corner);
    } else {
      out.G.push_back(Matrix::Zero(n, n));
    }
  }
  out.Db = Kd[0];
  out.Mb = Md[0];
  out.scale = 1.0 / h + p.B.sup_norm() + p.Lambda.sup_norm() / h;
  return out;
}

/// Count of generalized eigenvalues of (K, M) strictly above `a`, i.e. the
/// positive inertia of K - a M. Returns nullopt on a near-singular pivot
/// (caller jitters the shift).
std::optional<int> count_above(const ChainForm& cf, double a) {
  const double pivot_tol = 1e-11 * (1.0 + cf.scale);
  const std::size_t m = cf.D.size();
  const bool bordered = !cf.G.empty();
  std::vector<Matrix> D = cf.D;
  std::vector<Matrix> G = cf.G;
  Matrix Db = cf.Db;
  if (bordered) Db -= a * cf.Mb;
  int positives = 0;
  for (std::size_t k = 0; k < m; ++k) {
    Matrix d = D[k] - a * cf.M[k];
    // Schur updates accumulate roundoff asymmetry while the block norm
    // shrinks; fold it back before the eigensolve.
    d = 0.5 * (d + d.transpose()).eval();
    const EigenDecomposition ed = sym_eig(d);
    Matrix dinv = Matrix::Zero(d.rows(), d.cols());
    for (int j = 0; j < ed.eigenvalues.size(); ++j) {
      const double ev = ed.eigenvalues(j);
      if (std::abs(ev) < pivot_tol) return std::nullopt;
      if (ev > 0.0) ++positives;
      dinv += (1.0 / ev) * ed.eigenvectors.col(j) * ed.eigenvectors.col(j).transpose();
    }
    if (k + 1 < m) {
      const Matrix& Ek = cf.E[k];
      D[k + 1] -= Ek.transpose() * dinv * Ek;
      if (bordered) G[k + 1] -= Ek.transpose() * dinv * G[k];
    }
    if (bordered) Db -= G[k].transpose() * dinv * G[k];
  }
  if (bordered) {
    Db = 0.5 * (Db + Db.transpose()).eval();
    const EigenDecomposition ed = sym_eig(Db);
    for (int j = 0; j < ed.eigenvalues.size(); ++j) {
      const double ev = ed.eigenvalues(j);
      if (std::abs(ev) < pivot_tol) return std::nullopt;
      if (ev > 0.0) ++positives;
    }
  }
  return positives;
}

int count_above_robust(const ChainForm& cf, double a) {
  double jitter = 0.0;
  for (int attempt = 0; attempt < 8; ++attempt) {
    if (auto c = count_above(cf, a + jitter)) return *c;
    jitter = (jitter == 0.0 ? 1e-9 : 3.0 * jitter) * (1.0 + std::abs(a));
  }
  throw NoConvergence("galerkin_count: persistent singular pivot");
}

double boundary_growth_bound(const SecondOrderProblem& p) {
  double a = 0.0;
  if (const auto* sl = std::get_if<SturmLiouville>(&p.bc)) {
    auto norm_at = [&](double t) {
      return sym_eig(p.Lambda(t)).eigenvalues.cwiseAbs().maxCoeff();
    };
    if (!is_dirichlet_start(*sl)) {
      a += std::abs(std::cos(sl->alpha) / std::sin(sl->alpha)) * norm_at(0.0);
    }
    if (!is_dirichlet_end(*sl)) {
      a += std::abs(std::cos(sl->beta) / std::sin(sl->beta)) * norm_at(1.0);
    }
  }
  if (a <= 0.0) return 0.0;
  const double lam = p.Lambda.min_eigenvalue();
  const double eps = std::min(1.0, lam / (2.0 * a + 1.0));
  return 2.0 * a * (1.0 + 1.0 / eps);
}

double zero_band(const SecondOrderProblem& p, int N) {
  const double lam = p.Lambda.min_eigenvalue();
  const double scale = (p.B.sup_norm() + boundary_growth_bound(p) + 1.0) / lam;
  const double h = 1.0 / N;
  return h * h * (scale * scale / 3.0 + 1.0);
}

struct Counts {
  int positives;
  int zeros;
};

Counts second_order_counts(const SecondOrderProblem& p, int N) {
  const ChainForm cf = assemble_second_order(p, N);
  const double band = zero_band(p, N);
  const int above = count_above_robust(cf, band);
  const int above_low = count_above_robust(cf, -band);
  return {above, above_low - above};
}

// ---------------------------------------------------------------------------
// Crossing scans over one-parameter coefficient families.
// ---------------------------------------------------------------------------

struct ScanFamily {
  std::function<MatrixFunction(double)> S_of;
  ReducedBC bc;
};

Matrix orthonormal_columns(const Matrix& A) {
  const Eigen::HouseholderQR<Matrix> qr(A);
  return qr.householderQ() * Matrix::Identity(A.rows(), A.cols());
}

/// Sines of the principal angles between the evolved initial subspace and the
/// terminal condition. The raw matching matrix inherits the exponential
/// conditioning of hyperbolic monodromies at deep shifts, which floods any
/// norm-relative multiplicity cut; subspace angles keep every value in [0, 1]
/// with crossings pinned near 0.
Vector principal_sines(const Matrix& gamma, const ReducedBC& bc) {
  if (const auto* angle = std::get_if<AngleBC>(&bc)) {
    const int n = static_cast<int>(gamma.rows()) / 2;
    const Matrix evolved =
        orthonormal_columns(gamma * initial_subspace(*angle, n));
    const Matrix W = terminal_form(*angle, n);  // orthonormal rows
    return Eigen::JacobiSVD<Matrix>(W * evolved).singularValues();
  }
  // Coupled ends x(1) = P x(0): angles between the graphs of gamma(1) and P.
  const auto& P = std::get<Matrix>(bc);
  const int d = static_cast<int>(gamma.rows());
  Matrix graph_gamma(2 * d, d), graph_p(2 * d, d);
  graph_gamma << Matrix::Identity(d, d), gamma;
  graph_p << Matrix::Identity(d, d), P;
  const Matrix q_gamma = orthonormal_columns(graph_gamma);
  const Matrix q_p = orthonormal_columns(graph_p);
  const Matrix sines =
      q_p - q_gamma * (q_gamma.transpose() * q_p);
  return Eigen::JacobiSVD<Matrix>(sines).singularValues();
}

struct ScanSample {
  double sigma = 0.0;  // smallest principal-angle sine
  double det = 0.0;    // determinant of the raw matching matrix
};

/// One grid evaluation: the sine measures dip depth, the raw determinant
/// carries a sign that flips across odd-multiplicity crossings no matter how
/// narrow the dip is.
ScanSample sample_at(const ScanFamily& fam, double s, int resolution) {
  const Matrix gamma = monodromy_end(fam.S_of(s), resolution);
  const Vector sv = principal_sines(gamma, fam.bc);
  return {sv(sv.size() - 1), matching_matrix_end(gamma, fam.bc).determinant()};
}

Vector singulars_at(const ScanFamily& fam, double s, int resolution) {
  return principal_sines(monodromy_end(fam.S_of(s), resolution), fam.bc);
}

double sigma_min_at(const ScanFamily& fam, double s, int resolution) {
  const Vector sv = singulars_at(fam, s, resolution);
  return sv(sv.size() - 1);
}

int multiplicity_at(const ScanFamily& fam, double s, double accept_tol) {
  const Vector sv = singulars_at(fam, s, 2048);
  const double cut = accept_tol * (1.0 + sv(0));
  int count = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) <= cut) ++count;
  }
  return count;
}

double golden_minimize(const std::function<double(double)>& f, double a, double b,
                       double width) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > width) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

/// Crossings strictly inside (s0, s1); the half-open endpoint bookkeeping is
/// the caller's.
CrossingSet scan_crossings(const ScanFamily& fam, double s0, double s1,
                           const SweepTolerances& tol, int grid_mult) {
  CrossingSet out;
  const double span = s1 - s0;
  if (span <= 0.0) return out;
  const int m =
      std::max(65, static_cast<int>(std::ceil(tol.grid_per_unit * span * grid_mult)) + 1);
  const int scan_res = 512;
  std::vector<double> f(m);
  std::vector<double> det(m);
  parallel_for(
      m,
      [&](int i) {
        const double s = s0 + span * i / double(m - 1);
        const ScanSample smp = sample_at(fam, s, scan_res);
        f[i] = smp.sigma;
        det[i] = smp.det;
      },
      sweep_threads());

  std::vector<double> sorted = f;
  std::nth_element(sorted.begin(), sorted.begin() + m / 2, sorted.end());
  const double median = sorted[m / 2];
  // Inclusive on purpose: narrow dips sampled on their shoulders can sit well
  // above the floor; false candidates are discarded after refinement by the
  // multiplicity test.
  const double dip_threshold = std::max(0.3 * median, 1e-14);
  const double end_band = 1e-7 * span;
  const double width = std::max(tol.localization * span, 1e-14);

  auto eval = [&](double s) { return sigma_min_at(fam, s, scan_res); };
  std::vector<Crossing> found;
  for (int i = 0; i < m; ++i) {
    const bool left_ok = i == 0 || f[i] <= f[i - 1];
    const bool right_ok = i == m - 1 || f[i] <= f[i + 1];
    if (!(left_ok && right_ok) || f[i] > dip_threshold) continue;
    const double a = s0 + span * std::max(0, i - 1) / double(m - 1);
    const double b = s0 + span * std::min(m - 1, i + 1) / double(m - 1);
    const double s_star = golden_minimize(eval, a, b, width);
    if (s_star <= s0 + end_band || s_star >= s1 - end_band) continue;
    const int mult = multiplicity_at(fam, s_star, tol.crossing_accept);
    if (mult == 0) continue;
    found.push_back({s_star, mult});
  }
  // Determinant sign flips catch crossings whose sine dip is narrower than the
  // grid spacing (steep transversal crossings shoot past the dip threshold
  // within a single cell).
  for (int i = 0; i + 1 < m; ++i) {
    if (det[i] == 0.0 || det[i + 1] == 0.0) continue;
    if ((det[i] < 0.0) == (det[i + 1] < 0.0)) continue;
    double a = s0 + span * i / double(m - 1);
    double b = s0 + span * (i + 1) / double(m - 1);
    double fa = det[i];
    // Bisect to machine precision: when the evolved frame is strongly
    // contracted the matching angle rotates at a rate inversely proportional
    // to the contraction, and only a machine-accurate root brings the angle
    // below the multiplicity cut.
    for (;;) {
      const double mid = 0.5 * (a + b);
      if (!(a < mid && mid < b)) break;
      const double fm = sample_at(fam, mid, scan_res).det;
      if (fm == 0.0) {
        a = mid;
        b = mid;
        break;
      }
      if ((fa < 0.0) != (fm < 0.0)) {
        b = mid;
      } else {
        a = mid;
        fa = fm;
      }
    }
    const double s_star = 0.5 * (a + b);
    if (s_star <= s0 + end_band || s_star >= s1 - end_band) continue;
    int mult = multiplicity_at(fam, s_star, tol.crossing_accept);
    if (mult == 0 &&
        sigma_min_at(fam, s_star, scan_res) <= std::sqrt(tol.crossing_accept)) {
      // The sign change certifies at least one crossing even when the angle
      // at the representable root stays above the strict cut.
      mult = 1;
    }
    if (mult == 0) continue;
    found.push_back({s_star, mult});
  }
  std::sort(found.begin(), found.end(),
            [](const Crossing& a, const Crossing& b) { return a.parameter < b.parameter; });
  for (const auto& c : found) {
    if (!out.crossings.empty() &&
        c.parameter - out.crossings.back().parameter < 1e-7 * span) {
      out.crossings.back().multiplicity =
          std::max(out.crossings.back().multiplicity, c.multiplicity);
      continue;
    }
    out.crossings.push_back(c);
  }
  out.localization_width = width;
  return out;
}

int crossing_total(const CrossingSet& cs) {
  int total = 0;
  for (const auto& c : cs.crossings) total += c.multiplicity;
  return total;
}

/// Family of the lambda-shifted reduction S + lambda diag(0, I_n).
ScanFamily shift_family(const HamiltonianSystem& base) {
  const int two_n = base.S.dim();
  const int n = two_n / 2;
  return {[base, n, two_n](double lambda) {
            std::vector<Matrix> values = base.S.values();
            for (auto& v : values) {
              v.bottomRightCorner(n, n) += lambda * Matrix::Identity(n, n);
            }
            switch (base.S.kind()) {
              case MatrixFunction::Kind::Constant:
                return MatrixFunction::constant(values.front());
              case MatrixFunction::Kind::PiecewiseConstant:
                return MatrixFunction::piecewise(base.S.breakpoints(), std::move(values));
              case MatrixFunction::Kind::GridSampled:
                return MatrixFunction::sampled(std::move(values));
            }
            throw Error("shift_family: unreachable");
          },
          base.bc};
}

ScanFamily pencil_family(const SecondOrderProblem& tmpl, const PencilPath& pp) {
  return {[tmpl, pp](double s) {
            SecondOrderProblem q{tmpl.Lambda, pp.at(s), tmpl.bc};
            return to_first_order(q).S;
          },
          to_first_order(SecondOrderProblem{tmpl.Lambda, pp.b0, tmpl.bc}).bc};
}

ScanFamily pencil_family(const FirstOrderProblem& tmpl, const PencilPath& pp) {
  return {[pp](double s) { return pp.at(s); },
          to_first_order(FirstOrderProblem{pp.b0, tmpl.bc}).bc};
}

int monotone_sum(const ScanFamily& fam, int start_nu, const SweepTolerances& tol,
                 int grid_mult) {
  return start_nu + crossing_total(scan_crossings(fam, 0.0, 1.0, tol, grid_mult));
}

int fd_index_of(const SecondOrderProblem& tmpl, const MatrixFunction& B) {
  return galerkin_count(SecondOrderProblem{tmpl.Lambda, B, tmpl.bc}).positives;
}

template <typename Problem>
int nu_of(const Problem& tmpl, const MatrixFunction& B);

template <>
int nu_of(const SecondOrderProblem& tmpl, const MatrixFunction& B) {
  return nullity(SecondOrderProblem{tmpl.Lambda, B, tmpl.bc}).nu;
}

template <>
int nu_of(const FirstOrderProblem& tmpl, const MatrixFunction& B) {
  return nullity(FirstOrderProblem{B, tmpl.bc}).nu;
}

}  // namespace

double lambda_lower_bound(const SecondOrderProblem& p) {
  validate(p);
  const double bound = boundary_growth_bound(p) + p.B.sup_norm() + 1.0;
  const double lambda_min = -bound;
  // A-posteriori: the discretized form at lambda_min must be negative definite.
  const SecondOrderProblem shifted{p.Lambda, shift(p.B, lambda_min), p.bc};
  const Counts c = second_order_counts(shifted, 256);
  if (c.positives != 0 || c.zeros != 0) {
    throw VerificationFailed("lambda_lower_bound: discretized form not negative definite");
  }
  return lambda_min;
}

IndexResult index_sweep(const SecondOrderProblem& p) {
  validate(p);
  const double lambda_min = lambda_lower_bound(p);
  const HamiltonianSystem base = to_first_order(p);
  const ScanFamily fam = shift_family(base);
  const NullityResult nures = nullity(p);
  const GalerkinCount gc = galerkin_count(p);

  SweepTolerances tol;
  CrossingSet cs;
  for (int grid_mult : {1, 4, 16, 64}) {
    cs = scan_crossings(fam, lambda_min, 0.0, tol, grid_mult);
    const int i = crossing_total(cs);
    if (i == gc.positives && nures.nu == gc.zeros) {
      IndexResult out;
      out.index = i;
      out.nu = nures.nu;
      out.crossings = cs.crossings;
      out.anchor_name = "lambda_min";
      out.anchor_value = lambda_min;
      out.validation_method = "galerkin_fd";
      out.validated = true;
      out.tolerances = tol;
      return out;
    }
  }
  std::ostringstream msg;
  msg << "index_sweep: sweep (" << crossing_total(cs) << "," << nures.nu
      << ") disagrees with validator (" << gc.positives << "," << gc.zeros << ")";
  throw ValidatorDisagreement(msg.str());
}

int relative_index_monotone(const SecondOrderProblem& tmpl, const PencilPath& pp) {
  if (!pp.monotone) throw NotMonotone("relative_index_monotone: path is not monotone");
  if (pp.b0.dim() != tmpl.Lambda.dim()) {
    throw ShapeMismatch("relative_index_monotone: path dimension mismatch");
  }
  const ScanFamily fam = pencil_family(tmpl, pp);
  const int nu0 = nu_of(tmpl, pp.b0);
  const int expected = fd_index_of(tmpl, pp.b1) - fd_index_of(tmpl, pp.b0);
  SweepTolerances tol;
  int total = 0;
  for (int grid_mult : {1, 4, 16, 64}) {
    total = monotone_sum(fam, nu0, tol, grid_mult);
    if (total == expected) return total;
  }
  std::ostringstream msg;
  msg << "relative_index_monotone: sweep " << total << " disagrees with validator "
      << expected;
  throw ValidatorDisagreement(msg.str());
}

int relative_index_monotone(const FirstOrderProblem& tmpl, const PencilPath& pp) {
  if (!pp.monotone) throw NotMonotone("relative_index_monotone: path is not monotone");
  if (pp.b0.dim() != tmpl.B.dim()) {
    throw ShapeMismatch("relative_index_monotone: path dimension mismatch");
  }
  const ScanFamily fam = pencil_family(tmpl, pp);
  SweepTolerances tol;
  // Two consecutive scan resolutions must agree; there is no discretization
  // validator for first-order problems. Close crossing pairs only separate at
  // fine grids, so the ladder keeps climbing until the count stabilizes.
  const int nu0 = nu_of(tmpl, pp.b0);
  int prev = monotone_sum(fam, nu0, tol, 1);
  for (int grid_mult : {4, 16, 64, 256}) {
    const int cur = monotone_sum(fam, nu0, tol, grid_mult);
    if (cur == prev) return cur;
    prev = cur;
  }
  throw ValidatorDisagreement("relative_index_monotone: scans do not settle");
}

namespace {

template <typename Problem>
int relative_index_impl(const Problem& tmpl, const MatrixFunction& B1,
                        const MatrixFunction& B2) {
  if (B1.dim() != B2.dim()) throw ShapeMismatch("relative_index: shapes differ");
  double k = 1.0 + std::max(B1.sup_norm(), B2.sup_norm());
  const int dim = B1.dim();
  for (int attempt = 0; attempt < 16; ++attempt) {
    const MatrixFunction kid = MatrixFunction::constant(k * Matrix::Identity(dim, dim));
    if (nu_of(tmpl, kid) == 0) {
      return relative_index_monotone(tmpl, path(B1, kid)) -
             relative_index_monotone(tmpl, path(B2, kid));
    }
    k += 0.371;  // nudge off an accidental eigenvalue of the comparison pencil
  }
  throw NoConvergence("relative_index: could not find nondegenerate k id");
}

template <typename Problem>
EkelandIndex ekeland_impl(const Problem& tmpl, const MatrixFunction& B,
                          const MatrixFunction& B0) {
  const PencilPath pp = path(B0, B);
  if (!pp.monotone) {
    throw NotMonotone("ekeland_index: B - B0 is not uniformly positive");
  }
  EkelandIndex out;
  out.relative = relative_index_monotone(tmpl, pp) - nu_of(tmpl, B0);
  out.nu = nu_of(tmpl, B);
  return out;
}

}  // namespace

int relative_index(const SecondOrderProblem& tmpl, const MatrixFunction& B1,
                   const MatrixFunction& B2) {
  return relative_index_impl(tmpl, B1, B2);
}

int relative_index(const FirstOrderProblem& tmpl, const MatrixFunction& B1,
                   const MatrixFunction& B2) {
  return relative_index_impl(tmpl, B1, B2);
}

EkelandIndex ekeland_index(const SecondOrderProblem& tmpl, const MatrixFunction& B,
                           const MatrixFunction& B0) {
  return ekeland_impl(tmpl, B, B0);
}

EkelandIndex ekeland_index(const FirstOrderProblem& tmpl, const MatrixFunction& B,
                           const MatrixFunction& B0) {
  return ekeland_impl(tmpl, B, B0);
}

IndexResult index_first_order(const FirstOrderProblem& p, int symplectic_anchor) {
  validate(p);
  const int two_n = p.B.dim();
  const int n = two_n / 2;
  IndexResult out;
  if (std::holds_alternative<Bolza>(p.bc)) {
    const auto& bz = std::get<Bolza>(p.bc);
    const SecondOrderProblem anchor_problem{
        MatrixFunction::constant(Matrix::Identity(n, n)),
        MatrixFunction::constant(Matrix::Zero(n, n)),
        SturmLiouville{bz.alpha, bz.beta}};
    const int anchor = index_sweep(anchor_problem).index;
    Matrix D = Matrix::Zero(two_n, two_n);
    D.bottomRightCorner(n, n) = Matrix::Identity(n, n);
    out.anchor_name = "i_s(I,alpha,beta)(0)";
    out.anchor_value = anchor;
    out.index = anchor + relative_index(p, MatrixFunction::constant(D), p.B);
    out.validation_method = "anchored_difference";
  } else {
    out.anchor_name = "i_f_P(0)";
    out.anchor_value = symplectic_anchor;
    out.index = symplectic_anchor +
                relative_index(p, MatrixFunction::constant(Matrix::Zero(two_n, two_n)),
                               p.B);
    out.validation_method = "anchored_difference";
  }
  out.nu = nullity(p).nu;
  out.validated = true;
  return out;
}

GalerkinCount galerkin_count(const SecondOrderProblem& p, int truncation) {
  validate(p);
  int N = std::max(64, truncation);
  Counts prev = second_order_counts(p, N);
  const int cap = 1 << 13;
  while (N < cap) {
    N *= 2;
    const Counts cur = second_order_counts(p, N);
    if (cur.positives == prev.positives && cur.zeros == prev.zeros) {
      return {cur.positives, cur.zeros, N};
    }
    prev = cur;
  }
  throw NoConvergence("galerkin_count: counts did not stabilize");
}

DiscreteInertia second_order_form_inertia(const SecondOrderProblem& p, int N) {
  const ChainForm cf = assemble_second_order(p, N);
  const double band = zero_band(p, N);
  const int above = count_above_robust(cf, band);
  const int above_low = count_above_robust(cf, -band);
  const int total = static_cast<int>(cf.D.size()) * p.Lambda.dim() +
                    static_cast<int>(cf.Db.rows());
  return {total - above_low, above_low - above, above};
}

}  // namespace spectra

#pragma once

// Explicit matrices on truncated occupation spaces: single-mode ladders,
// flattened multi-mode grids (Jordan-Wigner signs for fermions), the
// per-mode implementers, and the numerical checks tied to them:
// conjugation identities, vacuum annihilation, rapid decay.

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "algebra.hpp"
#include "implementability.hpp"
#include "types.hpp"

namespace bogo {

struct TruncatedModeSpace {
  Statistics statistics = Statistics::Bosonic;
  int cutoff = 1;  // highest occupation kept
  Matrix a, adag, number;
};

inline TruncatedModeSpace mode_operators(Statistics statistics, int cutoff) {
  if (statistics == Statistics::Fermionic) cutoff = 1;
  if (cutoff < 1) throw Error(Errc::BadCutoff, "cutoff must be at least 1");
  const Eigen::Index d = cutoff + 1;
  TruncatedModeSpace sp;
  sp.statistics = statistics;
  sp.cutoff = cutoff;
  sp.a = Matrix::Zero(d, d);
  for (Eigen::Index n = 1; n < d; ++n) sp.a(n - 1, n) = std::sqrt(static_cast<double>(n));
  sp.adag = sp.a.adjoint();
  sp.number = sp.adag * sp.a;
  return sp;
}

// Amplitudes over the occupation basis; multi-mode grids flatten with mode 0
// fastest. The norm is reported, never forced.
struct StateVector {
  Vector amplitudes;
  int modes = 1;

  double norm() const { return amplitudes.norm(); }
};

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// exp(g) for skew-Hermitian g, through the eigendecomposition of the
// Hermitian matrix ig. Exactly unitary up to rounding.
inline Matrix exp_skew_hermitian(const Matrix& g) {
  const double scale = std::max(1.0, max_abs(g));
  if (max_abs(g + g.adjoint()) > 1e-13 * scale)
    throw Error(Errc::SymmetryViolation, "generator is not skew-Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(cplx(0, 1) * g);
  if (es.info() != Eigen::Success)
    throw Error(Errc::NoConvergence, "eigendecomposition failed");
  const Vector phases =
      (cplx(0, -1) * es.eigenvalues().cast<cplx>().array()).exp().matrix();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// Ladder matrices for several modes on the flattened grid, mode 0 fastest.
// Fermionic mode j carries the sign string (-1)^(n_0 + ... + n_{j-1}) so the
// anticommutation relations hold across modes.
struct FockGrid {
  Statistics statistics = Statistics::Bosonic;
  int modes = 1;
  int cutoff = 1;
  Eigen::Index dim = 0;
  std::vector<Matrix> a, adag;

  Matrix number() const {
    Matrix total = Matrix::Zero(dim, dim);
    for (int j = 0; j < modes; ++j) total += adag[static_cast<std::size_t>(j)] *
                                             a[static_cast<std::size_t>(j)];
    return total;
  }
};

inline FockGrid fock_grid(Statistics statistics, int modes, int cutoff) {
  if (statistics == Statistics::Fermionic) cutoff = 1;
  if (cutoff < 1) throw Error(Errc::BadCutoff, "cutoff must be at least 1");
  if (modes < 1) throw Error(Errc::BadParameter, "need at least one mode");
  const double dense = std::pow(static_cast<double>(cutoff) + 1.0, modes);
  if (dense > 4096.0) throw Error(Errc::BadCutoff, "occupation grid too large");

  FockGrid grid;
  grid.statistics = statistics;
  grid.modes = modes;
  grid.cutoff = cutoff;
  grid.dim = static_cast<Eigen::Index>(dense);

  const TruncatedModeSpace one = mode_operators(statistics, cutoff);
  Matrix sign = Matrix::Identity(cutoff + 1, cutoff + 1);
  if (statistics == Statistics::Fermionic) sign(1, 1) = -1.0;
  const Matrix id = Matrix::Identity(cutoff + 1, cutoff + 1);

  for (int j = 0; j < modes; ++j) {
    Matrix op = Matrix::Identity(1, 1);
    for (int i = modes - 1; i >= 0; --i) {  // slowest factor first
      const Matrix& factor = i == j ? one.a
                             : i < j && statistics == Statistics::Fermionic ? sign
                                                                            : id;
      op = kron(op, factor);
    }
    grid.a.push_back(op);
    grid.adag.push_back(op.adjoint());
  }
  return grid;
}

inline int total_occupation(const FockGrid& grid, Eigen::Index index) {
  int total = 0;
  const int base = grid.cutoff + 1;
  for (int j = 0; j < grid.modes; ++j) {
    total += static_cast<int>(index % base);
    index /= base;
  }
  return total;
}

// a^dag(f1) + a(conj(f2)) as a grid matrix; linear in both components.
inline Matrix generalized_creation(const FockGrid& grid, const GeneralizedVector& f) {
  if (f.f1.size() != grid.modes || f.f2.size() != grid.modes)
    throw Error(Errc::DimensionMismatch, "component length does not match the mode count");
  Matrix op = Matrix::Zero(grid.dim, grid.dim);
  for (int j = 0; j < grid.modes; ++j) {
    const auto k = static_cast<std::size_t>(j);
    op += f.f1(j) * grid.adag[k] + f.f2(j) * grid.a[k];
  }
  return op;
}

// exp(-(xi/2)((a^dag)^2 - a^2)) on the truncated space. Unitary to rounding;
// faithful on sectors that stay clear of the cutoff (cutoff >= 4*sector + 20
// is comfortable for xi <= 1).
inline Matrix build_implementer_bosonic(double xi, int cutoff) {
  const TruncatedModeSpace sp = mode_operators(Statistics::Bosonic, cutoff);
  const Matrix g = -0.5 * xi * (sp.adag * sp.adag - sp.a * sp.a);
  return exp_skew_hermitian(g);
}

// Per-mode fermionic implementers. A pair acts on the two-mode grid with the
// even mode first (fast index): U = exp(-xi (ad_e ad_o - a_o a_e)), which
// sends the empty state to alpha - beta ad_e ad_o applied to it, matching the
// vacuum amplitude rule. Sign conventions are fixed by that vacuum.
inline Matrix build_implementer_fermionic(const ModeParams& mode) {
  switch (mode.kind) {
    case ModeKind::Invariant:
      return Matrix::Identity(2, 2);
    case ModeKind::ParticleHole: {
      const TruncatedModeSpace sp = mode_operators(Statistics::Fermionic, 1);
      return sp.adag + sp.a;  // exactly unitary on the 2-dim space
    }
    case ModeKind::CooperPair: {
      const double xi = std::atan2(mode.beta, mode.alpha);
      const FockGrid grid = fock_grid(Statistics::Fermionic, 2, 1);
      const Matrix g = -xi * (grid.adag[0] * grid.adag[1] - grid.a[1] * grid.a[0]);
      return exp_skew_hermitian(g);
    }
    case ModeKind::Bosonic:
      break;
  }
  throw Error(Errc::BadParameter, "bosonic mode passed to the fermionic implementer");
}

struct ConjugationReport {
  std::vector<double> sector_residuals;  // index = total occupation
  double max_residual = 0.0;
  double tol = default_tol;
  bool passed = false;
};

namespace detail {

// Defect columns are measured inside the sector window only. Rows above the
// bound are dominated by the cutoff boundary (a truncated ladder reflects
// there) and say nothing about the map being implemented; inside the window
// the residual shrinks as the cutoff grows.
inline ConjugationReport conjugation_report(const std::vector<Matrix>& defects,
                                            const std::function<int(Eigen::Index)>& sector,
                                            int sector_bound, double tol) {
  ConjugationReport rep;
  rep.sector_residuals.assign(static_cast<std::size_t>(sector_bound) + 1, 0.0);
  rep.tol = tol;
  for (const Matrix& d : defects)
    for (Eigen::Index col = 0; col < d.cols(); ++col) {
      const int s = sector(col);
      if (s > sector_bound) continue;
      double sq = 0.0;
      for (Eigen::Index row = 0; row < d.rows(); ++row)
        if (sector(row) <= sector_bound) sq += std::norm(d(row, col));
      double& slot = rep.sector_residuals[static_cast<std::size_t>(s)];
      slot = std::max(slot, std::sqrt(sq));
    }
  for (double r : rep.sector_residuals) rep.max_residual = std::max(rep.max_residual, r);
  rep.passed = rep.max_residual <= tol;
  return rep;
}

}  // namespace detail

// U a U^-1 = cosh(xi) a + sinh(xi) a^dag and its adjoint, checked on
// occupation states up to sector_bound with the defect measured inside the
// same window. Truncation-limited: the windowed residual decays as the
// cutoff grows; a rule of thumb is cutoff >= 4 * sector_bound + 20 for
// xi <= 1.
inline ConjugationReport verify_conjugation_bosonic(double xi, int cutoff, int sector_bound,
                                                    double tol = default_tol) {
  if (sector_bound < 0 || sector_bound > cutoff)
    throw Error(Errc::PrereqFailed, "sector bound exceeds the cutoff");
  const TruncatedModeSpace sp = mode_operators(Statistics::Bosonic, cutoff);
  const Matrix u = build_implementer_bosonic(xi, cutoff);
  const double ch = std::cosh(xi), sh = std::sinh(xi);
  const std::vector<Matrix> defects = {
      u * sp.a * u.adjoint() - ch * sp.a - sh * sp.adag,
      u * sp.adag * u.adjoint() - ch * sp.adag - sh * sp.a};
  return detail::conjugation_report(
      defects, [](Eigen::Index col) { return static_cast<int>(col); }, sector_bound, tol);
}

// The four pair identities (exact in finite dimension):
//   U a_e U* =  cos a_e + sin ad_o      U ad_e U* =  cos ad_e + sin a_o
//   U a_o U* =  cos a_o - sin ad_e      U ad_o U* =  cos ad_o - sin a_e
// Invariant modes commute with U; a particle-hole swap conjugates a into
// a^dag.
inline ConjugationReport verify_conjugation_fermionic(const ModeParams& mode,
                                                      double tol = default_tol) {
  const Matrix u = build_implementer_fermionic(mode);
  std::vector<Matrix> defects;
  if (mode.kind == ModeKind::CooperPair) {
    const FockGrid grid = fock_grid(Statistics::Fermionic, 2, 1);
    const double c = std::cos(std::atan2(mode.beta, mode.alpha));
    const double s = std::sin(std::atan2(mode.beta, mode.alpha));
    defects = {u * grid.a[0] * u.adjoint() - c * grid.a[0] - s * grid.adag[1],
               u * grid.a[1] * u.adjoint() - c * grid.a[1] + s * grid.adag[0],
               u * grid.adag[0] * u.adjoint() - c * grid.adag[0] - s * grid.a[1],
               u * grid.adag[1] * u.adjoint() - c * grid.adag[1] + s * grid.a[0]};
    return detail::conjugation_report(
        defects,
        [](Eigen::Index col) { return static_cast<int>(col % 2 + col / 2); }, 2, tol);
  }
  const TruncatedModeSpace sp = mode_operators(Statistics::Fermionic, 1);
  if (mode.kind == ModeKind::Invariant)
    defects = {u * sp.a * u.adjoint() - sp.a, u * sp.adag * u.adjoint() - sp.adag};
  else if (mode.kind == ModeKind::ParticleHole)
    defects = {u * sp.a * u.adjoint() - sp.adag, u * sp.adag * u.adjoint() - sp.a};
  else
    throw Error(Errc::BadParameter, "bosonic mode passed to the fermionic check");
  return detail::conjugation_report(
      defects, [](Eigen::Index col) { return static_cast<int>(col); }, 1, tol);
}

// The vacuum of the transformed annihilators, assembled from the per-mode
// amplitude rule and scaled by the mode's renormalization factor, so a
// bosonic state carries (1 - (nu/mu)^2)^(1/4) and a pair carries alpha.
inline StateVector vacuum_state(const ModeParams& mode, int cutoff) {
  const Statistics statistics =
      mode.kind == ModeKind::Bosonic ? Statistics::Bosonic : Statistics::Fermionic;
  const ModeFamily fam = ModeFamily::from_modes(statistics, {mode});
  const VacuumDescription vac = vacuum_data(fam);
  const double scale = std::exp(vac.renorm_exponent(1));
  const ModeVacuumRule rule = vac.mode_rule(1);

  StateVector state;
  if (mode.kind == ModeKind::Bosonic) {
    if (cutoff < 1) throw Error(Errc::BadCutoff, "cutoff must be at least 1");
    state.amplitudes = Vector::Zero(cutoff + 1);
    for (int n = 0; n <= cutoff; ++n) state.amplitudes(n) = scale * rule.amplitude(n);
  } else if (mode.kind == ModeKind::CooperPair) {
    state.modes = 2;
    state.amplitudes = Vector::Zero(4);
    for (Eigen::Index i = 0; i < 4; ++i)
      state.amplitudes(i) = scale * rule.amplitude(i % 2, i / 2);
  } else {
    state.amplitudes = Vector::Zero(2);
    state.amplitudes(mode.kind == ModeKind::ParticleHole ? 1 : 0) = 1.0;
  }
  return state;
}

// || b Omega_V || for the transformed annihilators on the truncated space.
// The interior recurrence cancels exactly; what remains is rounding plus the
// boundary term the truncated ladder drops.
inline double vacuum_annihilation_residual(const ModeParams& mode, int cutoff) {
  const StateVector state = vacuum_state(mode, cutoff);
  switch (mode.kind) {
    case ModeKind::Bosonic: {
      const TruncatedModeSpace sp = mode_operators(Statistics::Bosonic, cutoff);
      return ((mode.mu * sp.a + mode.nu * sp.adag) * state.amplitudes).norm();
    }
    case ModeKind::Invariant: {
      const TruncatedModeSpace sp = mode_operators(Statistics::Fermionic, 1);
      return (sp.a * state.amplitudes).norm();
    }
    case ModeKind::ParticleHole: {
      const TruncatedModeSpace sp = mode_operators(Statistics::Fermionic, 1);
      return (sp.adag * state.amplitudes).norm();
    }
    case ModeKind::CooperPair: {
      const FockGrid grid = fock_grid(Statistics::Fermionic, 2, 1);
      const Matrix b_even = mode.alpha * grid.a[0] + mode.beta * grid.adag[1];
      const Matrix b_odd = mode.alpha * grid.a[1] - mode.beta * grid.adag[0];
      return std::max((b_even * state.amplitudes).norm(),
                      (b_odd * state.amplitudes).norm());
    }
  }
  return 0.0;
}

// sum_N P(N) (2N)^power with P(N) = sqrt(1-4t^2) t^(2N) (2N)!/(N!)^2, the
// occupation distribution of a squeezed vacuum with amplitude ratio 2t.
// P(N+1)/P(N) = 2 t^2 (2N+1)/(N+1) -> 4t^2, so t < 1/2 is exactly the
// convergence region.
inline double rapid_decay_moment(double t, int power, std::int64_t max_occupation = 4000) {
  if (!(t >= 0.0 && t < 0.5))
    throw Error(Errc::BadParameter, "occupation series requires 0 <= t < 0.5");
  if (power < 0) throw Error(Errc::BadParameter, "moment power must be nonnegative");
  KahanSum sum;
  double p = std::sqrt(1.0 - 4.0 * t * t);
  for (std::int64_t n = 0; 2 * n <= max_occupation; ++n) {
    const double occupation = static_cast<double>(2 * n);
    sum.add(p * std::pow(occupation, power));
    if (p == 0.0) break;
    p *= 2.0 * t * t * static_cast<double>(2 * n + 1) / static_cast<double>(n + 1);
  }
  return sum.value();
}

// || N^n Omega_V ||^2 for the normalized squeezed vacuum; n = 0 recovers the
// normalization, n = 1 the second moment of the occupation.
inline double rapid_decay_norm(double t, int n, std::int64_t max_occupation = 4000) {
  return rapid_decay_moment(t, 2 * n, max_occupation);
}

inline double mean_occupation(double t) { return rapid_decay_moment(t, 1); }

// Running sums sum_{k<=K} phi_k * alpha: the coefficient a coherent product
// state feeds to the annihilator one mode at a time. Unbounded growth
// pinpoints form factors the state cannot absorb.
inline std::vector<double> coherent_divergence_probe(
    double alpha, const std::function<double(std::int64_t)>& phi, std::int64_t count) {
  if (count < 1) throw Error(Errc::BadParameter, "need at least one partial sum");
  std::vector<double> partials;
  partials.reserve(static_cast<std::size_t>(count));
  KahanSum sum;
  for (std::int64_t k = 1; k <= count; ++k) {
    sum.add(phi(k) * alpha);
    partials.push_back(sum.value());
  }
  return partials;
}

}  // namespace bogo

#pragma once

// Mode structure of a Bogoliubov map: the antilinear pairing operator
// C x = u*v conj(x), its spectrum, and the decomposition into independent
// single modes (bosonic) or mode pairs (fermionic).
//
// The matrix M = u*v is stored for the linear part, so C x = M conj(x).
// M is symmetric for bosons and antisymmetric for fermions.

#include <algorithm>
#include <cmath>
#include <vector>

#include "algebra.hpp"
#include "types.hpp"

namespace bogo {

inline Matrix pairing_matrix(const BogoliubovMap& map) {
  require_validated(map, "pairing_matrix");
  return map.u.adjoint() * map.v;
}

// An eigenvalue of the pairing operator counts as zero below this scale.
inline double zero_threshold(double tol, double spectral_scale) {
  return std::max(tol, 1e-12 * spectral_scale);
}

// u f = mu g and v conj(f) = nu g with mu > 0, nu >= 0, mu^2 - nu^2 = 1.
struct BosonicMode {
  double mu = 1.0;
  double nu = 0.0;
  Vector f;  // input mode
  Vector g;  // output mode
};

struct BosonicDecomposition {
  std::vector<BosonicMode> modes;  // descending nu; coupled modes first
  double residual = 0.0;           // max-abs error of reconstructing u and v
};

enum class ModeKind { Bosonic, Invariant, ParticleHole, CooperPair };

inline const char* name(ModeKind k) {
  switch (k) {
    case ModeKind::Bosonic: return "Bosonic";
    case ModeKind::Invariant: return "Invariant";
    case ModeKind::ParticleHole: return "ParticleHole";
    case ModeKind::CooperPair: return "CooperPair";
  }
  return "?";
}

// Invariant:    u f = eta_even, v conj(f) = 0           (alpha 1, beta 0)
// ParticleHole: u f = 0,        v conj(f) = eta_even    (alpha 0, beta 1)
// CooperPair:   u f_even = alpha eta_even, v conj(f_even) =  beta eta_odd,
//               u f_odd  = alpha eta_odd,  v conj(f_odd)  = -beta eta_even,
//               alpha^2 + beta^2 = 1, alpha > 0, beta > 0.
struct FermionicMode {
  ModeKind kind = ModeKind::Invariant;
  double alpha = 1.0;
  double beta = 0.0;
  Vector f_even, eta_even;
  Vector f_odd, eta_odd;  // CooperPair only
};

struct FermionicDecomposition {
  // CooperPairs by descending beta, then ParticleHole, then Invariant;
  // ties keep eigensolver order.
  std::vector<FermionicMode> modes;
  double residual = 0.0;
};

namespace detail {

// Complex modified Gram-Schmidt; returns false when the vector degenerates.
// Candidates here are unit vectors either essentially inside the span of
// basis (repeats) or essentially new, so 1/2 separates the two cases.
inline bool mgs_orthonormalize(Vector& x, const std::vector<Vector>& basis) {
  for (int pass = 0; pass < 2; ++pass)
    for (const Vector& b : basis) x -= b.dot(x) * b;
  const double n = x.norm();
  if (n <= 0.5) return false;
  x /= n;
  return true;
}

}  // namespace detail

inline BosonicDecomposition decompose_bosonic(const BogoliubovMap& map,
                                              double tol = default_tol) {
  if (map.statistics != Statistics::Bosonic)
    throw Error(Errc::NotBosonic, "map is not bosonic");
  const Matrix m = pairing_matrix(map);
  if (max_abs(m - m.transpose()) > tol)
    throw Error(Errc::NotBosonic, "pairing matrix is not symmetric");

  const Eigen::Index n = m.rows();
  // Doubling trick: with f = a + ib, M conj(f) = lambda f is equivalent to
  // the real symmetric eigenproblem below; the +/-lambda symmetry of its
  // spectrum corresponds to f -> i f.
  RealMatrix t(2 * n, 2 * n);
  t.topLeftCorner(n, n) = m.real();
  t.topRightCorner(n, n) = m.imag();
  t.bottomLeftCorner(n, n) = m.imag();
  t.bottomRightCorner(n, n) = -m.real();
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(t);
  if (es.info() != Eigen::Success)
    throw Error(Errc::NoConvergence, "eigendecomposition failed");

  const double scale = n == 0 ? 0.0 : es.eigenvalues().cwiseAbs().maxCoeff();
  const double zthresh = zero_threshold(tol, scale);

  BosonicDecomposition dec;
  std::vector<Vector> accepted;
  const auto column_mode = [&](Eigen::Index j) {
    return Vector(es.eigenvectors().col(j).head(n).cast<cplx>() +
                  cplx(0, 1) * es.eigenvectors().col(j).tail(n).cast<cplx>());
  };

  for (Eigen::Index j = 2 * n - 1; j >= 0; --j) {  // descending eigenvalue
    const double lambda = es.eigenvalues()(j);
    if (lambda <= zthresh) break;
    Vector f = column_mode(j);
    // Distinct positive eigenvalues give orthogonal f's, and inside a
    // degenerate cluster real orthonormality of the doubled vectors already
    // implies complex orthonormality; this pass only polishes rounding.
    if (!detail::mgs_orthonormalize(f, accepted))
      throw Error(Errc::DegenerateBasis, "coupled eigenvectors degenerate");
    accepted.push_back(f);

    BosonicMode mode;
    mode.f = f;
    const Vector uf = map.u * f;
    mode.mu = uf.norm();
    mode.nu = lambda / mode.mu;
    mode.g = uf / mode.mu;
    dec.modes.push_back(std::move(mode));
  }

  const std::size_t coupled = accepted.size();
  // Remaining directions decouple: v conj(f) = 0 and u f stays unit. The
  // zero eigenspace describes each kernel direction twice (f and i f);
  // Gram-Schmidt keeps one complex copy of each.
  for (Eigen::Index j = 0; j < 2 * n && accepted.size() < static_cast<std::size_t>(n); ++j) {
    if (std::abs(es.eigenvalues()(j)) > zthresh) continue;
    Vector f = column_mode(j);
    if (!detail::mgs_orthonormalize(f, accepted)) continue;
    accepted.push_back(f);

    BosonicMode mode;
    mode.f = f;
    const Vector uf = map.u * f;
    mode.mu = uf.norm();
    mode.nu = 0.0;
    mode.g = uf / mode.mu;
    dec.modes.push_back(std::move(mode));
  }
  if (accepted.size() != static_cast<std::size_t>(n))
    throw Error(Errc::DegenerateBasis, "could not assemble an orthonormal mode basis");

  std::stable_sort(dec.modes.begin(), dec.modes.begin() + static_cast<std::ptrdiff_t>(coupled),
                   [](const BosonicMode& a, const BosonicMode& b) { return a.nu > b.nu; });

  Matrix u_rec = Matrix::Zero(n, n), v_rec = Matrix::Zero(n, n);
  for (const BosonicMode& mode : dec.modes) {
    u_rec += mode.mu * mode.g * mode.f.adjoint();
    v_rec += mode.nu * mode.g * mode.f.transpose();
  }
  dec.residual = std::max(max_abs(u_rec - map.u), max_abs(v_rec - map.v));
  return dec;
}

inline FermionicDecomposition decompose_fermionic(const BogoliubovMap& map,
                                                  double tol = default_tol) {
  if (map.statistics != Statistics::Fermionic)
    throw Error(Errc::NotFermionic, "map is not fermionic");
  const Matrix m = pairing_matrix(map);
  if (max_abs(m + m.transpose()) > tol)
    throw Error(Errc::NotFermionic, "pairing matrix is not antisymmetric");

  const Eigen::Index n = m.rows();
  // Eigenvectors of K = u*u organize everything: C*C = K - K^2, so a
  // K-eigenvector w with eigenvalue x has pairing strength
  // lambda = |C w| = sqrt(x(1-x)), and its partner M conj(w)/lambda shares x
  // (K M = M conj(K)). Decoupled vectors sit at x near 0 or 1.
  const Matrix k = map.u.adjoint() * map.u;
  Eigen::SelfAdjointEigenSolver<Matrix> es(k);
  if (es.info() != Eigen::Success)
    throw Error(Errc::NoConvergence, "eigendecomposition failed");

  double scale = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double x = es.eigenvalues()(j);
    scale = std::max(scale, std::sqrt(std::max(x * (1.0 - x), 0.0)));
  }
  const double zthresh = zero_threshold(tol, scale);

  std::vector<FermionicMode> pairs, holes, invariants;
  std::vector<Vector> used;
  for (Eigen::Index j = 0; j < n; ++j) {
    Vector w = es.eigenvectors().col(j);
    // Pair partners consume a second dimension of their eigenvalue cluster;
    // the column that spanned it degenerates here and is skipped.
    if (!detail::mgs_orthonormalize(w, used)) continue;

    // Norms are read off the vector itself: eigenvalues carry solver noise
    // of order eps*|K| while the vector products reach the true residual.
    const Vector cw = m * w.conjugate();
    const double lambda = cw.norm();

    if (lambda <= zthresh) {
      const Vector uw = map.u * w;
      const Vector vw = map.v * w.conjugate();
      FermionicMode mode;
      mode.f_even = w;
      if (uw.norm() <= zthresh) {
        mode.kind = ModeKind::ParticleHole;
        mode.alpha = 0.0;
        mode.beta = 1.0;
        mode.eta_even = vw / vw.norm();
        holes.push_back(std::move(mode));
      } else if (vw.norm() <= zthresh) {
        mode.kind = ModeKind::Invariant;
        mode.alpha = 1.0;
        mode.beta = 0.0;
        mode.eta_even = uw / uw.norm();
        invariants.push_back(std::move(mode));
      } else {
        throw Error(Errc::DegenerateBasis,
                    "decoupled eigenvector is neither invariant nor particle-hole");
      }
      used.push_back(w);
      continue;
    }

    // Coupled: the partner is orthogonal to w and to everything already used
    // (the pairing map is antiunitary with square -1), so a degenerate
    // projection means an odd leftover in this eigenvalue cluster.
    Vector wp = cw / lambda;
    if (!detail::mgs_orthonormalize(wp, used) || std::abs(wp.dot(w)) > 0.5)
      throw Error(Errc::UnpairedEigenvector, "coupled eigenspace has odd dimension");
    wp -= w.dot(wp) * w;
    wp /= wp.norm();
    used.push_back(w);
    used.push_back(wp);

    FermionicMode mode;
    mode.kind = ModeKind::CooperPair;
    mode.f_even = w;
    mode.f_odd = wp;
    const Vector uw = map.u * w;
    mode.alpha = uw.norm();  // sqrt(x) read off the vector
    mode.beta = lambda / mode.alpha;
    mode.eta_even = uw / mode.alpha;
    mode.eta_odd = map.u * wp / mode.alpha;
    pairs.push_back(std::move(mode));
  }
  if (used.size() != static_cast<std::size_t>(n))
    throw Error(Errc::DegenerateBasis, "could not assemble an orthonormal mode basis");

  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const FermionicMode& a, const FermionicMode& b) { return a.beta > b.beta; });

  FermionicDecomposition dec;
  dec.modes.reserve(pairs.size() + holes.size() + invariants.size());
  for (auto* group : {&pairs, &holes, &invariants})
    for (FermionicMode& mode : *group) dec.modes.push_back(std::move(mode));

  Matrix u_rec = Matrix::Zero(n, n), v_rec = Matrix::Zero(n, n);
  for (const FermionicMode& mode : dec.modes) {
    switch (mode.kind) {
      case ModeKind::Invariant:
        u_rec += mode.eta_even * mode.f_even.adjoint();
        break;
      case ModeKind::ParticleHole:
        v_rec += mode.eta_even * mode.f_even.transpose();
        break;
      case ModeKind::CooperPair:
        u_rec += mode.alpha * (mode.eta_even * mode.f_even.adjoint() +
                               mode.eta_odd * mode.f_odd.adjoint());
        v_rec += mode.beta * (mode.eta_odd * mode.f_even.transpose() -
                              mode.eta_even * mode.f_odd.transpose());
        break;
      case ModeKind::Bosonic:
        break;
    }
  }
  dec.residual = std::max(max_abs(u_rec - map.u), max_abs(v_rec - map.v));
  return dec;
}

}  // namespace bogo

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "bogo/algebra.hpp"
#include "bogo/fock.hpp"
#include "bogo/renorm.hpp"
#include "bogo/types.hpp"

namespace bogo {

// H = 1/2 sum_{jl} (2 h_jl ad_j a_l + s k_jl ad_j ad_l + conj(k_jl) a_j a_l),
// s = +1 bosonic, -1 fermionic. Hermitian h; k symmetric (bosonic) or
// antisymmetric (fermionic).
struct QuadraticHamiltonian {
  Statistics statistics = Statistics::Bosonic;
  Matrix h, k;

  Eigen::Index modes() const { return h.rows(); }
};

inline void require_quadratic(const QuadraticHamiltonian& ham, double tol = default_tol) {
  if (ham.h.rows() != ham.h.cols() || ham.k.rows() != ham.k.cols() ||
      ham.h.rows() != ham.k.rows())
    throw Error(Errc::DimensionMismatch, "h and k must be square with equal dimension");
  require_finite(ham.h, "h");
  require_finite(ham.k, "k");
  const double scale = std::max({1.0, max_abs(ham.h), max_abs(ham.k)});
  if (max_abs(ham.h - ham.h.adjoint()) > tol * scale)
    throw Error(Errc::SymmetryViolation, "h must be Hermitian");
  if (ham.statistics == Statistics::Bosonic) {
    if (max_abs(ham.k - ham.k.transpose()) > tol * scale)
      throw Error(Errc::SymmetryViolation, "bosonic k must be symmetric");
  } else if (max_abs(ham.k + ham.k.transpose()) > tol * scale) {
    throw Error(Errc::SymmetryViolation, "fermionic k must be antisymmetric");
  }
}

// First-quantized block matrix A_H = (h, k; conj k, conj h) bosonic,
// (h, -k; conj k, -conj h) fermionic. Hermitian in both cases.
inline Matrix hamiltonian_to_blocks(const QuadraticHamiltonian& ham, double tol = default_tol) {
  require_quadratic(ham, tol);
  const Eigen::Index n = ham.modes();
  const double sk = ham.statistics == Statistics::Bosonic ? 1.0 : -1.0;
  Matrix a(2 * n, 2 * n);
  a.topLeftCorner(n, n) = ham.h;
  a.topRightCorner(n, n) = sk * ham.k;
  a.bottomLeftCorner(n, n) = ham.k.conjugate();
  a.bottomRightCorner(n, n) = sk * ham.h.conjugate();
  return a;
}

// Generator of the Heisenberg motion of generalized creation operators:
// ad(i G (f, g)) = i [H, ad(f, g)]. Fermionic G = A_H; bosonic G = A_H S
// with S = diag(1, -1), the commutator picking up the symplectic sign.
inline Matrix dynamics_generator(const QuadraticHamiltonian& ham, double tol = default_tol) {
  Matrix a = hamiltonian_to_blocks(ham, tol);
  if (ham.statistics == Statistics::Bosonic) a.rightCols(a.cols() / 2) *= -1.0;
  return a;
}

struct DiagonalizationResult {
  BogoliubovMap map;
  RealVector energies;    // descending, zeros last
  double residual = 0.0;  // max-abs of V* A_H V minus diag(E, +-E)
};

namespace detail {

inline void require_even_blocks(const Matrix& a) {
  if (a.rows() != a.cols() || a.rows() % 2 != 0)
    throw Error(Errc::DimensionMismatch, "block matrix must be square of even dimension");
  require_finite(a, "block matrix");
}

inline double scaled_tol(const Matrix& a, double tol) {
  return tol * std::max(1.0, max_abs(a));
}

// Column phases are free; pin them so results are reproducible run to run
// (and match the real closed forms where one exists).
inline void fix_phase(Vector& x) {
  Eigen::Index m = 0;
  x.cwiseAbs().maxCoeff(&m);
  const cplx lead = x(m);
  if (std::abs(lead) > 0) x *= std::conj(lead) / std::abs(lead);
}

}  // namespace detail

// Symplectic route: under h > 0 and a strict Gram bound the spectrum of
// S A_H splits into real +-E pairs whose eigenvectors are orthonormal in the
// indefinite S inner product; the positive family and its swapped conjugates
// assemble the map.
inline DiagonalizationResult diagonalize_bosonic(const Matrix& a_h, double tol = default_tol) {
  detail::require_even_blocks(a_h);
  const Eigen::Index n = a_h.rows() / 2;
  const Matrix h = a_h.topLeftCorner(n, n);
  const Matrix k = a_h.topRightCorner(n, n);
  const double stol = detail::scaled_tol(a_h, tol);
  if (max_abs(h - h.adjoint()) > stol || max_abs(k - k.transpose()) > stol ||
      max_abs(a_h.bottomLeftCorner(n, n) - k.conjugate()) > stol ||
      max_abs(a_h.bottomRightCorner(n, n) - h.conjugate()) > stol)
    throw Error(Errc::SymmetryViolation, "block matrix lacks the bosonic (h, k) structure");

  Eigen::SelfAdjointEigenSolver<Matrix> hes(h);
  if (hes.info() != Eigen::Success)
    throw Error(Errc::NoConvergence, "eigendecomposition of h failed");
  const double hmax = hes.eigenvalues().cwiseAbs().maxCoeff();
  if (hes.eigenvalues().minCoeff() <= tol * std::max(1.0, hmax))
    throw Error(Errc::NotPositive, "h is not positive definite");
  const Matrix gram = hes.operatorInverseSqrt() * k * hes.operatorInverseSqrt();
  const double gnorm = gram.jacobiSvd().singularValues()(0);
  // Reject the gray zone just below 1 as well; the eigenproblem degenerates.
  if (gnorm >= 1.0 - 10.0 * tol)
    throw Error(Errc::GramTooLarge,
                "pairing Gram norm " + std::to_string(gnorm) + " is not below 1");

  Matrix s_ah = a_h;
  s_ah.bottomRows(n) *= -1.0;
  Eigen::ComplexEigenSolver<Matrix> ces(s_ah);
  if (ces.info() != Eigen::Success)
    throw Error(Errc::NoConvergence, "eigendecomposition of S A_H failed");

  std::vector<Eigen::Index> pos;
  for (Eigen::Index i = 0; i < 2 * n; ++i)
    if (ces.eigenvalues()(i).real() > 0) pos.push_back(i);
  if (static_cast<Eigen::Index>(pos.size()) != n)
    throw Error(Errc::NoConvergence, "spectrum of S A_H failed to split into +-E pairs");
  std::sort(pos.begin(), pos.end(), [&](Eigen::Index a, Eigen::Index b) {
    return ces.eigenvalues()(a).real() > ces.eigenvalues()(b).real();
  });

  const auto sdot = [n](const Vector& x, const Vector& y) {
    return (x.head(n).adjoint() * y.head(n) - x.tail(n).adjoint() * y.tail(n)).value();
  };
  std::vector<Vector> basis;
  RealVector energies(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Vector x = ces.eigenvectors().col(pos[static_cast<std::size_t>(i)]);
    // Cross-eigenvalue S products vanish identically; within a degenerate
    // cluster the projections do the orthogonalizing. Two passes.
    for (int pass = 0; pass < 2; ++pass)
      for (const Vector& b : basis) x -= b * sdot(b, x);
    const double sn = sdot(x, x).real();
    if (sn <= 0)
      throw Error(Errc::DegenerateBasis, "eigenvector lost its positive symplectic norm");
    x /= std::sqrt(sn);
    detail::fix_phase(x);
    basis.push_back(std::move(x));
    energies(i) = ces.eigenvalues()(pos[static_cast<std::size_t>(i)]).real();
  }

  Matrix u(n, n), v(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    u.col(i) = basis[static_cast<std::size_t>(i)].head(n);
    v.col(i) = basis[static_cast<std::size_t>(i)].tail(n).conjugate();
  }
  DiagonalizationResult result;
  result.map = make_validated(Statistics::Bosonic, std::move(u), std::move(v), tol);
  result.energies = energies;
  Matrix target = Matrix::Zero(2 * n, 2 * n);
  target.diagonal().head(n) = energies.cast<cplx>();
  target.diagonal().tail(n) = energies.cast<cplx>();
  const Matrix vb = block_matrix(result.map);
  result.residual = max_abs(vb.adjoint() * a_h * vb - target);
  if (result.residual > detail::scaled_tol(a_h, tol))
    throw Error(Errc::NoConvergence,
                "diagonalization residual " + std::to_string(result.residual));
  return result;
}

// Unitary route: A_H is Hermitian and anticommutes with the antiunitary
// x -> swap(conj x), so the spectrum is +-E symmetric and the map is the
// eigenbasis with the swapped-conjugate columns adjoined. Kernel vectors are
// paired through the same antiunitary, which squares to +1 there; an odd
// finite kernel admits no pairing.
inline DiagonalizationResult diagonalize_fermionic(const Matrix& a_h, double tol = default_tol) {
  detail::require_even_blocks(a_h);
  const Eigen::Index n = a_h.rows() / 2;
  const double stol = detail::scaled_tol(a_h, tol);
  if (max_abs(a_h - a_h.adjoint()) > stol ||
      max_abs(a_h.topRightCorner(n, n) + a_h.topRightCorner(n, n).transpose()) > stol ||
      max_abs(a_h.bottomLeftCorner(n, n) + a_h.topRightCorner(n, n).conjugate()) > stol ||
      max_abs(a_h.bottomRightCorner(n, n) + a_h.topLeftCorner(n, n).conjugate()) > stol)
    throw Error(Errc::SymmetryViolation, "block matrix lacks the fermionic (h, k) structure");

  Eigen::SelfAdjointEigenSolver<Matrix> es(a_h);
  if (es.info() != Eigen::Success)
    throw Error(Errc::NoConvergence, "eigendecomposition of A_H failed");
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  const double zthresh = std::max(tol, 1e-12 * scale);

  const auto xi = [n](const Vector& x) {
    Vector y(2 * n);
    y.head(n) = x.tail(n).conjugate();
    y.tail(n) = x.head(n).conjugate();
    return y;
  };

  std::vector<Eigen::Index> pos, ker;
  for (Eigen::Index i = 0; i < 2 * n; ++i) {
    const double lam = es.eigenvalues()(i);
    if (std::abs(lam) <= zthresh)
      ker.push_back(i);
    else if (lam > 0)
      pos.push_back(i);
  }
  if (ker.size() % 2 != 0)
    throw Error(Errc::OddKernel, "kernel dimension " + std::to_string(ker.size()) + " is odd");
  if (pos.size() + ker.size() / 2 != static_cast<std::size_t>(n))
    throw Error(Errc::NoConvergence, "spectrum failed to split into +-E pairs");
  std::sort(pos.begin(), pos.end(), [&](Eigen::Index a, Eigen::Index b) {
    return es.eigenvalues()(a) > es.eigenvalues()(b);
  });

  std::vector<Vector> basis;
  RealVector energies = RealVector::Zero(n);
  for (std::size_t i = 0; i < pos.size(); ++i) {
    Vector x = es.eigenvectors().col(pos[i]);
    detail::fix_phase(x);
    basis.push_back(std::move(x));
    energies(static_cast<Eigen::Index>(i)) = es.eigenvalues()(pos[i]);
  }

  if (!ker.empty()) {
    // Fixed vectors of the antiunitary span the kernel over the reals; their
    // pairwise inner products are automatically real, so plain Gram-Schmidt
    // stays inside the fixed set.
    std::vector<Vector> fixed;
    for (Eigen::Index idx : ker) {
      const Vector w = es.eigenvectors().col(idx);
      const Vector cands[2] = {w + xi(w), cplx(0, 1) * (w - xi(w))};
      for (const Vector& cand : cands) {
        Vector r = cand;
        for (int pass = 0; pass < 2; ++pass)
          for (const Vector& f : fixed) r -= f * (f.adjoint() * r).value();
        if (r.norm() > 1e-6) fixed.push_back(r / r.norm());
      }
    }
    if (fixed.size() != ker.size())
      throw Error(Errc::NoConvergence, "kernel pairing basis construction failed");
    for (std::size_t i = 0; i + 1 < fixed.size(); i += 2) {
      Vector z = (fixed[i] + cplx(0, 1) * fixed[i + 1]) / std::sqrt(2.0);
      detail::fix_phase(z);
      basis.push_back(std::move(z));
    }
  }

  Matrix u(n, n), v(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    u.col(i) = basis[static_cast<std::size_t>(i)].head(n);
    v.col(i) = basis[static_cast<std::size_t>(i)].tail(n).conjugate();
  }
  DiagonalizationResult result;
  result.map = make_validated(Statistics::Fermionic, std::move(u), std::move(v), tol);
  result.energies = energies;
  Matrix target = Matrix::Zero(2 * n, 2 * n);
  target.diagonal().head(n) = energies.cast<cplx>();
  target.diagonal().tail(n) = -energies.cast<cplx>();
  const Matrix vb = block_matrix(result.map);
  result.residual = max_abs(vb.adjoint() * a_h * vb - target);
  if (result.residual > detail::scaled_tol(a_h, tol))
    throw Error(Errc::NoConvergence,
                "diagonalization residual " + std::to_string(result.residual));
  return result;
}

inline DiagonalizationResult diagonalize(const QuadraticHamiltonian& ham,
                                         double tol = default_tol) {
  const Matrix a = hamiltonian_to_blocks(ham, tol);
  return ham.statistics == Statistics::Bosonic ? diagonalize_bosonic(a, tol)
                                               : diagonalize_fermionic(a, tol);
}

// Normal-ordering shift picked up when rewriting the diagonalized Hamiltonian
// in the new modes: per-mode terms (E_j - h_jj) / 2, summed or classified.
struct NormalOrderingConstant {
  RenSequence terms;
  SumVerdict classification;
};

inline NormalOrderingConstant normal_ordering_constant(
    const std::function<double(std::int64_t)>& h_diag,
    const std::function<double(std::int64_t)>& energy, Tail tail,
    std::int64_t evaluable_end = std::numeric_limits<std::int64_t>::max()) {
  RenSequence seq = RenSequence::from_function(
      [h_diag, energy](std::int64_t j) { return 0.5 * (energy(j) - h_diag(j)); }, tail,
      evaluable_end);
  return {seq, classify(seq)};
}

inline NormalOrderingConstant normal_ordering_constant(const QuadraticHamiltonian& ham,
                                                       const DiagonalizationResult& result) {
  const Eigen::Index n = ham.modes();
  std::vector<double> terms(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j)
    terms[static_cast<std::size_t>(j)] = 0.5 * (result.energies(j) - ham.h(j, j).real());
  RenSequence seq = RenSequence::from_table(std::move(terms), Tail::finite_support(n));
  return {seq, classify(seq)};
}

// Second-quantized matrix on an explicit occupation grid.
inline Matrix build_fock_hamiltonian(const FockGrid& grid, const QuadraticHamiltonian& ham) {
  require_quadratic(ham);
  if (ham.modes() != grid.modes)
    throw Error(Errc::DimensionMismatch, "mode count does not match the grid");
  if (ham.statistics != grid.statistics)
    throw Error(Errc::StatisticsMismatch, "statistics do not match the grid");
  const double sk = ham.statistics == Statistics::Bosonic ? 1.0 : -1.0;
  const auto j = [&](int m) { return static_cast<std::size_t>(m); };
  Matrix op = Matrix::Zero(grid.dim, grid.dim);
  for (int p = 0; p < grid.modes; ++p)
    for (int q = 0; q < grid.modes; ++q) {
      op += ham.h(p, q) * grid.adag[j(p)] * grid.a[j(q)];
      op += 0.5 * sk * ham.k(p, q) * grid.adag[j(p)] * grid.adag[j(q)];
      op += 0.5 * std::conj(ham.k(p, q)) * grid.a[j(p)] * grid.a[j(q)];
    }
  return op;
}

// Checks ad(i G F) = i [H, ad(F)] on the occupation grid for the canonical
// probe F = e_{basis_index} of the doubled space. Exact up to rounding when
// every intermediate occupation fits: the operators move at most 3 quanta,
// so the bosonic cutoff must exceed the sector bound by at least 3.
inline double heisenberg_identity_check(const QuadraticHamiltonian& ham, int basis_index,
                                        int cutoff, int sector_bound = -1) {
  const int n = static_cast<int>(ham.modes());
  if (n < 1 || n > 2)
    throw Error(Errc::BadCutoff, "occupation-grid check handles one or two modes");
  if (basis_index < 0 || basis_index >= 2 * n)
    throw Error(Errc::BadParameter, "basis index out of range");
  if (ham.statistics == Statistics::Bosonic) {
    if (sector_bound < 0) sector_bound = cutoff - 3;
    if (cutoff < sector_bound + 3)
      throw Error(Errc::BadCutoff, "cutoff must exceed the sector bound by at least 3");
  } else {
    sector_bound = n;
  }

  const FockGrid grid = fock_grid(ham.statistics, n, cutoff);
  const Matrix hop = build_fock_hamiltonian(grid, ham);
  const Matrix gen = dynamics_generator(ham);

  Vector probe = Vector::Zero(2 * n);
  probe(basis_index) = 1.0;
  const Vector moved = cplx(0, 1) * (gen * probe);
  GeneralizedVector f{probe.head(n), probe.tail(n)};
  GeneralizedVector gf{moved.head(n), moved.tail(n)};
  const Matrix lhs = generalized_creation(grid, gf);
  const Matrix af = generalized_creation(grid, f);
  const Matrix rhs = cplx(0, 1) * (hop * af - af * hop);

  const Matrix defect = lhs - rhs;
  double worst = 0.0;
  for (Eigen::Index col = 0; col < defect.cols(); ++col)
    if (total_occupation(grid, col) <= sector_bound)
      worst = std::max(worst, defect.col(col).norm());
  return worst;
}

struct HeisenbergReport {
  std::vector<double> per_probe;  // index = doubled-space basis index
  double max_residual = 0.0;
};

inline HeisenbergReport heisenberg_report(const QuadraticHamiltonian& ham, int cutoff,
                                          int sector_bound = -1) {
  HeisenbergReport rep;
  for (int i = 0; i < 2 * ham.modes(); ++i)
    rep.per_probe.push_back(heisenberg_identity_check(ham, i, cutoff, sector_bound));
  rep.max_residual = *std::max_element(rep.per_probe.begin(), rep.per_probe.end());
  return rep;
}

}  // namespace bogo

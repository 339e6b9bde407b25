#pragma once

// Block-matrix algebra of Bogoliubov transformations on l2 + l2.
//
// A transformation is stored through its blocks
//     V = [ u        v      ]
//         [ conj(v)  conj(u) ]
// acting on generator pairs F = (f1, f2), which encode a^dag(f1) + a(conj(f2)).
// Validity means the four block relations hold:
//     u*u - s v^T conj(v) = 1      u*v - s v^T conj(u) = 0
//     u u* - s v v*       = 1      u v^T - s v u^T     = 0
// with s = +1 for bosons and s = -1 for fermions.

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "types.hpp"

namespace bogo {

struct BogoliubovMap {
  Statistics statistics = Statistics::Bosonic;
  Matrix u, v;
  // Set once the relations have been checked; operations that rely on
  // validity (mode decomposition, implementer construction) require it.
  bool validated = false;

  Eigen::Index modes() const { return u.rows(); }
};

struct RelationReport {
  // Residual max-abs norms of the four relations, in the order
  // {u*u - s v^T conj(v) - 1, u*v - s v^T conj(u), uu* - s vv* - 1, uv^T - s vu^T}.
  std::array<double, 4> residuals{};
  double max_residual = 0.0;
  double tol = default_tol;
  bool passed = false;
};

inline void require_square_blocks(const Matrix& u, const Matrix& v) {
  if (u.rows() != u.cols() || v.rows() != v.cols() || u.rows() != v.rows())
    throw Error(Errc::DimensionMismatch, "u and v must be square with equal dimension");
}

inline RelationReport validate_bogoliubov(const BogoliubovMap& map, double tol = default_tol) {
  require_square_blocks(map.u, map.v);
  require_finite(map.u, "u");
  require_finite(map.v, "v");

  const Matrix& u = map.u;
  const Matrix& v = map.v;
  const double s = -relation_sign(map.statistics);  // bosonic: +1 in u*u - v^T conj(v)
  const Matrix id = Matrix::Identity(u.rows(), u.cols());

  RelationReport rep;
  rep.tol = tol;
  rep.residuals[0] = max_abs(u.adjoint() * u - s * v.transpose() * v.conjugate() - id);
  rep.residuals[1] = max_abs(u.adjoint() * v - s * v.transpose() * u.conjugate());
  rep.residuals[2] = max_abs(u * u.adjoint() - s * v * v.adjoint() - id);
  rep.residuals[3] = max_abs(u * v.transpose() - s * v * u.transpose());
  rep.max_residual = *std::max_element(rep.residuals.begin(), rep.residuals.end());
  rep.passed = rep.max_residual <= tol;
  return rep;
}

// Builds a map and insists it satisfies the relations.
inline BogoliubovMap make_validated(Statistics statistics, Matrix u, Matrix v,
                                    double tol = default_tol) {
  BogoliubovMap map{statistics, std::move(u), std::move(v), false};
  RelationReport rep = validate_bogoliubov(map, tol);
  if (!rep.passed)
    throw Error(Errc::NotValidated,
                "relations violated, max residual " + std::to_string(rep.max_residual));
  map.validated = true;
  return map;
}

inline void require_validated(const BogoliubovMap& map, const char* op) {
  if (!map.validated)
    throw Error(Errc::NotValidated, std::string(op) + " requires a validated map");
}

// V* = [u^H, v^T; v^H, u^T], which is again of block form with u' = u^H, v' = v^T.
inline BogoliubovMap adjoint(const BogoliubovMap& map) {
  BogoliubovMap out;
  out.statistics = map.statistics;
  out.u = map.u.adjoint();
  out.v = map.v.transpose();
  out.validated = map.validated;
  return out;
}

// Matrix product V_a V_b (apply b first when acting on generators).
inline BogoliubovMap compose(const BogoliubovMap& a, const BogoliubovMap& b) {
  if (a.statistics != b.statistics)
    throw Error(Errc::StatisticsMismatch, "cannot compose maps of different statistics");
  if (a.u.rows() != b.u.rows())
    throw Error(Errc::DimensionMismatch, "cannot compose maps of different mode count");
  BogoliubovMap out;
  out.statistics = a.statistics;
  out.u = a.u * b.u + a.v * b.v.conjugate();
  out.v = a.u * b.v + a.v * b.u.conjugate();
  // Valid maps form a group; numerical drift is what validate_bogoliubov is for.
  out.validated = a.validated && b.validated;
  return out;
}

struct GeneralizedVector {
  Vector f1, f2;  // a^dag(f1) + a(conj(f2))
};

inline GeneralizedVector apply_to_generator(const BogoliubovMap& map, const GeneralizedVector& g) {
  if (g.f1.size() != map.u.rows() || g.f2.size() != map.u.rows())
    throw Error(Errc::DimensionMismatch, "generator length does not match mode count");
  GeneralizedVector out;
  out.f1 = map.u * g.f1 + map.v * g.f2;
  out.f2 = map.v.conjugate() * g.f1 + map.u.conjugate() * g.f2;
  return out;
}

enum class Representation {
  L2DirectSum,  // native layout used everywhere in this library
  HplusHstar,   // h + h* layout; conjugation moves onto the v blocks
  HplusH,       // h + h: transformations act nonlinearly there; not representable
};

// 2n x 2n matrix of the map in the requested layout. The h+h* layout carries
// the basis conjugation on its off-diagonal blocks, so its plain matrix swaps
// v and conj(v) relative to the native one. Converting twice returns the input.
inline Matrix convert_representation(const BogoliubovMap& map, Representation target) {
  require_square_blocks(map.u, map.v);
  const Eigen::Index n = map.u.rows();
  Matrix out(2 * n, 2 * n);
  switch (target) {
    case Representation::L2DirectSum:
      out.topLeftCorner(n, n) = map.u;
      out.topRightCorner(n, n) = map.v;
      out.bottomLeftCorner(n, n) = map.v.conjugate();
      out.bottomRightCorner(n, n) = map.u.conjugate();
      return out;
    case Representation::HplusHstar:
      out.topLeftCorner(n, n) = map.u;
      out.topRightCorner(n, n) = map.v.conjugate();
      out.bottomLeftCorner(n, n) = map.v;
      out.bottomRightCorner(n, n) = map.u.conjugate();
      return out;
    case Representation::HplusH:
      throw Error(Errc::UnsupportedTarget,
                  "the h+h layout is nonlinear in the fields; no matrix form exists");
  }
  throw Error(Errc::BadParameter, "unknown representation target");
}

inline Matrix block_matrix(const BogoliubovMap& map) {
  return convert_representation(map, Representation::L2DirectSum);
}

// Reads the blocks back out of a 2n x 2n matrix in the native layout.
inline BogoliubovMap from_block_matrix(Statistics statistics, const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0)
    throw Error(Errc::DimensionMismatch, "block matrix must be square of even dimension");
  const Eigen::Index n = m.rows() / 2;
  BogoliubovMap map;
  map.statistics = statistics;
  map.u = m.topLeftCorner(n, n);
  map.v = m.topRightCorner(n, n);
  return map;
}

// --- elementary transformations -------------------------------------------

// Diagonal bosonic squeeze: u = diag(cosh xi_j), v = diag(sinh xi_j).
inline BogoliubovMap bosonic_squeeze(const std::vector<double>& xi) {
  const Eigen::Index n = static_cast<Eigen::Index>(xi.size());
  Matrix u = Matrix::Zero(n, n), v = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    u(j, j) = std::cosh(xi[static_cast<std::size_t>(j)]);
    v(j, j) = std::sinh(xi[static_cast<std::size_t>(j)]);
  }
  BogoliubovMap map{Statistics::Bosonic, std::move(u), std::move(v), true};
  return map;
}

// Gauge/basis rotation (u = Q unitary, v = 0); valid for either statistics.
inline BogoliubovMap basis_rotation(Statistics statistics, const Matrix& q) {
  BogoliubovMap map;
  map.statistics = statistics;
  map.u = q;
  map.v = Matrix::Zero(q.rows(), q.cols());
  map.validated = true;
  return map;
}

// Fermionic pair rotation on modes (i, j): u has cos xi there, v the
// antisymmetric sin xi coupling. alpha = cos xi, beta = sin xi.
inline BogoliubovMap fermionic_pair_rotation(Eigen::Index n, Eigen::Index i, Eigen::Index j,
                                             double xi) {
  if (i == j || i < 0 || j < 0 || i >= n || j >= n)
    throw Error(Errc::BadParameter, "pair rotation needs two distinct mode indices");
  Matrix u = Matrix::Identity(n, n);
  Matrix v = Matrix::Zero(n, n);
  u(i, i) = u(j, j) = std::cos(xi);
  v(i, j) = std::sin(xi);
  v(j, i) = -std::sin(xi);
  return BogoliubovMap{Statistics::Fermionic, std::move(u), std::move(v), true};
}

// Full particle-hole swap on the listed modes (u annihilates them, v = 1 there).
inline BogoliubovMap particle_hole_swap(Eigen::Index n, const std::vector<Eigen::Index>& modes) {
  Matrix u = Matrix::Identity(n, n);
  Matrix v = Matrix::Zero(n, n);
  for (Eigen::Index m : modes) {
    if (m < 0 || m >= n) throw Error(Errc::BadParameter, "mode index out of range");
    u(m, m) = 0.0;
    v(m, m) = 1.0;
  }
  return BogoliubovMap{Statistics::Fermionic, std::move(u), std::move(v), true};
}

}  // namespace bogo

#pragma once

// Random instances shared by the unit and acceptance suites. Seeded
// generators only, so every run sees the same maps.

#include <random>
#include <vector>

#include <bogo/algebra.hpp>

namespace testsupport {

using bogo::BogoliubovMap;
using bogo::Matrix;
using bogo::Statistics;
using bogo::cplx;

inline Matrix random_unitary(Eigen::Index n, std::mt19937& rng) {
  std::normal_distribution<double> gauss;
  Matrix g(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) g(r, c) = cplx(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  // Fix the phase ambiguity so q depends only on g.
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const cplx d = r(j, j);
    if (d != cplx(0, 0)) q.col(j) *= d / std::abs(d);
  }
  return q;
}

// Rotation * squeeze * rotation: dense u and v with exactly known relations.
inline BogoliubovMap random_bosonic_map(Eigen::Index n, std::mt19937& rng,
                                        double xi_max = 1.0) {
  std::uniform_real_distribution<double> unif(-xi_max, xi_max);
  std::vector<double> xi(static_cast<std::size_t>(n));
  for (double& x : xi) x = unif(rng);
  const BogoliubovMap left = bogo::basis_rotation(Statistics::Bosonic, random_unitary(n, rng));
  const BogoliubovMap right = bogo::basis_rotation(Statistics::Bosonic, random_unitary(n, rng));
  return bogo::compose(left, bogo::compose(bogo::bosonic_squeeze(xi), right));
}

// Rotation * (pair rotations, one swap) * rotation.
inline BogoliubovMap random_fermionic_map(Eigen::Index n, std::mt19937& rng) {
  std::uniform_real_distribution<double> unif(-1.5, 1.5);
  BogoliubovMap core = bogo::basis_rotation(Statistics::Fermionic, random_unitary(n, rng));
  for (Eigen::Index i = 0; i + 1 < n; i += 2)
    core = bogo::compose(bogo::fermionic_pair_rotation(n, i, i + 1, unif(rng)), core);
  if (n % 2 == 1 && n > 0)
    core = bogo::compose(bogo::particle_hole_swap(n, {n - 1}), core);
  return bogo::compose(bogo::basis_rotation(Statistics::Fermionic, random_unitary(n, rng)),
                       core);
}

inline BogoliubovMap random_map(Statistics statistics, Eigen::Index n, std::mt19937& rng) {
  return statistics == Statistics::Bosonic ? random_bosonic_map(n, rng)
                                           : random_fermionic_map(n, rng);
}

}  // namespace testsupport

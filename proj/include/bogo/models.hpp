#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "bogo/algebra.hpp"
#include "bogo/diagonalize.hpp"
#include "bogo/implementability.hpp"
#include "bogo/renorm.hpp"
#include "bogo/types.hpp"

namespace bogo {

// Momentum ball |p| <= R in Z^3, ordered by (|p|^2, lexicographic) so sweep
// output is reproducible byte for byte.
struct ShellLattice {
  int radius = 0;
  std::vector<std::array<int, 3>> points;

  static ShellLattice build(int radius) {
    if (radius < 0) throw Error(Errc::BadParameter, "radius must be nonnegative");
    ShellLattice lat;
    lat.radius = radius;
    const std::int64_t r2 = static_cast<std::int64_t>(radius) * radius;
    for (int x = -radius; x <= radius; ++x)
      for (int y = -radius; y <= radius; ++y)
        for (int z = -radius; z <= radius; ++z) {
          const std::int64_t n2 = static_cast<std::int64_t>(x) * x +
                                  static_cast<std::int64_t>(y) * y +
                                  static_cast<std::int64_t>(z) * z;
          if (n2 <= r2) lat.points.push_back({x, y, z});
        }
    std::sort(lat.points.begin(), lat.points.end(),
              [](const std::array<int, 3>& a, const std::array<int, 3>& b) {
                const std::int64_t na = static_cast<std::int64_t>(a[0]) * a[0] +
                                        static_cast<std::int64_t>(a[1]) * a[1] +
                                        static_cast<std::int64_t>(a[2]) * a[2];
                const std::int64_t nb = static_cast<std::int64_t>(b[0]) * b[0] +
                                        static_cast<std::int64_t>(b[1]) * b[1] +
                                        static_cast<std::int64_t>(b[2]) * b[2];
                if (na != nb) return na < nb;
                return a < b;
              });
    return lat;
  }
};

inline double point_norm(const std::array<int, 3>& p) {
  return std::sqrt(static_cast<double>(static_cast<std::int64_t>(p[0]) * p[0] +
                                       static_cast<std::int64_t>(p[1]) * p[1] +
                                       static_cast<std::int64_t>(p[2]) * p[2]));
}

// ---------------------------------------------------------------------------
// Wick square of a massive scalar field: one bosonic mode per momentum with
// h_p = sqrt(p^2 + m^2) + kappa and constant pairing kappa.

struct WickModelParams {
  double m = 1.0;
  double kappa = 1.0;

  // kappa > -m/2 is exactly |kappa| < h_p for every p; kappa = 0 has nothing
  // to diagonalize.
  WickModelParams(double m_, double kappa_) : m(m_), kappa(kappa_) {
    if (!(m > 0)) throw Error(Errc::BadParameter, "mass must be positive");
    if (kappa == 0) throw Error(Errc::BadParameter, "kappa must be nonzero");
    if (!(kappa > -m / 2))
      throw Error(Errc::BadParameter, "kappa must exceed -m/2 so the pairing stays subcritical");
  }
};

struct WickMode {
  double h = 0, k = 0, gram = 0, u = 0, v = 0, energy = 0;
};

inline WickMode wick_mode(const WickModelParams& params, double p_abs) {
  WickMode mode;
  mode.h = std::sqrt(p_abs * p_abs + params.m * params.m) + params.kappa;
  mode.k = params.kappa;
  if (std::abs(mode.k) >= mode.h)
    throw Error(Errc::ConstraintViolated, "pairing dominates the dispersion");
  mode.gram = mode.k / mode.h;
  const double root = std::sqrt(1.0 - mode.gram * mode.gram);
  const double c = std::sqrt(0.5 + 0.5 / root);
  mode.u = c;
  mode.v = -c * mode.gram / (1.0 + root);
  mode.energy = std::sqrt(mode.h * mode.h - mode.k * mode.k);
  return mode;
}

// The pairing couples p with -p; at p = 0 the mode pairs with itself. The
// assembled blocks satisfy the bosonic relations exactly (u^2 - v^2 = 1).
inline BogoliubovMap wick_pair_map(const WickModelParams& params, double p_abs) {
  const WickMode mode = wick_mode(params, p_abs);
  if (p_abs == 0)
    return make_validated(Statistics::Bosonic, Matrix::Constant(1, 1, mode.u),
                          Matrix::Constant(1, 1, mode.v));
  Matrix u = Matrix::Zero(2, 2), v = Matrix::Zero(2, 2);
  u(0, 0) = mode.u;
  u(1, 1) = mode.u;
  v(0, 1) = mode.v;
  v(1, 0) = mode.v;
  return make_validated(Statistics::Bosonic, std::move(u), std::move(v));
}

struct WickShellSum {
  int radius = 0;
  double sum = 0.0;
  std::int64_t points = 0;
};

// Partial pairing-weight sums over momentum balls; the terms fall off like
// kappa^2 / (4 p^2), so the ball sums grow linearly in R.
inline std::vector<WickShellSum> wick_divergence_probe(const WickModelParams& params,
                                                       const std::vector<int>& radii) {
  if (radii.empty()) return {};
  for (std::size_t i = 0; i + 1 < radii.size(); ++i)
    if (radii[i] >= radii[i + 1])
      throw Error(Errc::BadParameter, "radii must be strictly increasing");
  const ShellLattice lat = ShellLattice::build(radii.back());
  std::vector<WickShellSum> rows;
  KahanSum sum;
  std::size_t next = 0;
  for (int r : radii) {
    const std::int64_t r2 = static_cast<std::int64_t>(r) * r;
    while (next < lat.points.size()) {
      const auto& p = lat.points[next];
      const std::int64_t n2 = static_cast<std::int64_t>(p[0]) * p[0] +
                              static_cast<std::int64_t>(p[1]) * p[1] +
                              static_cast<std::int64_t>(p[2]) * p[2];
      if (n2 > r2) break;
      const double v = wick_mode(params, std::sqrt(static_cast<double>(n2))).v;
      sum.add(v * v);
      ++next;
    }
    rows.push_back({r, sum.value(), static_cast<std::int64_t>(next)});
  }
  return rows;
}

// Smallest integer radius from which v_p^2 >= kappa^2 d^2 / (4 p^2); the
// ratio 4 p^2 v_p^2 / kappa^2 climbs to 1 from below, so once reached the
// bound persists.
inline std::int64_t wick_bound_onset(const WickModelParams& params, double d = 0.9,
                                     std::int64_t limit = 1'000'000) {
  if (!(d > 0) || d >= 1) throw Error(Errc::BadParameter, "d must lie in (0, 1)");
  for (std::int64_t r = 1; r <= limit; ++r) {
    const double p = static_cast<double>(r);
    const double v = wick_mode(params, p).v;
    if (4.0 * p * p * v * v >= params.kappa * params.kappa * d * d) return r;
  }
  throw Error(Errc::NoConvergence, "lower bound never took hold within the scan limit");
}

// Normal-ordering terms (E_p - h_p)/2 ~ -kappa^2/(4|p|) enumerated over the
// lattice; in enumeration order the k-th point sits at |p| ~ (3k/4pi)^(1/3),
// so the declared tail is a -1/3-power, which diverges to -infinity.
inline NormalOrderingConstant wick_normal_ordering_sequence(const WickModelParams& params,
                                                            int radius = 20) {
  const auto lat = std::make_shared<const ShellLattice>(ShellLattice::build(radius));
  const WickModelParams p = params;
  const auto h_rule = [lat, p](std::int64_t j) {
    return wick_mode(p, point_norm(lat->points[static_cast<std::size_t>(j - 1)])).h;
  };
  const auto e_rule = [lat, p](std::int64_t j) {
    return wick_mode(p, point_norm(lat->points[static_cast<std::size_t>(j - 1)])).energy;
  };
  const double coeff =
      -0.25 * params.kappa * params.kappa * std::cbrt(4.0 * std::numbers::pi / 3.0);
  return normal_ordering_constant(h_rule, e_rule, Tail::power_decay(1.0 / 3.0, coeff),
                                  static_cast<std::int64_t>(lat->points.size()));
}

// ---------------------------------------------------------------------------
// BCS pairing: per momentum a 4-dim block of the two spin modes, diagonalized
// by a Cooper-pair transformation.

struct BCSModelParams {
  double m = 1.0;
  double mu = 0.0;
  std::function<cplx(const std::array<int, 3>&)> delta;
};

struct BcsMode {
  Matrix a;          // 4x4 first-quantized block matrix
  Matrix transform;  // 4x4 diagonalizing map, V* a V = diag(E, E, -E, -E)
  cplx u;
  double v = 0;
  double energy = 0;
  double eps = 0;
  ModeParams cooper = ModeParams::invariant();
};

inline BcsMode bcs_mode_at(double eps, cplx delta) {
  if (delta == cplx(0, 0)) throw Error(Errc::ZeroGap, "gap must be nonzero");
  BcsMode mode;
  mode.eps = eps;
  mode.energy = std::sqrt(eps * eps + std::norm(delta));
  const double w = std::sqrt((mode.energy - eps) * (mode.energy - eps) + std::norm(delta));
  mode.u = delta / w;
  mode.v = (mode.energy - eps) / w;

  Matrix h = Matrix::Zero(2, 2), k = Matrix::Zero(2, 2);
  h(0, 0) = eps;
  h(1, 1) = eps;
  k(0, 1) = delta;
  k(1, 0) = -delta;
  mode.a = hamiltonian_to_blocks({Statistics::Fermionic, h, k});

  Matrix ub = Matrix::Zero(2, 2), vb = Matrix::Zero(2, 2);
  ub(0, 0) = mode.u;
  ub(1, 1) = mode.u;
  vb(0, 1) = mode.v;
  vb(1, 0) = -mode.v;
  mode.transform = block_matrix(make_validated(Statistics::Fermionic, ub, vb));
  mode.cooper = ModeParams::cooper_pair(std::abs(mode.u), mode.v);
  return mode;
}

inline BcsMode bcs_mode(const BCSModelParams& params, const std::array<int, 3>& p) {
  if (!(params.m > 0)) throw Error(Errc::BadParameter, "mass must be positive");
  if (!params.delta) throw Error(Errc::BadParameter, "gap function not set");
  const double n = point_norm(p);
  return bcs_mode_at(n * n / (2.0 * params.m) - params.mu, params.delta(p));
}

// ---------------------------------------------------------------------------
// External-field QED in one mode pair: time-dependent dispersion for the two
// spin components and a real coupling f between them.

struct QEDModelParams {
  std::function<double(double, double)> eps_plus;   // (|p|, t)
  std::function<double(double, double)> eps_minus;  // (|p|, t)
  std::function<double(double, double)> f;          // (|p|, t), real keeps A Hermitian
};

inline Matrix qed_mode_matrix(const QEDModelParams& params, double p, double t) {
  if (!params.eps_plus || !params.eps_minus || !params.f)
    throw Error(Errc::BadParameter, "model functions not set");
  Matrix h = Matrix::Zero(2, 2), k = Matrix::Zero(2, 2);
  h(0, 0) = params.eps_plus(p, t);
  h(1, 1) = params.eps_minus(p, t);
  const double f = params.f(p, t);
  k(0, 1) = f;
  k(1, 0) = -f;
  return hamiltonian_to_blocks({Statistics::Fermionic, h, k});
}

struct QedBranch {
  double u = 1, v = 0, energy = 0;
};

// Diagonalizer of one 2x2 branch (eps, -f; -f, -eps): E = sqrt(eps^2 + f^2),
// u = f / w, v = (E - eps) / w with w the normalizer. f = 0 collapses to the
// invariant or the full particle-hole swap depending on the sign of eps.
inline QedBranch qed_branch(double eps, double f) {
  QedBranch b;
  b.energy = std::hypot(eps, f);
  if (f == 0) {
    b.u = eps >= 0 ? 1 : 0;
    b.v = eps >= 0 ? 0 : 1;
    return b;
  }
  const double w = std::hypot(b.energy - eps, f);
  b.u = f / w;
  b.v = (b.energy - eps) / w;
  return b;
}

struct QedDynamics {
  Matrix u_quad;     // exp(-i integral A), quadrature plus one exponential
  Matrix u_ordered;  // time-ordered product of midpoint exponentials
  cplx v1, v2;       // pairing entries u_quad(0,3), u_quad(1,2)
  cplx v1_formula, v2_formula;
  double shale_term = 0;           // |v1|^2 + |v2|^2
  double formula_residual = 0;     // closed form vs. the exponential
  double unitarity_residual = 0;   // worse of the two routes
  double relation_residual = 0;    // Bogoliubov relations of u_quad
  double method_discrepancy = 0;   // max-abs gap between the routes
};

namespace detail {

// 5-point Gauss-Legendre panel nodes/weights on [-1, 1].
inline constexpr std::array<double, 5> gl_nodes = {
    -0.90617984593866396, -0.53846931010568311, 0.0, 0.53846931010568311,
    0.90617984593866396};
inline constexpr std::array<double, 5> gl_weights = {
    0.23692688505618908, 0.47862867049936647, 0.56888888888888889, 0.47862867049936647,
    0.23692688505618908};

}  // namespace detail

// Propagator exp(-i integral_s^t A(tau) dtau) of the mode-pair dynamics,
// computed two ways. The unordered exponential is what the closed form
// describes; the time-ordered product is the Dyson alternative. They agree
// whenever the A(tau) commute (constant parameters in particular), and the
// discrepancy field reports how far apart they are otherwise.
inline QedDynamics qed_dynamics(const QEDModelParams& params, double p, double s, double t,
                                int steps) {
  if (steps < 1) throw Error(Errc::BadParameter, "steps must be at least 1");

  Matrix integral = Matrix::Zero(4, 4);
  const double dt = (t - s) / steps;
  for (int panel = 0; panel < steps; ++panel) {
    const double a = s + panel * dt;
    for (std::size_t j = 0; j < detail::gl_nodes.size(); ++j) {
      const double tau = a + 0.5 * dt * (1.0 + detail::gl_nodes[j]);
      integral += (0.5 * dt * detail::gl_weights[j]) * qed_mode_matrix(params, p, tau);
    }
  }

  QedDynamics dyn;
  dyn.u_quad = exp_skew_hermitian(cplx(0, -1) * integral);
  dyn.u_ordered = Matrix::Identity(4, 4);
  for (int k = 0; k < steps; ++k) {
    const double mid = s + (k + 0.5) * dt;
    dyn.u_ordered =
        (exp_skew_hermitian(cplx(0, -dt) * qed_mode_matrix(params, p, mid)) * dyn.u_ordered)
            .eval();
  }

  dyn.v1 = dyn.u_quad(0, 3);
  dyn.v2 = dyn.u_quad(1, 2);
  dyn.shale_term = std::norm(dyn.v1) + std::norm(dyn.v2);

  // Closed form evaluated on the integrated generator; for constant A this
  // is the textbook (t-s)E form. The branch signs are fixed by the
  // exponential itself: the plus branch carries +2i.
  const double eps_p = integral(0, 0).real();
  const double eps_m = integral(1, 1).real();
  const double fbar = -integral(0, 3).real();
  const QedBranch bp = qed_branch(eps_p, fbar);
  const QedBranch bm = qed_branch(eps_m, fbar);
  dyn.v1_formula = cplx(0, 2) * bp.u * bp.v * std::sin(bp.energy);
  dyn.v2_formula = cplx(0, -2) * bm.u * bm.v * std::sin(bm.energy);
  dyn.formula_residual =
      std::max(std::abs(dyn.v1_formula - dyn.v1), std::abs(dyn.v2_formula - dyn.v2));

  const Matrix id = Matrix::Identity(4, 4);
  dyn.unitarity_residual =
      std::max(max_abs(dyn.u_quad.adjoint() * dyn.u_quad - id),
               max_abs(dyn.u_ordered.adjoint() * dyn.u_ordered - id));
  dyn.relation_residual =
      validate_bogoliubov(from_block_matrix(Statistics::Fermionic, dyn.u_quad)).max_residual;
  dyn.method_discrepancy = max_abs(dyn.u_quad - dyn.u_ordered);
  return dyn;
}

}  // namespace bogo

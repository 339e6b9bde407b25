// Two pairing models side by side. First a gap sweep of the two-spin mode:
// coherence factors and quasiparticle energy across the Fermi surface. Then
// the lattice shell sums of the pairing weights for the quadratic-dispersion
// model, whose linear growth in the radius is the signature that no Fock
// implementer exists in infinite volume.

#include <cstdio>

#include <bogo/bogo.hpp>

int main() {
  std::printf("# gap model: eps sweep at |delta| = 2\n");
  std::printf("eps,E,u_abs,v\n");
  for (double eps = -4.0; eps <= 4.0; eps += 1.0) {
    const bogo::BcsMode mode = bogo::bcs_mode_at(eps, bogo::cplx(2.0, 0.0));
    std::printf("%s,%s,%s,%s\n", bogo::format_full(eps).c_str(),
                bogo::format_full(mode.energy).c_str(),
                bogo::format_full(std::abs(mode.u)).c_str(),
                bogo::format_full(mode.v).c_str());
  }

  std::printf("\n# quadratic-dispersion model, m = kappa = 1: ball sums of v_p^2\n");
  std::printf("radius,points,sum,sum_per_radius\n");
  const bogo::WickModelParams params(1.0, 1.0);
  for (const bogo::WickShellSum& row :
       bogo::wick_divergence_probe(params, {5, 10, 20, 40, 80})) {
    std::printf("%d,%lld,%s,%s\n", row.radius, static_cast<long long>(row.points),
                bogo::format_full(row.sum).c_str(),
                bogo::format_full(row.sum / row.radius).c_str());
  }
  return 0;
}

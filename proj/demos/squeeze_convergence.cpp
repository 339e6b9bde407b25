// How fast the truncated squeeze implementer converges: for xi = 0.5 the
// windowed conjugation residual (occupation sectors <= 10) should drop by
// roughly two orders of magnitude per +10 of cutoff, while the vacuum
// overlap heads to (1 - tanh^2 xi)^(1/4).

#include <cmath>
#include <cstdio>

#include <bogo/bogo.hpp>

int main() {
  const double xi = 0.5;
  const int sector_bound = 10;
  const double overlap_want = std::pow(1.0 - std::tanh(xi) * std::tanh(xi), 0.25);

  std::printf("cutoff,conjugation_residual,vacuum_annihilation,overlap_error\n");
  for (int cutoff = 20; cutoff <= 60; cutoff += 10) {
    const bogo::ConjugationReport rep =
        bogo::verify_conjugation_bosonic(xi, cutoff, sector_bound, 1.0);
    const bogo::Matrix u = bogo::build_implementer_bosonic(xi, cutoff);
    const double annihilation = bogo::vacuum_annihilation_residual(
        bogo::ModeParams::bosonic(std::cosh(xi), std::sinh(xi)), cutoff);
    std::printf("%d,%s,%s,%s\n", cutoff, bogo::format_full(rep.max_residual).c_str(),
                bogo::format_full(annihilation).c_str(),
                bogo::format_full(std::abs(u(0, 0).real() - overlap_want)).c_str());
  }
  return 0;
}

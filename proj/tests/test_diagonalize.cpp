#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <bogo/diagonalize.hpp>

#include "support.hpp"

using namespace bogo;
using Catch::Approx;

namespace {

QuadraticHamiltonian make_ham(Statistics s, const Matrix& h, const Matrix& k) {
  QuadraticHamiltonian ham;
  ham.statistics = s;
  ham.h = h;
  ham.k = k;
  return ham;
}

// Positive spectrum of the first-quantized block matrix, found by a generic
// eigensolver with no knowledge of the block structure.
std::vector<double> positive_spectrum(const Matrix& m) {
  Eigen::ComplexEigenSolver<Matrix> es(m);
  REQUIRE(es.info() == Eigen::Success);
  std::vector<double> pos;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const cplx e = es.eigenvalues()(i);
    CHECK(std::abs(e.imag()) <= 1e-9 * std::max(1.0, std::abs(e)));
    if (e.real() > 1e-9) pos.push_back(e.real());
  }
  std::sort(pos.begin(), pos.end(), std::greater<>());
  return pos;
}

Matrix random_hermitian(Eigen::Index n, std::mt19937& rng) {
  std::normal_distribution<double> gauss;
  Matrix g(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) g(r, c) = cplx(gauss(rng), gauss(rng));
  return (g + Matrix(g.adjoint())) / 2.0;
}

}  // namespace

TEST_CASE("block matrix layout for a pairing Hamiltonian") {
  Matrix h(2, 2), k(2, 2);
  h << 3, 0, 0, 3;
  k << 0, 4, -4, 0;
  const Matrix a = hamiltonian_to_blocks(make_ham(Statistics::Fermionic, h, k));
  REQUIRE(a.rows() == 4);
  Matrix want(4, 4);
  want << 3, 0, 0, -4,  //
      0, 3, 4, 0,       //
      0, 4, -3, 0,      //
      -4, 0, 0, -3;
  CHECK(max_abs(Matrix(a - want)) == 0.0);
  CHECK(max_abs(Matrix(a - a.adjoint())) == 0.0);
}

TEST_CASE("block matrix is Hermitian for both statistics") {
  std::mt19937 rng(67);
  Matrix h = random_hermitian(3, rng);
  Matrix kb = Matrix::Random(3, 3);
  kb = (kb + Matrix(kb.transpose())).eval();  // symmetric
  const Matrix ab = hamiltonian_to_blocks(make_ham(Statistics::Bosonic, h, kb));
  CHECK(max_abs(Matrix(ab - ab.adjoint())) <= 1e-14);

  Matrix kf = Matrix::Random(3, 3);
  kf = (kf - Matrix(kf.transpose())).eval();  // antisymmetric
  const Matrix af = hamiltonian_to_blocks(make_ham(Statistics::Fermionic, h, kf));
  CHECK(max_abs(Matrix(af - af.adjoint())) <= 1e-14);
}

TEST_CASE("pairing symmetry mismatches are rejected") {
  Matrix h = Matrix::Identity(2, 2);
  Matrix k(2, 2);
  k << 0, 1, -1, 0;  // antisymmetric
  CHECK_THROWS_AS(hamiltonian_to_blocks(make_ham(Statistics::Bosonic, h, k)), Error);
  Matrix ks(2, 2);
  ks << 0, 1, 1, 0;  // symmetric
  CHECK_THROWS_AS(hamiltonian_to_blocks(make_ham(Statistics::Fermionic, h, ks)), Error);
  Matrix hn = h;
  hn(0, 1) = 1.0;  // not Hermitian
  CHECK_THROWS_AS(hamiltonian_to_blocks(make_ham(Statistics::Bosonic, hn, Matrix::Zero(2, 2))),
                  Error);
}

TEST_CASE("dynamics generator flips the sign of the right-hand columns for bosons") {
  std::mt19937 rng(71);
  const Matrix h = random_hermitian(2, rng);
  Matrix k = Matrix::Random(2, 2);
  k = (k + Matrix(k.transpose())).eval();
  const QuadraticHamiltonian ham = make_ham(Statistics::Bosonic, h, k);
  const Matrix a = hamiltonian_to_blocks(ham);
  const Matrix b = dynamics_generator(ham);
  CHECK(max_abs(Matrix(b.leftCols(2) - a.leftCols(2))) == 0.0);
  CHECK(max_abs(Matrix(b.rightCols(2) + a.rightCols(2))) == 0.0);

  const QuadraticHamiltonian fham =
      make_ham(Statistics::Fermionic, h, Matrix::Zero(2, 2));
  CHECK(max_abs(Matrix(dynamics_generator(fham) - hamiltonian_to_blocks(fham))) == 0.0);
}

TEST_CASE("one-mode pairing Hamiltonian diagonalizes in closed form") {
  // h = 4, k = 3: E = sqrt(7), entries fixed by h/E.
  const QuadraticHamiltonian ham =
      make_ham(Statistics::Bosonic, Matrix::Constant(1, 1, 4.0), Matrix::Constant(1, 1, 3.0));
  const DiagonalizationResult res = diagonalize(ham);
  REQUIRE(res.energies.size() == 1);
  CHECK(res.energies(0) == Approx(2.6457513110645907).epsilon(1e-13));
  CHECK(std::abs(res.map.u(0, 0)) == Approx(1.120682357324525).epsilon(1e-12));
  CHECK(std::abs(res.map.v(0, 0)) == Approx(0.50589420437326071).epsilon(1e-12));
  CHECK(res.map.validated);
  CHECK(res.residual <= 1e-12);
}

TEST_CASE("diagonal pairing-free Hamiltonians pass through untouched") {
  Matrix h(2, 2);
  h << 3, 0, 0, 1;
  const DiagonalizationResult res =
      diagonalize(make_ham(Statistics::Bosonic, h, Matrix::Zero(2, 2)));
  CHECK(res.energies(0) == Approx(3.0).margin(1e-14));
  CHECK(res.energies(1) == Approx(1.0).margin(1e-14));
  CHECK(max_abs(Matrix(res.map.u - Matrix::Identity(2, 2))) <= 1e-14);
  CHECK(max_abs(res.map.v) <= 1e-14);
}

TEST_CASE("critical pairing is rejected with the Gram diagnostic") {
  const QuadraticHamiltonian ham =
      make_ham(Statistics::Bosonic, Matrix::Identity(1, 1), Matrix::Identity(1, 1));
  try {
    diagonalize(ham);
    FAIL("expected a rejection");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::GramTooLarge);
  }
}

TEST_CASE("non-positive one-particle part is rejected") {
  Matrix h(1, 1);
  h << -1.0;
  try {
    diagonalize(make_ham(Statistics::Bosonic, h, Matrix::Zero(1, 1)));
    FAIL("expected a rejection");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotPositive);
  }
}

TEST_CASE("random bosonic instances diagonalize against a generic eigensolver") {
  std::mt19937 rng(73);
  for (int trial = 0; trial < 6; ++trial) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(trial % 3);
    Matrix h = random_hermitian(n, rng);
    h = (h * h.adjoint()).eval();  // positive
    h += Matrix::Identity(n, n);
    Matrix k = random_hermitian(n, rng) * 0.1;
    k = ((k + Matrix(k.transpose())) / 2.0).eval();  // symmetric, well below h
    const QuadraticHamiltonian ham = make_ham(Statistics::Bosonic, h, k);

    const DiagonalizationResult res = diagonalize(ham);
    CHECK(res.residual <= 1e-9);
    CHECK(res.map.validated);

    // Energies must reproduce the positive spectrum of the dynamics matrix.
    const std::vector<double> oracle = positive_spectrum(dynamics_generator(ham));
    REQUIRE(static_cast<Eigen::Index>(oracle.size()) == n);
    for (Eigen::Index i = 0; i < n; ++i)
      CHECK(res.energies(i) == Approx(oracle[static_cast<std::size_t>(i)]).margin(1e-9));

    // V actually diagonalizes: V* A V = diag(E, E).
    const Matrix v = block_matrix(res.map);
    const Matrix a = hamiltonian_to_blocks(ham);
    Matrix want = Matrix::Zero(2 * n, 2 * n);
    for (Eigen::Index i = 0; i < n; ++i)
      want(i, i) = want(n + i, n + i) = res.energies(i);
    CHECK(max_abs(Matrix(v.adjoint() * a * v - want)) <= 1e-9);
  }
}

TEST_CASE("two-mode pairing Hamiltonian has the BCS spectrum") {
  Matrix h(2, 2), k(2, 2);
  h << 3, 0, 0, 3;
  k << 0, 4, -4, 0;
  const DiagonalizationResult res = diagonalize(make_ham(Statistics::Fermionic, h, k));
  CHECK(res.energies(0) == Approx(5.0).margin(1e-12));
  CHECK(res.energies(1) == Approx(5.0).margin(1e-12));
  CHECK(res.residual <= 1e-12);
  CHECK(res.map.validated);
}

TEST_CASE("random fermionic instances diagonalize against a generic eigensolver") {
  std::mt19937 rng(79);
  for (int trial = 0; trial < 6; ++trial) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(trial % 3);
    const Matrix h = random_hermitian(n, rng);
    Matrix k = Matrix::Random(n, n);
    k = ((k - Matrix(k.transpose())) / 2.0).eval();
    const QuadraticHamiltonian ham = make_ham(Statistics::Fermionic, h, k);

    const DiagonalizationResult res = diagonalize(ham);
    CHECK(res.residual <= 1e-10);
    CHECK(res.map.validated);

    const std::vector<double> oracle = positive_spectrum(hamiltonian_to_blocks(ham));
    REQUIRE(static_cast<Eigen::Index>(oracle.size()) == n);
    for (Eigen::Index i = 0; i < n; ++i)
      CHECK(res.energies(i) == Approx(oracle[static_cast<std::size_t>(i)]).margin(1e-10));

    const Matrix v = block_matrix(res.map);
    const Matrix a = hamiltonian_to_blocks(ham);
    Matrix want = Matrix::Zero(2 * n, 2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
      want(i, i) = res.energies(i);
      want(n + i, n + i) = -res.energies(i);
    }
    CHECK(max_abs(Matrix(v.adjoint() * a * v - want)) <= 1e-10);
  }
}

TEST_CASE("fermionic zero modes pair up without spoiling the map") {
  // h = 0 leaves the whole space at zero energy.
  const QuadraticHamiltonian ham =
      make_ham(Statistics::Fermionic, Matrix::Zero(2, 2), Matrix::Zero(2, 2));
  const DiagonalizationResult res = diagonalize(ham);
  CHECK(res.energies.cwiseAbs().maxCoeff() <= 1e-13);
  CHECK(res.map.validated);
  CHECK(res.residual <= 1e-13);

  // A negative single-particle level flips via a particle-hole direction.
  Matrix hneg = Matrix::Zero(2, 2);
  hneg(0, 0) = -2.0;
  hneg(1, 1) = 1.0;
  const DiagonalizationResult swapped =
      diagonalize(make_ham(Statistics::Fermionic, hneg, Matrix::Zero(2, 2)));
  CHECK(swapped.energies(0) == Approx(2.0).margin(1e-13));
  CHECK(swapped.energies(1) == Approx(1.0).margin(1e-13));
  CHECK(swapped.residual <= 1e-13);
}

TEST_CASE("energies order descending with zeros last") {
  Matrix h(3, 3);
  h.setZero();
  h(0, 0) = 1.0;
  h(1, 1) = 0.0;
  h(2, 2) = 4.0;
  const DiagonalizationResult res =
      diagonalize(make_ham(Statistics::Fermionic, h, Matrix::Zero(3, 3)));
  CHECK(res.energies(0) == Approx(4.0).margin(1e-13));
  CHECK(res.energies(1) == Approx(1.0).margin(1e-13));
  CHECK(res.energies(2) == Approx(0.0).margin(1e-13));
}

TEST_CASE("normal-ordering constant of a finite family is half the trace gap") {
  Matrix h(2, 2), k(2, 2);
  h << 3, 0, 0, 3;
  k << 0, 4, -4, 0;
  const QuadraticHamiltonian ham = make_ham(Statistics::Fermionic, h, k);
  const DiagonalizationResult res = diagonalize(ham);
  const NormalOrderingConstant noc = normal_ordering_constant(ham, res);
  CHECK(noc.classification.cls == SumClass::Summable);
  CHECK(noc.classification.value ==
        Approx(0.5 * (res.energies.sum() - 6.0)).margin(1e-12));
  CHECK(noc.classification.value == Approx(2.0).margin(1e-12));
}

TEST_CASE("rule-based normal-ordering constant respects the declared tail") {
  const NormalOrderingConstant noc = normal_ordering_constant(
      [](std::int64_t) { return 1.0; },
      [](std::int64_t j) { return 1.0 + std::pow(static_cast<double>(j), -3.0); },
      Tail::power_decay(3.0, 0.5));
  CHECK(noc.classification.cls == SumClass::Summable);
  CHECK(noc.classification.value == Approx(0.5 * 1.2020569031595942).epsilon(1e-6));
}

TEST_CASE("second-quantized Hamiltonian is Hermitian on the grid") {
  std::mt19937 rng(83);
  const Matrix h = random_hermitian(2, rng);
  Matrix k = Matrix::Random(2, 2);
  k = (k + Matrix(k.transpose())).eval();
  const QuadraticHamiltonian ham = make_ham(Statistics::Bosonic, h, k);
  const FockGrid grid = fock_grid(Statistics::Bosonic, 2, 5);
  const Matrix op = build_fock_hamiltonian(grid, ham);
  CHECK(max_abs(Matrix(op - op.adjoint())) <= 1e-12);
}

TEST_CASE("generator evolution matches the commutator with the Hamiltonian") {
  std::mt19937 rng(89);
  for (int trial = 0; trial < 3; ++trial) {
    const Matrix h = random_hermitian(2, rng);
    Matrix k = Matrix::Random(2, 2);
    k = ((k - Matrix(k.transpose())) / 2.0).eval();
    const QuadraticHamiltonian fham = make_ham(Statistics::Fermionic, h, k);
    const HeisenbergReport rep = heisenberg_report(fham, 1);
    CHECK(rep.max_residual <= 1e-12);
  }

  const Matrix hb = random_hermitian(2, rng) * 0.3 + Matrix::Identity(2, 2);
  Matrix kb = Matrix::Random(2, 2) * 0.2;
  kb = (kb + Matrix(kb.transpose())).eval();
  const QuadraticHamiltonian bham =
      make_ham(Statistics::Bosonic, (hb + Matrix(hb.adjoint())) / 2.0, kb);
  const HeisenbergReport rep = heisenberg_report(bham, 12);
  CHECK(rep.max_residual <= 1e-8);

  CHECK_THROWS_AS(heisenberg_identity_check(bham, 5, 12), Error);  // probe out of range
}

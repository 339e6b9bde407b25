#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include <bogo/renorm.hpp>

using namespace bogo;
using Catch::Approx;

TEST_CASE("compensated accumulation tracks a long sum") {
  KahanSum acc;
  long double exact = 0.0L;
  for (int k = 1; k <= 200000; ++k) {
    const double term = 1.0 / (static_cast<double>(k) * k);
    acc.add(term);
    exact += static_cast<long double>(term);
  }
  CHECK(std::abs(acc.value() - static_cast<double>(exact)) <= 1e-15);
}

TEST_CASE("table sequences index from one and vanish beyond the table") {
  const RenSequence s = RenSequence::from_table({1.0, 2.0, 3.0}, Tail::finite_support(3));
  CHECK(s(1) == 1.0);
  CHECK(s(3) == 3.0);
  CHECK(s(0) == 0.0);
  CHECK(s(4) == 0.0);
}

TEST_CASE("finite-support sums evaluate exactly") {
  const SumVerdict v = classify(RenSequence::from_table({1.5, -0.5, 2.0},
                                                        Tail::finite_support(3)));
  CHECK(v.cls == SumClass::Summable);
  CHECK(v.value == 3.0);
  CHECK(v.bound <= 1e-14);
  CHECK(v.terms_used == 3);
}

TEST_CASE("declared closed forms are taken at their word") {
  const RenSequence s = RenSequence::from_function(
      [](std::int64_t k) { return 1.0 / static_cast<double>(k * k); },
      Tail::closed_form(1.6449340668482264));
  const SumVerdict v = classify(s);
  CHECK(v.cls == SumClass::Summable);
  CHECK(v.value == 1.6449340668482264);
  CHECK(v.bound == 0.0);
}

TEST_CASE("summable power tails converge with an honest remainder bound") {
  const RenSequence s = RenSequence::from_function(
      [](std::int64_t k) { return 1.0 / static_cast<double>(k * k); },
      Tail::power_decay(2.0, 1.0));
  const SumVerdict v = classify(s);
  CHECK(v.cls == SumClass::Summable);
  CHECK(v.bound > 0.0);
  CHECK(std::abs(v.value - 1.6449340668482264) <= v.bound);

  const RenSequence cubes = RenSequence::from_function(
      [](std::int64_t k) { return 1.0 / static_cast<double>(k * k * k); },
      Tail::power_decay(3.0, 1.0));
  const SumVerdict vc = classify(cubes);
  CHECK(std::abs(vc.value - 1.2020569031595942) <= vc.bound);
}

TEST_CASE("slow power tails classify divergent by the sign of the coefficient") {
  const SumVerdict plus = classify(RenSequence::from_function(
      [](std::int64_t k) { return 1.0 / static_cast<double>(k); }, Tail::power_decay(1.0, 1.0)));
  CHECK(plus.cls == SumClass::DivergentPlus);
  CHECK(plus.terms_used == 32);  // informative partial only
  CHECK(plus.value > 0.0);

  const SumVerdict minus = classify(RenSequence::from_function(
      [](std::int64_t k) { return -1.0 / std::sqrt(static_cast<double>(k)); },
      Tail::power_decay(0.5, -1.0)));
  CHECK(minus.cls == SumClass::DivergentMinus);
  CHECK(minus.value < 0.0);
}

TEST_CASE("unknown tails and cancelled coefficients stay indeterminate") {
  const RenSequence u = RenSequence::from_function([](std::int64_t) { return 1.0; },
                                                   Tail::unknown());
  CHECK(classify(u).cls == SumClass::Indeterminate);
  const RenSequence z = RenSequence::from_function([](std::int64_t) { return 1.0; },
                                                   Tail::power_decay(2.0, 0.0));
  CHECK(classify(z).cls == SumClass::Indeterminate);
}

TEST_CASE("non-finite terms are rejected during summation") {
  const RenSequence s = RenSequence::from_function(
      [](std::int64_t k) { return k == 5 ? std::numeric_limits<double>::infinity() : 0.0; },
      Tail::finite_support(10));
  CHECK_THROWS_AS(classify(s), Error);
}

TEST_CASE("literal aliasing short-circuits sum comparison") {
  const RenSequence a = RenSequence::from_function(
      [](std::int64_t k) { return 1.0 / static_cast<double>(k); }, Tail::unknown());
  RenSequence b = a;  // shares the term function
  CHECK(sums_equivalent(a, b) == TriBool::Yes);
}

TEST_CASE("sum comparison distinguishes equal and unequal finite sums") {
  const RenSequence a = RenSequence::from_table({1.0, 2.0}, Tail::finite_support(2));
  const RenSequence b = RenSequence::from_table({2.0, 1.0}, Tail::finite_support(2));
  const RenSequence c = RenSequence::from_table({2.0, 2.0}, Tail::finite_support(2));
  CHECK(sums_equivalent(a, b) == TriBool::Yes);
  CHECK(sums_equivalent(a, c) == TriBool::No);
}

TEST_CASE("sum comparison with divergent members uses declared leading orders") {
  const RenSequence harmonic = RenSequence::from_function(
      [](std::int64_t k) { return 1.0 / static_cast<double>(k); }, Tail::power_decay(1.0, 1.0));
  const RenSequence shifted = RenSequence::from_function(
      [](std::int64_t k) { return 1.0 / static_cast<double>(k + 1); },
      Tail::power_decay(1.0, 1.0));
  // Difference decays like k^-2; declared explicitly.
  CHECK(sums_equivalent(harmonic, shifted, 2.0, Tail::power_decay(2.0, 1.0)) == TriBool::Yes);
  // Summable vs divergent can never agree.
  const RenSequence squares = RenSequence::from_function(
      [](std::int64_t k) { return 1.0 / static_cast<double>(k * k); },
      Tail::power_decay(2.0, 1.0));
  CHECK(sums_equivalent(harmonic, squares) == TriBool::No);
}

TEST_CASE("constant unit norms form a strongly convergent family") {
  const NormFamily fam = NormFamily::from_function([](std::int64_t) { return 1.0; },
                                                   Tail::finite_support(0));
  const ITPFamilyReport rep = classify_itp_family(fam);
  CHECK(rep.is_C == TriBool::Yes);
  CHECK(rep.is_C0 == TriBool::Yes);
  CHECK(rep.product_norm.cls == ProductClass::Value);
  CHECK(rep.product_norm.value == Approx(1.0).margin(1e-14));
}

TEST_CASE("summable norm deviations keep the product finite and positive") {
  const NormFamily fam = NormFamily::from_function(
      [](std::int64_t k) { return 1.0 + 1.0 / static_cast<double>(k * k); },
      Tail::power_decay(2.0, 1.0));
  const ITPFamilyReport rep = classify_itp_family(fam);
  CHECK(rep.is_C == TriBool::Yes);
  CHECK(rep.is_C0 == TriBool::Yes);
  CHECK(rep.product_norm.cls == ProductClass::Value);
  CHECK(std::abs(rep.product_norm.value - 3.6760779103749779) <=
        rep.product_norm.bound + 1e-9);
}

TEST_CASE("harmonic norm defects drive the product norm to zero") {
  const NormFamily fam = NormFamily::from_function(
      [](std::int64_t k) { return 1.0 - 1.0 / static_cast<double>(k + 1); },
      Tail::power_decay(1.0, -1.0));
  const ITPFamilyReport rep = classify_itp_family(fam);
  CHECK(rep.is_C == TriBool::Yes);  // converges, to zero
  CHECK(rep.is_C0 == TriBool::No);
  CHECK(rep.product_norm.cls == ProductClass::Zero);
}

TEST_CASE("unit-modulus phase drift is weakly but not strongly equivalent") {
  const OverlapFamily fam = OverlapFamily::from_function(
      [](std::int64_t k) {
        return std::exp(cplx(0.0, 1.0 / static_cast<double>(k)));
      },
      Tail::power_decay(1.0, 1.0),   // |e^{i/k} - 1| ~ 1/k
      Tail::finite_support(0));      // moduli are exactly one
  CHECK(itp_equivalent(fam, EquivalenceMode::Strong) == TriBool::No);
  CHECK(itp_equivalent(fam, EquivalenceMode::Weak) == TriBool::Yes);
  CHECK(itp_equivalence(fam) == ItpEquivalence::WeaklyEquivalent);
}

TEST_CASE("square-summable phase drift is strongly equivalent") {
  const OverlapFamily fam = OverlapFamily::from_function(
      [](std::int64_t k) {
        return std::exp(cplx(0.0, 1.0 / static_cast<double>(k * k)));
      },
      Tail::power_decay(2.0, 1.0), Tail::finite_support(0));
  CHECK(itp_equivalence(fam) == ItpEquivalence::Equivalent);
}

TEST_CASE("componentwise rescalings multiplying to one give the same functional") {
  std::vector<Vector> fam1, fam2;
  for (int k = 1; k <= 4; ++k) {
    Vector v = Vector::Zero(2);
    v(0) = cplx(1.0 / k, 0.3);
    v(1) = cplx(0.2, -0.1 * k);
    fam1.push_back(v);
    fam2.push_back(v);
  }
  // Compensating phases: product over the family is exactly one.
  fam2[0] *= cplx(0, 1);
  fam2[1] *= cplx(0, -1);
  fam2[2] *= -1.0;
  fam2[3] *= -1.0;
  CHECK(same_functional(fam1, fam2) == TriBool::Yes);

  // A stray factor of two scales the functional away.
  fam2[3] *= 2.0;
  CHECK(same_functional(fam1, fam2) == TriBool::No);

  // Orthogonal replacement cannot be a rescaling at all.
  std::vector<Vector> fam3 = fam1;
  Vector w = Vector::Zero(2);
  w(0) = fam1[0](1);
  w(1) = -fam1[0](0);
  fam3[0] = w;
  CHECK(same_functional(fam1, fam3) == TriBool::No);
}

TEST_CASE("form factor decay classes follow the declared tail") {
  CHECK(classify_form_factor(Tail::finite_support(7)).cls == FormFactorClass::FiniteSupport);
  CHECK(classify_form_factor(Tail::power_decay(1.5, 1.0)).cls == FormFactorClass::L1);
  const FormFactorVerdict lp = classify_form_factor(Tail::power_decay(0.8, 1.0));
  CHECK(lp.cls == FormFactorClass::Lp);
  CHECK(lp.p == Approx(1.25).epsilon(1e-12));
  CHECK(classify_form_factor(Tail::power_decay(1.0, 1.0)).cls == FormFactorClass::L2Only);
  CHECK(classify_form_factor(Tail::power_decay(0.5, 1.0)).cls == FormFactorClass::NotL2);
  CHECK(classify_form_factor(Tail::unknown()).cls == FormFactorClass::L2Only);
}

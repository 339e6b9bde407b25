#pragma once

// Formal sums with declared tails and the sequence classifiers built on them:
// summability verdicts, infinite-product convergence for tensor-product
// states, equivalence of state families, and form-factor decay classes.
//
// Partial sums alone never certify convergence. Every definite verdict is
// backed by a declared Tail; without one the answer is Indeterminate/Unknown.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "types.hpp"

namespace bogo {

inline constexpr std::int64_t default_horizon = 1'000'000;

// Declared asymptotics of a real sequence (1-based index k).
struct Tail {
  enum class Kind { FiniteSupport, ClosedForm, PowerDecay, Unknown };
  Kind kind = Kind::Unknown;
  // FiniteSupport: terms vanish for k > support_end.
  std::int64_t support_end = 0;
  // ClosedForm: the terms are absolutely summable and sum to exactly `value`.
  double value = 0.0;
  // PowerDecay: eventually sign(term_k) = sign(coeff) and
  // |term_k| <= |coeff| k^{-exponent}, with term_k ~ coeff k^{-exponent}.
  // coeff = 0 certifies nothing (it arises from cancelling leading orders).
  double exponent = 0.0;
  double coeff = 0.0;

  static Tail finite_support(std::int64_t end) {
    Tail t;
    t.kind = Kind::FiniteSupport;
    t.support_end = end;
    return t;
  }
  static Tail closed_form(double v) {
    Tail t;
    t.kind = Kind::ClosedForm;
    t.value = v;
    return t;
  }
  static Tail power_decay(double exponent, double coeff) {
    Tail t;
    t.kind = Kind::PowerDecay;
    t.exponent = exponent;
    t.coeff = coeff;
    return t;
  }
  static Tail unknown() { return Tail{}; }
};

class KahanSum {
 public:
  void add(double x) {
    const double y = x - comp_;
    const double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// A real sequence with declared tail. Terms live behind a shared pointer so
// that literal aliasing (same underlying sequence) is detectable.
struct RenSequence {
  using TermFn = std::function<double(std::int64_t)>;

  std::shared_ptr<const TermFn> term;
  Tail tail;
  // Largest index the term function may be evaluated at (tables are finite;
  // expensive families can cap probing). Tail verdicts do not depend on it.
  std::int64_t evaluable_end = std::numeric_limits<std::int64_t>::max();

  double operator()(std::int64_t k) const { return (*term)(k); }

  static RenSequence from_function(TermFn f, Tail tail,
                                   std::int64_t evaluable_end =
                                       std::numeric_limits<std::int64_t>::max()) {
    RenSequence s;
    s.term = std::make_shared<const TermFn>(std::move(f));
    s.tail = tail;
    s.evaluable_end = evaluable_end;
    return s;
  }

  // Table-backed: term k is values[k-1], zero beyond the table.
  static RenSequence from_table(std::vector<double> values, Tail tail) {
    auto data = std::make_shared<const std::vector<double>>(std::move(values));
    RenSequence s;
    s.term = std::make_shared<const TermFn>([data](std::int64_t k) -> double {
      return (k >= 1 && k <= static_cast<std::int64_t>(data->size()))
                 ? (*data)[static_cast<std::size_t>(k - 1)]
                 : 0.0;
    });
    s.tail = tail;
    return s;
  }

  static RenSequence zeros() {
    return from_table({}, Tail::finite_support(0));
  }
};

enum class SumClass { Summable, DivergentPlus, DivergentMinus, Indeterminate };

inline const char* name(SumClass c) {
  switch (c) {
    case SumClass::Summable: return "Summable";
    case SumClass::DivergentPlus: return "DivergentPlus";
    case SumClass::DivergentMinus: return "DivergentMinus";
    case SumClass::Indeterminate: return "Indeterminate";
  }
  return "?";
}

struct SumVerdict {
  SumClass cls = SumClass::Indeterminate;
  double value = 0.0;  // exact, partial, or informative depending on cls
  double bound = 0.0;  // remainder + rounding estimate; meaningful when Summable
  std::int64_t terms_used = 0;
};

namespace detail {

struct PartialSum {
  double value = 0.0;
  double abs_value = 0.0;
  std::int64_t n = 0;
};

inline PartialSum partial_sum(const RenSequence& s, std::int64_t n) {
  PartialSum out;
  KahanSum acc, abs_acc;
  n = std::min(n, s.evaluable_end);
  for (std::int64_t k = 1; k <= n; ++k) {
    const double t = s(k);
    if (!std::isfinite(t)) throw Error(Errc::NonFiniteEntry, "sequence term not finite");
    acc.add(t);
    abs_acc.add(std::abs(t));
  }
  out.value = acc.value();
  out.abs_value = abs_acc.value();
  out.n = n;
  return out;
}

// Integral-test remainder: sum_{k>n} |c| k^{-p} <= |c| n^{1-p}/(p-1) for p > 1.
inline double power_tail_bound(double p, double c, std::int64_t n) {
  return std::abs(c) * std::pow(static_cast<double>(n), 1.0 - p) / (p - 1.0);
}

inline double rounding_bound(double abs_sum) {
  return 4.0 * std::numeric_limits<double>::epsilon() * abs_sum;
}

}  // namespace detail

inline SumVerdict classify(const RenSequence& s, std::int64_t horizon = default_horizon) {
  SumVerdict v;
  switch (s.tail.kind) {
    case Tail::Kind::ClosedForm:
      v.cls = SumClass::Summable;
      v.value = s.tail.value;
      v.bound = 0.0;
      return v;
    case Tail::Kind::FiniteSupport: {
      const auto ps = detail::partial_sum(s, s.tail.support_end);
      v.cls = SumClass::Summable;
      v.value = ps.value;
      v.bound = detail::rounding_bound(ps.abs_value);
      v.terms_used = ps.n;
      return v;
    }
    case Tail::Kind::PowerDecay: {
      const double p = s.tail.exponent;
      const double c = s.tail.coeff;
      if (c == 0.0) {
        v.cls = SumClass::Indeterminate;
        return v;
      }
      if (p > 1.0) {
        const auto ps = detail::partial_sum(s, horizon);
        v.cls = SumClass::Summable;
        v.value = ps.value;
        v.bound = detail::power_tail_bound(p, c, ps.n) + detail::rounding_bound(ps.abs_value);
        v.terms_used = ps.n;
        return v;
      }
      // Divergent; evaluate a handful of terms only, the value is informative.
      const auto ps = detail::partial_sum(s, std::min<std::int64_t>(horizon, 32));
      v.cls = c > 0.0 ? SumClass::DivergentPlus : SumClass::DivergentMinus;
      v.value = ps.value;
      v.terms_used = ps.n;
      return v;
    }
    case Tail::Kind::Unknown:
      v.cls = SumClass::Indeterminate;
      return v;
  }
  return v;
}

namespace detail {

inline TriBool zero_sum_verdict(const SumVerdict& v, double tol) {
  switch (v.cls) {
    case SumClass::Summable:
      if (std::abs(v.value) + v.bound <= tol) return TriBool::Yes;
      if (std::abs(v.value) - v.bound > tol) return TriBool::No;
      return TriBool::Unknown;
    case SumClass::DivergentPlus:
    case SumClass::DivergentMinus:
      return TriBool::No;
    case SumClass::Indeterminate:
      return TriBool::Unknown;
  }
  return TriBool::Unknown;
}

}  // namespace detail

// Do the two sums agree, i.e. does (a - b) sum to zero? Yes requires the
// difference to be certifiably summable with |sum| within tol. Callers who
// know the difference's decay better than the combined-tail heuristic pass
// diff_tail explicitly.
inline TriBool sums_equivalent(const RenSequence& a, const RenSequence& b,
                               double tol = default_tol,
                               const std::optional<Tail>& diff_tail = std::nullopt,
                               std::int64_t horizon = default_horizon) {
  if (a.term == b.term) return TriBool::Yes;  // same underlying sequence

  RenSequence diff;
  const auto fa = a.term, fb = b.term;
  diff.term = std::make_shared<const RenSequence::TermFn>(
      [fa, fb](std::int64_t k) { return (*fa)(k) - (*fb)(k); });
  diff.evaluable_end = std::min(a.evaluable_end, b.evaluable_end);

  if (diff_tail) {
    diff.tail = *diff_tail;
    return detail::zero_sum_verdict(classify(diff, horizon), tol);
  }

  const SumVerdict va = classify(a, horizon);
  const SumVerdict vb = classify(b, horizon);
  const bool sa = va.cls == SumClass::Summable;
  const bool sb = vb.cls == SumClass::Summable;
  if (sa && sb) {
    SumVerdict d;
    d.cls = SumClass::Summable;
    d.value = va.value - vb.value;
    d.bound = va.bound + vb.bound;
    return detail::zero_sum_verdict(d, tol);
  }
  if (sa != sb) {
    // One side summable, the other divergent: the difference diverges.
    const SumClass other = sa ? vb.cls : va.cls;
    if (other == SumClass::DivergentPlus || other == SumClass::DivergentMinus)
      return TriBool::No;
    return TriBool::Unknown;
  }
  if (va.cls == SumClass::Indeterminate || vb.cls == SumClass::Indeterminate)
    return TriBool::Unknown;

  // Both divergent. Compare declared leading orders.
  if (a.tail.kind == Tail::Kind::PowerDecay && b.tail.kind == Tail::Kind::PowerDecay) {
    const double p1 = a.tail.exponent, c1 = a.tail.coeff;
    const double p2 = b.tail.exponent, c2 = b.tail.coeff;
    if (p1 < p2)
      diff.tail = Tail::power_decay(p1, c1);
    else if (p2 < p1)
      diff.tail = Tail::power_decay(p2, -c2);
    else
      diff.tail = Tail::power_decay(p1, c1 - c2);  // coeff 0 -> Indeterminate
    return detail::zero_sum_verdict(classify(diff, horizon), tol);
  }
  return TriBool::Unknown;
}

// --- infinite tensor product families --------------------------------------

// Per-mode norms ||Psi_k|| of a product family, with a declared tail for the
// deviations norm_k - 1.
struct NormFamily {
  std::shared_ptr<const std::function<double(std::int64_t)>> norm;
  Tail deviation;
  std::int64_t evaluable_end = std::numeric_limits<std::int64_t>::max();

  double operator()(std::int64_t k) const { return (*norm)(k); }

  static NormFamily from_function(std::function<double(std::int64_t)> f, Tail deviation,
                                  std::int64_t evaluable_end =
                                      std::numeric_limits<std::int64_t>::max()) {
    NormFamily fam;
    fam.norm = std::make_shared<const std::function<double(std::int64_t)>>(std::move(f));
    fam.deviation = deviation;
    fam.evaluable_end = evaluable_end;
    return fam;
  }
};

enum class ProductClass { Value, Zero, Divergent, Unknown };

inline const char* name(ProductClass c) {
  switch (c) {
    case ProductClass::Value: return "Value";
    case ProductClass::Zero: return "Zero";
    case ProductClass::Divergent: return "Divergent";
    case ProductClass::Unknown: return "Unknown";
  }
  return "?";
}

struct ProductNorm {
  ProductClass cls = ProductClass::Unknown;
  double value = 0.0;
  double bound = 0.0;
};

enum class ItpEquivalence { Equivalent, WeaklyEquivalent, Inequivalent, Unknown };

inline const char* name(ItpEquivalence e) {
  switch (e) {
    case ItpEquivalence::Equivalent: return "Equivalent";
    case ItpEquivalence::WeaklyEquivalent: return "WeaklyEquivalent";
    case ItpEquivalence::Inequivalent: return "Inequivalent";
    case ItpEquivalence::Unknown: return "Unknown";
  }
  return "?";
}

// is_C: the product of the norms converges (a limit in [0, inf), zero allowed).
// is_C0: the deviations |norm_k - 1| are summable; implies is_C with a
// positive product unless some factor is exactly zero.
struct ITPFamilyReport {
  TriBool is_C = TriBool::Unknown;
  TriBool is_C0 = TriBool::Unknown;
  ProductNorm product_norm{};
  ItpEquivalence equivalence = ItpEquivalence::Unknown;
};

inline ITPFamilyReport classify_itp_family(const NormFamily& fam,
                                           std::int64_t horizon = default_horizon) {
  const Tail& tail = fam.deviation;

  std::int64_t n = std::min(horizon, fam.evaluable_end);
  bool exact_beyond = false;  // norms equal 1 beyond n
  switch (tail.kind) {
    case Tail::Kind::FiniteSupport:
      n = std::min(n, tail.support_end);
      exact_beyond = true;
      break;
    case Tail::Kind::PowerDecay:
      if (tail.exponent <= 1.0 || tail.coeff == 0.0) n = std::min<std::int64_t>(n, 1024);
      break;
    case Tail::Kind::Unknown:
      n = std::min<std::int64_t>(n, 1024);  // probe for zero factors only
      break;
    case Tail::Kind::ClosedForm:
      break;
  }

  bool zero_factor = false;
  KahanSum log_sum, abs_log_sum, dev_sum;
  for (std::int64_t k = 1; k <= n; ++k) {
    const double x = fam(k);
    if (!std::isfinite(x) || x < 0.0)
      throw Error(Errc::BadParameter, "norms must be finite and nonnegative");
    if (x == 0.0) {
      zero_factor = true;
      break;  // all partial products beyond are exactly zero
    }
    const double l = std::log(x);
    log_sum.add(l);
    abs_log_sum.add(std::abs(l));
    dev_sum.add(x - 1.0);
  }

  ITPFamilyReport rep;

  switch (tail.kind) {
    case Tail::Kind::FiniteSupport:
    case Tail::Kind::ClosedForm:
      rep.is_C0 = TriBool::Yes;
      break;
    case Tail::Kind::PowerDecay:
      if (tail.coeff == 0.0)
        rep.is_C0 = TriBool::Unknown;
      else
        rep.is_C0 = tail.exponent > 1.0 ? TriBool::Yes : TriBool::No;
      break;
    case Tail::Kind::Unknown:
      rep.is_C0 = TriBool::Unknown;
      break;
  }

  if (zero_factor) {
    // The partial products are eventually exactly zero; that limit exists.
    rep.is_C = TriBool::Yes;
    rep.product_norm = {ProductClass::Zero, 0.0, 0.0};
    return rep;
  }

  const double fp = detail::rounding_bound(abs_log_sum.value());
  const auto positive_product = [&](double log_remainder) {
    const double v = std::exp(log_sum.value());
    rep.is_C = TriBool::Yes;
    rep.product_norm = {ProductClass::Value, v, v * std::expm1(log_remainder + fp)};
  };

  switch (tail.kind) {
    case Tail::Kind::FiniteSupport:
      positive_product(0.0);
      break;
    case Tail::Kind::ClosedForm: {
      // Remaining deviations sum to tail.value - dev_sum; for small deviations
      // |log(1+d)| <= 2|d|, so twice that bounds the remaining log sum.
      positive_product(2.0 * std::abs(tail.value - dev_sum.value()));
      break;
    }
    case Tail::Kind::PowerDecay: {
      const double p = tail.exponent, c = tail.coeff;
      if (c == 0.0) break;  // Unknown
      if (p > 1.0) {
        if (std::abs(c) * std::pow(static_cast<double>(n), -p) > 0.5) break;
        positive_product(2.0 * detail::power_tail_bound(p, c, n));
      } else if (c < 0.0) {
        // log factors ~ -|c| k^{-p}: the log sum drifts to -inf, product to 0.
        rep.is_C = TriBool::Yes;
        rep.product_norm = {ProductClass::Zero, 0.0, 0.0};
      } else {
        rep.is_C = TriBool::No;
        rep.product_norm = {ProductClass::Divergent, 0.0, 0.0};
      }
      break;
    }
    case Tail::Kind::Unknown:
      break;
  }
  return rep;
}

// Per-mode overlaps <Phi_k, Psi_k> of two product families, with declared
// tails for the strong deviation |overlap - 1| and weak one ||overlap| - 1|.
struct OverlapFamily {
  std::shared_ptr<const std::function<cplx(std::int64_t)>> overlap;
  Tail strong_deviation;
  Tail weak_deviation;
  std::int64_t evaluable_end = std::numeric_limits<std::int64_t>::max();

  cplx operator()(std::int64_t k) const { return (*overlap)(k); }

  static OverlapFamily from_function(std::function<cplx(std::int64_t)> f, Tail strong,
                                     Tail weak,
                                     std::int64_t evaluable_end =
                                         std::numeric_limits<std::int64_t>::max()) {
    OverlapFamily fam;
    fam.overlap = std::make_shared<const std::function<cplx(std::int64_t)>>(std::move(f));
    fam.strong_deviation = strong;
    fam.weak_deviation = weak;
    fam.evaluable_end = evaluable_end;
    return fam;
  }
};

enum class EquivalenceMode { Strong, Weak };

inline TriBool itp_equivalent(const OverlapFamily& fam, EquivalenceMode mode,
                              std::int64_t horizon = default_horizon) {
  const auto ov = fam.overlap;
  RenSequence dev;
  if (mode == EquivalenceMode::Strong) {
    dev.term = std::make_shared<const RenSequence::TermFn>(
        [ov](std::int64_t k) { return std::abs((*ov)(k) - 1.0); });
    dev.tail = fam.strong_deviation;
  } else {
    dev.term = std::make_shared<const RenSequence::TermFn>(
        [ov](std::int64_t k) { return std::abs(std::abs((*ov)(k)) - 1.0); });
    dev.tail = fam.weak_deviation;
  }
  dev.evaluable_end = fam.evaluable_end;

  switch (classify(dev, horizon).cls) {
    case SumClass::Summable: return TriBool::Yes;
    case SumClass::DivergentPlus:
    case SumClass::DivergentMinus: return TriBool::No;
    case SumClass::Indeterminate: return TriBool::Unknown;
  }
  return TriBool::Unknown;
}

inline ItpEquivalence itp_equivalence(const OverlapFamily& fam,
                                      std::int64_t horizon = default_horizon) {
  if (itp_equivalent(fam, EquivalenceMode::Strong, horizon) == TriBool::Yes)
    return ItpEquivalence::Equivalent;
  switch (itp_equivalent(fam, EquivalenceMode::Weak, horizon)) {
    case TriBool::Yes: return ItpEquivalence::WeaklyEquivalent;
    case TriBool::No: return ItpEquivalence::Inequivalent;
    case TriBool::Unknown: return ItpEquivalence::Unknown;
  }
  return ItpEquivalence::Unknown;
}

// Do two product families define the same state functional? Requires
// fam2_k = c_k fam1_k componentwise with the c_k multiplying to 1.
// factor_tail declares |c_k - 1| past the listed entries (FiniteSupport(K)
// meaning the families agree beyond).
inline TriBool same_functional(const std::vector<Vector>& fam1, const std::vector<Vector>& fam2,
                               const Tail& factor_tail = Tail::finite_support(0),
                               double tol = default_tol) {
  if (fam1.size() != fam2.size())
    throw Error(Errc::DimensionMismatch, "families must have equal length");

  cplx prod = 1.0;
  for (std::size_t k = 0; k < fam1.size(); ++k) {
    const Vector& a = fam1[k];
    const Vector& b = fam2[k];
    if (a.size() != b.size())
      throw Error(Errc::DimensionMismatch, "family entries must have equal dimension");
    const double na = a.norm(), nb = b.norm();
    if (na == 0.0 && nb == 0.0) continue;  // c_k = 1
    if (na == 0.0 || nb == 0.0) return TriBool::No;
    const cplx c = a.dot(b) / cplx(na * na);  // Eigen dot conjugates the left factor
    if ((b - c * a).norm() > tol * nb) return TriBool::No;  // not parallel
    prod *= c;
  }

  double bound = 0.0;
  switch (factor_tail.kind) {
    case Tail::Kind::FiniteSupport:
      bound = 0.0;
      break;
    case Tail::Kind::PowerDecay: {
      const double p = factor_tail.exponent, c = factor_tail.coeff;
      if (p > 1.0 && c != 0.0) {
        const std::int64_t k0 = static_cast<std::int64_t>(fam1.size()) + 1;
        // |prod_{k>K} c_k - 1| <= e^B - 1 with B bounding sum of |log c_k|.
        bound = std::expm1(2.0 * detail::power_tail_bound(p, c, k0 - 1));
      } else {
        return TriBool::Unknown;
      }
      break;
    }
    default:
      return TriBool::Unknown;
  }

  const double dist = std::abs(prod - 1.0);
  if (dist + bound * std::abs(prod) <= tol) return TriBool::Yes;
  if (dist - bound * std::abs(prod) > tol) return TriBool::No;
  return TriBool::Unknown;
}

// --- form-factor decay classes ---------------------------------------------

// Decay class of a square-summable form factor, from the declared tail of
// |phi_k|. Inputs are vectors of the one-particle space, so square
// summability is the baseline; NotL2 flags a declared tail incompatible with
// that (a formal symbol rather than a vector).
enum class FormFactorClass { FiniteSupport, L1, Lp, L2Only, NotL2 };

inline const char* name(FormFactorClass c) {
  switch (c) {
    case FormFactorClass::FiniteSupport: return "FiniteSupport";
    case FormFactorClass::L1: return "L1";
    case FormFactorClass::Lp: return "Lp";
    case FormFactorClass::L2Only: return "L2Only";
    case FormFactorClass::NotL2: return "NotL2";
  }
  return "?";
}

struct FormFactorVerdict {
  FormFactorClass cls = FormFactorClass::L2Only;
  double p = 2.0;  // for Lp: the infimum exponent, in (1, 2)
};

inline FormFactorVerdict classify_form_factor(const Tail& abs_tail) {
  FormFactorVerdict v;
  switch (abs_tail.kind) {
    case Tail::Kind::FiniteSupport:
      v.cls = FormFactorClass::FiniteSupport;
      return v;
    case Tail::Kind::PowerDecay: {
      const double q = abs_tail.exponent;
      if (abs_tail.coeff == 0.0) {
        v.cls = FormFactorClass::FiniteSupport;  // bound zero: terms vanish
        return v;
      }
      if (q > 1.0) {
        v.cls = FormFactorClass::L1;
      } else if (q > 0.5 && q < 1.0) {
        v.cls = FormFactorClass::Lp;
        v.p = 1.0 / q;
      } else if (q == 1.0) {
        v.cls = FormFactorClass::L2Only;  // every power above 1 but not l1 itself
      } else {
        v.cls = FormFactorClass::NotL2;
      }
      return v;
    }
    case Tail::Kind::ClosedForm:
    case Tail::Kind::Unknown:
      v.cls = FormFactorClass::L2Only;  // nothing stronger certified
      return v;
  }
  return v;
}

}  // namespace bogo

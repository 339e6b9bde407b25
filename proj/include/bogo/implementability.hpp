#pragma once

// Where does a transformation act? Fock space needs a square-summable
// pairing part (the trace of v*v); the infinite-tensor-product extension
// always exists for countable mode families; the extended state space needs
// finitely many fermionic particle-hole modes. This header decides those
// questions from per-mode parameters plus a declared tail, and produces the
// vacuum description with its renormalization exponent.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "algebra.hpp"
#include "mode_decomp.hpp"
#include "renorm.hpp"
#include "types.hpp"

namespace bogo {

// Scalar data of one mode: (mu, nu) for a bosonic mode, (alpha, beta) and the
// kind for a fermionic one. Vectors are irrelevant for implementability.
struct ModeParams {
  ModeKind kind = ModeKind::Bosonic;
  double mu = 1.0;
  double nu = 0.0;
  double alpha = 1.0;
  double beta = 0.0;

  static ModeParams bosonic(double mu, double nu) {
    ModeParams p;
    p.kind = ModeKind::Bosonic;
    p.mu = mu;
    p.nu = nu;
    return p;
  }
  static ModeParams invariant() { return ModeParams{ModeKind::Invariant, 1, 0, 1, 0}; }
  static ModeParams particle_hole() { return ModeParams{ModeKind::ParticleHole, 1, 0, 0, 1}; }
  static ModeParams cooper_pair(double alpha, double beta) {
    ModeParams p;
    p.kind = ModeKind::CooperPair;
    p.alpha = alpha;
    p.beta = beta;
    return p;
  }
};

struct PhCount {
  enum class Kind { Finite, Infinite, Unknown };
  Kind kind = Kind::Finite;
  std::int64_t count = 0;

  static PhCount finite(std::int64_t n) { return PhCount{Kind::Finite, n}; }
  static PhCount infinite() { return PhCount{Kind::Infinite, 0}; }
  static PhCount unknown() { return PhCount{Kind::Unknown, 0}; }
};

inline std::string to_string(const PhCount& c) {
  switch (c.kind) {
    case PhCount::Kind::Finite: return std::to_string(c.count);
    case PhCount::Kind::Infinite: return "infinite";
    case PhCount::Kind::Unknown: return "unknown";
  }
  return "?";
}

// A countable family of modes. coupling_tail declares the asymptotics of the
// per-mode pairing weights (nu_k^2 bosonic; fermionic: 2 beta_k^2 per Cooper
// pair, 1 per particle-hole mode, matching the trace of v*v).
struct ModeFamily {
  Statistics statistics = Statistics::Bosonic;
  std::shared_ptr<const std::function<ModeParams(std::int64_t)>> generator;
  std::optional<std::int64_t> count;  // finite families
  Tail coupling_tail = Tail::unknown();
  PhCount declared_ph = PhCount::unknown();
  std::int64_t evaluable_end = std::numeric_limits<std::int64_t>::max();

  ModeParams operator()(std::int64_t k) const { return (*generator)(k); }

  static ModeFamily from_modes(Statistics statistics, std::vector<ModeParams> modes) {
    auto data = std::make_shared<const std::vector<ModeParams>>(std::move(modes));
    ModeFamily fam;
    fam.statistics = statistics;
    fam.generator = std::make_shared<const std::function<ModeParams(std::int64_t)>>(
        [data](std::int64_t k) -> ModeParams {
          if (k < 1 || k > static_cast<std::int64_t>(data->size()))
            return ModeParams::bosonic(1.0, 0.0);
          return (*data)[static_cast<std::size_t>(k - 1)];
        });
    const auto n = static_cast<std::int64_t>(data->size());
    fam.count = n;
    fam.coupling_tail = Tail::finite_support(n);
    std::int64_t ph = 0;
    for (const ModeParams& p : *data)
      if (p.kind == ModeKind::ParticleHole) ++ph;
    fam.declared_ph = PhCount::finite(ph);
    fam.evaluable_end = n;
    return fam;
  }

  static ModeFamily from_generator(Statistics statistics,
                                   std::function<ModeParams(std::int64_t)> gen,
                                   Tail coupling_tail, PhCount ph,
                                   std::int64_t evaluable_end =
                                       std::numeric_limits<std::int64_t>::max()) {
    ModeFamily fam;
    fam.statistics = statistics;
    fam.generator =
        std::make_shared<const std::function<ModeParams(std::int64_t)>>(std::move(gen));
    fam.coupling_tail = coupling_tail;
    fam.declared_ph = ph;
    fam.evaluable_end = evaluable_end;
    return fam;
  }
};

inline ModeFamily to_mode_family(const BosonicDecomposition& dec) {
  std::vector<ModeParams> modes;
  modes.reserve(dec.modes.size());
  for (const BosonicMode& m : dec.modes) modes.push_back(ModeParams::bosonic(m.mu, m.nu));
  return ModeFamily::from_modes(Statistics::Bosonic, std::move(modes));
}

inline ModeFamily to_mode_family(const FermionicDecomposition& dec) {
  std::vector<ModeParams> modes;
  modes.reserve(dec.modes.size());
  for (const FermionicMode& m : dec.modes) {
    switch (m.kind) {
      case ModeKind::Invariant: modes.push_back(ModeParams::invariant()); break;
      case ModeKind::ParticleHole: modes.push_back(ModeParams::particle_hole()); break;
      case ModeKind::CooperPair: modes.push_back(ModeParams::cooper_pair(m.alpha, m.beta)); break;
      case ModeKind::Bosonic: break;
    }
  }
  return ModeFamily::from_modes(Statistics::Fermionic, std::move(modes));
}

inline ModeFamily to_mode_family(const BogoliubovMap& map, double tol = default_tol) {
  return map.statistics == Statistics::Bosonic ? to_mode_family(decompose_bosonic(map, tol))
                                               : to_mode_family(decompose_fermionic(map, tol));
}

inline double pairing_weight(const ModeParams& p) {
  switch (p.kind) {
    case ModeKind::Bosonic: return p.nu * p.nu;
    case ModeKind::Invariant: return 0.0;
    case ModeKind::ParticleHole: return 1.0;
    case ModeKind::CooperPair: return 2.0 * p.beta * p.beta;
  }
  return 0.0;
}

// The formal sum tr(v*v): per-mode pairing weights under the family's tail.
// Summable iff the map extends to Fock space.
inline RenSequence shale_stinespring(const ModeFamily& fam) {
  const auto gen = fam.generator;
  return RenSequence::from_function(
      [gen](std::int64_t k) { return pairing_weight((*gen)(k)); }, fam.coupling_tail,
      fam.evaluable_end);
}

inline RenSequence shale_stinespring(const BogoliubovMap& map, double tol = default_tol) {
  return shale_stinespring(to_mode_family(map, tol));
}

struct ImplementabilityVerdict {
  TriBool fock = TriBool::Unknown;  // unitary implementer on Fock space
  TriBool itp = TriBool::Unknown;   // product-space extension
  TriBool ess = TriBool::Unknown;   // extended state space
  SumVerdict trace_vv;
  PhCount particle_hole_count = PhCount::unknown();
};

inline ImplementabilityVerdict classify_implementability(const ModeFamily& fam,
                                                         std::int64_t horizon = default_horizon) {
  ImplementabilityVerdict v;
  v.trace_vv = classify(shale_stinespring(fam), horizon);
  switch (v.trace_vv.cls) {
    case SumClass::Summable: v.fock = TriBool::Yes; break;
    case SumClass::DivergentPlus:
    case SumClass::DivergentMinus: v.fock = TriBool::No; break;
    case SumClass::Indeterminate: v.fock = TriBool::Unknown; break;
  }
  // Countable by construction, which is all the product extension needs.
  v.itp = TriBool::Yes;

  v.particle_hole_count = fam.declared_ph;
  if (fam.statistics == Statistics::Bosonic) {
    v.ess = TriBool::Yes;
    v.particle_hole_count = PhCount::finite(0);
    return v;
  }
  if (v.fock == TriBool::Yes && fam.declared_ph.kind == PhCount::Kind::Infinite)
    throw Error(Errc::ConstraintViolated,
                "summable pairing weights contradict infinitely many particle-hole modes");
  switch (fam.declared_ph.kind) {
    case PhCount::Kind::Finite: v.ess = TriBool::Yes; break;
    case PhCount::Kind::Infinite: v.ess = TriBool::No; break;
    case PhCount::Kind::Unknown:
      // Summable weights force finitely many particle-hole modes (each adds 1).
      v.ess = v.fock == TriBool::Yes ? TriBool::Yes : TriBool::Unknown;
      break;
  }
  return v;
}

inline ImplementabilityVerdict classify_implementability(const BogoliubovMap& map,
                                                         double tol = default_tol) {
  return classify_implementability(to_mode_family(map, tol));
}

// Unnormalized vacuum amplitudes of one mode; the overall normalization sits
// in the renormalization exponent.
struct ModeVacuumRule {
  ModeKind kind = ModeKind::Bosonic;
  double t = 0.0;      // bosonic: -nu/(2 mu)
  double ratio = 0.0;  // CooperPair: -beta/alpha

  // Bosonic modes use occupation n (second index ignored); fermionic pairs
  // use (n_even, n_odd); Invariant/ParticleHole use n alone.
  double amplitude(std::int64_t n, std::int64_t n_partner = 0) const {
    switch (kind) {
      case ModeKind::Bosonic: {
        if (n < 0 || n % 2 != 0) return 0.0;
        const std::int64_t half = n / 2;
        if (half == 0) return 1.0;
        if (t == 0.0) return 0.0;
        const double mag = std::exp(static_cast<double>(half) * std::log(std::abs(t)) +
                                    0.5 * std::lgamma(static_cast<double>(n) + 1.0) -
                                    std::lgamma(static_cast<double>(half) + 1.0));
        return (t < 0.0 && half % 2 != 0) ? -mag : mag;
      }
      case ModeKind::Invariant:
        return (n == 0 && n_partner == 0) ? 1.0 : 0.0;
      case ModeKind::ParticleHole:
        return (n == 1 && n_partner == 0) ? 1.0 : 0.0;
      case ModeKind::CooperPair:
        if (n == 0 && n_partner == 0) return 1.0;
        if (n == 1 && n_partner == 1) return ratio;
        return 0.0;
    }
    return 0.0;
  }
};

struct VacuumDescription {
  RenSequence renorm_exponent;
  std::shared_ptr<const std::function<ModeVacuumRule(std::int64_t)>> per_mode;

  ModeVacuumRule mode_rule(std::int64_t k) const { return (*per_mode)(k); }
};

namespace detail {

// Renormalization terms from pairing weights s_k: bosonic
// |log(1+s)/4| <= s/4; fermionic pairs |log(1-s/2)/2| <= s/2 once s <= 1.
// Both keep the declared exponent, so the summability class survives; for
// divergent couplings only the (negative) sign matters.
inline Tail renorm_tail_from_coupling(const Tail& coupling, Statistics statistics) {
  const double factor = statistics == Statistics::Bosonic ? 0.25 : 0.5;
  switch (coupling.kind) {
    case Tail::Kind::FiniteSupport:
      return coupling;
    case Tail::Kind::PowerDecay:
      return Tail::power_decay(coupling.exponent, -factor * coupling.coeff);
    case Tail::Kind::ClosedForm:
    case Tail::Kind::Unknown:
      return Tail::unknown();
  }
  return Tail::unknown();
}

}  // namespace detail

inline VacuumDescription vacuum_data(const ModeFamily& fam) {
  const auto gen = fam.generator;
  const Statistics statistics = fam.statistics;

  Tail rtail = detail::renorm_tail_from_coupling(fam.coupling_tail, statistics);
  // Finite families always sum exactly.
  if (fam.count && fam.coupling_tail.kind != Tail::Kind::FiniteSupport)
    rtail = Tail::finite_support(*fam.count);

  VacuumDescription vac;
  vac.renorm_exponent = RenSequence::from_function(
      [gen](std::int64_t k) -> double {
        const ModeParams p = (*gen)(k);
        switch (p.kind) {
          case ModeKind::Bosonic: {
            const double r = p.nu / p.mu;
            return 0.25 * std::log1p(-r * r);
          }
          case ModeKind::CooperPair: {
            if (p.alpha <= 0.0)
              throw Error(Errc::PrereqFailed, "pair with vanishing alpha has no vacuum overlap");
            return std::log(p.alpha);
          }
          case ModeKind::Invariant:
          case ModeKind::ParticleHole:
            return 0.0;
        }
        return 0.0;
      },
      rtail, fam.evaluable_end);

  vac.per_mode = std::make_shared<const std::function<ModeVacuumRule(std::int64_t)>>(
      [gen](std::int64_t k) -> ModeVacuumRule {
        const ModeParams p = (*gen)(k);
        ModeVacuumRule rule;
        rule.kind = p.kind;
        switch (p.kind) {
          case ModeKind::Bosonic:
            rule.t = -p.nu / (2.0 * p.mu);
            break;
          case ModeKind::CooperPair:
            if (p.alpha <= 0.0)
              throw Error(Errc::PrereqFailed, "pair with vanishing alpha has no vacuum overlap");
            rule.ratio = -p.beta / p.alpha;
            break;
          case ModeKind::Invariant:
          case ModeKind::ParticleHole:
            break;
        }
        return rule;
      });
  return vac;
}

}  // namespace bogo

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace bogo {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double default_tol = 1e-10;

enum class Statistics { Bosonic, Fermionic };

inline const char* name(Statistics s) {
  return s == Statistics::Bosonic ? "bosonic" : "fermionic";
}

// Relation sign: u*u + sign*v^T conj(v) = 1 etc.
inline double relation_sign(Statistics s) {
  return s == Statistics::Bosonic ? -1.0 : 1.0;
}

enum class Errc {
  DimensionMismatch,
  NonFiniteEntry,
  StatisticsMismatch,
  NotValidated,
  UnsupportedTarget,
  DegenerateBasis,
  NotBosonic,
  NotFermionic,
  UnpairedEigenvector,
  UnknownTail,
  PrereqFailed,
  BadCutoff,
  BadParameter,
  SymmetryViolation,
  NotPositive,
  GramTooLarge,
  OddKernel,
  ZeroGap,
  ConstraintViolated,
  NoConvergence,
  ParseError,
};

inline const char* name(Errc c) {
  switch (c) {
    case Errc::DimensionMismatch:   return "DimensionMismatch";
    case Errc::NonFiniteEntry:      return "NonFiniteEntry";
    case Errc::StatisticsMismatch:  return "StatisticsMismatch";
    case Errc::NotValidated:        return "NotValidated";
    case Errc::UnsupportedTarget:   return "UnsupportedTarget";
    case Errc::DegenerateBasis:     return "DegenerateBasis";
    case Errc::NotBosonic:          return "NotBosonic";
    case Errc::NotFermionic:        return "NotFermionic";
    case Errc::UnpairedEigenvector: return "UnpairedEigenvector";
    case Errc::UnknownTail:         return "UnknownTail";
    case Errc::PrereqFailed:        return "PrereqFailed";
    case Errc::BadCutoff:           return "BadCutoff";
    case Errc::BadParameter:        return "BadParameter";
    case Errc::SymmetryViolation:   return "SymmetryViolation";
    case Errc::NotPositive:         return "NotPositive";
    case Errc::GramTooLarge:        return "GramTooLarge";
    case Errc::OddKernel:           return "OddKernel";
    case Errc::ZeroGap:             return "ZeroGap";
    case Errc::ConstraintViolated:  return "ConstraintViolated";
    case Errc::NoConvergence:       return "NoConvergence";
    case Errc::ParseError:          return "ParseError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

enum class TriBool { Yes, No, Unknown };

inline const char* name(TriBool t) {
  switch (t) {
    case TriBool::Yes: return "yes";
    case TriBool::No:  return "no";
    default:           return "unknown";
  }
}

// Entrywise max-modulus norm; the residual convention used throughout.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& a) {
  return a.allFinite();
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& a, const char* what) {
  if (!a.allFinite()) throw Error(Errc::NonFiniteEntry, std::string(what) + " contains NaN or Inf");
}

}  // namespace bogo

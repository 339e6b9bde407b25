#pragma once

// JSON wire formats plus the small text formats the command line speaks
// (CSV rows, key = value config files). Anything wrong with the input -
// unreadable file, bad JSON, missing key, inconsistent sizes - throws
// Error(Errc::ParseError, ...) so callers can map every input problem to a
// single usage-failure path.
//
// Matrices travel as {"rows": r, "cols": c, "re": [r*c row-major], "im":
// [...]} with "im" optional and omitted on output when exactly zero.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "algebra.hpp"
#include "diagonalize.hpp"
#include "fock.hpp"
#include "implementability.hpp"
#include "mode_decomp.hpp"
#include "renorm.hpp"
#include "types.hpp"

namespace bogo {

// Insertion-ordered so serialized output is reproducible key for key.
using Json = nlohmann::ordered_json;

// 17 significant digits: enough to reproduce any double exactly on re-read.
inline std::string format_full(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

inline const Json& member(const Json& j, const char* key, const char* ctx) {
  if (!j.is_object() || !j.contains(key))
    throw Error(Errc::ParseError, std::string(ctx) + ": missing key \"" + key + "\"");
  return j.at(key);
}

inline double to_number(const Json& j, const char* ctx) {
  if (!j.is_number())
    throw Error(Errc::ParseError, std::string(ctx) + ": expected a number");
  return j.get<double>();
}

inline std::int64_t to_integer(const Json& j, const char* ctx) {
  if (!j.is_number_integer())
    throw Error(Errc::ParseError, std::string(ctx) + ": expected an integer");
  return j.get<std::int64_t>();
}

inline std::vector<double> to_number_array(const Json& j, const char* ctx) {
  if (!j.is_array())
    throw Error(Errc::ParseError, std::string(ctx) + ": expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const Json& e : j) out.push_back(to_number(e, ctx));
  return out;
}

}  // namespace detail

inline Json to_json(const Matrix& m) {
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  Json re = Json::array(), im = Json::array();
  bool has_im = false;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      re.push_back(m(r, c).real());
      im.push_back(m(r, c).imag());
      has_im = has_im || m(r, c).imag() != 0.0;
    }
  j["re"] = std::move(re);
  if (has_im) j["im"] = std::move(im);
  return j;
}

inline Matrix matrix_from_json(const Json& j, const char* ctx = "matrix") {
  const std::int64_t rows = detail::to_integer(detail::member(j, "rows", ctx), ctx);
  const std::int64_t cols = detail::to_integer(detail::member(j, "cols", ctx), ctx);
  if (rows < 0 || cols < 0)
    throw Error(Errc::ParseError, std::string(ctx) + ": negative dimensions");
  const std::vector<double> re = detail::to_number_array(detail::member(j, "re", ctx), ctx);
  std::vector<double> im;
  if (j.contains("im")) im = detail::to_number_array(j.at("im"), ctx);
  const std::size_t expect = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  if (re.size() != expect || (!im.empty() && im.size() != expect))
    throw Error(Errc::ParseError,
                std::string(ctx) + ": entry count does not match rows*cols");
  Matrix m(rows, cols);
  std::size_t idx = 0;
  for (std::int64_t r = 0; r < rows; ++r)
    for (std::int64_t c = 0; c < cols; ++c, ++idx)
      m(r, c) = cplx(re[idx], im.empty() ? 0.0 : im[idx]);
  return m;
}

inline Json to_json(const Vector& v) {
  Json j;
  Json re = Json::array(), im = Json::array();
  bool has_im = false;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    re.push_back(v(i).real());
    im.push_back(v(i).imag());
    has_im = has_im || v(i).imag() != 0.0;
  }
  j["re"] = std::move(re);
  if (has_im) j["im"] = std::move(im);
  return j;
}

inline Statistics statistics_from_json(const Json& j, const char* ctx = "statistics") {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "bosonic") return Statistics::Bosonic;
    if (s == "fermionic") return Statistics::Fermionic;
  }
  throw Error(Errc::ParseError,
              std::string(ctx) + ": statistics must be \"bosonic\" or \"fermionic\"");
}

inline const char* statistics_label(Statistics s) {
  return s == Statistics::Bosonic ? "bosonic" : "fermionic";
}

// Parsed maps arrive unvalidated; run validate_bogoliubov (or make_validated)
// before passing them to operations that require the relations.
inline BogoliubovMap map_from_json(const Json& j) {
  BogoliubovMap map;
  map.statistics = statistics_from_json(detail::member(j, "statistics", "map"));
  map.u = matrix_from_json(detail::member(j, "u", "map"), "map.u");
  map.v = matrix_from_json(detail::member(j, "v", "map"), "map.v");
  if (map.u.rows() != map.u.cols() || map.v.rows() != map.v.cols() ||
      map.u.rows() != map.v.rows())
    throw Error(Errc::ParseError, "map: u and v must be square with equal dimension");
  return map;
}

inline Json to_json(const BogoliubovMap& map) {
  Json j;
  j["statistics"] = statistics_label(map.statistics);
  j["u"] = to_json(map.u);
  j["v"] = to_json(map.v);
  return j;
}

inline QuadraticHamiltonian hamiltonian_from_json(const Json& j) {
  QuadraticHamiltonian ham;
  ham.statistics = statistics_from_json(detail::member(j, "statistics", "hamiltonian"));
  ham.h = matrix_from_json(detail::member(j, "h", "hamiltonian"), "hamiltonian.h");
  ham.k = matrix_from_json(detail::member(j, "k", "hamiltonian"), "hamiltonian.k");
  if (ham.h.rows() != ham.h.cols() || ham.k.rows() != ham.k.cols() ||
      ham.h.rows() != ham.k.rows())
    throw Error(Errc::ParseError, "hamiltonian: h and k must be square with equal dimension");
  return ham;
}

inline Json to_json(const QuadraticHamiltonian& ham) {
  Json j;
  j["statistics"] = statistics_label(ham.statistics);
  j["h"] = to_json(ham.h);
  j["k"] = to_json(ham.k);
  return j;
}

inline Json to_json(const StateVector& state, int cutoff) {
  Json j;
  j["basis"] = "occupation";
  j["cutoff"] = cutoff;
  j["modes"] = state.modes;
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index i = 0; i < state.amplitudes.size(); ++i) {
    re.push_back(state.amplitudes(i).real());
    im.push_back(state.amplitudes(i).imag());
  }
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  return j;
}

inline Json to_json(const RelationReport& rep) {
  Json j;
  j["passed"] = rep.passed;
  j["max_residual"] = rep.max_residual;
  j["tol"] = rep.tol;
  j["residuals"] = Json::array({rep.residuals[0], rep.residuals[1], rep.residuals[2],
                                rep.residuals[3]});
  return j;
}

inline Json to_json(const ConjugationReport& rep) {
  Json j;
  j["passed"] = rep.passed;
  j["max_residual"] = rep.max_residual;
  j["tol"] = rep.tol;
  j["sector_residuals"] = rep.sector_residuals;
  return j;
}

inline Json to_json(const BosonicDecomposition& dec) {
  Json j;
  j["statistics"] = "bosonic";
  j["residual"] = dec.residual;
  Json modes = Json::array();
  for (const BosonicMode& m : dec.modes) {
    Json e;
    e["kind"] = "Bosonic";
    e["mu"] = m.mu;
    e["nu"] = m.nu;
    e["f"] = to_json(m.f);
    e["g"] = to_json(m.g);
    modes.push_back(std::move(e));
  }
  j["modes"] = std::move(modes);
  return j;
}

inline Json to_json(const FermionicDecomposition& dec) {
  Json j;
  j["statistics"] = "fermionic";
  j["residual"] = dec.residual;
  Json modes = Json::array();
  for (const FermionicMode& m : dec.modes) {
    Json e;
    e["kind"] = name(m.kind);
    e["alpha"] = m.alpha;
    e["beta"] = m.beta;
    e["f_even"] = to_json(m.f_even);
    e["eta_even"] = to_json(m.eta_even);
    if (m.kind == ModeKind::CooperPair) {
      e["f_odd"] = to_json(m.f_odd);
      e["eta_odd"] = to_json(m.eta_odd);
    }
    modes.push_back(std::move(e));
  }
  j["modes"] = std::move(modes);
  return j;
}

inline Json to_json(const SumVerdict& v) {
  Json j;
  j["class"] = name(v.cls);
  j["value"] = v.value;
  j["bound"] = v.bound;
  j["terms_used"] = v.terms_used;
  return j;
}

inline Json to_json(const ImplementabilityVerdict& v) {
  Json j;
  j["fock"] = name(v.fock);
  j["itp"] = name(v.itp);
  j["ess"] = name(v.ess);
  j["trace_vv"] = to_json(v.trace_vv);
  j["particle_hole_count"] = to_string(v.particle_hole_count);
  return j;
}

inline Json to_json(const DiagonalizationResult& res) {
  Json j;
  j["statistics"] = statistics_label(res.map.statistics);
  Json e = Json::array();
  for (Eigen::Index i = 0; i < res.energies.size(); ++i) e.push_back(res.energies(i));
  j["E"] = std::move(e);
  j["V"] = Json{{"u", to_json(res.map.u)}, {"v", to_json(res.map.v)}};
  j["residual"] = res.residual;
  return j;
}

// --- declared tails and sequence specs --------------------------------------

inline Tail tail_from_json(const Json& j, const char* ctx = "tail") {
  const Json& kind_j = detail::member(j, "kind", ctx);
  if (!kind_j.is_string())
    throw Error(Errc::ParseError, std::string(ctx) + ": kind must be a string");
  const std::string kind = kind_j.get<std::string>();
  if (kind == "finite_support")
    return Tail::finite_support(detail::to_integer(detail::member(j, "end", ctx), ctx));
  if (kind == "closed_form")
    return Tail::closed_form(detail::to_number(detail::member(j, "value", ctx), ctx));
  if (kind == "power_decay")
    return Tail::power_decay(detail::to_number(detail::member(j, "exponent", ctx), ctx),
                             detail::to_number(detail::member(j, "coeff", ctx), ctx));
  if (kind == "unknown") return Tail::unknown();
  throw Error(Errc::ParseError, std::string(ctx) + ": unknown tail kind \"" + kind + "\"");
}

inline Json to_json(const Tail& t) {
  Json j;
  switch (t.kind) {
    case Tail::Kind::FiniteSupport:
      j["kind"] = "finite_support";
      j["end"] = t.support_end;
      break;
    case Tail::Kind::ClosedForm:
      j["kind"] = "closed_form";
      j["value"] = t.value;
      break;
    case Tail::Kind::PowerDecay:
      j["kind"] = "power_decay";
      j["exponent"] = t.exponent;
      j["coeff"] = t.coeff;
      break;
    case Tail::Kind::Unknown:
      j["kind"] = "unknown";
      break;
  }
  return j;
}

// Two spellings. Table: {"kind": "table", "values": [...], "tail": T} with
// the tail defaulting to finite support at the table end. Closed form:
// {"kind": "closed_form", "offset": a, "scale": b, "shift": d, "exponent":
// e, "tail": T} meaning term(k) = a + b * (k + d)^(-e); the tail is
// mandatory because nothing else pins the behaviour past any horizon.
inline RenSequence sequence_from_json(const Json& j, const char* ctx = "sequence") {
  const Json& kind_j = detail::member(j, "kind", ctx);
  if (!kind_j.is_string())
    throw Error(Errc::ParseError, std::string(ctx) + ": kind must be a string");
  const std::string kind = kind_j.get<std::string>();
  if (kind == "table") {
    std::vector<double> values =
        detail::to_number_array(detail::member(j, "values", ctx), ctx);
    Tail tail = j.contains("tail")
                    ? tail_from_json(j.at("tail"), ctx)
                    : Tail::finite_support(static_cast<std::int64_t>(values.size()));
    return RenSequence::from_table(std::move(values), tail);
  }
  if (kind == "closed_form") {
    const double offset = detail::to_number(detail::member(j, "offset", ctx), ctx);
    const double scale = detail::to_number(detail::member(j, "scale", ctx), ctx);
    const double shift = detail::to_number(detail::member(j, "shift", ctx), ctx);
    const double exponent = detail::to_number(detail::member(j, "exponent", ctx), ctx);
    Tail tail = tail_from_json(detail::member(j, "tail", ctx), ctx);
    return RenSequence::from_function(
        [offset, scale, shift, exponent](std::int64_t k) {
          return offset + scale * std::pow(static_cast<double>(k) + shift, -exponent);
        },
        tail);
  }
  throw Error(Errc::ParseError, std::string(ctx) + ": unknown sequence kind \"" + kind + "\"");
}

// {"norms": sequence, "deviation": tail}; deviation declares |norm_k - 1|.
inline NormFamily norm_family_from_json(const Json& j) {
  const RenSequence seq = sequence_from_json(detail::member(j, "norms", "family"), "norms");
  const Tail deviation = tail_from_json(detail::member(j, "deviation", "family"), "deviation");
  const auto term = seq.term;
  return NormFamily::from_function([term](std::int64_t k) { return (*term)(k); }, deviation,
                                   seq.evaluable_end);
}

// {"overlaps": {"re": [...], "im": [...]}, "strong": tail, "weak": tail};
// entry k of the table is overlap k, unit modulus assumed beyond the table
// only if the declared tails say so.
inline OverlapFamily overlap_family_from_json(const Json& j) {
  const Json& ov = detail::member(j, "overlaps", "family");
  std::vector<double> re = detail::to_number_array(detail::member(ov, "re", "overlaps"),
                                                   "overlaps.re");
  std::vector<double> im;
  if (ov.contains("im")) im = detail::to_number_array(ov.at("im"), "overlaps.im");
  if (!im.empty() && im.size() != re.size())
    throw Error(Errc::ParseError, "overlaps: re and im must have equal length");
  const Tail strong = tail_from_json(detail::member(j, "strong", "family"), "strong");
  const Tail weak = tail_from_json(detail::member(j, "weak", "family"), "weak");
  auto data = std::make_shared<const std::vector<cplx>>([&] {
    std::vector<cplx> v(re.size());
    for (std::size_t i = 0; i < re.size(); ++i)
      v[i] = cplx(re[i], im.empty() ? 0.0 : im[i]);
    return v;
  }());
  return OverlapFamily::from_function(
      [data](std::int64_t k) -> cplx {
        return (k >= 1 && k <= static_cast<std::int64_t>(data->size()))
                   ? (*data)[static_cast<std::size_t>(k - 1)]
                   : cplx(1.0, 0.0);
      },
      strong, weak, static_cast<std::int64_t>(re.size()));
}

// --- files, CSV, config ------------------------------------------------------

inline Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ParseError, "cannot open \"" + path + "\"");
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) throw Error(Errc::ParseError, "invalid JSON in \"" + path + "\"");
  return j;
}

inline Json parse_json_text(const std::string& text) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw Error(Errc::ParseError, "invalid JSON input");
  return j;
}

// One CSV row; numeric cells should already be formatted via format_full.
inline void csv_row(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os << ',';
    os << cells[i];
  }
  os << '\n';
}

// key = value per line, '#' starts a comment, blank lines ignored.
inline std::map<std::string, std::string> parse_config(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(Errc::ParseError,
                  "config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw Error(Errc::ParseError, "config line " + std::to_string(lineno) + ": empty key");
    out[key] = value;
  }
  return out;
}

inline std::map<std::string, std::string> load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ParseError, "cannot open \"" + path + "\"");
  return parse_config(in);
}

inline double config_number(const std::map<std::string, std::string>& cfg,
                            const std::string& key, double fallback) {
  const auto it = cfg.find(key);
  if (it == cfg.end()) return fallback;
  try {
    std::size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    throw Error(Errc::ParseError, "config key \"" + key + "\": not a number");
  }
}

}  // namespace bogo

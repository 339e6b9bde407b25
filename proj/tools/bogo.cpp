// Command-line front end. Thin by design: every number printed here comes
// out of a library call that the test suite also exercises directly.
//
// Exit codes: 0 success, 1 domain failure (failed validation, rejected
// input, residual over tolerance), 2 usage or parse errors.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include <bogo/bogo.hpp>

namespace {

using bogo::Json;

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw bogo::Error(bogo::Errc::ParseError, "cannot write \"" + out_path + "\"");
  out << text;
}

void emit_json(const Json& j, const std::string& out_path) {
  emit(j.dump(2) + "\n", out_path);
}

// Rows are computed into fixed slots, so the assembled output does not
// depend on the thread count or schedule.
template <typename Fn>
void parallel_index(std::size_t n, int threads, const Fn& fn) {
  threads = std::max(1, threads);
  if (threads == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const int workers = static_cast<int>(std::min<std::size_t>(n, threads));
  pool.reserve(static_cast<std::size_t>(workers));
  for (int t = 0; t < workers; ++t)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) fn(i);
    });
  for (std::thread& th : pool) th.join();
}

std::vector<std::array<int, 3>> lexicographic_ball(int radius) {
  std::vector<std::array<int, 3>> pts = bogo::ShellLattice::build(radius).points;
  std::sort(pts.begin(), pts.end());
  return pts;
}

struct SweepTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

std::string render_sweep(const SweepTable& table, const std::string& format) {
  if (format == "json") {
    Json j;
    j["columns"] = table.columns;
    Json rows = Json::array();
    for (const auto& r : table.rows) rows.push_back(r);
    j["rows"] = std::move(rows);
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  bogo::csv_row(os, table.columns);
  std::vector<std::string> cells;
  for (const auto& r : table.rows) {
    cells.clear();
    for (double x : r) cells.push_back(bogo::format_full(x));
    bogo::csv_row(os, cells);
  }
  return os.str();
}

int run_validate(const std::string& in, double tol, const std::string& out) {
  const bogo::BogoliubovMap map = bogo::map_from_json(bogo::load_json(in));
  const bogo::RelationReport rep = bogo::validate_bogoliubov(map, tol);
  emit_json(bogo::to_json(rep), out);
  return rep.passed ? 0 : 1;
}

int run_decompose(const std::string& in, double tol, const std::string& out) {
  bogo::BogoliubovMap map = bogo::map_from_json(bogo::load_json(in));
  map = bogo::make_validated(map.statistics, map.u, map.v, tol);
  Json j;
  if (map.statistics == bogo::Statistics::Bosonic)
    j = bogo::to_json(bogo::decompose_bosonic(map, tol));
  else
    j = bogo::to_json(bogo::decompose_fermionic(map, tol));
  emit_json(j, out);
  return 0;
}

int run_classify(const std::string& in, double tol, const std::string& out) {
  bogo::BogoliubovMap map = bogo::map_from_json(bogo::load_json(in));
  map = bogo::make_validated(map.statistics, map.u, map.v, tol);
  const bogo::ImplementabilityVerdict verdict = bogo::classify_implementability(map, tol);
  emit_json(bogo::to_json(verdict), out);
  return 0;
}

int run_diagonalize(const std::string& in, double tol, const std::string& out) {
  const bogo::QuadraticHamiltonian ham = bogo::hamiltonian_from_json(bogo::load_json(in));
  const bogo::DiagonalizationResult res = bogo::diagonalize(ham, tol);
  Json j = bogo::to_json(res);
  j["normal_ordering"] = bogo::to_json(bogo::normal_ordering_constant(ham, res).classification);
  emit_json(j, out);
  return 0;
}

int run_simulate(const std::string& kind, double xi, int cutoff, int sectors, double tol,
                 const std::string& out) {
  Json j;
  j["kind"] = kind;
  j["xi"] = xi;
  bogo::ConjugationReport rep;
  if (kind == "squeeze") {
    rep = bogo::verify_conjugation_bosonic(xi, cutoff, sectors, tol);
    const bogo::Matrix u = bogo::build_implementer_bosonic(xi, cutoff);
    const bogo::ModeParams mode = bogo::ModeParams::bosonic(std::cosh(xi), std::sinh(xi));
    j["cutoff"] = cutoff;
    j["sector_bound"] = sectors;
    j["vacuum_overlap"] = Json{{"re", u(0, 0).real()}, {"im", u(0, 0).imag()}};
    j["vacuum_annihilation"] = bogo::vacuum_annihilation_residual(mode, cutoff);
  } else {
    const bogo::ModeParams mode = bogo::ModeParams::cooper_pair(std::cos(xi), std::sin(xi));
    rep = bogo::verify_conjugation_fermionic(mode, tol);
    j["vacuum_annihilation"] = bogo::vacuum_annihilation_residual(mode, 1);
  }
  j["conjugation"] = bogo::to_json(rep);
  emit_json(j, out);
  return rep.passed ? 0 : 1;
}

int run_sweep(const std::string& model, const std::map<std::string, std::string>& cfg,
              int radius, int steps, int threads, const std::string& format,
              const std::string& out) {
  SweepTable table;
  if (model == "wick") {
    const bogo::WickModelParams params(bogo::config_number(cfg, "m", 1.0),
                                       bogo::config_number(cfg, "kappa", 1.0));
    const auto pts = lexicographic_ball(radius);
    table.columns = {"px", "py", "pz", "p", "h", "k", "gram", "u", "v", "E"};
    table.rows.resize(pts.size());
    parallel_index(pts.size(), threads, [&](std::size_t i) {
      const auto& p = pts[i];
      const double n = bogo::point_norm(p);
      const bogo::WickMode m = bogo::wick_mode(params, n);
      table.rows[i] = {static_cast<double>(p[0]), static_cast<double>(p[1]),
                       static_cast<double>(p[2]), n,   m.h, m.k,
                       m.gram,                    m.u, m.v, m.energy};
    });
  } else if (model == "bcs") {
    const bogo::cplx delta(bogo::config_number(cfg, "delta_re", 1.0),
                           bogo::config_number(cfg, "delta_im", 0.0));
    bogo::BCSModelParams params;
    params.m = bogo::config_number(cfg, "m", 1.0);
    params.mu = bogo::config_number(cfg, "mu", 1.0);
    params.delta = [delta](const std::array<int, 3>&) { return delta; };
    const auto pts = lexicographic_ball(radius);
    table.columns = {"px", "py", "pz", "eps", "delta_abs", "u_abs", "v", "E"};
    table.rows.resize(pts.size());
    parallel_index(pts.size(), threads, [&](std::size_t i) {
      const bogo::BcsMode m = bogo::bcs_mode(params, pts[i]);
      table.rows[i] = {static_cast<double>(pts[i][0]), static_cast<double>(pts[i][1]),
                       static_cast<double>(pts[i][2]), m.eps,
                       std::abs(delta),                std::abs(m.u),
                       m.v,                            m.energy};
    });
  } else {
    const double e_plus = bogo::config_number(cfg, "eps_plus", 1.0);
    const double e_minus = bogo::config_number(cfg, "eps_minus", 1.0);
    const double f0 = bogo::config_number(cfg, "f0", 1.0);
    const double omega = bogo::config_number(cfg, "omega", 0.0);
    const double p = bogo::config_number(cfg, "p", 1.0);
    const double t0 = bogo::config_number(cfg, "t0", 0.0);
    const double tmax = bogo::config_number(cfg, "tmax", 1.0);
    const int grid = static_cast<int>(bogo::config_number(cfg, "grid", 20));
    if (grid < 1) throw bogo::Error(bogo::Errc::BadParameter, "grid must be at least 1");
    bogo::QEDModelParams params;
    params.eps_plus = [e_plus](double, double) { return e_plus; };
    params.eps_minus = [e_minus](double, double) { return e_minus; };
    params.f = [f0, omega](double, double t) { return f0 * std::cos(omega * t); };
    table.columns = {"t",      "u1_abs", "u2_abs",         "v1_abs",
                     "v2_abs", "unit1",  "unit2",          "shale",
                     "formula_residual", "unitarity_residual",
                     "relation_residual", "ordering_discrepancy"};
    table.rows.resize(static_cast<std::size_t>(grid));
    parallel_index(table.rows.size(), threads, [&](std::size_t i) {
      const double t = t0 + (tmax - t0) * static_cast<double>(i + 1) / grid;
      const bogo::QedDynamics dyn = bogo::qed_dynamics(params, p, t0, t, steps);
      const double u1 = std::abs(dyn.u_quad(0, 0)), u2 = std::abs(dyn.u_quad(1, 1));
      const double v1 = std::abs(dyn.v1), v2 = std::abs(dyn.v2);
      table.rows[i] = {t,
                       u1,
                       u2,
                       v1,
                       v2,
                       u1 * u1 + v1 * v1,
                       u2 * u2 + v2 * v2,
                       dyn.shale_term,
                       dyn.formula_residual,
                       dyn.unitarity_residual,
                       dyn.relation_residual,
                       dyn.method_discrepancy};
    });
  }
  emit(render_sweep(table, format), out);
  return 0;
}

int run_itp(const std::string& in, std::int64_t horizon, const std::string& out) {
  const Json spec = bogo::load_json(in);
  Json j;
  if (spec.contains("norms")) {
    const bogo::ITPFamilyReport rep =
        bogo::classify_itp_family(bogo::norm_family_from_json(spec), horizon);
    j["is_C"] = bogo::name(rep.is_C);
    j["is_C0"] = bogo::name(rep.is_C0);
    j["product_norm"] = Json{{"class", bogo::name(rep.product_norm.cls)},
                             {"value", rep.product_norm.value},
                             {"bound", rep.product_norm.bound}};
    j["equivalence"] = bogo::name(rep.equivalence);
  } else if (spec.contains("overlaps")) {
    const bogo::OverlapFamily fam = bogo::overlap_family_from_json(spec);
    j["strong"] = bogo::name(bogo::itp_equivalent(fam, bogo::EquivalenceMode::Strong, horizon));
    j["weak"] = bogo::name(bogo::itp_equivalent(fam, bogo::EquivalenceMode::Weak, horizon));
    j["equivalence"] = bogo::name(bogo::itp_equivalence(fam, horizon));
  } else {
    throw bogo::Error(bogo::Errc::ParseError, "family: expected \"norms\" or \"overlaps\"");
  }
  emit_json(j, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bogoliubov maps: validation, mode structure, implementability, "
               "diagonalization, and model sweeps"};
  app.require_subcommand(1);

  std::string in, out, format = "csv", model, kind = "squeeze", config_path;
  double tol = bogo::default_tol, xi = 0.5;
  int cutoff = 60, sectors = 10, radius = 3, steps = 64, threads = 1;
  std::int64_t horizon = bogo::default_horizon;
  std::vector<std::string> overrides;

  CLI::App* validate = app.add_subcommand("validate", "check the Bogoliubov relations");
  validate->add_option("--in", in, "map JSON file")->required();
  validate->add_option("--tol", tol, "residual tolerance");
  validate->add_option("--out", out, "write the report here instead of stdout");

  CLI::App* decompose = app.add_subcommand("decompose", "mode decomposition of a map");
  decompose->add_option("--in", in, "map JSON file")->required();
  decompose->add_option("--tol", tol, "residual tolerance");
  decompose->add_option("--out", out, "output path");

  CLI::App* classify = app.add_subcommand("classify", "implementability of a map");
  classify->add_option("--in", in, "map JSON file")->required();
  classify->add_option("--tol", tol, "residual tolerance");
  classify->add_option("--out", out, "output path");

  CLI::App* diagonalize = app.add_subcommand("diagonalize", "diagonalize a quadratic Hamiltonian");
  diagonalize->add_option("--in", in, "Hamiltonian JSON file")->required();
  diagonalize->add_option("--tol", tol, "residual tolerance");
  diagonalize->add_option("--out", out, "output path");

  CLI::App* simulate = app.add_subcommand("simulate", "truncated implementer checks");
  simulate->add_option("--kind", kind, "squeeze or pair")
      ->check(CLI::IsMember({"squeeze", "pair"}));
  simulate->add_option("--xi", xi, "mode parameter");
  simulate->add_option("--cutoff", cutoff, "per-mode occupation cutoff");
  simulate->add_option("--sectors", sectors, "largest occupation sector checked");
  simulate->add_option("--tol", tol, "conjugation tolerance");
  simulate->add_option("--out", out, "output path");

  CLI::App* sweep = app.add_subcommand("sweep", "model sweep as plot-ready CSV");
  sweep->add_option("--model", model, "wick, bcs, or qed")
      ->required()
      ->check(CLI::IsMember({"wick", "bcs", "qed"}));
  sweep->add_option("--config", config_path, "key = value parameter file");
  sweep->add_option("--param", overrides, "inline key=value override (repeatable)");
  sweep->add_option("--radius", radius, "momentum ball radius");
  sweep->add_option("--steps", steps, "integrator panels (qed)");
  sweep->add_option("--threads", threads, "worker threads");
  sweep->add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  sweep->add_option("--out", out, "output path");

  CLI::App* itp = app.add_subcommand("itp", "classify a product-space family");
  itp->add_option("--in", in, "family spec JSON file")->required();
  itp->add_option("--horizon", horizon, "probe horizon for tail sums");
  itp->add_option("--out", out, "output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (!(tol > 0)) throw bogo::Error(bogo::Errc::BadParameter, "tolerance must be positive");
    if (validate->parsed()) return run_validate(in, tol, out);
    if (decompose->parsed()) return run_decompose(in, tol, out);
    if (classify->parsed()) return run_classify(in, tol, out);
    if (diagonalize->parsed()) return run_diagonalize(in, tol, out);
    if (simulate->parsed()) return run_simulate(kind, xi, cutoff, sectors, tol, out);
    if (sweep->parsed()) {
      std::map<std::string, std::string> cfg;
      if (!config_path.empty()) cfg = bogo::load_config(config_path);
      for (const std::string& ov : overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos || eq == 0)
          throw bogo::Error(bogo::Errc::ParseError, "--param expects key=value");
        cfg[ov.substr(0, eq)] = ov.substr(eq + 1);
      }
      return run_sweep(model, cfg, radius, steps, threads, format, out);
    }
    if (itp->parsed()) return run_itp(in, horizon, out);
  } catch (const bogo::Error& e) {
    Json j;
    j["error"] = bogo::name(e.code());
    j["message"] = e.what();
    std::cout << j.dump(2) << "\n";
    return e.code() == bogo::Errc::ParseError ? 2 : 1;
  } catch (const std::exception& e) {
    Json j;
    j["error"] = "Internal";
    j["message"] = e.what();
    std::cout << j.dump(2) << "\n";
    return 1;
  }
  return 2;
}

#include "splap/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "splap/best_constant.hpp"
#include "splap/errors.hpp"
#include "splap/report.hpp"
#include "splap/scheme.hpp"

namespace splap {

namespace {

namespace fs = std::filesystem;

// One named verification result; pass is set explicitly because some checks
// are upper bounds (measured <= allowed) and some are strict lower bounds.
struct Check {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double allowed = 0.0;
};

nlohmann::json to_json(const Check& c) {
  nlohmann::json j;
  j["name"] = c.name;
  j["pass"] = c.pass;
  j["measured"] = c.measured;
  j["allowed"] = c.allowed;
  return j;
}

const Check* first_failure(const std::vector<Check>& checks) {
  for (const Check& c : checks)
    if (!c.pass) return &c;
  return nullptr;
}

[[noreturn]] void fail_config(const std::string& msg) {
  throw ValidationError(msg);
}

RunConfig load_with_overrides(const CliOptions& opt) {
  if (opt.config_path.empty()) fail_config("--config is required");
  RunConfig cfg = load_config(opt.config_path);
  if (!opt.out_dir.empty()) cfg.outputs.directory = opt.out_dir;
  if (opt.seed) {
    if (*opt.seed < 0) fail_config("--seed must be nonnegative");
    cfg.solver.seed = static_cast<unsigned long>(*opt.seed);
  }
  if (opt.snapshots) cfg.outputs.snapshots = true;
  if (!opt.suites.empty()) {
    const auto& roster = all_suites();
    for (const std::string& s : opt.suites)
      if (std::find(roster.begin(), roster.end(), s) == roster.end())
        fail_config("unknown suite '" + s + "'");
    cfg.verify.suites = opt.suites;
    cfg.verify.use_default_suites = false;
  }
  return cfg;
}

bool wants_format(const OutputSpec& out, const std::string& fmt) {
  return std::find(out.formats.begin(), out.formats.end(), fmt) !=
         out.formats.end();
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.outputs.directory);
  return (fs::path(cfg.outputs.directory) / name).string();
}

int report_violation(const Check& c) {
  std::cerr << "error: invariant violated: " << c.name << " (measured "
            << format_number(c.measured) << ", allowed "
            << format_number(c.allowed) << ")\n";
  return kExitInvariant;
}

// grid-L2 pairing of interior grid functions (quadrature weight matches the
// energies' cell-volume measure)
double grid_inner(const Grid& grid, const GridFunction& a,
                  const GridFunction& b) {
  double s = 0.0;
  for (size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s * grid.cell_volume;
}

double section_inner(const Grid& grid, const HorizontalSection& a,
                     const HorizontalSection& b) {
  double s = 0.0;
  for (size_t k = 0; k < a.data.size(); ++k) s += a.data[k] * b.data[k];
  return s * grid.cell_volume;
}

GridFunction random_grid_function(const Grid& grid, std::mt19937_64& rng,
                                  double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  GridFunction u(static_cast<size_t>(grid.ninterior()));
  for (double& v : u) v = dist(rng);
  return u;
}

// A few sweeps of neighbor averaging keep finite-difference probes inside
// the smoothness class of the p < 2 energies (their second variations blow
// up where the gradient vanishes, so rough probes would inflate FD error).
GridFunction smoothed(const Grid& g, GridFunction v, int passes) {
  GridFunction w(v.size());
  for (int pass = 0; pass < passes; ++pass) {
    for (int k = 0; k < g.ninterior(); ++k) {
      const long flat = g.lattice_of_interior[static_cast<size_t>(k)];
      double acc = 0.0;
      int cnt = 0;
      for (int axis = 0; axis < g.dim; ++axis) {
        for (int dir : {-1, 1}) {
          const long nb = g.neighbor(flat, axis, dir);
          ++cnt;
          if (nb >= 0 && g.interior_of_lattice[static_cast<size_t>(nb)] >= 0)
            acc += v[static_cast<size_t>(
                g.interior_of_lattice[static_cast<size_t>(nb)])];
        }
      }
      w[static_cast<size_t>(k)] =
          0.5 * v[static_cast<size_t>(k)] + 0.5 * acc / cnt;
    }
    std::swap(v, w);
  }
  return v;
}

// ------------------------------------------------------------------- solve

std::vector<Check> solve_invariants(const SchemeReport& rep,
                                    const std::vector<double>& constraint,
                                    double p, double residual_tol,
                                    bool exhausted, long schedule_top) {
  std::vector<Check> checks;
  const auto& recs = rep.records;

  checks.push_back({"chain converged within the level schedule", !exhausted,
                    static_cast<double>(rep.stopped_at),
                    static_cast<double>(schedule_top)});

  double worst_defect = 0.0;
  for (const SchemeRecord& r : recs)
    worst_defect = std::max(worst_defect, r.monotonicity_defect);
  const double sup = recs.empty() ? 0.0 : recs.back().sup_norm;
  checks.push_back({"pointwise monotonicity of the chain",
                    worst_defect <= 1e-8 * sup, worst_defect, 1e-8 * sup});

  double worst_drop = 0.0;
  for (size_t j = 0; j + 1 < recs.size(); ++j)
    worst_drop = std::max(
        worst_drop, recs[j].sobolev_norm - recs[j + 1].sobolev_norm);
  checks.push_back({"norm monotonicity of the chain", worst_drop <= 1e-10,
                    worst_drop, 1e-10});

  // The discrete minimizer at level n satisfies ||u||^p <= integral of
  // f u^{1-delta} exactly (truncated source and shifted barrier both sit
  // below the singular data); the slack covers solver tolerance only.
  double worst_excess = -1e300;
  for (size_t j = 0; j < recs.size() && j < constraint.size(); ++j) {
    const double lhs = std::pow(recs[j].sobolev_norm, p);
    worst_excess = std::max(
        worst_excess, (lhs - constraint[j]) / std::max(1.0, constraint[j]));
  }
  checks.push_back({"uniform energy bound", worst_excess <= 1e-8,
                    worst_excess, 1e-8});

  double stab = 0.0;
  if (recs.size() >= 2) {
    const double last = recs.back().sup_norm;
    const double prev = recs[recs.size() - 2].sup_norm;
    stab = std::abs(last - prev) / std::max(1.0, last);
  }
  checks.push_back({"sup-norm stabilization over the last two levels",
                    stab <= 1e-3, stab, 1e-3});

  double worst_tail = 0.0;
  const size_t mid = recs.size() / 2;
  for (size_t j = mid; j + 1 < recs.size(); ++j)
    worst_tail = std::max(
        worst_tail, recs[j + 1].distance_to_final - recs[j].distance_to_final);
  checks.push_back({"tail contraction toward the final iterate",
                    worst_tail <= 1e-10, worst_tail, 1e-10});

  const double lower = recs.empty() ? 0.0 : recs.back().interior_lower_bound;
  checks.push_back(
      {"interior positivity on the half-size probe", lower > 0.0, lower, 0.0});

  const double wres = recs.empty() ? 0.0 : recs.back().weak_residual;
  checks.push_back({"weak residual within tolerance", wres <= residual_tol,
                    wres, residual_tol});
  return checks;
}

}  // namespace

int cmd_solve(const CliOptions& opt) try {
  const RunConfig cfg = load_with_overrides(opt);
  auto prob = make_problem(cfg);

  std::vector<std::pair<long, GridFunction>> snaps;
  std::vector<double> constraint;  // per-level integral of f u^{1-delta}
  const LevelObserver observe = [&](long n, const GridFunction& u) {
    constraint.push_back(constraint_value(*prob, u));
    if (cfg.outputs.snapshots) snaps.emplace_back(n, u);
  };

  SchemeReport rep;
  bool exhausted = false;
  try {
    rep = run_scheme(*prob, cfg.schedule, cfg.solver, observe);
  } catch (SchemeExhausted& e) {
    rep = e.report();
    exhausted = true;
  }

  const std::vector<Check> checks =
      solve_invariants(rep, constraint, prob->p, cfg.residual_tol, exhausted,
                       cfg.schedule.back());

  nlohmann::json doc = make_report("solve");
  doc["problem"] = {{"group", cfg.group.kind},
                    {"p", cfg.p},
                    {"delta", cfg.delta},
                    {"res", cfg.res}};
  doc["seed"] = cfg.solver.seed;
  doc["residual_tol"] = cfg.residual_tol;
  doc["scheme"] = to_json(rep);
  doc["invariants"] = nlohmann::json::array();
  for (const Check& c : checks) doc["invariants"].push_back(to_json(c));
  doc["all_pass"] = first_failure(checks) == nullptr;

  if (wants_format(cfg.outputs, "json"))
    write_json(doc, out_path(cfg, "solve_report.json"));
  if (wants_format(cfg.outputs, "csv")) {
    write_text(solution_csv(prob->grid, rep.u), out_path(cfg, "solution.csv"));
    write_text(scheme_csv(rep.records), out_path(cfg, "scheme_levels.csv"));
    for (const auto& [n, u] : snaps)
      write_text(solution_csv(prob->grid, u),
                 out_path(cfg, "snapshot_n" + std::to_string(n) + ".csv"));
  }

  if (const Check* bad = first_failure(checks)) return report_violation(*bad);
  return kExitOk;
} catch (const ValidationError& e) {
  std::cerr << "error: " << e.what() << "\n";
  return kExitConfig;
} catch (const SolverError& e) {
  std::cerr << "error: " << e.what() << "\n";
  return kExitInvariant;
}

// ----------------------------------------------------------- best constant

int cmd_best_constant(const CliOptions& opt) try {
  const RunConfig cfg = load_with_overrides(opt);
  auto prob = make_problem(cfg);

  SchemeReport chain;
  try {
    chain = run_scheme(*prob, cfg.schedule, cfg.solver);
  } catch (const SchemeExhausted& e) {
    // Valid config, failed compute: persist the partial chain so the failure
    // can be examined, then name the one violated rule.
    nlohmann::json doc = make_report("best-constant");
    doc["scheme"] = to_json(e.report());
    doc["error"] = e.what();
    if (wants_format(cfg.outputs, "json"))
      write_json(doc, out_path(cfg, "best_constant_report.json"));
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvariant;
  }

  // The chain's energy_tol steers its outer Cauchy test; the quotient
  // minimization below is a plain descent, so it gets full precision.
  SolverConfig qcfg = cfg.solver;
  qcfg.energy_tol = std::min(qcfg.energy_tol, 1e-16);
  const BestConstantReport rep = best_constant_report(
      *prob, chain.u, qcfg, cfg.best_constant.nrandom,
      static_cast<unsigned>(cfg.solver.seed), cfg.best_constant.nstarts);

  std::vector<Check> checks;
  checks.push_back({"two routes to the best constant agree",
                    rep.gap <= cfg.best_constant.gap_tol, rep.gap,
                    cfg.best_constant.gap_tol});
  for (const SweepRow& row : rep.sweep)
    checks.push_back(
        {"inequality sweep at multiplier " + format_number(row.multiplier),
         row.holds == row.expected_to_hold, row.holds ? 1.0 : 0.0,
         row.expected_to_hold ? 1.0 : 0.0});

  nlohmann::json doc = make_report("best-constant");
  doc["problem"] = {{"group", cfg.group.kind},
                    {"p", cfg.p},
                    {"delta", cfg.delta},
                    {"res", cfg.res}};
  doc["seed"] = cfg.solver.seed;
  doc["gap_tol"] = cfg.best_constant.gap_tol;
  doc["best_constant"] = to_json(rep);
  doc["scheme"] = to_json(chain);
  doc["checks"] = nlohmann::json::array();
  for (const Check& c : checks) doc["checks"].push_back(to_json(c));
  doc["all_pass"] = first_failure(checks) == nullptr;

  if (wants_format(cfg.outputs, "json"))
    write_json(doc, out_path(cfg, "best_constant_report.json"));
  if (wants_format(cfg.outputs, "csv")) {
    write_text(sweep_csv(rep.sweep), out_path(cfg, "sweep.csv"));
    write_text(solution_csv(prob->grid, rep.extremal),
               out_path(cfg, "extremal.csv"));
  }

  if (const Check* bad = first_failure(checks)) return report_violation(*bad);
  return kExitOk;
} catch (const ValidationError& e) {
  std::cerr << "error: " << e.what() << "\n";
  return kExitConfig;
} catch (const SolverError& e) {
  std::cerr << "error: " << e.what() << "\n";
  return kExitInvariant;
}

// -------------------------------------------------------------------- mms

int cmd_mms(const CliOptions& opt) try {
  const RunConfig cfg = load_with_overrides(opt);
  const ManufacturedCase mc = make_manufactured_case(cfg);

  StudyTable table;
  try {
    table = convergence_study(mc, cfg.delta, cfg.mms.resolutions,
                              cfg.mms.schedule_top, cfg.solver);
  } catch (const SchemeExhausted& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvariant;
  }

  nlohmann::json doc = make_report("mms");
  doc["profile"] = cfg.mms.profile;
  doc["p"] = cfg.p;
  doc["delta"] = cfg.delta;
  doc["study"] = to_json(table);

  Check order_check{"observed convergence order at p = 2", true,
                    table.fitted_order, 1.5};
  if (cfg.p == 2.0)
    order_check.pass =
        std::isfinite(table.fitted_order) && table.fitted_order >= 1.5;
  doc["order_check"] = to_json(order_check);
  doc["all_pass"] = order_check.pass;

  if (wants_format(cfg.outputs, "json"))
    write_json(doc, out_path(cfg, "mms_report.json"));
  if (wants_format(cfg.outputs, "csv"))
    write_text(study_csv(table), out_path(cfg, "study.csv"));

  if (!order_check.pass) return report_violation(order_check);
  return kExitOk;
} catch (const ValidationError& e) {
  std::cerr << "error: " << e.what() << "\n";
  return kExitConfig;
} catch (const SolverError& e) {
  std::cerr << "error: " << e.what() << "\n";
  return kExitInvariant;
}

// ------------------------------------------------------------------ verify

namespace {

std::vector<Check> suite_duality(const Problem& prob, unsigned long seed) {
  std::mt19937_64 rng(seed);
  const Grid& g = prob.grid;
  double worst = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    const GridFunction u = random_grid_function(g, rng, -1.0, 1.0);
    HorizontalSection V;
    V.ncomp = prob.op.ncomp();
    V.data.resize(static_cast<size_t>(V.ncomp) * g.nbase());
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (double& v : V.data) v = dist(rng);
    const double a = grid_inner(g, prob.op.divergence(V), u);
    const double b = section_inner(g, V, prob.op.gradient(u));
    const double scale = std::max(1.0, std::abs(b));
    worst = std::max(worst, std::abs(a + b) / scale);
  }
  return {{"summation-by-parts duality of gradient and divergence",
           worst <= 1e-12, worst, 1e-12}};
}

std::vector<Check> suite_gradient(const Problem& prob, unsigned long seed) {
  std::mt19937_64 rng(seed);
  const Grid& g = prob.grid;
  const double eps = 1e-5;
  double worst = 0.0;
  const RegularizedEnergy j1(prob, 1), j16(prob, 16);
  for (int rep = 0; rep < 20; ++rep) {
    const GridFunction u = random_grid_function(g, rng, 0.3, 1.5);
    GridFunction phi = random_grid_function(g, rng, -1.0, 1.0);
    if (prob.p < 2.0) phi = smoothed(g, phi, 3);
    for (const EnergyModel* E : {static_cast<const EnergyModel*>(&j1),
                                 static_cast<const EnergyModel*>(&j16)}) {
      GridFunction up = u, um = u;
      for (size_t k = 0; k < u.size(); ++k) {
        up[k] += eps * phi[k];
        um[k] -= eps * phi[k];
      }
      const double fd = (E->value(up) - E->value(um)) / (2.0 * eps);
      const double dir = grid_inner(g, E->gradient(u), phi);
      worst = std::max(worst,
                       std::abs(fd - dir) / std::max(1.0, std::abs(fd)));
    }
  }
  return {{"finite differences match the first variation", worst <= 1e-6,
           worst, 1e-6}};
}

std::vector<Check> suite_pairing(const Problem& prob, unsigned long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  const int m = prob.op.ncomp();
  double min_pairing = 1e300;
  double min_ratio = 1e300;
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> a(m), b(m);
    for (double& v : a) v = dist(rng);
    for (double& v : b) v = dist(rng);
    if (a == b) continue;
    const double pair = monotone_pairing(a, b, prob.p);
    const double bound = monotone_pairing_bound(a, b, prob.p);
    min_pairing = std::min(min_pairing, pair);
    if (bound > 0.0) min_ratio = std::min(min_ratio, pair / bound);
  }
  return {{"monotonicity pairing is strictly positive", min_pairing > 0.0,
           min_pairing, 0.0},
          {"empirical monotonicity constant is positive", min_ratio > 0.0,
           min_ratio, 0.0}};
}

std::vector<Check> suite_chain(const SchemeReport& rep) {
  std::vector<Check> checks;
  checks.push_back({"chain reached its Cauchy tolerance", rep.converged,
                    static_cast<double>(rep.stopped_at), 0.0});
  double worst_defect = 0.0;
  for (const SchemeRecord& r : rep.records)
    worst_defect = std::max(worst_defect, r.monotonicity_defect);
  const double sup = rep.records.empty() ? 0.0 : rep.records.back().sup_norm;
  checks.push_back({"pointwise monotonicity of the chain",
                    worst_defect <= 1e-8 * sup, worst_defect, 1e-8 * sup});
  double worst_drop = 0.0;
  for (size_t j = 0; j + 1 < rep.records.size(); ++j)
    worst_drop = std::max(worst_drop, rep.records[j].sobolev_norm -
                                          rep.records[j + 1].sobolev_norm);
  checks.push_back({"norm monotonicity of the chain", worst_drop <= 1e-10,
                    worst_drop, 1e-10});
  return checks;
}

std::vector<Check> suite_dual_bound(const Problem& prob, const GridFunction& u,
                                    unsigned long seed) {
  std::mt19937_64 rng(seed);
  const Grid& g = prob.grid;
  const double unorm = prob.op.sobolev_norm(u, prob.p);
  GridFunction sing(u.size(), 0.0);
  for (size_t k = 0; k < u.size(); ++k) {
    if (prob.f[k] <= 0.0) continue;
    if (!(u[k] > 0.0))
      return {{"singular term positivity for the dual bound", false, u[k],
               0.0}};
    sing[k] = prob.f[k] * std::pow(u[k], -prob.delta);
  }
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const GridFunction psi = random_grid_function(g, rng, -1.0, 1.0);
    const double lhs = std::abs(grid_inner(g, sing, psi));
    const double rhs =
        std::pow(unorm, prob.p - 1.0) * prob.op.sobolev_norm(psi, prob.p);
    worst = std::max(worst, lhs / rhs);
  }
  return {{"pairing of the singular term is dominated by the norms",
           worst <= 1.0 + 1e-6, worst, 1.0 + 1e-6}};
}

std::vector<Check> suite_equality(const Problem& prob, const GridFunction& u) {
  const double e = prob.op.sobolev_energy(u, prob.p);
  const double b = constraint_value(prob, u);
  const double defect = std::abs(e - b) / std::max(e, 1e-300);
  return {{"energy of the solution equals its constraint integral",
           defect <= 1e-3, defect, 1e-3}};
}

}  // namespace

int cmd_verify(const CliOptions& opt) try {
  const RunConfig cfg = load_with_overrides(opt);
  auto prob = make_problem(cfg);
  prob->op.set_adjoint_fault_for_testing(cfg.verify.adjoint_fault);

  const std::vector<std::string> suites =
      cfg.verify.use_default_suites ? all_suites() : cfg.verify.suites;

  // chain / dual_bound / equality all consume the chain solution; run the
  // schedule once on first demand.
  std::optional<SchemeReport> chain;
  std::string chain_error;
  const auto get_chain = [&]() -> const SchemeReport* {
    if (chain) return &*chain;
    if (!chain_error.empty()) return nullptr;
    try {
      chain = run_scheme(*prob, cfg.schedule, cfg.solver);
      return &*chain;
    } catch (const std::exception& e) {
      chain_error = e.what();
      return nullptr;
    }
  };

  nlohmann::json doc = make_report("verify");
  doc["adjoint_fault"] = cfg.verify.adjoint_fault;
  doc["seed"] = cfg.solver.seed;
  doc["suites"] = nlohmann::json::array();

  std::string first_bad;
  Check first_bad_check;
  for (const std::string& name : suites) {
    std::vector<Check> checks;
    try {
      if (name == "duality") {
        checks = suite_duality(*prob, cfg.solver.seed);
      } else if (name == "gradient") {
        checks = suite_gradient(*prob, cfg.solver.seed);
      } else if (name == "pairing") {
        checks = suite_pairing(*prob, cfg.solver.seed);
      } else if (name == "chain") {
        const SchemeReport* rep = get_chain();
        checks = rep ? suite_chain(*rep)
                     : std::vector<Check>{{"chain reached its Cauchy "
                                           "tolerance",
                                           false, 0.0, 0.0}};
      } else if (name == "dual_bound") {
        const SchemeReport* rep = get_chain();
        checks = rep ? suite_dual_bound(*prob, rep->u, cfg.solver.seed)
                     : std::vector<Check>{{"chain solution available", false,
                                           0.0, 0.0}};
      } else {  // equality
        const SchemeReport* rep = get_chain();
        checks = rep ? suite_equality(*prob, rep->u)
                     : std::vector<Check>{{"chain solution available", false,
                                           0.0, 0.0}};
      }
    } catch (const std::exception& e) {
      checks = {{std::string("suite execution: ") + e.what(), false, 0.0, 0.0}};
    }

    nlohmann::json js;
    js["suite"] = name;
    js["checks"] = nlohmann::json::array();
    for (const Check& c : checks) js["checks"].push_back(to_json(c));
    doc["suites"].push_back(js);

    if (first_bad.empty()) {
      if (const Check* bad = first_failure(checks)) {
        first_bad = name;
        first_bad_check = *bad;
      }
    }
  }
  doc["all_pass"] = first_bad.empty();

  if (wants_format(cfg.outputs, "json"))
    write_json(doc, out_path(cfg, "verify_report.json"));

  if (!first_bad.empty()) {
    std::cerr << "error: verification failed: " << first_bad << ": "
              << first_bad_check.name << " (measured "
              << format_number(first_bad_check.measured) << ", allowed "
              << format_number(first_bad_check.allowed) << ")\n";
    return kExitInvariant;
  }
  return kExitOk;
} catch (const ValidationError& e) {
  std::cerr << "error: " << e.what() << "\n";
  return kExitConfig;
} catch (const SolverError& e) {
  std::cerr << "error: " << e.what() << "\n";
  return kExitInvariant;
}

// -------------------------------------------------------------- dispatcher

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"numerical laboratory for the singular subelliptic p-laplace "
               "equation"};
  app.require_subcommand(1);

  CliOptions opt;
  long seed_buf = 0;

  const auto add_common = [&](CLI::App* sub, bool with_suite) {
    sub->add_option("--config", opt.config_path, "configuration file (JSON)")
        ->required();
    sub->add_option("--out", opt.out_dir, "output directory override");
    sub->add_option("--seed", seed_buf, "seed override");
    sub->add_flag("--snapshots", opt.snapshots, "dump per-level solutions");
    if (with_suite)
      sub->add_option("--suite", opt.suites,
                      "suite selection override (repeatable)");
  };

  CLI::App* solve = app.add_subcommand(
      "solve", "run the monotone scheme and check its invariants");
  CLI::App* best = app.add_subcommand(
      "best-constant", "compute the best constant two ways and compare");
  CLI::App* mms = app.add_subcommand(
      "mms", "manufactured-solution convergence study");
  CLI::App* verify =
      app.add_subcommand("verify", "run the verification suites");
  add_common(solve, false);
  add_common(best, false);
  add_common(mms, false);
  add_common(verify, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  CLI::App* picked = app.get_subcommands().front();
  if (picked->count("--seed")) opt.seed = seed_buf;

  if (picked == solve) return cmd_solve(opt);
  if (picked == best) return cmd_best_constant(opt);
  if (picked == mms) return cmd_mms(opt);
  return cmd_verify(opt);
}

}  // namespace splap

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "splap/energy.hpp"
#include "splap/mms.hpp"

namespace splap {

// Right-hand-side description. Three forms:
//   constant    — f(x) = value everywhere;
//   expression  — a polynomial term table, f(x) = sum_t coef_t * prod_i
//                 x_i^{powers_t[i]} (same representation the group uses for
//                 its field coefficients: serializable and parser-free);
//   csv         — one row per interior node in grid order, the last column
//                 is the value (the same layout the solution writer emits,
//                 so outputs round-trip as inputs).
struct SourceSpec {
  std::string kind = "constant";
  double value = 1.0;                  // constant
  struct Term {
    double coef = 0.0;
    std::vector<int> powers;
  };
  std::vector<Term> terms;             // expression
  std::string path;                    // csv
};

struct OutputSpec {
  std::string directory = ".";
  std::vector<std::string> formats = {"json", "csv"};
  bool snapshots = false;  // per-level solution dumps from cmd_solve
};

struct BestConstantSpec {
  double gap_tol = 1e-3;   // exit gate on |mu_formula - mu_direct|/mu_formula
  int nstarts = 4;         // random starts beside the chain solution
  int nrandom = 100;       // random functions per sweep row
};

struct MmsSpec {
  std::string profile = "sine";  // sine | product_sine | box_bump
  double amplitude = 1.0;
  std::vector<int> resolutions;
  long schedule_top = 1L << 22;
};

struct VerifySpec {
  std::vector<std::string> suites;  // default: every suite
  bool use_default_suites = true;   // false once "suites" appears (even empty)
  bool adjoint_fault = false;       // test hook: break the adjoint on purpose
};

struct RunConfig {
  GroupSpec group;
  DomainShape domain;
  BoxShape bbox;
  std::vector<int> res;
  double p = 2.0;
  double delta = 0.5;
  SourceSpec source;
  std::vector<long> schedule;
  SolverConfig solver;       // grad_tol = inner stop, energy_tol = chain gap
  double residual_tol = 1e-4;
  OutputSpec outputs;
  BestConstantSpec best_constant;
  MmsSpec mms;
  VerifySpec verify;
};

// Strict parse: every key at every level must be recognized — unknown keys
// fail with the full dotted path. Block-level invariants (ranges, shapes,
// schedule monotonicity) are checked here; problem-level invariants (the
// embedding hypothesis, source sign) are checked by make_problem via the
// Problem constructor, before any artifact is written.
RunConfig parse_config(const nlohmann::json& j);

// Reads and parses a config file (errors name the path).
RunConfig load_config(const std::string& path);

// Builds the grid, evaluates the source on it, and constructs the bound
// problem. Problem pins its grid in memory, hence the unique_ptr.
std::unique_ptr<Problem> make_problem(const RunConfig& cfg);

// Evaluates a source specification on a grid (exposed for tests).
GridFunction evaluate_source(const SourceSpec& src, const Grid& grid);

// Builds the manufactured case named by cfg.mms using the domain block's
// box and the problem block's p.
ManufacturedCase make_manufactured_case(const RunConfig& cfg);

// The full verification-suite roster in execution order; suite selections
// (config or command line) must be drawn from it.
const std::vector<std::string>& all_suites();

}  // namespace splap

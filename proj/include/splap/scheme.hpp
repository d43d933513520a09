#pragma once

#include <functional>
#include <vector>

#include "splap/energy.hpp"
#include "splap/errors.hpp"

namespace splap {

// One level of the monotone regularization chain for the singular equation.
struct SchemeRecord {
  long level = 0;                     // truncation/barrier level n
  int iters = 0;                      // accepted minimizer steps at this level
  double sobolev_norm = 0.0;          // ||u_n||: (integral |grad u_n|^p)^{1/p}
  double sup_norm = 0.0;              // max_k u_n
  double energy = 0.0;                // J_n(u_n)
  double grad_norm = 0.0;             // first-variation norm at minimizer exit
  double monotonicity_defect = 0.0;   // max(0, sup_k (u_prev - u_n)); 0 at the first level
  double interior_lower_bound = 0.0;  // min of u_n over the half-size probe region
  double weak_residual = 0.0;         // singular weak residual over seeded probes
  double strong_residual = 0.0;       // grid-L2 of the pointwise equation defect (advisory)
  double distance_to_final = 0.0;     // ||u_n - u_last||, filled once the chain ends
};

struct SchemeReport {
  std::vector<SchemeRecord> records;
  GridFunction u;           // last computed iterate: the approximation of the
                            // singular solution
  bool converged = false;   // outer Cauchy test fired (vacuously true for a
                            // single-level schedule)
  long stopped_at = 0;      // level at which the chain ended
};

// Thrown when the schedule runs out before the outer Cauchy test fires;
// carries everything computed so far so the caller can diagnose the chain.
class SchemeExhausted : public SolverError {
 public:
  SchemeExhausted(const std::string& what, SchemeReport rep);
  const SchemeReport& report() const { return report_; }

 private:
  SchemeReport report_;
};

// Pointwise min(f, n): the bounded source at truncation level n.
GridFunction truncate_source(const GridFunction& f, long n);

// Minimizes (1/p)||v||^p - <g_src, v>, the strictly convex problem whose
// Euler-Lagrange equation is the p-laplacian with fixed right-hand side
// g_src. Preconditions: g_src >= 0, finite, and not identically zero —
// unless allow_zero is set, in which case the zero source returns the zero
// function. Postconditions: the result is >= 0 everywhere and > 0 on the
// half-size probe region of the grid's bounding box.
GridFunction solve_auxiliary(const HorizontalOperator& op,
                             const GridFunction& g_src, double p,
                             const SolverConfig& cfg, bool allow_zero = false);

// Minimizes the level-n regularized energy J_n from `start`. Postcondition:
// the returned iterate is nonnegative (negative roundoff is clamped after
// validation). Throws SolverError if the iteration budget is exhausted.
MinimizeResult solve_approximated(const Problem& prob, long n,
                                  const GridFunction& start,
                                  const SolverConfig& cfg);

// Called once per completed level with that level's iterate; lets callers
// snapshot or audit the chain without the report retaining every iterate.
using LevelObserver = std::function<void(long level, const GridFunction& u)>;

// Runs the monotone chain over a strictly increasing schedule of levels.
// The first level is warm-started from the auxiliary solution with source
// min(f, n_0); each later level starts from the previous level's solution.
// Between consecutive levels the outer Cauchy test
//   ||u_next - u_prev|| <= cfg.energy_tol * max(1, ||u_next||)
// (Sobolev norms) decides convergence; a single-level schedule converges
// vacuously. If the schedule is exhausted without convergence, throws
// SchemeExhausted carrying the full report.
SchemeReport run_scheme(const Problem& prob, const std::vector<long>& schedule,
                        const SolverConfig& cfg,
                        const LevelObserver& observe = {});

// Residual of the singular weak formulation,
//   max over probes phi of
//     |<|grad u|^{p-2} grad u, grad phi> - <f u^{-delta}, phi>| / ||phi||,
// over a deterministic seeded family of smooth interior bumps. Requires
// u > 0 at every node of a probe's support where f > 0 (the error names the
// offending probe and node).
double weak_residual(const Problem& prob, const GridFunction& u,
                     int nprobes = 16, unsigned seed = 1);

// Relative defect of the discrete Euler-Lagrange identity of J_n at u:
//   <|grad u|^{p-2} grad u, grad phi> = <f_n * (u_+ + 1/n)^{-delta}, phi>,
// returned as |lhs - rhs| / max(1, |lhs|, |rhs|). Vanishes (up to the
// minimizer's gradient tolerance) exactly when u minimizes J_n.
double weak_identity_defect(const Problem& prob, const GridFunction& u, long n,
                            const GridFunction& phi);

// Minimum of u over the canonical probe region: interior nodes inside the
// half-size concentric copy of the problem domain.
double interior_lower_bound(const Problem& prob, const GridFunction& u);

// Volume of the superlevel set {u > level} (node count x cell volume).
double level_set_measure(const Grid& grid, const GridFunction& u, double level);

}  // namespace splap

#pragma once

#include <string>
#include <vector>

#include "splap/hcalc.hpp"

namespace splap {

// Full problem data for the singular equation
//   -div(|grad u|^{p-2} grad u) = f * u^{-delta},  u > 0 inside, u = 0 on
// the boundary. Owns the grid and the horizontal operator bound to it, so it
// is pinned in memory (no copies).
struct Problem {
  GroupSpec group;
  DomainShape domain;  // the open set; its half-size concentric shape is the
                       // canonical interior probe region
  Grid grid;
  double p = 2.0;
  double delta = 0.5;
  GridFunction f;
  HorizontalOperator op;  // note: constructed against this->grid, keep last

  Problem(GroupSpec group_, DomainShape domain_, Grid grid_, double p_,
          double delta_, GridFunction f_);
  // Convenience: domain = the grid's bounding box.
  Problem(GroupSpec group_, Grid grid_, double p_, double delta_, GridFunction f_);
  Problem(const Problem&) = delete;
  Problem& operator=(const Problem&) = delete;

 private:
  void validate_members() const;
};

// ----------------------------------------------------------------- energies

// Differentiable objective over grid functions. gradient() returns the
// grid-L2 representer G of the first variation: E(u + eps*phi) =
// E(u) + eps * <G, phi>_grid + o(eps).
class EnergyModel {
 public:
  virtual ~EnergyModel() = default;
  virtual double value(const GridFunction& u) const = 0;
  virtual GridFunction gradient(const GridFunction& u) const = 0;
  virtual const Grid& grid() const = 0;
};

GridFunction first_variation(const EnergyModel& energy, const GridFunction& u);

// (1/p)||u||^p - <g_src, u>; the strictly convex model problem whose
// Euler-Lagrange equation is the p-laplacian with fixed right-hand side.
class AuxEnergy final : public EnergyModel {
 public:
  AuxEnergy(const HorizontalOperator& op, GridFunction g_src, double p);
  double value(const GridFunction& u) const override;
  GridFunction gradient(const GridFunction& u) const override;
  const Grid& grid() const override { return op_->grid(); }

 private:
  const HorizontalOperator* op_;
  GridFunction g_;
  double p_;
};

// The concave C^1 primitive of the truncated singular nonlinearity,
//   barrier(t) = (1/(1-delta)) (t_+ + 1/n)^{1-delta} - n^delta t_-,
// with t_- = max(-t, 0), so that barrier'(t) = (t_+ + 1/n)^{-delta}
// everywhere: smooth gluing at 0 and a linear penalty pushing minimizers
// nonnegative.
double barrier(double t, long n, double delta);
double barrier_slope(double t, long n, double delta);

// The regularized energy at truncation level n:
//   (1/p)||u||^p - sum f_n(x) barrier(u(x)) vol,  f_n = min(f, n).
// Strictly convex and C^1; its minimizer solves the approximated equation
//   -div(|grad u|^{p-2} grad u) = f_n / (u_+ + 1/n)^delta.
class RegularizedEnergy final : public EnergyModel {
 public:
  RegularizedEnergy(const Problem& prob, long n);
  double value(const GridFunction& u) const override;
  GridFunction gradient(const GridFunction& u) const override;
  const Grid& grid() const override { return prob_->grid; }
  const GridFunction& truncated_source() const { return fn_; }
  long level() const { return n_; }

 private:
  const Problem* prob_;
  long n_;
  GridFunction fn_;
};

// The singular limit energy (1/p)||v||^p - (1/(1-delta)) sum (v_+)^{1-delta} f vol.
// value() is defined everywhere; gradient() only where v > 0 on {f > 0}.
class SingularEnergy final : public EnergyModel {
 public:
  explicit SingularEnergy(const Problem& prob);
  double value(const GridFunction& v) const override;
  GridFunction gradient(const GridFunction& v) const override;
  const Grid& grid() const override { return prob_->grid; }

 private:
  const Problem* prob_;
};

// ---------------------------------------------------------------- minimizer

struct SolverConfig {
  double grad_tol = 1e-10;    // stop when ||first variation||_L2 <= grad_tol
  double energy_tol = 1e-16;  // relative per-step decrease considered a stall
  int max_iters = 200000;
  double armijo_c1 = 1e-4;
  double armijo_backtrack = 0.5;
  unsigned long seed = 1;  // used by randomized callers (multi-start)
};

void validate(const SolverConfig& cfg);

struct IterationRecord {
  int iter = 0;
  double energy = 0.0;
  double grad_norm = 0.0;
  double step = 0.0;
};

enum class SolveStatus { converged, stalled, max_iters };

const char* to_string(SolveStatus s);

struct MinimizeResult {
  GridFunction u;
  SolveStatus status = SolveStatus::max_iters;
  std::vector<IterationRecord> log;
  double final_energy = 0.0;
  double final_grad_norm = 0.0;
  int iters = 0;
};

// First-order descent for convex C^1 energies: steepest-descent directions
// with Barzilai-Borwein step initialization, safeguarded by monotone Armijo
// backtracking, so the energy log is nonincreasing by construction.
// Terminates 'converged' on the gradient test, 'stalled' when five
// consecutive accepted steps decrease the energy by less than
// energy_tol * max(1, |E|) relative (or the line search hits its floor),
// else 'max_iters'.
MinimizeResult minimize(const EnergyModel& energy, GridFunction u0,
                        const SolverConfig& cfg);

}  // namespace splap

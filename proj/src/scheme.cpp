#include "splap/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

namespace splap {

namespace {

// grid-L2 pairing of interior grid functions
double grid_inner(const Grid& grid, const GridFunction& a, const GridFunction& b) {
  double s = 0.0;
  for (size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s * grid.cell_volume;
}

// pairing of horizontal sections with the same quadrature weight as the
// Sobolev energy: <V, W> = cell_volume * sum over base nodes and components
double section_inner(const Grid& grid, const HorizontalSection& a,
                     const HorizontalSection& b) {
  double s = 0.0;
  for (size_t k = 0; k < a.data.size(); ++k) s += a.data[k] * b.data[k];
  return s * grid.cell_volume;
}

void check_level(long n) {
  if (n < 1) {
    throw ValidationError("truncation level must satisfy n >= 1, got n = " +
                          std::to_string(n));
  }
}

// One smooth compactly supported interior bump,
//   phi(x) = max(0, 1 - |x - c|^2 / r^2)^2,
// centered at an interior node; C^1 and vanishing outside the ball.
GridFunction bump_probe(const Grid& grid, const Point& center, double radius) {
  GridFunction phi(static_cast<size_t>(grid.ninterior()), 0.0);
  const double r2 = radius * radius;
  for (int k = 0; k < grid.ninterior(); ++k) {
    const Point x = grid.interior_node(k);
    double d2 = 0.0;
    for (size_t a = 0; a < x.size(); ++a) d2 += (x[a] - center[a]) * (x[a] - center[a]);
    const double t = 1.0 - d2 / r2;
    if (t > 0.0) phi[static_cast<size_t>(k)] = t * t;
  }
  return phi;
}

}  // namespace

SchemeExhausted::SchemeExhausted(const std::string& what, SchemeReport rep)
    : SolverError(what), report_(std::move(rep)) {}

GridFunction truncate_source(const GridFunction& f, long n) {
  check_level(n);
  GridFunction fn = f;
  const double cap = static_cast<double>(n);
  for (double& v : fn) v = std::min(v, cap);
  return fn;
}

GridFunction solve_auxiliary(const HorizontalOperator& op,
                             const GridFunction& g_src, double p,
                             const SolverConfig& cfg, bool allow_zero) {
  const Grid& grid = op.grid();
  check_grid_function(grid, g_src, "auxiliary source g");
  double gmax = 0.0;
  for (size_t k = 0; k < g_src.size(); ++k) {
    if (g_src[k] < 0.0) {
      throw ValidationError("auxiliary source must be nonnegative; g[" +
                            std::to_string(k) + "] = " + std::to_string(g_src[k]));
    }
    gmax = std::max(gmax, g_src[k]);
  }
  if (gmax == 0.0) {
    if (allow_zero) return GridFunction(g_src.size(), 0.0);
    throw ValidationError(
        "auxiliary source must not vanish identically (pass allow_zero to "
        "accept the zero solution)");
  }

  AuxEnergy energy(op, g_src, p);
  MinimizeResult res =
      minimize(energy, GridFunction(g_src.size(), 0.0), cfg);
  if (res.status == SolveStatus::max_iters) {
    throw SolverError(
        "auxiliary solve exhausted its iteration budget (" +
        std::to_string(cfg.max_iters) + " iterations, first-variation norm " +
        std::to_string(res.final_grad_norm) + ")");
  }

  // Nonnegativity is exact for the continuum minimizer; the discrete one can
  // carry roundoff-size negatives. Validate, then clamp.
  const double floor_tol = 1e-10 * std::max(1.0, sup_norm(res.u));
  double umin = 0.0;
  for (double v : res.u) umin = std::min(umin, v);
  if (umin < -floor_tol) {
    throw SolverError("auxiliary solution has a negative interior value " +
                      std::to_string(umin) + ", below roundoff tolerance");
  }
  for (double& v : res.u) v = std::max(v, 0.0);

  // Strict positivity on the canonical probe region of the bounding box.
  const auto probe =
      interior_nodes_in(grid, half_size_probe(DomainShape(BoxShape(grid.bbox))));
  for (int k : probe) {
    if (!(res.u[static_cast<size_t>(k)] > 0.0)) {
      throw SolverError(
          "auxiliary solution is not strictly positive on the probe region "
          "(node " + std::to_string(k) + ")");
    }
  }
  return std::move(res.u);
}

MinimizeResult solve_approximated(const Problem& prob, long n,
                                  const GridFunction& start,
                                  const SolverConfig& cfg) {
  RegularizedEnergy energy(prob, n);
  MinimizeResult res = minimize(energy, start, cfg);
  if (res.status == SolveStatus::max_iters) {
    throw SolverError("level n = " + std::to_string(n) +
                      ": iteration budget exhausted (" +
                      std::to_string(cfg.max_iters) +
                      " iterations, first-variation norm " +
                      std::to_string(res.final_grad_norm) + ")");
  }
  const double floor_tol = 1e-10 * std::max(1.0, sup_norm(res.u));
  double umin = 0.0;
  for (double v : res.u) umin = std::min(umin, v);
  if (umin < -floor_tol) {
    throw SolverError("level n = " + std::to_string(n) +
                      ": solution has a negative interior value " +
                      std::to_string(umin) + ", below roundoff tolerance");
  }
  for (double& v : res.u) v = std::max(v, 0.0);
  return res;
}

double weak_identity_defect(const Problem& prob, const GridFunction& u, long n,
                            const GridFunction& phi) {
  check_level(n);
  const Grid& grid = prob.grid;
  check_grid_function(grid, u, "chain iterate u");
  check_grid_function(grid, phi, "test function phi");

  const HorizontalSection flux = prob.op.flux(prob.op.gradient(u), prob.p);
  const double lhs = section_inner(grid, flux, prob.op.gradient(phi));

  const GridFunction fn = truncate_source(prob.f, n);
  GridFunction rhs_density(u.size());
  for (size_t k = 0; k < u.size(); ++k) {
    rhs_density[k] = fn[k] * barrier_slope(u[k], n, prob.delta);
  }
  const double rhs = grid_inner(grid, rhs_density, phi);

  const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
  return std::abs(lhs - rhs) / scale;
}

double weak_residual(const Problem& prob, const GridFunction& u, int nprobes,
                     unsigned seed) {
  const Grid& grid = prob.grid;
  check_grid_function(grid, u, "solution u");
  if (nprobes < 1) {
    throw ValidationError("weak_residual needs at least one probe");
  }

  // Probe radii span [0.15, 0.45] of the smallest box extent so supports
  // range from a few cells to a sizable interior patch.
  double min_extent = std::numeric_limits<double>::infinity();
  for (size_t a = 0; a < grid.bbox.lo.size(); ++a) {
    min_extent = std::min(min_extent, grid.bbox.hi[a] - grid.bbox.lo[a]);
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_node(0, grid.ninterior() - 1);
  std::uniform_real_distribution<double> pick_radius(0.15 * min_extent,
                                                     0.45 * min_extent);

  const HorizontalSection flux = prob.op.flux(prob.op.gradient(u), prob.p);

  double worst = 0.0;
  for (int j = 0; j < nprobes; ++j) {
    const Point center = grid.interior_node(pick_node(rng));
    const GridFunction phi = bump_probe(grid, center, pick_radius(rng));

    GridFunction singular(u.size(), 0.0);
    for (size_t k = 0; k < u.size(); ++k) {
      if (phi[k] == 0.0 || prob.f[k] == 0.0) continue;
      if (!(u[k] > 0.0)) {
        throw ValidationError(
            "weak residual probe " + std::to_string(j) + " touches node " +
            std::to_string(k) + " where f > 0 but u = " + std::to_string(u[k]) +
            " is not strictly positive");
      }
      singular[k] = prob.f[k] * std::pow(u[k], -prob.delta);
    }

    const double lhs = section_inner(grid, flux, prob.op.gradient(phi));
    const double rhs = grid_inner(grid, singular, phi);
    const double norm_phi = prob.op.sobolev_norm(phi, prob.p);
    worst = std::max(worst, std::abs(lhs - rhs) / norm_phi);
  }
  return worst;
}

double interior_lower_bound(const Problem& prob, const GridFunction& u) {
  check_grid_function(prob.grid, u, "solution u");
  const auto probe = interior_nodes_in(prob.grid, half_size_probe(prob.domain));
  if (probe.empty()) {
    throw ValidationError(
        "the half-size probe region contains no interior node at this "
        "resolution");
  }
  double m = std::numeric_limits<double>::infinity();
  for (int k : probe) m = std::min(m, u[static_cast<size_t>(k)]);
  return m;
}

double level_set_measure(const Grid& grid, const GridFunction& u, double level) {
  check_grid_function(grid, u, "function u");
  long count = 0;
  for (double v : u) count += (v > level) ? 1 : 0;
  return static_cast<double>(count) * grid.cell_volume;
}

namespace {

SchemeRecord make_record(const Problem& prob, long n, const MinimizeResult& mres,
                         const GridFunction* u_prev) {
  const GridFunction& u = mres.u;
  SchemeRecord rec;
  rec.level = n;
  rec.iters = mres.iters;
  rec.sobolev_norm = prob.op.sobolev_norm(u, prob.p);
  rec.sup_norm = sup_norm(u);
  rec.energy = mres.final_energy;
  rec.grad_norm = mres.final_grad_norm;
  if (u_prev != nullptr) {
    double defect = 0.0;
    for (size_t k = 0; k < u.size(); ++k) {
      defect = std::max(defect, (*u_prev)[k] - u[k]);
    }
    rec.monotonicity_defect = std::max(defect, 0.0);
  }
  rec.interior_lower_bound = interior_lower_bound(prob, u);
  rec.weak_residual = weak_residual(prob, u);

  // Advisory pointwise defect of the singular equation, restricted to nodes
  // where the singular term is defined (u > 0 wherever f > 0; other nodes
  // contribute their flux divergence alone).
  const GridFunction plap = prob.op.p_laplacian(u, prob.p);
  GridFunction defect(u.size(), 0.0);
  for (size_t k = 0; k < u.size(); ++k) {
    const double sing =
        (prob.f[k] > 0.0 && u[k] > 0.0) ? prob.f[k] * std::pow(u[k], -prob.delta)
                                        : 0.0;
    defect[k] = plap[k] - sing;
  }
  rec.strong_residual = lp_norm(prob.grid, defect, 2.0);
  return rec;
}

}  // namespace

SchemeReport run_scheme(const Problem& prob, const std::vector<long>& schedule,
                        const SolverConfig& cfg, const LevelObserver& observe) {
  validate(cfg);
  if (schedule.empty()) {
    throw ValidationError("the level schedule must not be empty");
  }
  for (size_t j = 0; j < schedule.size(); ++j) {
    check_level(schedule[j]);
    if (j > 0 && schedule[j] <= schedule[j - 1]) {
      throw ValidationError("the level schedule must be strictly increasing; "
                            "schedule[" + std::to_string(j) + "] = " +
                            std::to_string(schedule[j]) + " after " +
                            std::to_string(schedule[j - 1]));
    }
  }

  // The caller's energy_tol steers the outer Cauchy test between levels;
  // inner minimizations always run at full precision so a loose outer
  // tolerance cannot make the chain iterates sloppy.
  SolverConfig inner = cfg;
  inner.energy_tol = std::min(cfg.energy_tol, 1e-16);

  SchemeReport rep;
  rep.records.reserve(schedule.size());
  std::vector<GridFunction> iterates;
  iterates.reserve(schedule.size());

  GridFunction start = solve_auxiliary(
      prob.op, truncate_source(prob.f, schedule.front()), prob.p, inner);

  for (size_t j = 0; j < schedule.size(); ++j) {
    const long n = schedule[j];
    const GridFunction* u_prev = j > 0 ? &iterates.back() : nullptr;
    MinimizeResult mres = solve_approximated(prob, n, start, inner);
    rep.records.push_back(make_record(prob, n, mres, u_prev));

    bool cauchy = false;
    if (u_prev != nullptr) {
      GridFunction diff(mres.u.size());
      for (size_t k = 0; k < diff.size(); ++k) diff[k] = mres.u[k] - (*u_prev)[k];
      const double gap = prob.op.sobolev_norm(diff, prob.p);
      cauchy = gap <= cfg.energy_tol *
                          std::max(1.0, rep.records.back().sobolev_norm);
    }

    iterates.push_back(std::move(mres.u));
    start = iterates.back();
    rep.stopped_at = n;
    if (observe) observe(n, iterates.back());

    if (cauchy || schedule.size() == 1) {
      rep.converged = true;
      break;
    }
  }

  rep.u = iterates.back();
  for (size_t j = 0; j < rep.records.size(); ++j) {
    GridFunction diff(rep.u.size());
    for (size_t k = 0; k < diff.size(); ++k) diff[k] = iterates[j][k] - rep.u[k];
    rep.records[j].distance_to_final = prob.op.sobolev_norm(diff, prob.p);
  }

  if (!rep.converged) {
    const std::string what =
        "level schedule exhausted at n = " + std::to_string(rep.stopped_at) +
        " without meeting the chain Cauchy tolerance " +
        std::to_string(cfg.energy_tol) + " (per-level data in the report)";
    throw SchemeExhausted(what, std::move(rep));
  }
  return rep;
}

}  // namespace splap

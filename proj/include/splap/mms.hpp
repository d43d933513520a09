#pragma once

#include <functional>
#include <string>
#include <vector>

#include "splap/energy.hpp"

namespace splap {

// A closed-form profile u_ex > 0 with its analytic operator image, used to
// manufacture right-hand sides: choosing f = (-div|grad u_ex|^{p-2} grad u_ex)
// * u_ex^delta makes u_ex the exact solution of the singular equation, so a
// computed solution can be graded against it. The operator image is derived
// by hand per profile (never by the discrete operator — that would make the
// comparison circular).
struct ManufacturedCase {
  std::string name;
  GroupSpec group;
  BoxShape box;
  double p = 2.0;
  std::function<double(const Point&)> exact;       // u_ex, positive inside
  std::function<double(const Point&)> minus_plap;  // analytic -div(|grad u|^{p-2} grad u)
};

// u = A sin(pi x / L) on (0, L), any p > 1:
//   -div(|u'|^{p-2} u') = (p-1) (pi/L)^p A^{p-1} |cos(pi x/L)|^{p-2} sin(pi x/L).
// For p < 2 the factor |cos|^{p-2} is unbounded near x = L/2, so the profile
// leaves the admissible class: nodewise sampling stays finite in floating
// point (the cosine never evaluates to exactly zero) but produces a spike of
// order eps^{p-2} there. Convergence studies are meaningful for p >= 2 only.
ManufacturedCase sine_profile(double length, double amplitude, double p);

// u = A prod_i sin(pi x_i / L_i) on a box, p = 2 only:
//   -lap u = (sum_i (pi/L_i)^2) u.
ManufacturedCase product_sine_profile(std::vector<double> lengths,
                                      double amplitude);

// u = (1-x^2)(1-y^2)(1-t^2) on [-1,1]^3 under the two-generator step-two
// group, p = 2. With a = 1-x^2, b = 1-y^2, c = 1-t^2 the hand derivative is
//   -lap_H u = 2c(a+b) + ((x^2+y^2)/2) ab + 4xyt(x^2-y^2),
// which changes sign near the corners: the manufactured source is negative
// there, i.e. outside the admissible class (f >= 0). Kept as the documented
// witness that such profiles cannot be manufactured on this group.
ManufacturedCase box_bump_profile();

// Samples f = minus_plap * exact^delta at interior nodes. Throws
// ValidationError (naming the node) when the profile is not strictly
// positive, the source is not finite, or the source is negative — the
// admissibility conditions of the singular problem.
GridFunction manufactured_source(const ManufacturedCase& mc, const Grid& grid,
                                 double delta);

struct StudyRow {
  int res = 0;
  double h = 0.0;          // max spacing across axes
  double sup_error = 0.0;  // max |u - u_ex| over interior nodes
  double order = 0.0;      // vs the previous row; NaN on the first
  long stopped_at = 0;     // truncation level where the chain converged
};

struct StudyTable {
  std::vector<StudyRow> rows;
  double fitted_order = 0.0;  // least-squares slope of log error vs log h
};

// Runs the full pipeline (manufacture the source, run the truncation chain,
// compare against the profile) on each resolution; resolutions apply to
// every axis and must be strictly increasing. The chain uses the doubling
// schedule 1, 2, ..., schedule_top with the given solver configuration, and
// a chain that exhausts its schedule propagates SchemeExhausted (the study
// never grades an unconverged solve).
StudyTable convergence_study(const ManufacturedCase& mc, double delta,
                             const std::vector<int>& resolutions,
                             long schedule_top, const SolverConfig& cfg);

}  // namespace splap

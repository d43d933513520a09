#include "splap/mms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "splap/errors.hpp"
#include "splap/scheme.hpp"

namespace splap {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

std::string node_string(const Point& x) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ")";
  return os.str();
}

}  // namespace

ManufacturedCase sine_profile(double length, double amplitude, double p) {
  if (!(length > 0.0) || !(amplitude > 0.0))
    throw ValidationError("sine profile needs positive length and amplitude");
  if (!(p > 1.0)) throw ValidationError("sine profile needs p > 1");
  ManufacturedCase mc;
  mc.name = "sine";
  mc.group = make_euclidean(1);
  mc.box = BoxShape{{0.0}, {length}};
  mc.p = p;
  const double w = kPi / length;
  mc.exact = [amplitude, w](const Point& x) {
    return amplitude * std::sin(w * x[0]);
  };
  mc.minus_plap = [amplitude, w, p](const Point& x) {
    const double c = std::cos(w * x[0]);
    return (p - 1.0) * std::pow(w, p) * std::pow(amplitude, p - 1.0) *
           std::pow(std::fabs(c), p - 2.0) * std::sin(w * x[0]);
  };
  return mc;
}

ManufacturedCase product_sine_profile(std::vector<double> lengths,
                                      double amplitude) {
  if (lengths.empty())
    throw ValidationError("product sine profile needs at least one length");
  for (double L : lengths)
    if (!(L > 0.0)) throw ValidationError("profile lengths must be positive");
  if (!(amplitude > 0.0))
    throw ValidationError("profile amplitude must be positive");
  ManufacturedCase mc;
  mc.name = "product_sine";
  mc.group = make_euclidean(static_cast<int>(lengths.size()));
  mc.box.lo.assign(lengths.size(), 0.0);
  mc.box.hi = lengths;
  mc.p = 2.0;
  std::vector<double> w(lengths.size());
  double lam = 0.0;
  for (size_t i = 0; i < lengths.size(); ++i) {
    w[i] = kPi / lengths[i];
    lam += w[i] * w[i];
  }
  mc.exact = [amplitude, w](const Point& x) {
    double u = amplitude;
    for (size_t i = 0; i < w.size(); ++i) u *= std::sin(w[i] * x[i]);
    return u;
  };
  auto exact = mc.exact;
  mc.minus_plap = [exact, lam](const Point& x) { return lam * exact(x); };
  return mc;
}

ManufacturedCase box_bump_profile() {
  ManufacturedCase mc;
  mc.name = "box_bump";
  mc.group = make_heisenberg(1);
  mc.box = BoxShape{{-1.0, -1.0, -1.0}, {1.0, 1.0, 1.0}};
  mc.p = 2.0;
  mc.exact = [](const Point& q) {
    return (1.0 - q[0] * q[0]) * (1.0 - q[1] * q[1]) * (1.0 - q[2] * q[2]);
  };
  mc.minus_plap = [](const Point& q) {
    const double x = q[0], y = q[1], t = q[2];
    const double a = 1.0 - x * x, b = 1.0 - y * y, c = 1.0 - t * t;
    return 2.0 * c * (a + b) + 0.5 * (x * x + y * y) * a * b +
           4.0 * x * y * t * (x * x - y * y);
  };
  return mc;
}

GridFunction manufactured_source(const ManufacturedCase& mc, const Grid& grid,
                                 double delta) {
  if (!(delta > 0.0) || !(delta < 1.0))
    throw ValidationError("manufactured source needs delta in (0, 1)");
  if (grid.dim != static_cast<int>(mc.box.lo.size()))
    throw ValidationError("grid dimension does not match the profile");
  GridFunction f(static_cast<size_t>(grid.ninterior()));
  for (int k = 0; k < grid.ninterior(); ++k) {
    const Point x = grid.interior_node(k);
    const double ue = mc.exact(x);
    if (!(ue > 0.0))
      throw ValidationError("manufactured profile is not strictly positive at "
                            "node " + node_string(x));
    const double val = mc.minus_plap(x) * std::pow(ue, delta);
    if (!std::isfinite(val))
      throw ValidationError("manufactured source is not finite at node " +
                            node_string(x) +
                            "; the profile is outside the admissible class");
    if (val < 0.0) {
      std::ostringstream os;
      os << "manufactured source is negative at node " << node_string(x)
         << " (value " << val
         << "); the profile is outside the admissible class (f >= 0)";
      throw ValidationError(os.str());
    }
    f[static_cast<size_t>(k)] = val;
  }
  return f;
}

StudyTable convergence_study(const ManufacturedCase& mc, double delta,
                             const std::vector<int>& resolutions,
                             long schedule_top, const SolverConfig& cfg) {
  validate(cfg);
  if (resolutions.empty())
    throw ValidationError("convergence study needs at least one resolution");
  for (size_t i = 0; i < resolutions.size(); ++i) {
    if (resolutions[i] < 3)
      throw ValidationError("study resolutions must be at least 3");
    if (i > 0 && resolutions[i] <= resolutions[i - 1])
      throw ValidationError("study resolutions must be strictly increasing");
  }
  if (schedule_top < 1)
    throw ValidationError("schedule top must be at least 1");
  std::vector<long> schedule;
  for (long n = 1; n <= schedule_top; n *= 2) schedule.push_back(n);

  StudyTable table;
  table.rows.reserve(resolutions.size());
  for (int res : resolutions) {
    Grid grid = build_grid(DomainShape(mc.box), mc.box,
                           std::vector<int>(mc.box.lo.size(), res));
    GridFunction f = manufactured_source(mc, grid, delta);
    Problem prob(mc.group, std::move(grid), mc.p, delta, std::move(f));
    SchemeReport rep = run_scheme(prob, schedule, cfg);

    StudyRow row;
    row.res = res;
    row.h = *std::max_element(prob.grid.h.begin(), prob.grid.h.end());
    row.stopped_at = rep.stopped_at;
    double err = 0.0;
    for (int k = 0; k < prob.grid.ninterior(); ++k)
      err = std::max(err, std::fabs(rep.u[static_cast<size_t>(k)] -
                                    mc.exact(prob.grid.interior_node(k))));
    row.sup_error = err;
    if (table.rows.empty()) {
      row.order = std::numeric_limits<double>::quiet_NaN();
    } else {
      const StudyRow& prev = table.rows.back();
      row.order = std::log(prev.sup_error / row.sup_error) /
                  std::log(prev.h / row.h);
    }
    table.rows.push_back(row);
  }

  // Least-squares slope of log(error) against log(h).
  if (table.rows.size() >= 2) {
    double sx = 0.0, sy = 0.0;
    for (const StudyRow& r : table.rows) {
      sx += std::log(r.h);
      sy += std::log(r.sup_error);
    }
    const double n = static_cast<double>(table.rows.size());
    const double mx = sx / n, my = sy / n;
    double num = 0.0, den = 0.0;
    for (const StudyRow& r : table.rows) {
      num += (std::log(r.h) - mx) * (std::log(r.sup_error) - my);
      den += (std::log(r.h) - mx) * (std::log(r.h) - mx);
    }
    table.fitted_order = num / den;
  } else {
    table.fitted_order = std::numeric_limits<double>::quiet_NaN();
  }
  return table;
}

}  // namespace splap

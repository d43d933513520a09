#include "splap/grid.hpp"

#include <cmath>
#include <deque>
#include <limits>

#include "splap/errors.hpp"

namespace splap {

bool shape_contains(const DomainShape& shape, const Point& x) {
  if (const auto* box = std::get_if<BoxShape>(&shape)) {
    for (std::size_t j = 0; j < box->lo.size(); ++j) {
      const double margin = 1e-12 * (box->hi[j] - box->lo[j]);
      if (!(x[j] > box->lo[j] + margin) || !(x[j] < box->hi[j] - margin))
        return false;
    }
    return true;
  }
  if (const auto* ball = std::get_if<BallShape>(&shape)) {
    double d2 = 0.0;
    for (std::size_t j = 0; j < ball->center.size(); ++j) {
      const double d = x[j] - ball->center[j];
      d2 += d * d;
    }
    return d2 < ball->radius * ball->radius * (1.0 - 1e-12);
  }
  return std::get<PredicateShape>(shape).inside(x);
}

DomainShape half_size_probe(const DomainShape& shape) {
  if (const auto* box = std::get_if<BoxShape>(&shape)) {
    BoxShape probe;
    probe.lo.resize(box->lo.size());
    probe.hi.resize(box->hi.size());
    for (std::size_t j = 0; j < box->lo.size(); ++j) {
      const double c = 0.5 * (box->lo[j] + box->hi[j]);
      const double half = 0.25 * (box->hi[j] - box->lo[j]);
      probe.lo[j] = c - half;
      probe.hi[j] = c + half;
    }
    return probe;
  }
  if (const auto* ball = std::get_if<BallShape>(&shape))
    return BallShape{ball->center, 0.5 * ball->radius};
  throw ValidationError("half_size_probe: predicate shapes have no canonical probe");
}

Point Grid::node(long flat) const {
  Point x(dim);
  for (int j = 0; j < dim; ++j) {
    const long i = (flat / strides[j]) % res[j];
    x[j] = (i == res[j] - 1) ? bbox.hi[j] : bbox.lo[j] + static_cast<double>(i) * h[j];
  }
  return x;
}

long Grid::neighbor(long flat, int axis, int dir) const {
  const long i = (flat / strides[axis]) % res[axis];
  const long k = i + dir;
  if (k < 0 || k >= res[axis]) return -1;
  return flat + static_cast<long>(dir) * strides[axis];
}

Grid build_grid(const DomainShape& shape, const BoxShape& box,
                const std::vector<int>& res) {
  Grid g;
  g.dim = static_cast<int>(res.size());
  if (g.dim < 1) throw ValidationError("build_grid: resolution list is empty");
  if (box.lo.size() != res.size() || box.hi.size() != res.size())
    throw ValidationError("build_grid: box corners and resolution disagree in dimension");
  for (int j = 0; j < g.dim; ++j) {
    if (res[j] < 3) throw ValidationError("build_grid: need at least 3 nodes per axis");
    if (!(box.hi[j] > box.lo[j]))
      throw ValidationError("build_grid: box must have positive extent on every axis");
  }
  g.bbox = box;
  g.res = res;
  g.h.resize(g.dim);
  g.cell_volume = 1.0;
  for (int j = 0; j < g.dim; ++j) {
    g.h[j] = (box.hi[j] - box.lo[j]) / (res[j] - 1);
    g.cell_volume *= g.h[j];
  }
  g.strides.assign(g.dim, 1);
  for (int j = g.dim - 2; j >= 0; --j) g.strides[j] = g.strides[j + 1] * res[j + 1];
  g.nlattice = g.strides[0] * res[0];

  g.interior_of_lattice.assign(g.nlattice, -1);
  for (long flat = 0; flat < g.nlattice; ++flat) {
    if (shape_contains(shape, g.node(flat))) {
      g.interior_of_lattice[flat] = static_cast<int>(g.lattice_of_interior.size());
      g.lattice_of_interior.push_back(flat);
    }
  }
  if (g.lattice_of_interior.empty())
    throw ValidationError("build_grid: the domain has empty interior at this resolution");

  // Every interior node needs its full axis-neighbor stencil representable on
  // the lattice (neighbors may be exterior, where functions vanish).
  for (long flat : g.lattice_of_interior)
    for (int j = 0; j < g.dim; ++j)
      if (g.neighbor(flat, j, +1) < 0 || g.neighbor(flat, j, -1) < 0)
        throw ValidationError(
            "build_grid: an interior node touches the lattice edge; enlarge the "
            "bounding box or refine");

  g.base_of_lattice.assign(g.nlattice, -1);
  for (long flat = 0; flat < g.nlattice; ++flat) {
    bool base = g.interior_of_lattice[flat] >= 0;
    for (int j = 0; !base && j < g.dim; ++j) {
      const long up = g.neighbor(flat, j, +1);
      base = up >= 0 && g.interior_of_lattice[up] >= 0;
    }
    if (base) {
      g.base_of_lattice[flat] = static_cast<int>(g.lattice_of_base.size());
      g.lattice_of_base.push_back(flat);
    }
  }

  // Connectivity of the interior graph (axis neighbors); disconnected
  // interiors are legal but flagged in reports.
  const int n = g.ninterior();
  std::vector<char> seen(n, 0);
  std::deque<int> queue{0};
  seen[0] = 1;
  int reached = 1;
  while (!queue.empty()) {
    const int k = queue.front();
    queue.pop_front();
    const long flat = g.lattice_of_interior[k];
    for (int j = 0; j < g.dim; ++j) {
      for (int dir : {-1, +1}) {
        const long nb = g.neighbor(flat, j, dir);
        if (nb < 0) continue;
        const int kn = g.interior_of_lattice[nb];
        if (kn >= 0 && !seen[kn]) {
          seen[kn] = 1;
          ++reached;
          queue.push_back(kn);
        }
      }
    }
  }
  g.interior_connected = reached == n;
  return g;
}

std::vector<int> interior_nodes_in(const Grid& grid, const DomainShape& shape) {
  std::vector<int> nodes;
  for (int k = 0; k < grid.ninterior(); ++k)
    if (shape_contains(shape, grid.interior_node(k))) nodes.push_back(k);
  return nodes;
}

double integrate(const Grid& grid, const GridFunction& u) {
  check_grid_function(grid, u, "integrate: u");
  double acc = 0.0;
  for (double v : u) acc += v;
  return acc * grid.cell_volume;
}

double lp_norm(const Grid& grid, const GridFunction& u, double p) {
  check_grid_function(grid, u, "lp_norm: u");
  if (!(p >= 1.0)) throw ValidationError("lp_norm: p must be >= 1");
  double acc = 0.0;
  if (p == 2.0) {
    for (double v : u) acc += v * v;
  } else {
    for (double v : u) acc += std::pow(std::fabs(v), p);
  }
  return std::pow(acc * grid.cell_volume, 1.0 / p);
}

double sup_norm(const GridFunction& u) {
  double m = 0.0;
  for (double v : u) m = std::max(m, std::fabs(v));
  return m;
}

void check_grid_function(const Grid& grid, const GridFunction& u, const char* what) {
  if (static_cast<int>(u.size()) != grid.ninterior())
    throw ValidationError(std::string(what) + ": wrong number of interior values");
  for (double v : u)
    if (!std::isfinite(v))
      throw ValidationError(std::string(what) + ": non-finite entry");
}

void to_json(nlohmann::json& j, const Grid& grid) {
  j = nlohmann::json{{"box_lo", grid.bbox.lo},
                     {"box_hi", grid.bbox.hi},
                     {"res", grid.res},
                     {"h", grid.h},
                     {"cell_volume", grid.cell_volume},
                     {"interior_count", grid.ninterior()},
                     {"base_count", grid.nbase()},
                     {"interior_connected", grid.interior_connected}};
}

}  // namespace splap

#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "splap/carnot.hpp"

namespace splap {

// ------------------------------------------------------------------ domain

struct BoxShape {
  Point lo, hi;
};

struct BallShape {
  Point center;
  double radius = 0.0;
};

// Arbitrary node-membership predicate (C++ API only; not serializable).
struct PredicateShape {
  std::function<bool(const Point&)> inside;
  std::string label = "custom";
};

using DomainShape = std::variant<BoxShape, BallShape, PredicateShape>;

// Strict interior membership (box/ball tests carry a tiny relative margin so
// nodes that land on the boundary up to roundoff count as boundary).
bool shape_contains(const DomainShape& shape, const Point& x);

// The concentric shape at half linear size; the canonical compactly
// contained probe subdomain. Defined for box and ball shapes.
DomainShape half_size_probe(const DomainShape& shape);

// ------------------------------------------------------------------- grid

// Values at interior nodes in grid ordering; the function is extended by
// zero outside the interior (homogeneous Dirichlet condition).
using GridFunction = std::vector<double>;

// Uniform tensor lattice over a bounding box with the domain's interior
// marked. Node ordering is lexicographic in the multi-index (axis 0 most
// significant) and therefore deterministic. Immutable after build_grid.
//
// Besides the interior set the grid enumerates "base nodes": lattice nodes x
// such that x itself or one of its +h_j axis neighbors is interior. The
// short-difference horizontal calculus stores sections at base nodes so that
// every difference leg reaching into the interior is represented; interior
// nodes are always base nodes.
struct Grid {
  BoxShape bbox;
  std::vector<int> res;     // nodes per axis, >= 3, boundary ring included
  std::vector<double> h;    // spacing per axis
  int dim = 0;
  double cell_volume = 1.0;

  long nlattice = 0;
  std::vector<long> strides;

  std::vector<int> interior_of_lattice;  // -1 where not interior
  std::vector<long> lattice_of_interior;
  std::vector<int> base_of_lattice;      // -1 where not a base node
  std::vector<long> lattice_of_base;
  bool interior_connected = true;

  int ninterior() const { return static_cast<int>(lattice_of_interior.size()); }
  int nbase() const { return static_cast<int>(lattice_of_base.size()); }

  // coordinate of a lattice node (exact box corners at the extreme indices)
  Point node(long flat) const;
  Point interior_node(int k) const { return node(lattice_of_interior[k]); }
  Point base_node(int b) const { return node(lattice_of_base[b]); }

  // lattice neighbor in the +/- axis direction, -1 if off the lattice
  long neighbor(long flat, int axis, int dir) const;
};

Grid build_grid(const DomainShape& shape, const BoxShape& box,
                const std::vector<int>& res);

// Interior-node indices lying inside a shape (used for probe subdomains).
std::vector<int> interior_nodes_in(const Grid& grid, const DomainShape& shape);

// Riemann sum with uniform weight cell_volume, fixed summation order.
double integrate(const Grid& grid, const GridFunction& u);

// (integrate |u|^p)^{1/p}, p >= 1.
double lp_norm(const Grid& grid, const GridFunction& u, double p);

double sup_norm(const GridFunction& u);

// Validates size and finiteness; `what` names the argument in errors.
void check_grid_function(const Grid& grid, const GridFunction& u, const char* what);

// Grid summary for run reports (box, res, counts; no node lists).
void to_json(nlohmann::json& j, const Grid& grid);

}  // namespace splap

#include "splap/hcalc.hpp"

#include <cmath>

#include "splap/errors.hpp"

namespace splap {

HorizontalOperator::HorizontalOperator(const Grid& grid, const GroupSpec& group)
    : grid_(&grid), group_(group) {
  if (group_.total_dim() != grid.dim)
    throw ValidationError("horizontal operator: group and grid dimension disagree");
  const int B = grid.nbase();
  const int M = grid.ninterior();
  const int n1 = group_.horizontal_dim();

  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < grid.dim; ++j) {
      const Polynomial& a = group_.field_coeffs[i][j];
      if (a.is_zero()) continue;
      Term t;
      t.comp = i;
      t.axis = j;
      t.coef.resize(B);
      for (int b = 0; b < B; ++b) t.coef[b] = a.eval(grid.base_node(b));
      terms_.push_back(std::move(t));
    }
  }

  self_interior_.resize(B);
  for (int b = 0; b < B; ++b)
    self_interior_[b] = grid.interior_of_lattice[grid.lattice_of_base[b]];

  up_interior_.assign(grid.dim, std::vector<int>(B, -1));
  for (int j = 0; j < grid.dim; ++j)
    for (int b = 0; b < B; ++b) {
      const long up = grid.neighbor(grid.lattice_of_base[b], j, +1);
      if (up >= 0) up_interior_[j][b] = grid.interior_of_lattice[up];
    }

  base_of_interior_.resize(M);
  for (int k = 0; k < M; ++k)
    base_of_interior_[k] = grid.base_of_lattice[grid.lattice_of_interior[k]];

  down_base_.assign(grid.dim, std::vector<int>(M, -1));
  for (int j = 0; j < grid.dim; ++j)
    for (int k = 0; k < M; ++k) {
      // x - h_j e_j of an interior x is always a base node (its +e_j
      // neighbor is x itself).
      const long down = grid.neighbor(grid.lattice_of_interior[k], j, -1);
      down_base_[j][k] = grid.base_of_lattice[down];
    }
}

HorizontalSection HorizontalOperator::gradient(const GridFunction& u) const {
  check_grid_function(*grid_, u, "gradient: u");
  const int B = grid_->nbase();
  HorizontalSection V;
  V.ncomp = ncomp();
  V.data.assign(static_cast<std::size_t>(V.ncomp) * B, 0.0);
  for (const Term& t : terms_) {
    const double inv_h = 1.0 / grid_->h[t.axis];
    const std::vector<int>& up = up_interior_[t.axis];
    double* out = V.data.data() + static_cast<std::size_t>(t.comp) * B;
    for (int b = 0; b < B; ++b) {
      const double uu = up[b] >= 0 ? u[up[b]] : 0.0;
      const double us = self_interior_[b] >= 0 ? u[self_interior_[b]] : 0.0;
      out[b] += t.coef[b] * (uu - us) * inv_h;
    }
  }
  return V;
}

GridFunction HorizontalOperator::divergence(const HorizontalSection& V) const {
  const int B = grid_->nbase();
  const int M = grid_->ninterior();
  if (V.ncomp != ncomp() ||
      V.data.size() != static_cast<std::size_t>(V.ncomp) * B)
    throw ValidationError("divergence: section has wrong shape");
  GridFunction out(M, 0.0);
  for (const Term& t : terms_) {
    const double inv_h = 1.0 / grid_->h[t.axis];
    const std::vector<int>& down = down_base_[t.axis];
    const double* comp = V.data.data() + static_cast<std::size_t>(t.comp) * B;
    for (int k = 0; k < M; ++k) {
      const int bs = base_of_interior_[k];
      const int bd = down[k];
      out[k] += (t.coef[bs] * comp[bs] - t.coef[bd] * comp[bd]) * inv_h;
    }
  }
  if (adjoint_fault_)
    for (double& v : out) v = -v;
  return out;
}

HorizontalSection HorizontalOperator::flux(const HorizontalSection& V, double p) const {
  if (!(p > 1.0)) throw ValidationError("flux: need p > 1");
  const int B = grid_->nbase();
  HorizontalSection F;
  F.ncomp = V.ncomp;
  F.data.assign(V.data.size(), 0.0);
  if (p == 2.0) {
    F.data = V.data;
    return F;
  }
  const double e = 0.5 * (p - 2.0);
  for (int b = 0; b < B; ++b) {
    double n2 = 0.0;
    for (int i = 0; i < V.ncomp; ++i) {
      const double v = V.data[static_cast<std::size_t>(i) * B + b];
      n2 += v * v;
    }
    if (n2 == 0.0) continue;  // continuous extension of the flux
    const double r = std::pow(n2, e);
    for (int i = 0; i < V.ncomp; ++i)
      F.data[static_cast<std::size_t>(i) * B + b] =
          r * V.data[static_cast<std::size_t>(i) * B + b];
  }
  return F;
}

double HorizontalOperator::sobolev_energy(const GridFunction& u, double p) const {
  if (!(p > 1.0)) throw ValidationError("sobolev_energy: need p > 1");
  const HorizontalSection V = gradient(u);
  const int B = grid_->nbase();
  double acc = 0.0;
  if (p == 2.0) {
    for (double v : V.data) acc += v * v;
  } else {
    for (int b = 0; b < B; ++b) {
      double n2 = 0.0;
      for (int i = 0; i < V.ncomp; ++i) {
        const double v = V.data[static_cast<std::size_t>(i) * B + b];
        n2 += v * v;
      }
      if (n2 > 0.0) acc += std::pow(n2, 0.5 * p);
    }
  }
  return acc * grid_->cell_volume;
}

double HorizontalOperator::sobolev_norm(const GridFunction& u, double p) const {
  return std::pow(sobolev_energy(u, p), 1.0 / p);
}

GridFunction HorizontalOperator::p_laplacian(const GridFunction& u, double p) const {
  GridFunction d = divergence(flux(gradient(u), p));
  for (double& v : d) v = -v;
  return d;
}

namespace {
double euclidean_len(const std::vector<double>& a) {
  double n2 = 0.0;
  for (double v : a) n2 += v * v;
  return std::sqrt(n2);
}
}  // namespace

double monotone_pairing(const std::vector<double>& a, const std::vector<double>& b,
                        double p) {
  if (!(p > 1.0)) throw ValidationError("monotone_pairing: need p > 1");
  if (a.size() != b.size())
    throw ValidationError("monotone_pairing: vectors differ in dimension");
  const double la = euclidean_len(a), lb = euclidean_len(b);
  const double ra = la > 0.0 ? std::pow(la, p - 2.0) : 0.0;
  const double rb = lb > 0.0 ? std::pow(lb, p - 2.0) : 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    acc += (ra * a[i] - rb * b[i]) * (a[i] - b[i]);
  return acc;
}

double monotone_pairing_bound(const std::vector<double>& a,
                              const std::vector<double>& b, double p) {
  if (a.size() != b.size())
    throw ValidationError("monotone_pairing_bound: vectors differ in dimension");
  double d2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d2 += (a[i] - b[i]) * (a[i] - b[i]);
  const double s = euclidean_len(a) + euclidean_len(b);
  if (s == 0.0) return 0.0;
  return std::pow(s, p - 2.0) * d2;
}

HorizontalSection horizontal_gradient(const Grid& grid, const GroupSpec& g,
                                      const GridFunction& u) {
  return HorizontalOperator(grid, g).gradient(u);
}

GridFunction horizontal_divergence(const Grid& grid, const GroupSpec& g,
                                   const HorizontalSection& V) {
  return HorizontalOperator(grid, g).divergence(V);
}

double sobolev_norm(const Grid& grid, const GroupSpec& g, const GridFunction& u,
                    double p) {
  return HorizontalOperator(grid, g).sobolev_norm(u, p);
}

GridFunction p_laplacian(const Grid& grid, const GroupSpec& g, const GridFunction& u,
                         double p) {
  return HorizontalOperator(grid, g).p_laplacian(u, p);
}

}  // namespace splap

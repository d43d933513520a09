#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace splap {

// A point of the group in exponential coordinates, one real per coordinate,
// grouped by layer.
using Point = std::vector<double>;

// One monomial  coef * prod_k x_k^{powers[k]}.
struct PolyTerm {
  double coef = 0.0;
  std::vector<int> powers;
};

// Sparse polynomial over the group coordinates. Vector-field coefficients
// are stored this way (not as closures) so group specs serialize into run
// reports verbatim.
struct Polynomial {
  std::vector<PolyTerm> terms;

  bool is_zero() const { return terms.empty(); }
  double eval(const Point& x) const;
  Polynomial derivative(int axis) const;

  static Polynomial zero() { return {}; }
  static Polynomial constant(double c);
  // coef * x_axis (used by the Heisenberg fields)
  static Polynomial linear(double coef, int axis, int dim);
};

// A stratified (Carnot) group: graded coordinate layers, anisotropic
// dilations delta_t(x_j) = t^{w_j} x_j with w_j the layer index of
// coordinate j, and the first-layer ("horizontal") vector fields
//   X_i = sum_j field_coeffs[i][j](x) d/dx_j ,  i = 1..n1.
// Only derivatives along these fields enter the operator downstream.
struct GroupSpec {
  std::string kind;             // "euclidean" | "heisenberg" | "custom"
  std::vector<int> layer_dims;  // coordinates per layer, first entry = n1
  std::vector<std::vector<Polynomial>> field_coeffs;  // n1 x N

  int total_dim() const;
  int horizontal_dim() const { return layer_dims.empty() ? 0 : layer_dims.front(); }
  // Dilation weight (= 1-based layer index) of each coordinate.
  std::vector<int> coordinate_weights() const;
};

// One-layer degenerate case (n1 = N, identity coefficients); admitted for
// cross-validation against classical operators.
GroupSpec make_euclidean(int n);

// Heisenberg-type group of layer dims (2n, 1) with the symmetric fields
//   X_i = d/dx_i - (y_i/2) d/dt ,  Y_i = d/dy_i + (x_i/2) d/dt ,
// which are divergence-free (the coefficient of d/dt never depends on t).
GroupSpec make_heisenberg(int n);

// General constructor. Validates the grading and that each coefficient
// polynomial is homogeneous of weighted degree w_j - 1 (so the fields
// commute correctly with dilations); the first-layer coefficient block must
// be the identity.
GroupSpec make_custom(std::vector<int> layer_dims,
                      std::vector<std::vector<Polynomial>> field_coeffs);

// nu = sum_i i * n_i; plays the role of the space dimension in the Sobolev
// exponents below.
int homogeneous_dimension(const GroupSpec& g);

// x_j -> t^{w_j} x_j. Requires t > 0.
Point dilation(const GroupSpec& g, double t, const Point& x);

// p* = nu p / (nu - p). Requires 1 < p < nu.
double critical_exponent(int nu, double p);

// Hoelder conjugate of p*/(1-delta): the integrability exponent the source
// term must satisfy. Requires 0 < delta < 1 < p < nu.
double source_exponent(int nu, double p, double delta);

void to_json(nlohmann::json& j, const PolyTerm& t);
void from_json(const nlohmann::json& j, PolyTerm& t);
void to_json(nlohmann::json& j, const Polynomial& p);
void from_json(const nlohmann::json& j, Polynomial& p);
void to_json(nlohmann::json& j, const GroupSpec& g);
void from_json(const nlohmann::json& j, GroupSpec& g);

}  // namespace splap

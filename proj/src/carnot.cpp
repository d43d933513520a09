#include "splap/carnot.hpp"

#include <cmath>
#include <numeric>

#include "splap/errors.hpp"

namespace splap {

double Polynomial::eval(const Point& x) const {
  double acc = 0.0;
  for (const PolyTerm& t : terms) {
    double m = t.coef;
    for (std::size_t k = 0; k < t.powers.size(); ++k) {
      for (int e = 0; e < t.powers[k]; ++e) m *= x[k];
    }
    acc += m;
  }
  return acc;
}

Polynomial Polynomial::derivative(int axis) const {
  Polynomial d;
  for (const PolyTerm& t : terms) {
    if (axis < 0 || axis >= static_cast<int>(t.powers.size())) continue;
    if (t.powers[axis] == 0) continue;
    PolyTerm dt = t;
    dt.coef *= t.powers[axis];
    dt.powers[axis] -= 1;
    d.terms.push_back(std::move(dt));
  }
  return d;
}

Polynomial Polynomial::constant(double c) {
  Polynomial p;
  if (c != 0.0) p.terms.push_back({c, {}});
  return p;
}

Polynomial Polynomial::linear(double coef, int axis, int dim) {
  Polynomial p;
  PolyTerm t;
  t.coef = coef;
  t.powers.assign(dim, 0);
  t.powers[axis] = 1;
  p.terms.push_back(std::move(t));
  return p;
}

int GroupSpec::total_dim() const {
  return std::accumulate(layer_dims.begin(), layer_dims.end(), 0);
}

std::vector<int> GroupSpec::coordinate_weights() const {
  std::vector<int> w;
  for (std::size_t layer = 0; layer < layer_dims.size(); ++layer)
    w.insert(w.end(), layer_dims[layer], static_cast<int>(layer) + 1);
  return w;
}

namespace {

// Weighted degree of a monomial, or -1 if the term mixes degrees with zero
// coefficient handling left to the caller.
int weighted_degree(const PolyTerm& t, const std::vector<int>& weights) {
  int deg = 0;
  for (std::size_t k = 0; k < t.powers.size(); ++k) deg += t.powers[k] * weights[k];
  return deg;
}

void validate_group(const GroupSpec& g) {
  if (g.layer_dims.empty())
    throw ValidationError("group: layer_dims must be nonempty");
  for (int d : g.layer_dims)
    if (d < 1) throw ValidationError("group: every layer dimension must be >= 1");
  const int n1 = g.horizontal_dim();
  const int N = g.total_dim();
  if (g.layer_dims.size() > 1 && n1 < 2)
    throw ValidationError(
        "group: the first layer must have dimension >= 2 unless the group has a "
        "single layer");
  if (static_cast<int>(g.field_coeffs.size()) != n1)
    throw ValidationError("group: need one horizontal field per first-layer coordinate");
  const std::vector<int> w = g.coordinate_weights();
  for (int i = 0; i < n1; ++i) {
    if (static_cast<int>(g.field_coeffs[i].size()) != N)
      throw ValidationError("group: each field needs one coefficient per coordinate");
    for (int j = 0; j < N; ++j) {
      const Polynomial& a = g.field_coeffs[i][j];
      for (const PolyTerm& t : a.terms) {
        // powers may be shorter than N; missing exponents are zero
        if (static_cast<int>(t.powers.size()) > N)
          throw ValidationError("group: coefficient monomial has wrong arity");
        for (int e : t.powers)
          if (e < 0) throw ValidationError("group: negative monomial power");
        if (t.coef != 0.0 && weighted_degree(t, w) != w[j] - 1)
          throw ValidationError(
              "group: coefficient of d/dx_" + std::to_string(j) + " in field " +
              std::to_string(i) + " is not homogeneous of weighted degree " +
              std::to_string(w[j] - 1));
      }
      if (j < n1) {
        // First-layer block must be the identity (exponential coordinates).
        // The homogeneity check above already forces these entries constant.
        const double v = a.eval(Point(N, 0.0));
        const double want = (i == j) ? 1.0 : 0.0;
        if (v != want)
          throw ValidationError(
              "group: first-layer coefficient block must be the identity");
      }
    }
  }
}

}  // namespace

GroupSpec make_euclidean(int n) {
  if (n < 1) throw ValidationError("make_euclidean: n must be >= 1");
  GroupSpec g;
  g.kind = "euclidean";
  g.layer_dims = {n};
  g.field_coeffs.assign(n, std::vector<Polynomial>(n));
  for (int i = 0; i < n; ++i) g.field_coeffs[i][i] = Polynomial::constant(1.0);
  return g;
}

GroupSpec make_heisenberg(int n) {
  if (n < 1) throw ValidationError("make_heisenberg: n must be >= 1");
  GroupSpec g;
  g.kind = "heisenberg";
  g.layer_dims = {2 * n, 1};
  const int N = 2 * n + 1;
  g.field_coeffs.assign(2 * n, std::vector<Polynomial>(N));
  for (int i = 0; i < n; ++i) {
    // X_i = d/dx_i - (y_i/2) d/dt
    g.field_coeffs[i][i] = Polynomial::constant(1.0);
    g.field_coeffs[i][N - 1] = Polynomial::linear(-0.5, n + i, N);
    // Y_i = d/dy_i + (x_i/2) d/dt
    g.field_coeffs[n + i][n + i] = Polynomial::constant(1.0);
    g.field_coeffs[n + i][N - 1] = Polynomial::linear(0.5, i, N);
  }
  return g;
}

GroupSpec make_custom(std::vector<int> layer_dims,
                      std::vector<std::vector<Polynomial>> field_coeffs) {
  GroupSpec g;
  g.kind = "custom";
  g.layer_dims = std::move(layer_dims);
  g.field_coeffs = std::move(field_coeffs);
  validate_group(g);
  return g;
}

int homogeneous_dimension(const GroupSpec& g) {
  int nu = 0;
  for (std::size_t layer = 0; layer < g.layer_dims.size(); ++layer)
    nu += static_cast<int>(layer + 1) * g.layer_dims[layer];
  return nu;
}

Point dilation(const GroupSpec& g, double t, const Point& x) {
  if (!(t > 0.0)) throw ValidationError("dilation: t must be > 0");
  if (static_cast<int>(x.size()) != g.total_dim())
    throw ValidationError("dilation: point has wrong dimension");
  const std::vector<int> w = g.coordinate_weights();
  Point y(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) y[j] = std::pow(t, w[j]) * x[j];
  return y;
}

double critical_exponent(int nu, double p) {
  if (!(p > 1.0) || !(p < static_cast<double>(nu)))
    throw ValidationError("critical_exponent: need 1 < p < nu (embedding hypothesis)");
  return nu * p / (nu - p);
}

double source_exponent(int nu, double p, double delta) {
  if (!(delta > 0.0) || !(delta < 1.0))
    throw ValidationError("source_exponent: need delta in (0,1)");
  const double q = critical_exponent(nu, p) / (1.0 - delta);
  return q / (q - 1.0);
}

void to_json(nlohmann::json& j, const PolyTerm& t) {
  j = nlohmann::json{{"coef", t.coef}, {"powers", t.powers}};
}

void from_json(const nlohmann::json& j, PolyTerm& t) {
  j.at("coef").get_to(t.coef);
  j.at("powers").get_to(t.powers);
}

void to_json(nlohmann::json& j, const Polynomial& p) { j = p.terms; }

void from_json(const nlohmann::json& j, Polynomial& p) { j.get_to(p.terms); }

void to_json(nlohmann::json& j, const GroupSpec& g) {
  j = nlohmann::json{{"kind", g.kind},
                     {"layer_dims", g.layer_dims},
                     {"field_coeffs", g.field_coeffs},
                     {"hom_dim", homogeneous_dimension(g)}};
}

void from_json(const nlohmann::json& j, GroupSpec& g) {
  j.at("kind").get_to(g.kind);
  j.at("layer_dims").get_to(g.layer_dims);
  j.at("field_coeffs").get_to(g.field_coeffs);
  validate_group(g);
}

}  // namespace splap

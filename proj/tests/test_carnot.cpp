#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "splap/carnot.hpp"
#include "splap/errors.hpp"

using namespace splap;

TEST_CASE("euclidean groups are the one-layer degenerate case") {
  GroupSpec g = make_euclidean(3);
  CHECK(g.total_dim() == 3);
  CHECK(homogeneous_dimension(g) == 3);
  CHECK(g.horizontal_dim() == 3);

  GroupSpec line = make_euclidean(1);
  CHECK(homogeneous_dimension(line) == 1);
  CHECK(line.field_coeffs[0][0].eval({0.37}) == 1.0);

  // identity coefficients at arbitrary points
  GroupSpec g2 = make_euclidean(2);
  Point x{1.5, -2.0};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(g2.field_coeffs[i][j].eval(x) == (i == j ? 1.0 : 0.0));

  CHECK_THROWS_AS(make_euclidean(0), ValidationError);
}

TEST_CASE("heisenberg grading and field coefficients") {
  GroupSpec g = make_heisenberg(1);
  CHECK(g.total_dim() == 3);
  CHECK(homogeneous_dimension(g) == 4);

  GroupSpec g2 = make_heisenberg(2);
  CHECK(g2.total_dim() == 5);
  CHECK(homogeneous_dimension(g2) == 6);

  for (int n = 1; n <= 8; ++n)
    CHECK(homogeneous_dimension(make_heisenberg(n)) == 2 * n + 2);

  // X_1 applied to u(x,y,t) = t picks out the d/dt coefficient: -y/2.
  // Y_1 likewise gives +x/2.
  Point q{1.0, 1.0, 1.0};
  CHECK(g.field_coeffs[0][2].eval(q) == doctest::Approx(-0.5));
  CHECK(g.field_coeffs[1][2].eval(q) == doctest::Approx(0.5));
  Point r{2.0, -3.0, 7.0};
  CHECK(g.field_coeffs[0][2].eval(r) == doctest::Approx(1.5));   // -y/2
  CHECK(g.field_coeffs[1][2].eval(r) == doctest::Approx(1.0));   // +x/2

  CHECK_THROWS_AS(make_heisenberg(0), ValidationError);
}

TEST_CASE("dilations scale coordinates by layer weight") {
  GroupSpec g = make_heisenberg(1);
  Point x{1.0, 1.0, 1.0};
  Point y = dilation(g, 2.0, x);
  CHECK(y[0] == doctest::Approx(2.0));
  CHECK(y[1] == doctest::Approx(2.0));
  CHECK(y[2] == doctest::Approx(4.0));

  Point id = dilation(g, 1.0, x);
  for (int j = 0; j < 3; ++j) CHECK(id[j] == x[j]);

  CHECK_THROWS_AS(dilation(g, 0.0, x), ValidationError);
  CHECK_THROWS_AS(dilation(g, -1.0, x), ValidationError);

  SUBCASE("group law: dilation(s) after dilation(t) equals dilation(s*t)") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-2.0, 2.0), T(0.1, 3.0);
    for (int rep = 0; rep < 50; ++rep) {
      Point z{U(rng), U(rng), U(rng)};
      double s = T(rng), t = T(rng);
      Point a = dilation(g, s, dilation(g, t, z));
      Point b = dilation(g, s * t, z);
      for (int j = 0; j < 3; ++j) CHECK(a[j] == doctest::Approx(b[j]).epsilon(1e-12));
    }
  }

  SUBCASE("measure homogeneity on axis-aligned boxes") {
    // vol(dilated box)/vol(box) = prod_j t^{w_j} = t^nu, checked analytically.
    const double t = 3.0;
    std::vector<double> len{0.7, 1.3, 0.4};
    double ratio = 1.0;
    std::vector<int> w = g.coordinate_weights();
    for (int j = 0; j < 3; ++j) ratio *= std::pow(t, w[j]);
    CHECK(ratio == doctest::Approx(81.0).epsilon(1e-12));  // t^nu, nu=4
    double vol = len[0] * len[1] * len[2], dvol = 1.0;
    for (int j = 0; j < 3; ++j) dvol *= std::pow(t, w[j]) * len[j];
    CHECK(dvol == doctest::Approx(std::pow(t, homogeneous_dimension(g)) * vol)
                      .epsilon(1e-12));
  }
}

TEST_CASE("sobolev exponents") {
  CHECK(critical_exponent(4, 2.0) == doctest::Approx(4.0));
  CHECK(critical_exponent(3, 2.0) == doctest::Approx(6.0));
  CHECK_THROWS_AS(critical_exponent(4, 4.0), ValidationError);
  CHECK_THROWS_AS(critical_exponent(4, 1.0), ValidationError);
  CHECK_THROWS_AS(critical_exponent(4, 0.5), ValidationError);

  CHECK(source_exponent(4, 2.0, 0.5) == doctest::Approx(8.0 / 7.0));
  CHECK(source_exponent(4, 2.0, 0.75) == doctest::Approx(16.0 / 15.0));
  CHECK_THROWS_AS(source_exponent(4, 2.0, 0.0), ValidationError);
  CHECK_THROWS_AS(source_exponent(4, 2.0, 1.0), ValidationError);
  CHECK_THROWS_AS(source_exponent(4, 5.0, 0.5), ValidationError);

  SUBCASE("conjugate identity 1/m + (1-delta)/p* = 1") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> D(0.05, 0.95);
    for (int rep = 0; rep < 100; ++rep) {
      int nu = 3 + static_cast<int>(rng() % 8);
      std::uniform_real_distribution<double> P(1.05, nu - 0.05);
      double p = P(rng), delta = D(rng);
      double m = source_exponent(nu, p, delta);
      double pstar = critical_exponent(nu, p);
      CHECK(1.0 / m + (1.0 - delta) / pstar == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("custom group construction and validation") {
  // layers (3,2,1): nu = 3 + 2*2 + 3*1 = 10
  int N = 6;
  std::vector<std::vector<Polynomial>> fc(3, std::vector<Polynomial>(N));
  for (int i = 0; i < 3; ++i) fc[i][i] = Polynomial::constant(1.0);
  // a second-layer coefficient must be weighted-degree-1, i.e. linear in a
  // first-layer coordinate:
  fc[0][3] = Polynomial::linear(2.0, 1, N);
  GroupSpec g = make_custom({3, 2, 1}, fc);
  CHECK(homogeneous_dimension(g) == 10);
  CHECK(g.total_dim() == 6);

  SUBCASE("rejects thin first layer in a stratified group") {
    std::vector<std::vector<Polynomial>> one(1, std::vector<Polynomial>(2));
    one[0][0] = Polynomial::constant(1.0);
    CHECK_THROWS_AS(make_custom({1, 1}, one), ValidationError);
  }
  SUBCASE("rejects non-homogeneous coefficients") {
    auto bad = fc;
    bad[0][3] = Polynomial::constant(1.0);  // degree 0, needs degree 1
    CHECK_THROWS_AS(make_custom({3, 2, 1}, bad), ValidationError);
    auto bad2 = fc;
    bad2[0][5] = Polynomial::linear(1.0, 0, N);  // degree 1, needs degree 2
    CHECK_THROWS_AS(make_custom({3, 2, 1}, bad2), ValidationError);
  }
  SUBCASE("rejects non-identity first-layer block") {
    auto bad = fc;
    bad[0][1] = Polynomial::constant(0.5);
    CHECK_THROWS_AS(make_custom({3, 2, 1}, bad), ValidationError);
  }
  SUBCASE("rejects empty or degenerate layer dims") {
    CHECK_THROWS_AS(make_custom({}, {}), ValidationError);
    CHECK_THROWS_AS(make_custom({2, 0}, fc), ValidationError);
  }
}

TEST_CASE("group specs round-trip through json") {
  GroupSpec g = make_heisenberg(2);
  nlohmann::json j = g;
  GroupSpec back = j.get<GroupSpec>();
  CHECK(back.kind == g.kind);
  CHECK(back.layer_dims == g.layer_dims);
  REQUIRE(back.field_coeffs.size() == g.field_coeffs.size());
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  for (int rep = 0; rep < 20; ++rep) {
    Point x(5);
    for (double& c : x) c = U(rng);
    for (std::size_t i = 0; i < g.field_coeffs.size(); ++i)
      for (std::size_t k = 0; k < g.field_coeffs[i].size(); ++k)
        CHECK(back.field_coeffs[i][k].eval(x) ==
              doctest::Approx(g.field_coeffs[i][k].eval(x)).epsilon(1e-15));
  }
  CHECK(j.at("hom_dim").get<int>() == 6);
}

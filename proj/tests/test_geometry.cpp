#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cgvf/geometry.hpp"

using namespace cgvf;
using doctest::Approx;

namespace {

std::vector<DesiredSetPtr> all_catalog_sets() {
  return {
      catalog("circle", {10.0}),
      catalog("ellipse", {10.0, 5.0}),
      catalog("bent_infinity", {}),
      catalog("lissajous3d", {std::sqrt(2.0), 4.1, 7.1, 0.1, 0.7, 0.0}),
      catalog("harmonic3d", {225.0, 1.0, 0.0, 225.0, 2.0, M_PI / 2, -20.0, 2.0, 0.0}),
      catalog("sphere", {1.0}),
      catalog("torus", {2.0, 1.0}),
      catalog("flight_torus", {100.0, 5.0, 50.0}),
  };
}

Eigen::VectorXd vec1(double a) {
  Eigen::VectorXd v(1);
  v << a;
  return v;
}

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("phi on and off the unit circle") {
  DesiredSetPtr circle = catalog("circle", {1.0});
  Eigen::VectorXd on(3);
  on << 1.0, 0.0, 0.0;
  CHECK(phi(*circle, on).norm() == 0.0);

  Eigen::VectorXd off(3);
  off << 2.0, 0.0, 0.0;
  Eigen::VectorXd p = phi(*circle, off);
  CHECK(p[0] == Approx(1.0));
  CHECK(p[1] == Approx(0.0));

  Eigen::VectorXd bad(2);
  CHECK_THROWS_AS(phi(*circle, bad), InvalidArgument);
}

TEST_CASE("phi on the sphere at w = 0") {
  DesiredSetPtr sphere = catalog("sphere", {1.0});
  Eigen::VectorXd xi(5);
  xi << 1.0, 0.0, 0.0, 0.0, 0.0;  // f(0,0) = (1,0,0)
  CHECK(phi(*sphere, xi).cwiseAbs().maxCoeff() == Approx(0.0).scale(1.0));
}

TEST_CASE("grad_phi closed forms") {
  DesiredSetPtr circle = catalog("circle", {1.0});
  Eigen::VectorXd xi(3);
  xi << 1.0, 0.0, 0.0;
  Eigen::VectorXd g1 = grad_phi(*circle, xi, 1);
  CHECK(g1[0] == 1.0);
  CHECK(g1[1] == 0.0);
  CHECK(g1[2] == Approx(std::sin(0.0)));  // -f1' = sin w
  Eigen::VectorXd g2 = grad_phi(*circle, xi, 2);
  CHECK(g2[0] == 0.0);
  CHECK(g2[1] == 1.0);
  CHECK(g2[2] == Approx(-std::cos(0.0)));

  DesiredSetPtr torus = catalog("torus", {2.0, 1.0});
  Eigen::VectorXd xs(5);
  xs << 3.0, 0.0, 0.0, 0.0, 0.0;
  Eigen::VectorXd g3 = grad_phi(*torus, xs, 3);
  CHECK(g3[0] == 0.0);
  CHECK(g3[1] == 0.0);
  CHECK(g3[2] == 1.0);
  CHECK(g3[3] == Approx(-1.0));  // -d(sin w1)/dw1 at 0
  CHECK(g3[4] == Approx(0.0));

  CHECK_THROWS_AS(grad_phi(*circle, xi, 0), InvalidArgument);
  CHECK_THROWS_AS(grad_phi(*circle, xi, 3), InvalidArgument);
}

TEST_CASE("catalog formulas at sample parameters") {
  DesiredSetPtr bent = catalog("bent_infinity", {});
  const double w = 0.37;
  Eigen::VectorXd f = bent->eval(vec1(w));
  CHECK(f[0] == Approx(15.0 * std::sin(2 * w)));
  CHECK(f[1] ==
        Approx(30.0 * std::sin(w) *
               std::sqrt(0.5 * (1.0 - 0.5 * std::sin(w) * std::sin(w)))));
  CHECK(f[2] == Approx(5.0 + 5.0 * std::cos(2 * w) - 2.0));

  DesiredSetPtr circle = catalog("circle", {10.0});
  Eigen::VectorXd c = circle->eval(vec1(w));
  CHECK(c[0] == Approx(10.0 * std::cos(w)));
  CHECK(c[1] == Approx(10.0 * std::sin(w)));

  DesiredSetPtr torus = catalog("torus", {2.0, 1.0});
  Eigen::VectorXd t = torus->eval(vec2(0.3, -1.2));
  CHECK(t[0] == Approx((2.0 + std::cos(0.3)) * std::cos(-1.2)));
  CHECK(t[1] == Approx((2.0 + std::cos(0.3)) * std::sin(-1.2)));
  CHECK(t[2] == Approx(std::sin(0.3)));

  DesiredSetPtr flight = catalog("flight_torus", {100.0, 5.0, 50.0});
  Eigen::VectorXd ft = flight->eval(vec2(0.8, 0.25));
  CHECK(ft[0] == Approx((100.0 + 5.0 * std::cos(0.25)) * std::cos(0.8)));
  CHECK(ft[1] == Approx((100.0 + 5.0 * std::cos(0.25)) * std::sin(0.8)));
  CHECK(ft[2] == Approx(5.0 * std::sin(0.25) + 50.0));

  CHECK_THROWS_AS(catalog("klein_bottle", {}), InvalidArgument);
  CHECK_THROWS_AS(catalog("circle", {1.0, 2.0}), InvalidArgument);
}

TEST_CASE("lift lands on the set") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> uni(-6.0, 6.0);
  for (const DesiredSetPtr& set : all_catalog_sets()) {
    for (int trial = 0; trial < 25; ++trial) {
      Eigen::VectorXd w(set->param_count());
      for (int m = 0; m < set->param_count(); ++m) w[m] = uni(rng);
      CHECK(phi(*set, lift(*set, w)).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("analytic partials match finite differences everywhere sampled") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> uni(-8.0, 8.0);
  for (const DesiredSetPtr& set : all_catalog_sets()) {
    for (int trial = 0; trial < 100; ++trial) {
      Eigen::VectorXd w(set->param_count());
      for (int m = 0; m < set->param_count(); ++m) w[m] = uni(rng);
      // scale-aware bound: harmonic3d has values ~225
      const double scale = set->eval(w).cwiseAbs().maxCoeff() + 1.0;
      CHECK(check_derivatives(*set, w, 1e-5) < 1e-6 * scale);
    }
  }
}

TEST_CASE("spec examples for check_derivatives") {
  CHECK(check_derivatives(*catalog("circle", {1.0}), vec1(0.3), 1e-5) < 1e-6);
  CHECK(check_derivatives(*catalog("torus", {2.0, 1.0}), vec2(0.1, 0.2), 1e-5) < 1e-6);
  DesiredSetPtr line = make_expression_set({"w", "2*w"}, 1);
  CHECK(check_derivatives(*line, vec1(-3.7), 1e-4) == Approx(0.0).scale(1.0));
  CHECK_THROWS_AS(check_derivatives(*line, vec1(0.0), 0.0), InvalidArgument);
}

TEST_CASE("mixed second partials are symmetric for surfaces") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> uni(-4.0, 4.0);
  for (const char* name : {"sphere", "torus", "flight_torus"}) {
    DesiredSetPtr set = name == std::string("sphere")
                            ? catalog(name, {1.0})
                            : (name == std::string("torus")
                                   ? catalog(name, {2.0, 1.0})
                                   : catalog(name, {100.0, 5.0, 50.0}));
    for (int trial = 0; trial < 100; ++trial) {
      Eigen::VectorXd w = vec2(uni(rng), uni(rng));
      Eigen::VectorXd d12 = set->second_partial(w, 1, 2);
      Eigen::VectorXd d21 = set->second_partial(w, 2, 1);
      CHECK((d12 - d21).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("expression sets behave like catalog twins") {
  DesiredSetPtr expr = make_expression_set(
      {"15*sin(2*w)", "30*sin(w)*sqrt(0.5*(1 - 0.5*sin(w)^2))", "5 + 5*cos(2*w) - 2"},
      1);
  DesiredSetPtr cat = catalog("bent_infinity", {});
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> uni(-7.0, 7.0);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd w = vec1(uni(rng));
    CHECK((expr->eval(w) - cat->eval(w)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((expr->first_partials(w) - cat->first_partials(w)).cwiseAbs().maxCoeff() <
          1e-10);
    CHECK((expr->second_partials(w) - cat->second_partials(w)).cwiseAbs().maxCoeff() <
          1e-9);
  }
  CHECK(expr->spec_string().rfind("expr: ", 0) == 0);
  CHECK(cat->spec_string() == "bent_infinity()");
}

TEST_CASE("gain validation") {
  GainSet good{(Eigen::VectorXd(2) << 1.0, 2.0).finished()};
  CHECK_NOTHROW(good.validate(2));
  GainSet zero{(Eigen::VectorXd(2) << 1.0, 0.0).finished()};
  CHECK_THROWS_AS(zero.validate(2), InvalidArgument);
  CHECK_THROWS_AS(good.validate(3), InvalidArgument);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cgvf/guidance.hpp"

using namespace cgvf;
using doctest::Approx;

namespace {

std::mt19937_64 rng(211);

Eigen::VectorXd random_vec(int size, double scale) {
  std::uniform_real_distribution<double> uni(-scale, scale);
  Eigen::VectorXd v(size);
  for (int i = 0; i < size; ++i) v[i] = uni(rng);
  return v;
}

}  // namespace

TEST_CASE("angle wrapping") {
  CHECK(wrap_angle(0.3) == Approx(0.3));
  CHECK(wrap_angle(M_PI) == Approx(M_PI));
  CHECK(wrap_angle(-M_PI) == Approx(M_PI));  // (-pi, pi]
  CHECK(wrap_angle(3 * M_PI) == Approx(M_PI));
  CHECK(wrap_angle(-0.5 + 6 * M_PI) == Approx(-0.5));
}

TEST_CASE("planar component") {
  Eigen::VectorXd chi(5);
  chi << 3.0, 4.0, 1.0, -2.0, 0.5;
  PlanarComponent p = planar_component(chi, 1e-6);
  CHECK(p.unit[0] == Approx(0.6));
  CHECK(p.unit[1] == Approx(0.8));
  CHECK(p.planar_norm == Approx(5.0));
  CHECK(p.chi_p[0] == Approx(3.0 / chi.norm()));
  CHECK(p.chi_p[1] == Approx(4.0 / chi.norm()));

  Eigen::VectorXd axis(4);
  axis << 1.0, 0.0, 0.0, 0.0;
  CHECK(planar_component(axis, 1e-6).unit[0] == Approx(1.0));
  CHECK(planar_component(axis, 1e-6).unit[1] == Approx(0.0));

  Eigen::VectorXd tiny(4);
  const double eps = 5e-4;
  tiny << eps, eps, 1.0, 1.0;  // eps^2 + eps^2 = 5e-7 <= 1e-6
  CHECK_THROWS_AS(planar_component(tiny, 1e-6), SingularHeading);
}

TEST_CASE("saturation") {
  CHECK(saturate(0.3, -0.5, 0.5) == 0.3);
  CHECK(saturate(1.5, -0.5, 0.5) == 0.5);
  CHECK(saturate(-1.5, -0.5, 0.5) == -0.5);
  CHECK(saturate(-0.5, -0.5, 0.5) == -0.5);
  CHECK_THROWS_AS(saturate(0.0, 1.0, -1.0), InvalidArgument);
}

TEST_CASE("signed angle") {
  const Eigen::Matrix2d e90 = (Eigen::Matrix2d() << 0, -1, 1, 0).finished();
  for (int trial = 0; trial < 50; ++trial) {
    const double phase = std::uniform_real_distribution<double>(-M_PI, M_PI)(rng);
    Eigen::Vector2d unit(std::cos(phase), std::sin(phase));
    CHECK(signed_angle(unit, unit).sigma == Approx(0.0).scale(1.0));
    CHECK(signed_angle(Eigen::Vector2d(e90 * unit), unit).sigma == Approx(M_PI / 2));
    CHECK(signed_angle(Eigen::Vector2d(-unit), unit).sigma == Approx(M_PI));
  }
  // directed from the field vector to the heading
  Eigen::Vector2d x(1.0, 0.0);
  Eigen::Vector2d tilted(std::cos(0.4), std::sin(0.4));
  CHECK(signed_angle(tilted, x).sigma == Approx(0.4));
  CHECK(signed_angle(x, tilted).sigma == Approx(-0.4));
}

TEST_CASE("rotation rate of the field orientation") {
  // parallel change leaves the orientation still
  Eigen::Vector2d p(2.0, 1.0);
  CHECK(theta_dot_desired(p, 3.0 * p) == Approx(0.0).scale(1.0));

  // rigid rotation at rate omega is recovered exactly, any scaling
  for (int trial = 0; trial < 50; ++trial) {
    const double omega = std::uniform_real_distribution<double>(-3.0, 3.0)(rng);
    const double scale_rate = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
    Eigen::Vector2d chi_p = random_vec(2, 2.0);
    if (chi_p.norm() < 0.1) chi_p[0] += 1.0;
    const Eigen::Matrix2d e90 = (Eigen::Matrix2d() << 0, -1, 1, 0).finished();
    Eigen::Vector2d chi_p_dot = omega * e90 * chi_p + scale_rate * chi_p;
    CHECK(theta_dot_desired(chi_p, chi_p_dot) == Approx(omega).epsilon(1e-12));
  }

  // finite differences of the orientation angle along a synthetic path
  auto chi_of_t = [](double t) {
    return Eigen::Vector2d(1.0 + 0.3 * std::sin(2 * t), 0.5 * std::cos(3 * t) - 0.1);
  };
  const double h = 1e-6;
  for (double t : {0.0, 0.4, 1.1, 2.9}) {
    Eigen::Vector2d chi_p = chi_of_t(t);
    Eigen::Vector2d chi_dot = (chi_of_t(t + h) - chi_of_t(t - h)) / (2 * h);
    const double fd = (std::atan2(chi_of_t(t + h)[1], chi_of_t(t + h)[0]) -
                       std::atan2(chi_of_t(t - h)[1], chi_of_t(t - h)[0])) /
                      (2 * h);
    CHECK(theta_dot_desired(chi_p, chi_dot) == Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("gain bound from the saturation margins") {
  CHECK(corollary1_gain_bound(0.4, -1.0, 1.0) == Approx(0.6));
  CHECK(corollary1_gain_bound(0.5, -2.0, 1.0) == Approx(0.5));
  CHECK(corollary1_gain_bound(0.0, -0.7, 1.3) == Approx(0.7));
  CHECK_THROWS_AS(corollary1_gain_bound(1.0, -1.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(corollary1_gain_bound(-0.1, -1.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(corollary1_gain_bound(0.5, 0.5, 1.0), InvalidArgument);
}

TEST_CASE("step inputs partition the partially normalized field") {
  GuidanceConfig cfg;
  cfg.v = 1.0;
  Eigen::VectorXd chi(5);
  chi << 3.0, 4.0, 5.0, 1.0, 2.0;
  DubinsInputs in = dubins_step_inputs(chi, Eigen::Vector2d::Zero(), 0.0, cfg, 2);
  CHECK(in.u_z == Approx(1.0));
  CHECK(in.w_dot[0] == Approx(0.2));
  CHECK(in.w_dot[1] == Approx(0.4));

  // aligned heading and a static field give zero turn rate
  GuidanceConfig cfg2;
  cfg2.v = 15.0;
  Eigen::VectorXd ahead(4);
  ahead << 2.0, 0.0, 0.0, 1.0;
  DubinsInputs aligned = dubins_step_inputs(ahead, Eigen::Vector2d::Zero(), 0.0, cfg2, 1);
  CHECK(aligned.u_theta == Approx(0.0).scale(1.0));
  CHECK_FALSE(aligned.saturated);

  // demanded rate beyond the bound clamps to it
  Eigen::Vector2d huge(0.0, 100.0);  // drives theta_dot_d
  DubinsInputs clamped = dubins_step_inputs(ahead, huge, 0.0, cfg2, 1);
  CHECK(clamped.u_theta == cfg2.sat_b);
  CHECK(clamped.saturated);
  CHECK(clamped.u_theta_raw > cfg2.sat_b);
}

TEST_CASE("field jacobian matches finite differences, one robot") {
  DesiredSetPtr torus = catalog("torus", {2.0, 1.0});
  FieldConfig cfg;
  cfg.k_phi = (Eigen::VectorXd(3) << 0.7, 1.2, 2.1).finished();
  cfg.kc1 = 3.0;
  cfg.kc2 = 5.0;
  cfg.desired_speeds = {{-1.0, 0.5}};

  const double h = 1e-6;
  for (int trial = 0; trial < 60; ++trial) {
    Eigen::VectorXd xi = random_vec(5, 3.0);
    Eigen::MatrixXd jac = field_jacobian_own(*torus, cfg, xi);
    for (int col = 0; col < 5; ++col) {
      Eigen::VectorXd xp = xi, xm = xi;
      xp[col] += h;
      xm[col] -= h;
      Eigen::VectorXd fd = (surface_field(*torus, cfg, xp).total() -
                            surface_field(*torus, cfg, xm).total()) /
                           (2 * h);
      CHECK((jac.col(col) - fd).cwiseAbs().maxCoeff() < 1e-6);
    }
  }

  DesiredSetPtr bent = catalog("bent_infinity", {});
  FieldConfig pcfg;
  pcfg.k_phi = (Eigen::VectorXd(3) << 1.0, 0.5, 1.5).finished();
  for (int trial = 0; trial < 60; ++trial) {
    Eigen::VectorXd xi = random_vec(4, 10.0);
    Eigen::MatrixXd jac = field_jacobian_own(*bent, pcfg, xi);
    for (int col = 0; col < 4; ++col) {
      Eigen::VectorXd xp = xi, xm = xi;
      xp[col] += h;
      xm[col] -= h;
      Eigen::VectorXd fd =
          (path_field(*bent, pcfg, xp).total() - path_field(*bent, pcfg, xm).total()) /
          (2 * h);
      CHECK((jac.col(col) - fd).cwiseAbs().maxCoeff() < 2e-5);
    }
  }
}

TEST_CASE("planar rate chain matches finite differences with coordination") {
  // one robot of a 4-cycle: neighbors 2 and 4, robot 3 is unseen
  DesiredSetPtr sphere = catalog("sphere", {1.0});
  FieldConfig cfg;
  cfg.k_phi = (Eigen::VectorXd(3) << 1.0, 1.3, 0.8).finished();
  cfg.kc1 = 2.0;
  cfg.kc2 = 1.5;
  cfg.desired_speeds = {{0.4, 1.0}};

  // deltas to neighbors fixed at zero for this check
  auto chi_total = [&](const Eigen::VectorXd& xi, const Eigen::MatrixXd& w_all) {
    Eigen::VectorXd c(2);
    for (int m = 0; m < 2; ++m) {
      c[m] = -(xi[3 + m] - w_all(m, 1)) - (xi[3 + m] - w_all(m, 3));
    }
    return combined_field(*sphere, cfg, xi, c).total();
  };

  const double h = 1e-6;
  for (int trial = 0; trial < 40; ++trial) {
    Eigen::VectorXd xi = random_vec(5, 2.0);
    Eigen::MatrixXd w_all = Eigen::MatrixXd::Random(2, 4);
    w_all.col(0) = xi.tail(2);
    Eigen::VectorXd x_dot = random_vec(3, 2.0);
    Eigen::MatrixXd w_dot_all = Eigen::MatrixXd::Random(2, 4);
    w_dot_all.col(0) = random_vec(2, 2.0);

    // L row of robot 1 in C4: 2 w1 - w2 - w4
    Eigen::VectorXd l_w_dot =
        2.0 * w_dot_all.col(0) - w_dot_all.col(1) - w_dot_all.col(3);

    Eigen::VectorXd chi = chi_total(xi, w_all);
    Eigen::Vector2d chain =
        chi_p_dot_chain(*sphere, cfg, xi, chi, x_dot, w_dot_all.col(0), l_w_dot);

    auto chi_p_of = [&](double step_sign) {
      Eigen::VectorXd xi2 = xi;
      xi2.head(3) += step_sign * h * x_dot;
      xi2.tail(2) += step_sign * h * w_dot_all.col(0);
      Eigen::MatrixXd w2 = w_all + step_sign * h * w_dot_all;
      w2.col(0) = xi2.tail(2);
      Eigen::VectorXd chi2 = chi_total(xi2, w2);
      return Eigen::Vector2d(chi2.head<2>() / chi2.norm());
    };
    Eigen::Vector2d fd = (chi_p_of(1.0) - chi_p_of(-1.0)) / (2 * h);
    CHECK((chain - fd).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("frozen robot has a still field orientation") {
  DesiredSetPtr torus = catalog("torus", {2.0, 1.0});
  FieldConfig cfg;
  cfg.k_phi = Eigen::VectorXd::Ones(3);
  cfg.kc1 = cfg.kc2 = 1.0;
  cfg.desired_speeds = {{-1.0, -1.0}};
  Eigen::VectorXd xi = random_vec(5, 2.0);
  Eigen::VectorXd chi = surface_field(*torus, cfg, xi).total();
  Eigen::Vector2d out = chi_p_dot_chain(*torus, cfg, xi, chi, Eigen::Vector3d::Zero(),
                                        Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero());
  CHECK(out.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("dubins state assembly and config validation") {
  DubinsState s;
  s.position << 1.0, 2.0, 3.0;
  s.heading = 0.7;
  s.virtual_coords = (Eigen::VectorXd(2) << 4.0, 5.0).finished();
  Eigen::VectorXd xi = s.generalized();
  REQUIRE(xi.size() == 5);
  CHECK(xi[0] == 1.0);
  CHECK(xi[4] == 5.0);

  GuidanceConfig bad;
  bad.v = 0.0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad.v = 15.0;
  bad.sat_a = 0.1;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad.sat_a = -0.5;
  bad.k_theta = 0.0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

#include "cgvf/guidance.hpp"

#include <cmath>

namespace cgvf {

namespace {
const Eigen::Matrix2d kRot90 = (Eigen::Matrix2d() << 0.0, -1.0, 1.0, 0.0).finished();
}

void GuidanceConfig::validate() const {
  if (!(v > 0.0)) throw InvalidArgument("guidance airspeed v must be positive");
  if (!(k_theta > 0.0)) throw InvalidArgument("guidance gain k_theta must be positive");
  if (!(sat_a < 0.0 && sat_b > 0.0)) {
    throw InvalidArgument("saturation bounds must satisfy a < 0 < b");
  }
  if (!(gamma_floor > 0.0)) throw InvalidArgument("gamma_floor must be positive");
}

Eigen::VectorXd DubinsState::generalized() const {
  Eigen::VectorXd xi(3 + virtual_coords.size());
  xi.head(3) = position;
  xi.tail(virtual_coords.size()) = virtual_coords;
  return xi;
}

double wrap_angle(double theta) {
  double t = std::remainder(theta, 2.0 * M_PI);
  if (t <= -M_PI) t += 2.0 * M_PI;
  return t;
}

PlanarComponent planar_component(const Eigen::VectorXd& chi, double gamma_floor) {
  const double planar_sq = chi[0] * chi[0] + chi[1] * chi[1];
  if (!(planar_sq > gamma_floor)) {
    throw SingularHeading("planar field norm^2 " + std::to_string(planar_sq) +
                          " at or below gamma floor " + std::to_string(gamma_floor));
  }
  PlanarComponent out;
  out.planar_norm = std::sqrt(planar_sq);
  out.chi_p = chi.head<2>() / chi.norm();
  out.unit = chi.head<2>() / out.planar_norm;
  return out;
}

double saturate(double x, double a, double b) {
  if (!(a < b)) throw InvalidArgument("saturation needs a < b");
  return x < a ? a : (x > b ? b : x);
}

double theta_dot_desired(const Eigen::Vector2d& chi_p,
                         const Eigen::Vector2d& chi_p_dot) {
  const double norm = chi_p.norm();
  if (norm == 0.0) throw InvalidArgument("theta_dot_desired: zero planar vector");
  const Eigen::Vector2d unit = chi_p / norm;
  return -unit.dot(kRot90 * chi_p_dot) / norm;
}

SignedAngle signed_angle(const Eigen::Vector2d& h_unit,
                         const Eigen::Vector2d& chi_p_unit) {
  const double s = h_unit.dot(kRot90 * chi_p_unit);
  const double c = h_unit.dot(chi_p_unit);
  double angle = std::atan2(s, c);
  if (angle <= -M_PI) angle = M_PI;
  return {angle};
}

double corollary1_gain_bound(double d, double a, double b) {
  if (!(a < 0.0 && b > 0.0)) throw InvalidArgument("bounds must satisfy a < 0 < b");
  if (!(d >= 0.0 && d < std::min(-a, b))) {
    throw InvalidArgument("no valid gain: need 0 <= d < min(-a, b)");
  }
  return std::min(-a - d, b - d);
}

Eigen::MatrixXd field_jacobian_own(const DesiredSet& set, const FieldConfig& cfg,
                                   const Eigen::VectorXd& xi) {
  const int n = set.ambient_dim();
  const int k = set.param_count();
  if (xi.size() != n + k) {
    throw InvalidArgument("field_jacobian_own state size mismatch");
  }
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  Eigen::VectorXd f(n);
  Eigen::MatrixXd d1(n, k), d2(n, k * (k + 1) / 2);
  set.jets(xi.tail(k), &f, &d1, &d2);
  const Eigen::VectorXd ph = xi.head(n) - f;
  const Eigen::VectorXd& kv = cfg.k_phi;

  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n + k, n + k);
  // physical columns
  for (int l = 0; l < n; ++l) {
    jac(l, l) = -kv[l];
    for (int m = 0; m < k; ++m) jac(n + m, l) = kv[l] * d1(l, m);
  }

  if (k == 1) {
    for (int j = 0; j < n; ++j) {
      jac(j, n) = sign * d2(j, 0) + kv[j] * d1(j, 0);
    }
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
      acc += kv[j] * (ph[j] * d2(j, 0) - d1(j, 0) * d1(j, 0));
    }
    jac(n, n) = acc;
    return jac;
  }

  const auto [v1, v2] = cfg.extra_tail(n);
  // second-partial columns: 0 -> (w1,w1), 1 -> (w1,w2), 2 -> (w2,w2)
  for (int j = 0; j < n; ++j) {
    jac(j, n) = sign * (v2 * d2(j, 0) - v1 * d2(j, 1)) + kv[j] * d1(j, 0);
    jac(j, n + 1) = sign * (v2 * d2(j, 1) - v1 * d2(j, 2)) + kv[j] * d1(j, 1);
  }
  double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;
  for (int j = 0; j < n; ++j) {
    a11 += kv[j] * (ph[j] * d2(j, 0) - d1(j, 0) * d1(j, 0));
    a12 += kv[j] * (ph[j] * d2(j, 1) - d1(j, 0) * d1(j, 1));
    a21 += kv[j] * (ph[j] * d2(j, 1) - d1(j, 0) * d1(j, 1));
    a22 += kv[j] * (ph[j] * d2(j, 2) - d1(j, 1) * d1(j, 1));
  }
  jac(n, n) = a11;
  jac(n, n + 1) = a12;
  jac(n + 1, n) = a21;
  jac(n + 1, n + 1) = a22;
  return jac;
}

Eigen::Vector2d chi_p_dot_chain(const DesiredSet& set, const FieldConfig& cfg,
                                const Eigen::VectorXd& xi,
                                const Eigen::VectorXd& chi_total,
                                const Eigen::VectorXd& x_dot,
                                const Eigen::VectorXd& w_dot_own,
                                const Eigen::VectorXd& l_w_dot) {
  const int n = set.ambient_dim();
  const int k = set.param_count();
  if (x_dot.size() != n || w_dot_own.size() != k || l_w_dot.size() != k) {
    throw InvalidArgument("chi_p_dot_chain rate dimensions mismatch");
  }
  Eigen::VectorXd zeta_dot_own(n + k);
  zeta_dot_own.head(n) = x_dot;
  zeta_dot_own.tail(k) = w_dot_own;

  Eigen::VectorXd chi_dot = field_jacobian_own(set, cfg, xi) * zeta_dot_own;
  chi_dot[n] -= cfg.kc1 * l_w_dot[0];
  if (k == 2) chi_dot[n + 1] -= cfg.kc2 * l_w_dot[1];

  const double norm = chi_total.norm();
  const Eigen::VectorXd unit = chi_total / norm;
  const Eigen::VectorXd normalized_dot = (chi_dot - unit * unit.dot(chi_dot)) / norm;
  return normalized_dot.head<2>();
}

DubinsInputs dubins_step_inputs(const Eigen::VectorXd& chi_total,
                                const Eigen::Vector2d& chi_p_dot, double heading,
                                const GuidanceConfig& cfg, int k) {
  const PlanarComponent planar = planar_component(chi_total, cfg.gamma_floor);
  const Eigen::Vector2d h(std::cos(heading), std::sin(heading));

  DubinsInputs out;
  out.theta_dot_d = theta_dot_desired(planar.chi_p, chi_p_dot);
  out.sigma = signed_angle(h, planar.unit).sigma;
  out.u_theta_raw = out.theta_dot_d - cfg.k_theta * h.dot(kRot90 * planar.unit);
  out.u_theta = saturate(out.u_theta_raw, cfg.sat_a, cfg.sat_b);
  out.saturated = out.u_theta != out.u_theta_raw;
  out.u_z = cfg.v * chi_total[2] / planar.planar_norm;
  out.w_dot = cfg.v * chi_total.tail(k) / planar.planar_norm;
  return out;
}

}  // namespace cgvf

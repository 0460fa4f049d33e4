#pragma once

#include <Eigen/Dense>

#include "cgvf/field.hpp"
#include "cgvf/geometry.hpp"

namespace cgvf {

/// Saturated heading-controller parameters for the Dubins-car-like 3D
/// model. The planar field norm must stay above gamma_floor for the
/// control law to be defined; the run aborts if it does not.
struct GuidanceConfig {
  double v = 15.0;        // constant airspeed, m/s
  double k_theta = 1.0;   // heading gain
  double sat_a = -0.5;    // lower angular-rate bound, rad/s (< 0)
  double sat_b = 0.5;     // upper angular-rate bound, rad/s (> 0)
  double gamma_floor = 1e-6;  // minimum allowed chi_1^2 + chi_2^2

  void validate() const;
};

/// Dubins vehicle state: 3D position, yaw, and 1 or 2 virtual coordinates.
struct DubinsState {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  double heading = 0.0;  // normalized to (-pi, pi]
  Eigen::VectorXd virtual_coords;

  /// Generalized coordinate (position, w) used for field evaluation.
  Eigen::VectorXd generalized() const;
};

/// Wraps an angle to (-pi, pi].
double wrap_angle(double theta);

/// Heading error directed from the field's planar orientation to the
/// vehicle heading.
struct SignedAngle {
  double sigma = 0.0;  // radians in (-pi, pi]
};

/// Planar part of the field: chi_p = first two entries of the normalized
/// field, and its own normalization (chi_1, chi_2)/sqrt(chi_1^2+chi_2^2).
/// Throws SingularHeading if chi_1^2 + chi_2^2 <= gamma_floor.
struct PlanarComponent {
  Eigen::Vector2d chi_p;
  Eigen::Vector2d unit;
  double planar_norm = 0.0;  // sqrt(chi_1^2 + chi_2^2), unnormalized
};
PlanarComponent planar_component(const Eigen::VectorXd& chi, double gamma_floor);

/// Clamp to [a, b].
double saturate(double x, double a, double b);

/// Rotation rate of the field's planar orientation:
///   theta_dot_d = -chihat_p^T E chi_p_dot / |chi_p|.
double theta_dot_desired(const Eigen::Vector2d& chi_p,
                         const Eigen::Vector2d& chi_p_dot);

/// sigma = atan2(h^T E chihat_p, h^T chihat_p) for unit inputs.
SignedAngle signed_angle(const Eigen::Vector2d& h_unit,
                         const Eigen::Vector2d& chi_p_unit);

/// Largest heading gain for which Corollary-style reasoning rules out
/// saturation: min(-a - d, b - d), valid when 0 < d < min(-a, b).
double corollary1_gain_bound(double d, double a, double b);

/// Jacobian of the uncoordinated field with respect to the robot's own
/// generalized coordinate (x, w), (n+k) x (n+k). Closed-form assembly
/// from the set's first and second partials.
Eigen::MatrixXd field_jacobian_own(const DesiredSet& set, const FieldConfig& cfg,
                                   const Eigen::VectorXd& xi);

/// Chain rule for the planar orientation rate:
///   chi_p_dot = F (I - chihat chihat^T) J(chi) zeta_dot / |chi|
/// where zeta_dot stacks the robot's own physical velocity and the
/// parametric rates of all robots. Distributedness enters through
/// l_w_dot, the i-th row of L applied to the stacked rates per parameter
/// (only own and neighbor rates contribute).
Eigen::Vector2d chi_p_dot_chain(const DesiredSet& set, const FieldConfig& cfg,
                                const Eigen::VectorXd& xi,
                                const Eigen::VectorXd& chi_total,
                                const Eigen::VectorXd& x_dot,
                                const Eigen::VectorXd& w_dot_own,
                                const Eigen::VectorXd& l_w_dot);

/// All control inputs for one Dubins step. u_theta is the saturated
/// angular rate; u_z and the parametric rates come from equating the
/// non-planar generalized velocity with the partially normalized field.
struct DubinsInputs {
  double u_theta = 0.0;
  double u_theta_raw = 0.0;  // before saturation
  double u_z = 0.0;
  Eigen::VectorXd w_dot;  // k parametric rates
  double theta_dot_d = 0.0;
  double sigma = 0.0;
  bool saturated = false;
};
DubinsInputs dubins_step_inputs(const Eigen::VectorXd& chi_total,
                                const Eigen::Vector2d& chi_p_dot, double heading,
                                const GuidanceConfig& cfg, int k);

}  // namespace cgvf

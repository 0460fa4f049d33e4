#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "cgvf/geometry.hpp"

namespace cgvf {

/// Per-robot field parameters. For surfaces, the extra wedge vector is
/// always the zero-prefixed one derived from the desired parametric
/// speeds; an arbitrary extra vector is not accepted.
struct FieldConfig {
  Eigen::VectorXd k_phi;  // n positive gains
  double kc1 = 0.0;       // coordination weight (k_c for paths)
  double kc2 = 0.0;       // second-parameter weight, surfaces only
  std::optional<std::pair<double, double>> desired_speeds;  // (w1*, w2*)

  /// Tail (v_{n+1}, v_{n+2}) of the extra vector chosen so the on-set
  /// virtual rates equal the desired speeds:
  ///   v_{n+1} = (-1)^{n+1} wdot2*,  v_{n+2} = (-1)^n wdot1*.
  std::pair<double, double> extra_tail(int n) const;
};

/// Field evaluated at one generalized state, split for diagnostics:
/// total = propagation + convergence + coordination, with
/// propagation orthogonal to convergence by construction.
struct FieldValue {
  Eigen::VectorXd propagation;
  Eigen::VectorXd convergence;
  Eigen::VectorXd coordination;

  Eigen::VectorXd total() const {
    return propagation + convergence + coordination;
  }
};

/// Generalized cross product of m vectors in R^{m+1}: the formal
/// determinant with the basis vectors in the first row, so the result is
/// orthogonal to every input and matches the ordinary cross product for
/// m = 2.
Eigen::VectorXd wedge(const std::vector<Eigen::VectorXd>& vectors);

/// Path-following field (k = 1):
///   component j:   (-1)^n f_j' - k_j phi_j
///   component n+1: (-1)^n + sum_l k_l phi_l f_l'
FieldValue path_field(const DesiredSet& set, const FieldConfig& cfg,
                      const Eigen::VectorXd& xi);

/// Surface-navigation field (k = 2) with the zero-prefixed extra vector:
///   component j:   (-1)^n (v_{n+2} d1f_j - v_{n+1} d2f_j) - k_j phi_j
///   component n+1: (-1)^n v_{n+2}     + sum k_j phi_j d1f_j
///   component n+2: (-1)^{n+1} v_{n+1} + sum k_j phi_j d2f_j
/// Throws if the extra-vector tail vanishes (no propagation direction).
FieldValue surface_field(const DesiredSet& set, const FieldConfig& cfg,
                         const Eigen::VectorXd& xi);

/// Zeros in the physical slots, the consensus values in the virtual ones.
Eigen::VectorXd coordination_term(int n, const Eigen::VectorXd& c_values);

/// Weighted sum of the path/surface field and the coordination
/// component(s): kc1 * c1 (and kc2 * c2 for surfaces) enter only the
/// virtual slots.
FieldValue combined_field(const DesiredSet& set, const FieldConfig& cfg,
                          const Eigen::VectorXd& xi,
                          const Eigen::VectorXd& c_values);

/// Guaranteed lower bound on the norm of the uncoordinated field:
/// 1 for paths, sqrt(v_{n+1}^2 + v_{n+2}^2) for surfaces.
double field_norm_floor(const FieldConfig& cfg, int n, int k);

}  // namespace cgvf

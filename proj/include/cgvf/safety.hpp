#pragma once

#include <Eigen/Dense>
#include <vector>

#include "cgvf/errors.hpp"

namespace cgvf {

struct SafetyConfig {
  bool enabled = false;
  double R = 1.0;                 // safety distance
  double alpha = 1.0;             // barrier gain
  double activation_scale = 1.0;  // rho >= 1: constraints engage within rho*R
  double qp_tolerance = 1e-9;
  int qp_max_iters = 20000;

  void validate() const;
};

/// Pairwise barrier values and per-robot modification stats for one
/// snapshot of the multi-robot state.
struct SafetyReport {
  struct Pair {
    int i = 0, j = 0;  // 1-based, i < j
    double h = 0.0;
  };
  std::vector<Pair> pairs;
  std::vector<int> active_constraints;          // per robot
  std::vector<double> modification_magnitude;   // per robot, |chi~ - chi|
  bool violation = false;
  double h_min = std::numeric_limits<double>::infinity();
};

/// h_ij = |P(xi_i - xi_j)|^2 - R^2 where P keeps the first n (physical)
/// slots and zeroes the k virtual ones.
double h_pair(const Eigen::VectorXd& xi_i, const Eigen::VectorXd& xi_j, double R,
              int k);

/// Euclidean projection of x0 onto {x : A x <= b}. Exact active-set
/// enumeration for up to max_enumerate rows, cyclic projection with
/// Dykstra corrections beyond that.
struct ProjectionResult {
  Eigen::VectorXd x;
  bool feasible = true;
  int active = 0;
};
ProjectionResult project_to_halfspaces(const Eigen::VectorXd& x0,
                                       const Eigen::MatrixXd& A,
                                       const Eigen::VectorXd& b, double tol = 1e-9,
                                       int max_iters = 20000, int max_enumerate = 6);

/// Distributed barrier QP for one robot: projects the nominal field onto
///   (xi_j - xi_i)^T P chi~ <= (alpha/4) h_ij^3   for every j in range.
/// Virtual components pass through untouched. If the rows conflict
/// (possible only from an unsafe start, h < 0), the physical velocity is
/// zeroed and the result flagged infeasible.
struct QpResult {
  Eigen::VectorXd chi_tilde;
  bool modified = false;
  bool infeasible = false;
  int active_constraints = 0;
};
QpResult qp2_solve(const Eigen::VectorXd& xi_i, const Eigen::VectorXd& nominal_i,
                   const std::vector<Eigen::VectorXd>& neighbors_in_range,
                   const SafetyConfig& cfg, int k);

/// Centralized joint projection with the pairwise constraint
///   (xi_j - xi_i)^T P chi~_i + (xi_i - xi_j)^T P chi~_j <= (alpha/2) h_ij^3.
/// Couples all robots; kept as a reference for the distributed solver.
std::vector<QpResult> qp1_solve(const std::vector<Eigen::VectorXd>& states,
                                const std::vector<Eigen::VectorXd>& nominals,
                                const SafetyConfig& cfg, int k);

/// Robots within activation range of robot i (indices into `states`,
/// 0-based, excluding i itself).
std::vector<int> robots_in_range(const std::vector<Eigen::VectorXd>& states, int i,
                                 const SafetyConfig& cfg, int k);

/// All pairwise h values; flags violations below -tolerance.
SafetyReport safety_monitor(const std::vector<Eigen::VectorXd>& states,
                            const SafetyConfig& cfg, int k, double tolerance = 0.0);

}  // namespace cgvf

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "cgvf/coordination.hpp"
#include "cgvf/field.hpp"
#include "cgvf/geometry.hpp"
#include "cgvf/guidance.hpp"
#include "cgvf/safety.hpp"
#include "cgvf/topology.hpp"

namespace cgvf {

enum class IntegratorKind { kEuler, kRk4 };
enum class ModelKind { kSingleIntegrator, kDubins };

/// Telemetry event bits, OR-ed per frame.
enum EventFlag : uint32_t {
  kEventSafetyViolation = 1u << 0,   // some pairwise h below tolerance
  kEventQpInfeasible = 1u << 1,      // barrier QP had no solution
  kEventSaturation = 1u << 2,        // some u_theta clamped this frame
  kEventStaleMailbox = 1u << 3,      // held neighbor values older than one step
  kEventBeyondTheoryComm = 1u << 4,  // slow or lossy exchange configured
  kEventSigmaCondition = 1u << 5,    // saturation-period sign condition violated
  kEventDeadlock = 1u << 6,          // active constraints, near-zero motion
};

struct RobotSpec {
  DesiredSetPtr set;
  Eigen::VectorXd k_phi;       // n positive gains
  Eigen::VectorXd initial_xi;  // generalized (x, w), length n + k
  double initial_heading = 0.0;  // Dubins model only
};

struct Scenario {
  std::string name;
  std::vector<RobotSpec> robots;
  CommGraph graph{1, {}};
  CoordinationSpec coordination;
  SafetyConfig safety;
  ModelKind model = ModelKind::kSingleIntegrator;
  GuidanceConfig guidance;

  double duration_s = 10.0;
  double step_s = 1e-3;
  double comm_interval_s = 1e-3;
  double packet_loss = 0.0;
  IntegratorKind integrator = IntegratorKind::kRk4;
  int telemetry_decimation = 10;
  uint64_t seed = 0;

  int robot_count() const { return static_cast<int>(robots.size()); }
  int ambient_dim() const;
  int param_count() const;

  /// Per-robot field parameters (gains plus shared coordination weights).
  FieldConfig field_config(int robot) const;

  /// Throws InvalidArgument on any hard inconsistency. A disconnected
  /// graph is not a hard error here (the validate command reports it).
  void validate() const;
};

struct TelemetryFrame {
  double t = 0.0;
  std::vector<Eigen::VectorXd> xi;   // per robot generalized state
  std::vector<double> heading;       // per robot, Dubins runs only
  std::vector<Eigen::VectorXd> phi;  // per robot surface errors
  std::vector<Eigen::VectorXd> coord_errors;  // per parameter, one entry per edge
  std::vector<Eigen::VectorXd> controls;  // per robot: field components, or
                                          // (u_theta, u_z, w_dot...) for Dubins
  double composite_error_norm = 0.0;
  double lyapunov = 0.0;
  double lyapunov_rate_analytic = 0.0;
  double h_min = std::numeric_limits<double>::infinity();
  uint32_t events = 0;
};

struct DiagnosticSet {
  double lyapunov = 0.0;
  double rate_analytic = 0.0;
  double rate_discrete = 0.0;
};

struct RunResult {
  std::vector<TelemetryFrame> frames;
  bool aborted = false;
  std::string abort_reason;
  uint32_t events_seen = 0;
  int steps_completed = 0;
  std::vector<double> comm_times;  // event-mode delivery times (plus the seed)
};

/// Called once per integration step with the freshly assembled frame,
/// regardless of the telemetry decimation.
using StepObserver = std::function<void(const TelemetryFrame&)>;

/// Fixed-step closed-loop integration of the full multi-robot system.
/// Telemetry keeps every telemetry_decimation-th step plus the final one.
/// Non-finite states or a singular-heading condition abort the run with
/// the last good frame retained.
RunResult integrate(const Scenario& scenario, const StepObserver& observer = {});

/// Lyapunov value of one frame plus the analytic rate; the discrete rate
/// uses the previous frame when given.
DiagnosticSet lyapunov_diagnostics(const Scenario& scenario,
                                   const TelemetryFrame& frame,
                                   const TelemetryFrame* previous = nullptr);

/// Stacked state derivative of the single-integrator closed loop at the
/// given per-robot states, with fresh mailboxes built from those states.
/// Exposed for direct tests of the closed-loop right-hand side.
std::vector<Eigen::VectorXd> closed_loop_derivative(
    const Scenario& scenario, const std::vector<Eigen::VectorXd>& states);

}  // namespace cgvf

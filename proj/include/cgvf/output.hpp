#pragma once

#include <string>
#include <vector>

#include "cgvf/sim.hpp"

namespace cgvf {

/// Fixed 17-significant-digit rendering; round-trips doubles exactly.
std::string format_g17(double v);

/// Long-format telemetry, one row per robot per frame:
///   t, robot, x1..xn, w1[, w2][, theta], phi1..phin, V, hmin, u...
void write_telemetry_csv(const std::string& path, const Scenario& sc,
                         const std::vector<TelemetryFrame>& frames);

/// Per-frame diagnostics:
///   t, e_norm, V, Vdot_analytic, dVdt_discrete, hmin, max_phi,
///   max_coord1[, max_coord2], events
void write_diagnostics_csv(const std::string& path, const Scenario& sc,
                           const std::vector<TelemetryFrame>& frames);

/// Parsed CSV: header names plus numeric rows.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};
CsvTable read_csv(const std::string& path);

/// Final errors, h minimum, Lyapunov statistics, and the event log.
void write_summary_json(const std::string& path, const Scenario& sc,
                        const RunResult& result);

/// Deterministic trajectory plot; 3D scenarios render the three axis
/// projections side by side. Squares mark starts, circles ends.
void write_trajectories_svg(const std::string& path, const Scenario& sc,
                            const std::vector<TelemetryFrame>& frames);

/// Names of the event flags set in the mask, for logs and summaries.
std::vector<std::string> event_flag_names(uint32_t mask);

}  // namespace cgvf

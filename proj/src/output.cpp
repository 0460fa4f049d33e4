#include "cgvf/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace cgvf {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> event_flag_names(uint32_t mask) {
  static const std::pair<uint32_t, const char*> table[] = {
      {kEventSafetyViolation, "safety_violation"},
      {kEventQpInfeasible, "qp_infeasible"},
      {kEventSaturation, "saturation"},
      {kEventStaleMailbox, "stale_mailbox"},
      {kEventBeyondTheoryComm, "beyond_theory_comm"},
      {kEventSigmaCondition, "sigma_condition"},
      {kEventDeadlock, "deadlock"},
  };
  std::vector<std::string> out;
  for (const auto& [bit, name] : table) {
    if (mask & bit) out.emplace_back(name);
  }
  return out;
}

namespace {

std::ofstream open_or_throw(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  return out;
}

}  // namespace

void write_telemetry_csv(const std::string& path, const Scenario& sc,
                         const std::vector<TelemetryFrame>& frames) {
  std::ofstream out = open_or_throw(path);
  const int n = sc.ambient_dim();
  const int k = sc.param_count();
  const bool dubins = sc.model == ModelKind::kDubins;

  out << "t,robot";
  for (int j = 1; j <= n; ++j) out << ",x" << j;
  for (int m = 1; m <= k; ++m) out << ",w" << m;
  if (dubins) out << ",theta";
  for (int j = 1; j <= n; ++j) out << ",phi" << j;
  out << ",V,hmin";
  if (dubins) {
    out << ",u_theta,u_z";
    for (int m = 1; m <= k; ++m) out << ",wdot" << m;
  } else {
    for (int j = 1; j <= n + k; ++j) out << ",u" << j;
  }
  out << "\n";

  for (const TelemetryFrame& frame : frames) {
    for (int i = 0; i < sc.robot_count(); ++i) {
      out << format_g17(frame.t) << "," << (i + 1);
      const Eigen::VectorXd& xi = frame.xi[static_cast<size_t>(i)];
      for (int j = 0; j < n + k; ++j) out << "," << format_g17(xi[j]);
      if (dubins) out << "," << format_g17(frame.heading[static_cast<size_t>(i)]);
      const Eigen::VectorXd& ph = frame.phi[static_cast<size_t>(i)];
      for (int j = 0; j < n; ++j) out << "," << format_g17(ph[j]);
      out << "," << format_g17(frame.lyapunov) << "," << format_g17(frame.h_min);
      const Eigen::VectorXd& u = frame.controls[static_cast<size_t>(i)];
      for (Eigen::Index j = 0; j < u.size(); ++j) out << "," << format_g17(u[j]);
      out << "\n";
    }
  }
}

void write_diagnostics_csv(const std::string& path, const Scenario& sc,
                           const std::vector<TelemetryFrame>& frames) {
  std::ofstream out = open_or_throw(path);
  const int k = sc.param_count();
  out << "t,e_norm,V,Vdot_analytic,dVdt_discrete,hmin,max_phi";
  for (int m = 1; m <= k; ++m) out << ",max_coord" << m;
  out << ",events\n";
  for (size_t idx = 0; idx < frames.size(); ++idx) {
    const TelemetryFrame& frame = frames[idx];
    double discrete = 0.0;
    if (idx > 0 && frame.t != frames[idx - 1].t) {
      discrete =
          (frame.lyapunov - frames[idx - 1].lyapunov) / (frame.t - frames[idx - 1].t);
    }
    double max_phi = 0.0;
    for (const Eigen::VectorXd& ph : frame.phi) {
      max_phi = std::max(max_phi, ph.norm());
    }
    out << format_g17(frame.t) << "," << format_g17(frame.composite_error_norm) << ","
        << format_g17(frame.lyapunov) << "," << format_g17(frame.lyapunov_rate_analytic)
        << "," << format_g17(discrete) << "," << format_g17(frame.h_min) << ","
        << format_g17(max_phi);
    for (int m = 0; m < k; ++m) {
      const Eigen::VectorXd& err = frame.coord_errors[static_cast<size_t>(m)];
      out << "," << format_g17(err.size() ? err.cwiseAbs().maxCoeff() : 0.0);
    }
    out << "," << frame.events << "\n";
  }
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read '" + path + "'");
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw Error("empty CSV '" + path + "'");
  std::stringstream hs(line);
  std::string cell;
  while (std::getline(hs, cell, ',')) table.header.push_back(cell);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ls(line);
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_summary_json(const std::string& path, const Scenario& sc,
                        const RunResult& result) {
  nlohmann::json j;
  j["scenario"] = sc.name;
  j["robots"] = sc.robot_count();
  j["duration_s"] = sc.duration_s;
  j["step_s"] = sc.step_s;
  j["steps_completed"] = result.steps_completed;
  j["aborted"] = result.aborted;
  if (result.aborted) j["abort_reason"] = result.abort_reason;

  if (!result.frames.empty()) {
    const TelemetryFrame& last = result.frames.back();
    double max_phi = 0.0;
    for (const Eigen::VectorXd& ph : last.phi) max_phi = std::max(max_phi, ph.norm());
    std::vector<double> max_coord;
    for (const Eigen::VectorXd& err : last.coord_errors) {
      max_coord.push_back(err.size() ? err.cwiseAbs().maxCoeff() : 0.0);
    }
    j["final"] = {{"t", last.t},
                  {"max_phi_norm", max_phi},
                  {"max_coord_error", max_coord},
                  {"composite_error_norm", last.composite_error_norm},
                  {"V", last.lyapunov}};

    double h_min = std::numeric_limits<double>::infinity();
    double v_max = 0.0;
    for (const TelemetryFrame& f : result.frames) {
      h_min = std::min(h_min, f.h_min);
      v_max = std::max(v_max, f.lyapunov);
    }
    j["min_h"] = std::isfinite(h_min) ? nlohmann::json(h_min) : nlohmann::json();
    j["V"] = {{"initial", result.frames.front().lyapunov},
              {"final", last.lyapunov},
              {"max", v_max}};

    nlohmann::json events = nlohmann::json::array();
    for (const TelemetryFrame& f : result.frames) {
      if (f.events != 0) {
        events.push_back({{"t", f.t}, {"flags", event_flag_names(f.events)}});
      }
    }
    j["events"] = events;
  }

  std::ofstream out = open_or_throw(path);
  out << j.dump(2) << "\n";
}

namespace {

struct Bounds {
  double lo_x = 0, hi_x = 1, lo_y = 0, hi_y = 1;
  void include(double x, double y) {
    lo_x = std::min(lo_x, x);
    hi_x = std::max(hi_x, x);
    lo_y = std::min(lo_y, y);
    hi_y = std::max(hi_y, y);
  }
  void pad() {
    const double mx = 0.05 * (hi_x - lo_x + 1e-9), my = 0.05 * (hi_y - lo_y + 1e-9);
    lo_x -= mx;
    hi_x += mx;
    lo_y -= my;
    hi_y += my;
  }
};

std::string color_for(int robot, int total) {
  const double hue = 360.0 * robot / std::max(total, 1);
  char buf[48];
  std::snprintf(buf, sizeof(buf), "hsl(%.0f,70%%,45%%)", hue);
  return buf;
}

}  // namespace

void write_trajectories_svg(const std::string& path, const Scenario& sc,
                            const std::vector<TelemetryFrame>& frames) {
  if (frames.empty()) throw Error("no frames to plot");
  const int n = sc.ambient_dim();
  const int N = sc.robot_count();
  // axis pairs per panel: 2D -> (x1,x2); 3D -> XY, XZ, YZ
  std::vector<std::pair<int, int>> panels =
      n == 2 ? std::vector<std::pair<int, int>>{{0, 1}}
             : std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {1, 2}};
  const double panel_w = 420.0, panel_h = 420.0, gap = 20.0;
  const double width = panels.size() * panel_w + (panels.size() - 1) * gap;

  // sampled desired sets (paths only) for context
  std::vector<std::vector<Eigen::VectorXd>> desired(static_cast<size_t>(N));
  if (sc.param_count() == 1) {
    double w_lo = 0.0, w_hi = 2.0 * M_PI;
    for (const TelemetryFrame& f : frames) {
      for (const Eigen::VectorXd& xi : f.xi) {
        w_lo = std::min(w_lo, xi[n]);
        w_hi = std::max(w_hi, xi[n]);
      }
    }
    for (int i = 0; i < N; ++i) {
      const DesiredSet& set = *sc.robots[static_cast<size_t>(i)].set;
      for (int s = 0; s <= 400; ++s) {
        Eigen::VectorXd w(1);
        w[0] = w_lo + (w_hi - w_lo) * s / 400.0;
        desired[static_cast<size_t>(i)].push_back(set.eval(w));
      }
    }
  }

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << width << " "
      << panel_h << "\">\n";
  for (size_t p = 0; p < panels.size(); ++p) {
    const auto [ax, ay] = panels[p];
    Bounds b;
    bool first_pt = true;
    auto include = [&](double x, double y) {
      if (first_pt) {
        b.lo_x = b.hi_x = x;
        b.lo_y = b.hi_y = y;
        first_pt = false;
      } else {
        b.include(x, y);
      }
    };
    for (const TelemetryFrame& f : frames) {
      for (const Eigen::VectorXd& xi : f.xi) include(xi[ax], xi[ay]);
    }
    for (const auto& curve : desired) {
      for (const Eigen::VectorXd& pt : curve) include(pt[ax], pt[ay]);
    }
    b.pad();
    const double off_x = p * (panel_w + gap);
    const double sx = panel_w / (b.hi_x - b.lo_x);
    const double sy = panel_h / (b.hi_y - b.lo_y);
    auto map_x = [&](double x) { return off_x + (x - b.lo_x) * sx; };
    auto map_y = [&](double y) { return panel_h - (y - b.lo_y) * sy; };

    svg << "<rect x=\"" << off_x << "\" y=\"0\" width=\"" << panel_w << "\" height=\""
        << panel_h << "\" fill=\"white\" stroke=\"#ccc\"/>\n";
    const char* names = "xyz";
    svg << "<text x=\"" << off_x + 8 << "\" y=\"16\" font-size=\"12\" fill=\"#666\">"
        << names[ax] << "-" << names[ay] << "</text>\n";

    for (int i = 0; i < N; ++i) {
      if (!desired[static_cast<size_t>(i)].empty()) {
        svg << "<polyline fill=\"none\" stroke=\"#bbb\" stroke-width=\"0.7\" points=\"";
        for (const Eigen::VectorXd& pt : desired[static_cast<size_t>(i)]) {
          svg << map_x(pt[ax]) << "," << map_y(pt[ay]) << " ";
        }
        svg << "\"/>\n";
      }
    }
    for (int i = 0; i < N; ++i) {
      const std::string color = color_for(i, N);
      svg << "<polyline fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1\" points=\"";
      for (const TelemetryFrame& f : frames) {
        const Eigen::VectorXd& xi = f.xi[static_cast<size_t>(i)];
        svg << map_x(xi[ax]) << "," << map_y(xi[ay]) << " ";
      }
      svg << "\"/>\n";
      const Eigen::VectorXd& start = frames.front().xi[static_cast<size_t>(i)];
      const Eigen::VectorXd& end = frames.back().xi[static_cast<size_t>(i)];
      svg << "<rect x=\"" << map_x(start[ax]) - 3 << "\" y=\"" << map_y(start[ay]) - 3
          << "\" width=\"6\" height=\"6\" fill=\"" << color << "\"/>\n";
      svg << "<circle cx=\"" << map_x(end[ax]) << "\" cy=\"" << map_y(end[ay])
          << "\" r=\"3.2\" fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.5\"/>\n";
    }
  }
  svg << "</svg>\n";

  std::ofstream out = open_or_throw(path);
  out << svg.str();
}

}  // namespace cgvf

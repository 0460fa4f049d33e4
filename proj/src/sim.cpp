#include "cgvf/sim.hpp"

#include <cmath>
#include <random>

namespace cgvf {

int Scenario::ambient_dim() const {
  if (robots.empty()) throw InvalidArgument("scenario has no robots");
  return robots.front().set->ambient_dim();
}

int Scenario::param_count() const {
  if (robots.empty()) throw InvalidArgument("scenario has no robots");
  return robots.front().set->param_count();
}

FieldConfig Scenario::field_config(int robot) const {
  FieldConfig fc;
  fc.k_phi = robots[static_cast<size_t>(robot)].k_phi;
  fc.kc1 = coordination.kc1;
  fc.kc2 = coordination.kc2;
  fc.desired_speeds = coordination.desired_speeds;
  return fc;
}

void Scenario::validate() const {
  if (robots.empty()) throw InvalidArgument("scenario has no robots");
  const int n = robots.front().set->ambient_dim();
  const int k = robots.front().set->param_count();
  if (k != 1 && k != 2) {
    throw InvalidArgument("scenario needs 1 or 2 path/surface parameters");
  }
  for (size_t i = 0; i < robots.size(); ++i) {
    const RobotSpec& r = robots[i];
    if (!r.set) throw InvalidArgument("robot " + std::to_string(i + 1) + " has no desired set");
    if (r.set->ambient_dim() != n || r.set->param_count() != k) {
      throw InvalidArgument("all robots must share ambient dimension and parameter count");
    }
    GainSet{r.k_phi}.validate(n);
    if (r.initial_xi.size() != n + k) {
      throw InvalidArgument("robot " + std::to_string(i + 1) +
                            " initial state has wrong size");
    }
  }
  if (graph.vertex_count() != robot_count()) {
    throw InvalidArgument("graph has " + std::to_string(graph.vertex_count()) +
                          " vertices for " + std::to_string(robot_count()) + " robots");
  }
  if (coordination.param_count() != k) {
    throw InvalidArgument("coordination needs one delta vector per parameter");
  }
  for (int m = 0; m < k; ++m) {
    const Eigen::VectorXd& d = coordination.deltas[static_cast<size_t>(m)];
    if (d.size() != graph.edge_count()) {
      throw InvalidArgument("delta vector " + std::to_string(m + 1) +
                            " has wrong edge count");
    }
    validate_delta_feasibility(graph, d);
  }
  if (coordination.kc1 < 0.0 || coordination.kc2 < 0.0) {
    throw InvalidArgument("coordination gains must be nonnegative");
  }
  if (k == 2) {
    if (!coordination.desired_speeds) {
      throw InvalidArgument("surface scenarios need desired parametric speeds");
    }
    const auto& s = *coordination.desired_speeds;
    if (s.first == 0.0 && s.second == 0.0) {
      throw InvalidArgument("desired speeds (0, 0) give a degenerate surface field");
    }
  }
  if (!(step_s > 0.0)) throw InvalidArgument("step_s must be positive");
  if (duration_s < 0.0) throw InvalidArgument("duration_s must be nonnegative");
  if (!(comm_interval_s > 0.0)) throw InvalidArgument("comm_interval_s must be positive");
  if (packet_loss < 0.0 || packet_loss > 1.0) {
    throw InvalidArgument("packet_loss must be in [0, 1]");
  }
  if (telemetry_decimation < 1) throw InvalidArgument("telemetry decimation must be >= 1");
  if (safety.enabled) safety.validate();
  if (model == ModelKind::kDubins) {
    guidance.validate();
    if (n != 3) throw InvalidArgument("the Dubins model needs a 3D ambient space");
    if (safety.enabled) {
      throw InvalidArgument(
          "barrier modification is only supported for the single-integrator model");
    }
  }
}

namespace {

struct LyapunovParts {
  double value = 0.0;
  double rate_analytic = 0.0;
  double error_norm = 0.0;
};

/// V = (Phi^T K Phi + sum_m kc_m |eps_m|^2) / 2 and its analytic rate
///   Vdot = -|K Phi|^2 - sum_m |F_m^T K Phi - kc_m L wtilde_m|^2,
/// both computable from edge errors since L wtilde = D eps.
LyapunovParts lyapunov_parts(const Scenario& sc,
                             const std::vector<Eigen::VectorXd>& xi_all) {
  const int n = sc.ambient_dim();
  const int k = sc.param_count();
  const int N = sc.robot_count();
  const int E = sc.graph.edge_count();

  LyapunovParts out;
  double phi_quad = 0.0;      // Phi^T K Phi
  double kphi_sq = 0.0;       // |K Phi|^2
  double phi_sq = 0.0;        // |Phi|^2
  Eigen::MatrixXd g(N, k);    // g(i, m) = d_m f_i . K_i Phi_i
  Eigen::MatrixXd w_all(k, N);

  Eigen::VectorXd f(n), ph(n), kphi(n);
  Eigen::MatrixXd d1(n, k);
  for (int i = 0; i < N; ++i) {
    const Eigen::VectorXd& xi = xi_all[static_cast<size_t>(i)];
    w_all.col(i) = xi.tail(k);
    sc.robots[static_cast<size_t>(i)].set->jets(xi.tail(k), &f, &d1, nullptr);
    ph = xi.head(n) - f;
    kphi = sc.robots[static_cast<size_t>(i)].k_phi.cwiseProduct(ph);
    phi_quad += ph.dot(kphi);
    kphi_sq += kphi.squaredNorm();
    phi_sq += ph.squaredNorm();
    for (int m = 0; m < k; ++m) g(i, m) = d1.col(m).dot(kphi);
  }

  double coord_quad = 0.0;  // sum_m kc_m |eps_m|^2
  double eps_sq = 0.0;
  double cross_sq = 0.0;  // sum_m |g_m - kc_m D eps_m|^2
  for (int m = 0; m < k; ++m) {
    const double kc = m == 0 ? sc.coordination.kc1 : sc.coordination.kc2;
    Eigen::VectorXd eps =
        coordination_error(sc.graph, w_all.row(m).transpose(),
                           sc.coordination.deltas[static_cast<size_t>(m)]);
    Eigen::VectorXd d_eps = Eigen::VectorXd::Zero(N);  // L wtilde_m
    for (int e = 0; e < E; ++e) {
      const Edge& edge = sc.graph.edges()[static_cast<size_t>(e)];
      d_eps[edge.head - 1] += eps[e];
      d_eps[edge.tail - 1] -= eps[e];
    }
    coord_quad += kc * eps.squaredNorm();
    eps_sq += eps.squaredNorm();
    cross_sq += (g.col(m) - kc * d_eps).squaredNorm();
  }

  out.value = 0.5 * (phi_quad + coord_quad);
  out.rate_analytic = -kphi_sq - cross_sq;
  out.error_norm = std::sqrt(phi_sq + eps_sq);
  return out;
}

class Engine {
 public:
  explicit Engine(const Scenario& sc)
      : sc_(sc),
        n_(sc.ambient_dim()),
        k_(sc.param_count()),
        N_(sc.robot_count()),
        dubins_(sc.model == ModelKind::kDubins),
        stride_(n_ + k_ + (dubins_ ? 1 : 0)),
        w_off_(dubins_ ? n_ + 1 : n_),
        mail_(sc.graph, k_),
        rng_(sc.seed) {
    sc_.validate();
    fresh_comm_ = sc_.comm_interval_s <= sc_.step_s && sc_.packet_loss == 0.0;
    beyond_theory_ = sc_.comm_interval_s > sc_.step_s || sc_.packet_loss > 0.0;

    cfgs_.reserve(static_cast<size_t>(N_));
    for (int i = 0; i < N_; ++i) cfgs_.push_back(sc_.field_config(i));
    sign_n_ = (n_ % 2 == 0) ? 1.0 : -1.0;
    if (k_ == 2) std::tie(v1_, v2_) = cfgs_.front().extra_tail(n_);

    f_.resize(n_);
    d1_.resize(n_, k_);
    phi_buf_.resize(n_);
    kphi_buf_.resize(n_);
    chi_all_.resize(n_ + k_, N_);
    phi_all_.resize(n_, N_);
    w_all_.resize(k_, N_);
    wdot_all_.setZero(k_, N_);
    uz_all_.setZero(N_);
    inputs_.setZero(dubins_ ? 2 + k_ : 0, N_);
    xi_scratch_.assign(static_cast<size_t>(N_), Eigen::VectorXd(n_ + k_));

    y_.resize(static_cast<Eigen::Index>(stride_) * N_);
    for (int i = 0; i < N_; ++i) {
      const RobotSpec& r = sc_.robots[static_cast<size_t>(i)];
      double* block = y_.data() + static_cast<size_t>(i) * stride_;
      Eigen::Map<Eigen::VectorXd>(block, n_) = r.initial_xi.head(n_);
      if (dubins_) block[n_] = wrap_angle(r.initial_heading);
      Eigen::Map<Eigen::VectorXd>(block + w_off_, k_) = r.initial_xi.tail(k_);
    }
    k1_.resizeLike(y_);
    k2_.resizeLike(y_);
    k3_.resizeLike(y_);
    k4_.resizeLike(y_);
    ytmp_.resizeLike(y_);
    ynew_.resizeLike(y_);
  }

  RunResult run(const StepObserver& observer) {
    RunResult out;
    try {
      seed_mailboxes();
      out.comm_times.push_back(0.0);

      step_events_ = 0;
      TelemetryFrame first = make_frame(0.0, y_);
      if (observer) observer(first);
      out.frames.push_back(std::move(first));
    } catch (const SingularHeading& e) {
      out.aborted = true;
      out.abort_reason = e.what();
      return out;
    }

    const long steps = std::lround(sc_.duration_s / sc_.step_s);
    long comm_events = 1;  // t = 0 delivered by seeding
    for (long m = 1; m <= steps; ++m) {
      const double t0 = static_cast<double>(m - 1) * sc_.step_s;
      step_events_ = 0;
      try {
        if (!fresh_comm_) {
          const double next_comm = static_cast<double>(comm_events) * sc_.comm_interval_s;
          if (t0 + 0.5 * sc_.step_s >= next_comm) {
            exchange_now(t0);
            ++comm_events;
            out.comm_times.push_back(t0);
          }
        }
        advance(t0);
      } catch (const SingularHeading& e) {
        out.aborted = true;
        out.abort_reason = e.what();
        break;
      }
      if (!ynew_.allFinite()) {
        out.aborted = true;
        out.abort_reason = "non-finite state at t = " +
                           std::to_string(static_cast<double>(m) * sc_.step_s);
        break;
      }
      y_.swap(ynew_);
      out.steps_completed = static_cast<int>(m);
      const double t1 = static_cast<double>(m) * sc_.step_s;

      const bool record = (m % sc_.telemetry_decimation == 0) || (m == steps);
      if (record || observer) {
        TelemetryFrame frame = make_frame(t1, y_);
        out.events_seen |= frame.events;
        if (observer) observer(frame);
        if (record) out.frames.push_back(std::move(frame));
      }
    }
    if (out.aborted) {
      // keep the last good state visible in telemetry
      const double t_good = static_cast<double>(out.steps_completed) * sc_.step_s;
      if (out.frames.empty() || out.frames.back().t != t_good) {
        try {
          out.frames.push_back(make_frame(t_good, y_));
        } catch (const SingularHeading&) {
        }
      }
    }
    return out;
  }

  void derivative_at(const std::vector<Eigen::VectorXd>& states,
                     std::vector<Eigen::VectorXd>& dy_out) {
    if (static_cast<int>(states.size()) != N_) {
      throw InvalidArgument("derivative_at needs one state block per robot");
    }
    for (int i = 0; i < N_; ++i) {
      if (states[static_cast<size_t>(i)].size() != stride_) {
        throw InvalidArgument("state block " + std::to_string(i + 1) +
                              " must have length " + std::to_string(stride_));
      }
      y_.segment(static_cast<Eigen::Index>(i) * stride_, stride_) =
          states[static_cast<size_t>(i)];
    }
    seed_mailboxes();
    rhs(0.0, y_, k1_);
    dy_out.resize(static_cast<size_t>(N_));
    for (int i = 0; i < N_; ++i) {
      dy_out[static_cast<size_t>(i)] =
          k1_.segment(static_cast<Eigen::Index>(i) * stride_, stride_);
    }
  }

 private:
  void fill_w_all(const Eigen::VectorXd& y) {
    for (int i = 0; i < N_; ++i) {
      w_all_.col(i) = y.segment(static_cast<Eigen::Index>(i) * stride_ + w_off_, k_);
    }
  }

  void exchange_now(double t) {
    // Messages carry (w, wdot); rates come from one field evaluation at
    // the current state so the payload matches what robots would send.
    rhs(t, y_, k1_);
    fill_w_all(y_);
    mail_.deliver_all(t, sc_.graph, w_all_, wdot_all_, sc_.packet_loss, rng_);
  }

  void seed_mailboxes() {
    fill_w_all(y_);
    wdot_all_.setZero();
    mail_.deliver_all(0.0, sc_.graph, w_all_, wdot_all_, 0.0, rng_);
    rhs(0.0, y_, k1_);  // fills wdot_all_
    mail_.deliver_all(0.0, sc_.graph, w_all_, wdot_all_, 0.0, rng_);
  }

  void advance(double t0) {
    const double h = sc_.step_s;
    switch (sc_.integrator) {
      case IntegratorKind::kEuler:
        rhs(t0, y_, k1_);
        ynew_ = y_ + h * k1_;
        break;
      case IntegratorKind::kRk4:
        rhs(t0, y_, k1_);
        ytmp_ = y_ + (0.5 * h) * k1_;
        rhs(t0 + 0.5 * h, ytmp_, k2_);
        ytmp_ = y_ + (0.5 * h) * k2_;
        rhs(t0 + 0.5 * h, ytmp_, k3_);
        ytmp_ = y_ + h * k3_;
        rhs(t0 + h, ytmp_, k4_);
        ynew_ = y_ + (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
        break;
    }
  }

  /// Combined field of robot i at its state block, consensus values from
  /// the mailbox. Writes the total into chi_all_.col(i) and the surface
  /// errors into phi_all_.col(i).
  void eval_robot_field(int i, const double* block) {
    const Eigen::Map<const Eigen::VectorXd> x(block, n_);
    const Eigen::Map<const Eigen::VectorXd> w(block + w_off_, k_);
    const FieldConfig& cfg = cfgs_[static_cast<size_t>(i)];

    sc_.robots[static_cast<size_t>(i)].set->jets(w, &f_, &d1_, nullptr);
    phi_buf_ = x - f_;
    kphi_buf_ = cfg.k_phi.cwiseProduct(phi_buf_);
    phi_all_.col(i) = phi_buf_;

    auto chi = chi_all_.col(i);
    if (k_ == 1) {
      const double c1 = consensus(sc_.graph, i + 1, 0, w[0], mail_,
                                  sc_.coordination.deltas[0]);
      chi.head(n_) = sign_n_ * d1_.col(0) - kphi_buf_;
      chi[n_] = sign_n_ + kphi_buf_.dot(d1_.col(0)) + cfg.kc1 * c1;
    } else {
      const double c1 = consensus(sc_.graph, i + 1, 0, w[0], mail_,
                                  sc_.coordination.deltas[0]);
      const double c2 = consensus(sc_.graph, i + 1, 1, w[1], mail_,
                                  sc_.coordination.deltas[1]);
      chi.head(n_) = sign_n_ * (v2_ * d1_.col(0) - v1_ * d1_.col(1)) - kphi_buf_;
      chi[n_] = sign_n_ * v2_ + kphi_buf_.dot(d1_.col(0)) + cfg.kc1 * c1;
      chi[n_ + 1] = -sign_n_ * v1_ + kphi_buf_.dot(d1_.col(1)) + cfg.kc2 * c2;
    }
  }

  void rhs(double t, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    t_hint_ = t - sc_.step_s - 1e-12;  // staleness threshold for held values
    if (fresh_comm_) {
      fill_w_all(y);
      mail_.deliver_all(t, sc_.graph, w_all_, wdot_all_, 0.0, rng_);
    }
    if (dubins_) {
      rhs_dubins(y, dy);
    } else {
      rhs_single_integrator(y, dy);
    }
  }

  void rhs_single_integrator(const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    for (int i = 0; i < N_; ++i) {
      eval_robot_field(i, y.data() + static_cast<size_t>(i) * stride_);
    }
    if (sc_.safety.enabled) apply_safety(y);
    for (int i = 0; i < N_; ++i) {
      dy.segment(static_cast<Eigen::Index>(i) * stride_, stride_) = chi_all_.col(i);
      wdot_all_.col(i) = chi_all_.col(i).tail(k_);
    }
  }

  void apply_safety(const Eigen::VectorXd& y) {
    for (int i = 0; i < N_; ++i) {
      const double* block = y.data() + static_cast<size_t>(i) * stride_;
      xi_scratch_[static_cast<size_t>(i)].head(n_) =
          Eigen::Map<const Eigen::VectorXd>(block, n_);
      xi_scratch_[static_cast<size_t>(i)].tail(k_) =
          Eigen::Map<const Eigen::VectorXd>(block + w_off_, k_);
    }
    for (int i = 0; i < N_; ++i) {
      std::vector<int> in_range = robots_in_range(xi_scratch_, i, sc_.safety, k_);
      if (in_range.empty()) continue;
      std::vector<Eigen::VectorXd> others;
      others.reserve(in_range.size());
      for (int j : in_range) others.push_back(xi_scratch_[static_cast<size_t>(j)]);
      QpResult q = qp2_solve(xi_scratch_[static_cast<size_t>(i)], chi_all_.col(i),
                             others, sc_.safety, k_);
      if (q.infeasible) step_events_ |= kEventQpInfeasible;
      if (q.active_constraints > 0 && q.chi_tilde.head(n_).norm() < 1e-9) {
        step_events_ |= kEventDeadlock;
      }
      chi_all_.col(i) = q.chi_tilde;
    }
  }

  void rhs_dubins(const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    const GuidanceConfig& g = sc_.guidance;
    for (int i = 0; i < N_; ++i) {
      const double* block = y.data() + static_cast<size_t>(i) * stride_;
      eval_robot_field(i, block);
      const auto chi = chi_all_.col(i);
      const double planar_sq = chi[0] * chi[0] + chi[1] * chi[1];
      if (!(planar_sq > g.gamma_floor)) {
        throw SingularHeading("planar field norm fell to gamma floor for robot " +
                              std::to_string(i + 1));
      }
      const double rho = std::sqrt(planar_sq);
      uz_all_[i] = g.v * chi[2] / rho;
      wdot_all_.col(i) = g.v * chi.tail(k_) / rho;
    }
    for (int i = 0; i < N_; ++i) {
      const double* block = y.data() + static_cast<size_t>(i) * stride_;
      const double theta = block[n_];
      const Eigen::Map<const Eigen::VectorXd> xi_x(block, n_);
      Eigen::VectorXd xi(n_ + k_);
      xi.head(n_) = xi_x;
      xi.tail(k_) = Eigen::Map<const Eigen::VectorXd>(block + w_off_, k_);

      // i-th row of L applied to the stacked parametric rates; only own
      // and neighbor rates appear.
      Eigen::VectorXd l_w_dot = Eigen::VectorXd::Zero(k_);
      const auto& inc = sc_.graph.incident(i + 1);
      for (size_t idx = 0; idx < inc.size(); ++idx) {
        if (fresh_comm_) {
          l_w_dot -= wdot_all_.col(inc[idx].neighbor - 1);
        } else {
          const MailboxSet::Entry& e = mail_.entry(i + 1, static_cast<int>(idx));
          l_w_dot -= e.w_dot;
          if (e.stamp < t_hint_) step_events_ |= kEventStaleMailbox;
        }
      }
      l_w_dot += static_cast<double>(inc.size()) * wdot_all_.col(i);

      Eigen::Vector3d x_dot(g.v * std::cos(theta), g.v * std::sin(theta), uz_all_[i]);
      const Eigen::Vector2d chi_p_dot = chi_p_dot_chain(
          *sc_.robots[static_cast<size_t>(i)].set, cfgs_[static_cast<size_t>(i)], xi,
          chi_all_.col(i), x_dot, wdot_all_.col(i), l_w_dot);
      const DubinsInputs in =
          dubins_step_inputs(chi_all_.col(i), chi_p_dot, theta, g, k_);

      if (in.saturated) {
        step_events_ |= kEventSaturation;
        const bool upper = in.u_theta_raw > g.sat_b;
        if ((upper && !(in.sigma >= 0.0 && in.sigma < M_PI)) ||
            (!upper && !(in.sigma <= 0.0 && in.sigma > -M_PI))) {
          step_events_ |= kEventSigmaCondition;
        }
      }

      double* out = dy.data() + static_cast<size_t>(i) * stride_;
      out[0] = x_dot[0];
      out[1] = x_dot[1];
      out[2] = x_dot[2];
      out[n_] = in.u_theta;
      Eigen::Map<Eigen::VectorXd>(out + w_off_, k_) = in.w_dot;

      inputs_(0, i) = in.u_theta;
      inputs_(1, i) = in.u_z;
      inputs_.col(i).tail(k_) = in.w_dot;
    }
  }

  TelemetryFrame make_frame(double t, const Eigen::VectorXd& y) {
    TelemetryFrame frame;
    frame.t = t;
    rhs(t, y, k1_);  // controls and surface errors at the frame state
    frame.events = step_events_;
    if (beyond_theory_) frame.events |= kEventBeyondTheoryComm;

    frame.xi.resize(static_cast<size_t>(N_));
    if (dubins_) frame.heading.resize(static_cast<size_t>(N_));
    frame.phi.resize(static_cast<size_t>(N_));
    frame.controls.resize(static_cast<size_t>(N_));
    for (int i = 0; i < N_; ++i) {
      const double* block = y.data() + static_cast<size_t>(i) * stride_;
      Eigen::VectorXd xi(n_ + k_);
      xi.head(n_) = Eigen::Map<const Eigen::VectorXd>(block, n_);
      xi.tail(k_) = Eigen::Map<const Eigen::VectorXd>(block + w_off_, k_);
      frame.xi[static_cast<size_t>(i)] = std::move(xi);
      if (dubins_) frame.heading[static_cast<size_t>(i)] = wrap_angle(block[n_]);
      frame.phi[static_cast<size_t>(i)] = phi_all_.col(i);
      frame.controls[static_cast<size_t>(i)] =
          dubins_ ? Eigen::VectorXd(inputs_.col(i)) : Eigen::VectorXd(chi_all_.col(i));
    }

    fill_w_all(y);
    frame.coord_errors.resize(static_cast<size_t>(k_));
    for (int m = 0; m < k_; ++m) {
      frame.coord_errors[static_cast<size_t>(m)] =
          coordination_error(sc_.graph, w_all_.row(m).transpose(),
                             sc_.coordination.deltas[static_cast<size_t>(m)]);
    }

    const LyapunovParts parts = lyapunov_parts(sc_, frame.xi);
    frame.composite_error_norm = parts.error_norm;
    frame.lyapunov = parts.value;
    frame.lyapunov_rate_analytic = parts.rate_analytic;

    if (N_ > 1) {
      const SafetyReport report = safety_monitor(frame.xi, sc_.safety, k_, 1e-9);
      frame.h_min = report.h_min;
      if (sc_.safety.enabled && report.violation) {
        frame.events |= kEventSafetyViolation;
      }
    }
    return frame;
  }

  const Scenario& sc_;
  int n_, k_, N_;
  bool dubins_;
  int stride_, w_off_;
  MailboxSet mail_;
  std::mt19937_64 rng_;
  bool fresh_comm_ = true;
  bool beyond_theory_ = false;
  std::vector<FieldConfig> cfgs_;
  double sign_n_ = 1.0, v1_ = 0.0, v2_ = 0.0;
  uint32_t step_events_ = 0;
  double t_hint_ = 0.0;

  Eigen::VectorXd f_, phi_buf_, kphi_buf_;
  Eigen::MatrixXd d1_;
  Eigen::MatrixXd chi_all_, phi_all_, w_all_, wdot_all_, inputs_;
  Eigen::VectorXd uz_all_;
  std::vector<Eigen::VectorXd> xi_scratch_;
  Eigen::VectorXd y_, ynew_, ytmp_, k1_, k2_, k3_, k4_;
};

}  // namespace

RunResult integrate(const Scenario& scenario, const StepObserver& observer) {
  Engine engine(scenario);
  return engine.run(observer);
}

DiagnosticSet lyapunov_diagnostics(const Scenario& scenario,
                                   const TelemetryFrame& frame,
                                   const TelemetryFrame* previous) {
  DiagnosticSet out;
  const LyapunovParts parts = lyapunov_parts(scenario, frame.xi);
  out.lyapunov = parts.value;
  out.rate_analytic = parts.rate_analytic;
  if (previous != nullptr && frame.t != previous->t) {
    const LyapunovParts prev = lyapunov_parts(scenario, previous->xi);
    out.rate_discrete = (parts.value - prev.value) / (frame.t - previous->t);
  }
  return out;
}

std::vector<Eigen::VectorXd> closed_loop_derivative(
    const Scenario& scenario, const std::vector<Eigen::VectorXd>& states) {
  Engine engine(scenario);
  std::vector<Eigen::VectorXd> dy;
  engine.derivative_at(states, dy);
  return dy;
}

}  // namespace cgvf

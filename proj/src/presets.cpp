#include "cgvf/presets.hpp"

#include <cmath>
#include <random>

namespace cgvf {

namespace {

Eigen::VectorXd uniform_vector(std::mt19937_64& rng, const Eigen::VectorXd& lo,
                               const Eigen::VectorXd& hi) {
  Eigen::VectorXd out(lo.size());
  for (Eigen::Index i = 0; i < lo.size(); ++i) {
    std::uniform_real_distribution<double> dist(lo[i], hi[i]);
    out[i] = dist(rng);
  }
  return out;
}

void seed_random_initials(Scenario& sc, const Eigen::VectorXd& lo,
                          const Eigen::VectorXd& hi, double w_lo, double w_hi) {
  std::mt19937_64 rng(sc.seed);
  const int k = sc.param_count();
  std::uniform_real_distribution<double> wdist(w_lo, w_hi);
  for (RobotSpec& r : sc.robots) {
    r.initial_xi.resize(lo.size() + k);
    r.initial_xi.head(lo.size()) = uniform_vector(rng, lo, hi);
    for (int m = 0; m < k; ++m) r.initial_xi[lo.size() + m] = wdist(rng);
  }
}

/// Positions scattered in a box, virtual coordinates near the per-robot
/// reference values (one column per parameter).
void seed_random_initials_near(Scenario& sc, const Eigen::VectorXd& lo,
                               const Eigen::VectorXd& hi,
                               const Eigen::MatrixXd& w_reference, double w_spread) {
  std::mt19937_64 rng(sc.seed);
  const int k = sc.param_count();
  std::uniform_real_distribution<double> wdist(-w_spread, w_spread);
  for (int i = 0; i < sc.robot_count(); ++i) {
    RobotSpec& r = sc.robots[static_cast<size_t>(i)];
    r.initial_xi.resize(lo.size() + k);
    r.initial_xi.head(lo.size()) = uniform_vector(rng, lo, hi);
    for (int m = 0; m < k; ++m) {
      r.initial_xi[lo.size() + m] = w_reference(i, m) + wdist(rng);
    }
  }
}

Eigen::VectorXd constant_gains(int n, double value) {
  return Eigen::VectorXd::Constant(n, value);
}

Eigen::VectorXd reference_ramp(int robots, double step) {
  Eigen::VectorXd w(robots);
  for (int i = 0; i < robots; ++i) w[i] = static_cast<double>(i) * step;
  return w;
}

// 5x7 dot-matrix glyphs. Column-major scan order below.
const std::map<char, std::vector<std::string>>& glyphs() {
  static const std::map<char, std::vector<std::string>> table = {
      {'I',
       {"XXXXX",
        "..X..",
        "..X..",
        "..X..",
        "..X..",
        "..X..",
        "XXXXX"}},
      {'C',
       {"XXXXX",
        "X....",
        "X....",
        "X....",
        "X....",
        "X...X",
        "XXXXX"}},
      {'R',
       {"XXXX.",
        "X...X",
        "X...X",
        "XXXX.",
        "X.X..",
        "X..X.",
        "X...X"}},
      {'A',
       {".XXX.",
        "X...X",
        "X...X",
        "XXXXX",
        "X...X",
        "X...X",
        "X...X"}},
  };
  return table;
}

}  // namespace

std::vector<std::pair<double, double>> letter_reference_grid(const std::string& text,
                                                             double row_spacing,
                                                             double col_spacing) {
  std::vector<std::pair<double, double>> points;
  int col_offset = 0;
  for (char ch : text) {
    auto it = glyphs().find(ch);
    if (it == glyphs().end()) {
      throw InvalidArgument(std::string("letter grid has no glyph for '") + ch + "'");
    }
    const auto& rows = it->second;
    for (int c = 0; c < 5; ++c) {
      for (int r = 0; r < 7; ++r) {
        if (rows[static_cast<size_t>(r)][static_cast<size_t>(c)] == 'X') {
          points.emplace_back((3 - r) * row_spacing,
                              (col_offset + c) * col_spacing);
        }
      }
    }
    col_offset += 6;  // glyph width plus one blank column
  }
  return points;
}

Scenario bent_infinity_cycle(int robots, double kc, uint64_t seed) {
  Scenario sc;
  sc.name = "bent_infinity_cycle";
  sc.graph = CommGraph::cycle(robots);
  sc.robots.resize(static_cast<size_t>(robots));
  DesiredSetPtr curve = catalog("bent_infinity", {});
  for (RobotSpec& r : sc.robots) {
    r.set = curve;
    r.k_phi = constant_gains(3, 1.0);
  }
  // period T = 2*pi, adjacent separation T/(2N)
  const Eigen::VectorXd w_star = reference_ramp(robots, M_PI / robots);
  sc.coordination.deltas = {deltas_from_reference(sc.graph, w_star)};
  sc.coordination.kc1 = kc;
  sc.duration_s = 60.0;
  sc.seed = seed;
  Eigen::VectorXd lo(3), hi(3);
  lo << -20.0, -20.0, -2.0;
  hi << 20.0, 20.0, 10.0;
  seed_random_initials_near(sc, lo, hi, w_star, 0.2);
  return sc;
}

Scenario torus_pattern(int robots, double kc, std::pair<double, double> speeds,
                       uint64_t seed) {
  Scenario sc;
  sc.name = "torus_pattern";
  sc.graph = CommGraph::cycle(robots);
  sc.robots.resize(static_cast<size_t>(robots));
  DesiredSetPtr surface = catalog("torus", {2.0, 1.0});
  for (RobotSpec& r : sc.robots) {
    r.set = surface;
    r.k_phi = constant_gains(3, 1.0);
  }
  auto grid = letter_reference_grid("ICRA", 0.35, 0.25);
  if (static_cast<int>(grid.size()) < robots) {
    throw InvalidArgument("letter grid has only " + std::to_string(grid.size()) +
                          " points for " + std::to_string(robots) + " robots");
  }
  Eigen::VectorXd w1_star(robots), w2_star(robots);
  for (int i = 0; i < robots; ++i) {
    w1_star[i] = grid[static_cast<size_t>(i)].first;
    w2_star[i] = grid[static_cast<size_t>(i)].second;
  }
  sc.coordination.deltas = {deltas_from_reference(sc.graph, w1_star),
                            deltas_from_reference(sc.graph, w2_star)};
  sc.coordination.kc1 = kc;
  sc.coordination.kc2 = kc;
  sc.coordination.desired_speeds = speeds;
  sc.duration_s = 60.0;
  sc.seed = seed;
  Eigen::VectorXd lo(3), hi(3);
  lo << -4.0, -4.0, -2.0;
  hi << 4.0, 4.0, 2.0;
  Eigen::MatrixXd w_ref(robots, 2);
  w_ref.col(0) = w1_star;
  w_ref.col(1) = w2_star;
  seed_random_initials_near(sc, lo, hi, w_ref, 0.3);
  return sc;
}

namespace {

Scenario make_sim1() {
  Scenario sc = bent_infinity_cycle(50, 300.0, 11);
  sc.name = "sim1";
  return sc;
}

Scenario make_sim2() {
  Scenario sc;
  sc.name = "sim2";
  const int N = 3;
  sc.graph = CommGraph::cycle(N);
  sc.robots.resize(N);
  DesiredSetPtr curve =
      catalog("lissajous3d", {std::sqrt(2.0), 4.1, 7.1, 0.1, 0.7, 0.0});
  for (RobotSpec& r : sc.robots) {
    r.set = curve;
    r.k_phi = constant_gains(3, 1.0);
  }
  sc.coordination.deltas = {
      deltas_from_reference(sc.graph, reference_ramp(N, 2.0 * M_PI / N))};
  sc.coordination.kc1 = 1.0;
  sc.duration_s = 100.0;
  sc.seed = 22;
  Eigen::VectorXd lo(3), hi(3);
  lo << -1.5, -1.0, -1.5;
  hi << 2.0, 2.5, 1.5;
  seed_random_initials(sc, lo, hi, 0.0, 2.0 * M_PI);
  return sc;
}

Scenario make_sim3() {
  Scenario sc;
  sc.name = "sim3";
  const int N = 21;
  const double a = 10.0, b = 5.0;
  sc.graph = CommGraph::cycle(N);
  sc.robots.resize(N);
  DesiredSetPtr big = catalog("circle", {a});
  DesiredSetPtr mid = catalog("ellipse", {a, b});
  DesiredSetPtr small = catalog("circle", {b});
  for (int i = 0; i < N; ++i) {
    RobotSpec& r = sc.robots[static_cast<size_t>(i)];
    r.set = i < 7 ? big : (i < 14 ? mid : small);
    r.k_phi = constant_gains(2, 1.0);
  }
  sc.coordination.deltas = {
      deltas_from_reference(sc.graph, reference_ramp(N, 2.0 * M_PI / N))};
  sc.coordination.kc1 = 100.0;
  sc.duration_s = 60.0;
  sc.seed = 33;
  Eigen::VectorXd lo(2), hi(2);
  lo << -12.0, -12.0;
  hi << 12.0, 12.0;
  seed_random_initials(sc, lo, hi, 0.0, 2.0 * M_PI);
  return sc;
}

Scenario make_sim4() {
  Scenario sc = torus_pattern(67, 10.0, {-1.0, -1.0}, 44);
  sc.name = "sim4";
  return sc;
}

Scenario make_exp1() {
  Scenario sc;
  sc.name = "exp1";
  sc.graph = CommGraph::cycle(2);
  sc.robots.resize(2);
  DesiredSetPtr curve =
      catalog("harmonic3d", {225.0, 1.0, 0.0, 225.0, 2.0, M_PI / 2.0, -20.0, 2.0, 0.0});
  Eigen::VectorXd gains(3);
  gains << 0.002, 0.002, 0.0025;
  for (RobotSpec& r : sc.robots) {
    r.set = curve;
    r.k_phi = gains;
  }
  sc.coordination.deltas = {Eigen::VectorXd::Zero(1)};  // tight formation
  sc.coordination.kc1 = 0.01;
  sc.model = ModelKind::kDubins;
  sc.guidance.v = 15.0;
  sc.guidance.k_theta = 1.0;
  sc.guidance.sat_a = -0.5;
  sc.guidance.sat_b = 0.5;
  sc.comm_interval_s = 0.1;  // 10 Hz radio
  sc.duration_s = 200.0;
  sc.seed = 55;
  sc.robots[0].initial_xi = (Eigen::VectorXd(4) << 250.0, 10.0, -15.0, 0.5).finished();
  sc.robots[0].initial_heading = 1.0;
  sc.robots[1].initial_xi = (Eigen::VectorXd(4) << 200.0, -40.0, -25.0, -0.3).finished();
  sc.robots[1].initial_heading = -0.5;
  return sc;
}

Scenario make_exp2() {
  Scenario sc;
  sc.name = "exp2";
  sc.graph = CommGraph::cycle(2);
  sc.robots.resize(2);
  DesiredSetPtr surface = catalog("flight_torus", {100.0, 5.0, 50.0});
  for (RobotSpec& r : sc.robots) {
    r.set = surface;
    r.k_phi = constant_gains(3, 0.003);
  }
  sc.coordination.deltas = {Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(1)};
  sc.coordination.kc1 = 0.01;
  sc.coordination.kc2 = 0.01;
  sc.coordination.desired_speeds = {0.005, 0.01};  // wdot2* = 2 wdot1*
  sc.model = ModelKind::kDubins;
  sc.guidance.v = 15.0;
  sc.guidance.k_theta = 1.0;
  sc.guidance.sat_a = -0.5;
  sc.guidance.sat_b = 0.5;
  sc.comm_interval_s = 0.1;
  sc.duration_s = 300.0;
  sc.seed = 66;
  sc.robots[0].initial_xi =
      (Eigen::VectorXd(5) << 103.0, 5.0, 52.0, 0.1, 0.3).finished();
  sc.robots[0].initial_heading = 1.2;
  sc.robots[1].initial_xi =
      (Eigen::VectorXd(5) << 95.0, -10.0, 48.0, -0.5, 0.2).finished();
  sc.robots[1].initial_heading = -0.8;
  return sc;
}

}  // namespace

std::map<std::string, Scenario> presets() {
  std::map<std::string, Scenario> out;
  out.emplace("sim1", make_sim1());
  out.emplace("sim2", make_sim2());
  out.emplace("sim3", make_sim3());
  out.emplace("sim4", make_sim4());
  out.emplace("exp1", make_exp1());
  out.emplace("exp2", make_exp2());
  return out;
}

Scenario preset(const std::string& name) {
  if (name == "sim1") return make_sim1();
  if (name == "sim2") return make_sim2();
  if (name == "sim3") return make_sim3();
  if (name == "sim4") return make_sim4();
  if (name == "exp1") return make_exp1();
  if (name == "exp2") return make_exp2();
  throw InvalidArgument("unknown preset '" + name + "'");
}

std::vector<std::string> preset_names() {
  return {"sim1", "sim2", "sim3", "sim4", "exp1", "exp2"};
}

}  // namespace cgvf

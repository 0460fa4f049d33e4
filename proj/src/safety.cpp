#include "cgvf/safety.hpp"

#include <cmath>
#include <limits>

namespace cgvf {

void SafetyConfig::validate() const {
  if (!(R > 0.0)) throw InvalidArgument("safety distance R must be positive");
  if (!(alpha > 0.0)) throw InvalidArgument("barrier gain alpha must be positive");
  if (!(activation_scale >= 1.0)) {
    throw InvalidArgument("activation_scale must be >= 1");
  }
}

double h_pair(const Eigen::VectorXd& xi_i, const Eigen::VectorXd& xi_j, double R,
              int k) {
  if (xi_i.size() != xi_j.size()) {
    throw InvalidArgument("h_pair states have different dimensions");
  }
  const int n = static_cast<int>(xi_i.size()) - k;
  return (xi_i.head(n) - xi_j.head(n)).squaredNorm() - R * R;
}

namespace {

bool all_satisfied(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                   const Eigen::VectorXd& x, double tol) {
  return ((A * x - b).array() <= tol).all();
}

/// Exact projection by enumerating candidate active sets. The projection
/// satisfies KKT with multipliers >= 0 on its active rows, so scanning
/// every subset and keeping feasible candidates with nonnegative
/// multipliers recovers it.
ProjectionResult enumerate_projection(const Eigen::VectorXd& x0,
                                      const Eigen::MatrixXd& A,
                                      const Eigen::VectorXd& b, double tol) {
  const int m = static_cast<int>(A.rows());
  ProjectionResult best;
  best.feasible = false;
  double best_dist = std::numeric_limits<double>::infinity();
  for (unsigned mask = 1; mask < (1u << m); ++mask) {
    const int count = __builtin_popcount(mask);
    Eigen::MatrixXd as(count, A.cols());
    Eigen::VectorXd bs(count);
    int r = 0;
    for (int row = 0; row < m; ++row) {
      if (mask & (1u << row)) {
        as.row(r) = A.row(row);
        bs[r] = b[row];
        ++r;
      }
    }
    Eigen::MatrixXd gram = as * as.transpose();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
    if (!lu.isInvertible()) continue;
    Eigen::VectorXd lambda = lu.solve(as * x0 - bs);
    if ((lambda.array() < -tol).any()) continue;
    Eigen::VectorXd x = x0 - as.transpose() * lambda;
    if (!all_satisfied(A, b, x, tol)) continue;
    const double dist = (x - x0).squaredNorm();
    if (dist < best_dist) {
      best_dist = dist;
      best.x = x;
      best.feasible = true;
      best.active = count;
    }
  }
  return best;
}

/// Dykstra's cyclic projection onto the half-space intersection;
/// converges to the Euclidean projection when the intersection is
/// nonempty.
ProjectionResult dykstra_projection(const Eigen::VectorXd& x0,
                                    const Eigen::MatrixXd& A,
                                    const Eigen::VectorXd& b, double tol,
                                    int max_iters) {
  const int m = static_cast<int>(A.rows());
  Eigen::VectorXd x = x0;
  Eigen::MatrixXd corrections = Eigen::MatrixXd::Zero(x0.size(), m);
  Eigen::VectorXd row_norm2(m);
  for (int r = 0; r < m; ++r) row_norm2[r] = A.row(r).squaredNorm();

  ProjectionResult out;
  for (int iter = 0; iter < max_iters; ++iter) {
    double shift = 0.0;
    for (int r = 0; r < m; ++r) {
      if (row_norm2[r] == 0.0) continue;
      Eigen::VectorXd y = x + corrections.col(r);
      const double excess = A.row(r).dot(y) - b[r];
      Eigen::VectorXd projected =
          excess > 0.0 ? Eigen::VectorXd(y - (excess / row_norm2[r]) * A.row(r).transpose())
                       : y;
      corrections.col(r) = y - projected;
      shift = std::max(shift, (projected - x).cwiseAbs().maxCoeff());
      x = projected;
    }
    if (shift < tol) break;
  }
  out.x = x;
  out.feasible = all_satisfied(A, b, x, std::max(tol * 1e3, 1e-7));
  for (int r = 0; r < m; ++r) {
    if (std::abs(A.row(r).dot(x) - b[r]) < 1e-7) ++out.active;
  }
  return out;
}

}  // namespace

ProjectionResult project_to_halfspaces(const Eigen::VectorXd& x0,
                                       const Eigen::MatrixXd& A,
                                       const Eigen::VectorXd& b, double tol,
                                       int max_iters, int max_enumerate) {
  if (A.rows() != b.size() || A.cols() != x0.size()) {
    throw InvalidArgument("projection constraint dimensions mismatch");
  }
  if (A.rows() == 0 || all_satisfied(A, b, x0, 0.0)) {
    return {x0, true, 0};
  }
  if (A.rows() <= max_enumerate) {
    ProjectionResult r = enumerate_projection(x0, A, b, tol);
    if (r.feasible) return r;
    // Singular Gram blocks can defeat the enumerator even when the
    // intersection is nonempty; let the iterative solver decide.
    ProjectionResult it = dykstra_projection(x0, A, b, tol, max_iters);
    return it.feasible ? it : r;
  }
  return dykstra_projection(x0, A, b, tol, max_iters);
}

std::vector<int> robots_in_range(const std::vector<Eigen::VectorXd>& states, int i,
                                 const SafetyConfig& cfg, int k) {
  std::vector<int> out;
  const double radius = cfg.activation_scale * cfg.R;
  const int n = static_cast<int>(states[static_cast<size_t>(i)].size()) - k;
  for (int j = 0; j < static_cast<int>(states.size()); ++j) {
    if (j == i) continue;
    const double dist = (states[static_cast<size_t>(i)].head(n) -
                         states[static_cast<size_t>(j)].head(n))
                            .norm();
    if (dist <= radius) out.push_back(j);
  }
  return out;
}

QpResult qp2_solve(const Eigen::VectorXd& xi_i, const Eigen::VectorXd& nominal_i,
                   const std::vector<Eigen::VectorXd>& neighbors_in_range,
                   const SafetyConfig& cfg, int k) {
  const int n = static_cast<int>(xi_i.size()) - k;
  QpResult out;
  out.chi_tilde = nominal_i;
  if (neighbors_in_range.empty()) return out;

  const int m = static_cast<int>(neighbors_in_range.size());
  Eigen::MatrixXd A(m, n);
  Eigen::VectorXd b(m);
  for (int r = 0; r < m; ++r) {
    const Eigen::VectorXd& xi_j = neighbors_in_range[static_cast<size_t>(r)];
    A.row(r) = (xi_j.head(n) - xi_i.head(n)).transpose();
    const double h = h_pair(xi_i, xi_j, cfg.R, k);
    b[r] = cfg.alpha / 4.0 * h * h * h;
  }
  ProjectionResult proj = project_to_halfspaces(nominal_i.head(n), A, b,
                                                cfg.qp_tolerance, cfg.qp_max_iters);
  out.active_constraints = proj.active;
  if (!proj.feasible) {
    out.infeasible = true;
    out.modified = true;
    out.chi_tilde.head(n).setZero();  // stationary physical motion
    return out;
  }
  out.chi_tilde.head(n) = proj.x;
  out.modified = (proj.x - nominal_i.head(n)).norm() > 0.0;
  return out;
}

std::vector<QpResult> qp1_solve(const std::vector<Eigen::VectorXd>& states,
                                const std::vector<Eigen::VectorXd>& nominals,
                                const SafetyConfig& cfg, int k) {
  const int N = static_cast<int>(states.size());
  if (static_cast<int>(nominals.size()) != N) {
    throw InvalidArgument("qp1_solve states/nominals size mismatch");
  }
  const int n = N > 0 ? static_cast<int>(states[0].size()) - k : 0;

  // Stack physical parts; one row per active pair.
  Eigen::VectorXd z0(static_cast<Eigen::Index>(n) * N);
  for (int i = 0; i < N; ++i) z0.segment(i * n, n) = nominals[static_cast<size_t>(i)].head(n);

  std::vector<std::pair<int, int>> active_pairs;
  for (int i = 0; i < N; ++i) {
    for (int j : robots_in_range(states, i, cfg, k)) {
      if (j > i) active_pairs.push_back({i, j});
    }
  }
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(
      static_cast<Eigen::Index>(active_pairs.size()), static_cast<Eigen::Index>(n) * N);
  Eigen::VectorXd b(static_cast<Eigen::Index>(active_pairs.size()));
  for (size_t r = 0; r < active_pairs.size(); ++r) {
    const auto [i, j] = active_pairs[r];
    const Eigen::VectorXd diff =
        states[static_cast<size_t>(j)].head(n) - states[static_cast<size_t>(i)].head(n);
    A.block(static_cast<Eigen::Index>(r), i * n, 1, n) = diff.transpose();
    A.block(static_cast<Eigen::Index>(r), j * n, 1, n) = -diff.transpose();
    const double h =
        h_pair(states[static_cast<size_t>(i)], states[static_cast<size_t>(j)], cfg.R, k);
    b[static_cast<Eigen::Index>(r)] = cfg.alpha / 2.0 * h * h * h;
  }

  ProjectionResult proj =
      project_to_halfspaces(z0, A, b, cfg.qp_tolerance, cfg.qp_max_iters);
  std::vector<QpResult> out(static_cast<size_t>(N));
  for (int i = 0; i < N; ++i) {
    QpResult& q = out[static_cast<size_t>(i)];
    q.chi_tilde = nominals[static_cast<size_t>(i)];
    if (!proj.feasible) {
      q.infeasible = true;
      q.modified = true;
      q.chi_tilde.head(n).setZero();
    } else {
      q.chi_tilde.head(n) = proj.x.segment(i * n, n);
      q.modified =
          (q.chi_tilde.head(n) - nominals[static_cast<size_t>(i)].head(n)).norm() > 0.0;
    }
  }
  return out;
}

SafetyReport safety_monitor(const std::vector<Eigen::VectorXd>& states,
                            const SafetyConfig& cfg, int k, double tolerance) {
  SafetyReport report;
  const int N = static_cast<int>(states.size());
  report.active_constraints.assign(static_cast<size_t>(N), 0);
  report.modification_magnitude.assign(static_cast<size_t>(N), 0.0);
  for (int i = 0; i < N; ++i) {
    for (int j = i + 1; j < N; ++j) {
      const double h =
          h_pair(states[static_cast<size_t>(i)], states[static_cast<size_t>(j)], cfg.R, k);
      report.pairs.push_back({i + 1, j + 1, h});
      report.h_min = std::min(report.h_min, h);
      if (h < -tolerance) report.violation = true;
    }
  }
  return report;
}

}  // namespace cgvf

#include "cgvf/field.hpp"

#include <cmath>

namespace cgvf {

std::pair<double, double> FieldConfig::extra_tail(int n) const {
  if (!desired_speeds) {
    throw InvalidArgument("surface field needs desired parametric speeds");
  }
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;  // (-1)^n
  return {-sign * desired_speeds->second, sign * desired_speeds->first};
}

Eigen::VectorXd wedge(const std::vector<Eigen::VectorXd>& vectors) {
  const int m = static_cast<int>(vectors.size());
  if (m < 1) throw InvalidArgument("wedge needs at least one vector");
  const int dim = m + 1;
  for (const auto& v : vectors) {
    if (v.size() != dim) {
      throw InvalidArgument("wedge of " + std::to_string(m) +
                            " vectors needs dimension " + std::to_string(dim));
    }
  }
  Eigen::MatrixXd rows(m, dim);
  for (int i = 0; i < m; ++i) rows.row(i) = vectors[static_cast<size_t>(i)];

  // Laplace expansion along the (formal) first row of basis vectors:
  // component q gets sign (-1)^q times the minor with column q removed.
  Eigen::VectorXd out(dim);
  Eigen::MatrixXd minor(m, m);
  for (int q = 0; q < dim; ++q) {
    int c = 0;
    for (int col = 0; col < dim; ++col) {
      if (col == q) continue;
      minor.col(c++) = rows.col(col);
    }
    const double det = m == 1 ? minor(0, 0) : minor.determinant();
    out[q] = (q % 2 == 0 ? 1.0 : -1.0) * det;
  }
  return out;
}

namespace {

void check_field_inputs(const DesiredSet& set, const FieldConfig& cfg,
                        const Eigen::VectorXd& xi, int expected_k) {
  if (set.param_count() != expected_k) {
    throw InvalidArgument("desired set has " + std::to_string(set.param_count()) +
                          " parameter(s), expected " + std::to_string(expected_k));
  }
  if (xi.size() != set.ambient_dim() + set.param_count()) {
    throw InvalidArgument("generalized state size mismatch in field evaluation");
  }
  if (cfg.k_phi.size() != set.ambient_dim()) {
    throw InvalidArgument("field gains size mismatch");
  }
}

}  // namespace

FieldValue path_field(const DesiredSet& set, const FieldConfig& cfg,
                      const Eigen::VectorXd& xi) {
  check_field_inputs(set, cfg, xi, 1);
  const int n = set.ambient_dim();
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;

  Eigen::VectorXd f(n);
  Eigen::MatrixXd d1(n, 1);
  set.jets(xi.tail(1), &f, &d1, nullptr);
  const Eigen::VectorXd ph = xi.head(n) - f;
  const Eigen::VectorXd kphi = cfg.k_phi.cwiseProduct(ph);

  FieldValue out;
  out.propagation.resize(n + 1);
  out.propagation.head(n) = sign * d1.col(0);
  out.propagation[n] = sign;
  out.convergence.resize(n + 1);
  out.convergence.head(n) = -kphi;
  out.convergence[n] = kphi.dot(d1.col(0));
  out.coordination = Eigen::VectorXd::Zero(n + 1);
  return out;
}

FieldValue surface_field(const DesiredSet& set, const FieldConfig& cfg,
                         const Eigen::VectorXd& xi) {
  check_field_inputs(set, cfg, xi, 2);
  const int n = set.ambient_dim();
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;

  const auto [v1, v2] = cfg.extra_tail(n);  // (v_{n+1}, v_{n+2})
  if (v1 == 0.0 && v2 == 0.0) {
    throw InvalidArgument("degenerate extra vector: both tail entries zero, "
                          "propagation term vanishes");
  }

  Eigen::VectorXd f(n);
  Eigen::MatrixXd d(n, 2);
  set.jets(xi.tail(2), &f, &d, nullptr);
  const Eigen::VectorXd ph = xi.head(n) - f;
  const Eigen::VectorXd kphi = cfg.k_phi.cwiseProduct(ph);

  FieldValue out;
  out.propagation.resize(n + 2);
  out.propagation.head(n) = sign * (v2 * d.col(0) - v1 * d.col(1));
  out.propagation[n] = sign * v2;
  out.propagation[n + 1] = -sign * v1;
  out.convergence.resize(n + 2);
  out.convergence.head(n) = -kphi;
  out.convergence[n] = kphi.dot(d.col(0));
  out.convergence[n + 1] = kphi.dot(d.col(1));
  out.coordination = Eigen::VectorXd::Zero(n + 2);
  return out;
}

Eigen::VectorXd coordination_term(int n, const Eigen::VectorXd& c_values) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n + c_values.size());
  out.tail(c_values.size()) = c_values;
  return out;
}

FieldValue combined_field(const DesiredSet& set, const FieldConfig& cfg,
                          const Eigen::VectorXd& xi,
                          const Eigen::VectorXd& c_values) {
  const int k = set.param_count();
  if (c_values.size() != k) {
    throw InvalidArgument("coordination values size mismatch");
  }
  FieldValue out = k == 1 ? path_field(set, cfg, xi) : surface_field(set, cfg, xi);
  const int n = set.ambient_dim();
  out.coordination = Eigen::VectorXd::Zero(n + k);
  out.coordination[n] = cfg.kc1 * c_values[0];
  if (k == 2) out.coordination[n + 1] = cfg.kc2 * c_values[1];
  return out;
}

double field_norm_floor(const FieldConfig& cfg, int n, int k) {
  if (k == 1) return 1.0;
  const auto [v1, v2] = cfg.extra_tail(n);
  return std::hypot(v1, v2);
}

}  // namespace cgvf

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "cgvf/field.hpp"

using namespace cgvf;
using doctest::Approx;

namespace {

/// Independent oracle: determinant by explicit permutation sum (fine for
/// the m <= 5 sizes exercised here), then the cofactor expansion of the
/// formal first-row-of-basis-vectors determinant.
double permanent_style_det(const Eigen::MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<int> perm(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<size_t>(i)] = i;
  double det = 0.0;
  do {
    int inversions = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (perm[static_cast<size_t>(i)] > perm[static_cast<size_t>(j)]) ++inversions;
    double term = inversions % 2 == 0 ? 1.0 : -1.0;
    for (int i = 0; i < n; ++i) term *= a(i, perm[static_cast<size_t>(i)]);
    det += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

Eigen::VectorXd wedge_oracle(const std::vector<Eigen::VectorXd>& vectors) {
  const int m = static_cast<int>(vectors.size());
  const int dim = m + 1;
  Eigen::VectorXd out(dim);
  for (int q = 0; q < dim; ++q) {
    Eigen::MatrixXd minor(m, m);
    int c = 0;
    for (int col = 0; col < dim; ++col) {
      if (col == q) continue;
      for (int r = 0; r < m; ++r) minor(r, c) = vectors[static_cast<size_t>(r)][col];
      ++c;
    }
    out[q] = (q % 2 == 0 ? 1.0 : -1.0) * permanent_style_det(minor);
  }
  return out;
}

FieldConfig unit_gains(int n) {
  FieldConfig cfg;
  cfg.k_phi = Eigen::VectorXd::Ones(n);
  return cfg;
}

std::mt19937_64 rng(101);

Eigen::VectorXd random_vec(int size, double scale = 2.0) {
  std::uniform_real_distribution<double> uni(-scale, scale);
  Eigen::VectorXd v(size);
  for (int i = 0; i < size; ++i) v[i] = uni(rng);
  return v;
}

struct NamedSet {
  DesiredSetPtr set;
  double sample_radius;
};

std::vector<NamedSet> path_sets() {
  return {
      {catalog("circle", {1.0}), 3.0},
      {catalog("circle", {10.0}), 15.0},
      {catalog("ellipse", {10.0, 5.0}), 15.0},
      {catalog("bent_infinity", {}), 40.0},
      {catalog("lissajous3d", {std::sqrt(2.0), 4.1, 7.1, 0.1, 0.7, 0.0}), 3.0},
  };
}

}  // namespace

TEST_CASE("wedge reduces to the cross product") {
  Eigen::VectorXd e1(3), e2(3);
  e1 << 1, 0, 0;
  e2 << 0, 1, 0;
  Eigen::VectorXd w = wedge({e1, e2});
  CHECK(w[0] == 0.0);
  CHECK(w[1] == 0.0);
  CHECK(w[2] == 1.0);
  Eigen::VectorXd r = wedge({e2, e1});
  CHECK(r[2] == -1.0);  // antisymmetry
}

TEST_CASE("wedge orthogonality and oracle agreement in higher dimensions") {
  for (int m = 1; m <= 5; ++m) {
    for (int trial = 0; trial < 40; ++trial) {
      std::vector<Eigen::VectorXd> vs;
      for (int i = 0; i < m; ++i) vs.push_back(random_vec(m + 1));
      Eigen::VectorXd w = wedge(vs);
      Eigen::VectorXd expected = wedge_oracle(vs);
      CHECK((w - expected).cwiseAbs().maxCoeff() < 1e-12 * (1 + expected.norm()));
      for (const Eigen::VectorXd& v : vs) {
        CHECK(std::abs(w.dot(v)) < 1e-12 * (1 + w.norm() * v.norm()));
      }
    }
  }
  CHECK_THROWS_AS(wedge({random_vec(3), random_vec(4)}), InvalidArgument);
  CHECK_THROWS_AS(wedge({}), InvalidArgument);
}

TEST_CASE("path field on the unit circle") {
  DesiredSetPtr circle = catalog("circle", {1.0});
  FieldConfig cfg = unit_gains(2);

  Eigen::VectorXd on(3);
  on << 1.0, 0.0, 0.0;
  Eigen::VectorXd chi = path_field(*circle, cfg, on).total();
  CHECK(chi[0] == Approx(0.0).scale(1.0));
  CHECK(chi[1] == Approx(1.0));
  CHECK(chi[2] == Approx(1.0));

  Eigen::VectorXd off(3);
  off << 2.0, 0.0, 0.0;
  Eigen::VectorXd chi_off = path_field(*circle, cfg, off).total();
  CHECK(chi_off[0] == Approx(-1.0));
  CHECK(chi_off[1] == Approx(1.0));
  CHECK(chi_off[2] == Approx(1.0));
}

TEST_CASE("path field last component identity") {
  for (const NamedSet& entry : path_sets()) {
    const int n = entry.set->ambient_dim();
    FieldConfig cfg;
    cfg.k_phi = random_vec(n).cwiseAbs() + Eigen::VectorXd::Constant(n, 0.1);
    for (int trial = 0; trial < 50; ++trial) {
      Eigen::VectorXd xi = random_vec(n + 1, entry.sample_radius);
      FieldValue fv = path_field(*entry.set, cfg, xi);
      const Eigen::VectorXd w = xi.tail(1);
      const Eigen::VectorXd df = entry.set->first_partials(w).col(0);
      const Eigen::VectorXd ph = xi.head(n) - entry.set->eval(w);
      const double sign = n % 2 == 0 ? 1.0 : -1.0;
      const double expected = sign + cfg.k_phi.cwiseProduct(ph).dot(df);
      CHECK(fv.total()[n] == Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("propagation and convergence are orthogonal (Pythagoras)") {
  for (const NamedSet& entry : path_sets()) {
    const int n = entry.set->ambient_dim();
    FieldConfig cfg;
    cfg.k_phi = random_vec(n).cwiseAbs() + Eigen::VectorXd::Constant(n, 0.1);
    for (int trial = 0; trial < 1000; ++trial) {
      Eigen::VectorXd xi = random_vec(n + 1, entry.sample_radius);
      FieldValue fv = path_field(*entry.set, cfg, xi);
      const double lhs = fv.total().squaredNorm();
      const double rhs = fv.propagation.squaredNorm() + fv.convergence.squaredNorm();
      CHECK(lhs == Approx(rhs).epsilon(1e-10));
      CHECK(fv.total().norm() >= 1.0 - 1e-12);  // singularity-free
    }
  }
}

TEST_CASE("gradient-field inner product identity") {
  // grad phi_j . chi_pf = -k_j phi_j - f_j' (f'^T K Phi)
  for (const NamedSet& entry : path_sets()) {
    const int n = entry.set->ambient_dim();
    FieldConfig cfg;
    cfg.k_phi = random_vec(n).cwiseAbs() + Eigen::VectorXd::Constant(n, 0.1);
    for (int trial = 0; trial < 100; ++trial) {
      Eigen::VectorXd xi = random_vec(n + 1, entry.sample_radius);
      FieldValue fv = path_field(*entry.set, cfg, xi);
      const Eigen::VectorXd w = xi.tail(1);
      const Eigen::VectorXd df = entry.set->first_partials(w).col(0);
      const Eigen::VectorXd ph = xi.head(n) - entry.set->eval(w);
      const double ftkphi = df.dot(cfg.k_phi.cwiseProduct(ph));
      for (int j = 1; j <= n; ++j) {
        const double lhs = grad_phi(*entry.set, xi, j).dot(fv.total());
        const double rhs = -cfg.k_phi[j - 1] * ph[j - 1] - df[j - 1] * ftkphi;
        CHECK(lhs == Approx(rhs).epsilon(1e-10).scale(1.0));
      }
    }
  }
}

TEST_CASE("wedge construction equals the closed-form path field") {
  for (const NamedSet& entry : path_sets()) {
    const int n = entry.set->ambient_dim();
    FieldConfig cfg;
    cfg.k_phi = random_vec(n).cwiseAbs() + Eigen::VectorXd::Constant(n, 0.1);
    for (int trial = 0; trial < 200; ++trial) {
      Eigen::VectorXd xi = random_vec(n + 1, entry.sample_radius);
      std::vector<Eigen::VectorXd> grads;
      Eigen::VectorXd conv = Eigen::VectorXd::Zero(n + 1);
      Eigen::VectorXd ph = phi(*entry.set, xi);
      for (int j = 1; j <= n; ++j) {
        grads.push_back(grad_phi(*entry.set, xi, j));
        conv -= cfg.k_phi[j - 1] * ph[j - 1] * grads.back();
      }
      Eigen::VectorXd from_wedge = wedge(grads) + conv;
      Eigen::VectorXd closed = path_field(*entry.set, cfg, xi).total();
      CHECK((from_wedge - closed).cwiseAbs().maxCoeff() <
            1e-12 * (1.0 + closed.norm()));
    }
  }
}

TEST_CASE("surface field spec values") {
  DesiredSetPtr torus = catalog("torus", {2.0, 1.0});
  FieldConfig cfg = unit_gains(3);
  cfg.desired_speeds = {{-1.0, -1.0}};

  Eigen::VectorXd on(5);
  on.head(3) = torus->eval((Eigen::VectorXd(2) << 0.4, 1.3).finished());
  on[3] = 0.4;
  on[4] = 1.3;
  Eigen::VectorXd chi = surface_field(*torus, cfg, on).total();
  CHECK(chi[3] == Approx(-1.0));
  CHECK(chi[4] == Approx(-1.0));

  DesiredSetPtr sphere = catalog("sphere", {1.0});
  FieldConfig scfg = unit_gains(3);
  scfg.desired_speeds = {{0.0, 1.0}};
  Eigen::VectorXd son(5);
  son.head(3) = sphere->eval((Eigen::VectorXd(2) << 0.2, -0.7).finished());
  son[3] = 0.2;
  son[4] = -0.7;
  Eigen::VectorXd schi = surface_field(*sphere, scfg, son).total();
  CHECK(schi[3] == Approx(0.0).scale(1.0));
  CHECK(schi[4] == Approx(1.0));
}

TEST_CASE("surface propagation is orthogonal to every gradient") {
  DesiredSetPtr torus = catalog("torus", {2.0, 1.0});
  FieldConfig cfg = unit_gains(3);
  cfg.desired_speeds = {{-1.0, -1.0}};
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::VectorXd xi = random_vec(5, 4.0);
    FieldValue fv = surface_field(*torus, cfg, xi);
    for (int j = 1; j <= 3; ++j) {
      const Eigen::VectorXd g = grad_phi(*torus, xi, j);
      CHECK(std::abs(fv.propagation.dot(g)) <
            1e-10 * (1.0 + fv.propagation.norm() * g.norm()));
    }
    const double lhs = fv.total().squaredNorm();
    const double rhs = fv.propagation.squaredNorm() + fv.convergence.squaredNorm();
    CHECK(lhs == Approx(rhs).epsilon(1e-10));
  }
}

TEST_CASE("surface wedge construction equals the closed form") {
  DesiredSetPtr sphere = catalog("sphere", {1.0});
  FieldConfig cfg;
  cfg.k_phi = (Eigen::VectorXd(3) << 0.5, 1.5, 2.0).finished();
  cfg.desired_speeds = {{0.7, -0.4}};
  const auto [v1, v2] = cfg.extra_tail(3);
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::VectorXd xi = random_vec(5, 3.0);
    std::vector<Eigen::VectorXd> grads;
    Eigen::VectorXd conv = Eigen::VectorXd::Zero(5);
    Eigen::VectorXd ph = phi(*sphere, xi);
    for (int j = 1; j <= 3; ++j) {
      grads.push_back(grad_phi(*sphere, xi, j));
      conv -= cfg.k_phi[j - 1] * ph[j - 1] * grads.back();
    }
    Eigen::VectorXd extra = Eigen::VectorXd::Zero(5);
    extra[3] = v1;
    extra[4] = v2;
    grads.push_back(extra);
    Eigen::VectorXd from_wedge = wedge(grads) + conv;
    Eigen::VectorXd closed = surface_field(*sphere, cfg, xi).total();
    CHECK((from_wedge - closed).cwiseAbs().maxCoeff() < 1e-12 * (1.0 + closed.norm()));
  }
}

TEST_CASE("degenerate extra vector is rejected") {
  DesiredSetPtr torus = catalog("torus", {2.0, 1.0});
  FieldConfig cfg = unit_gains(3);
  Eigen::VectorXd xi = random_vec(5);
  CHECK_THROWS_AS(surface_field(*torus, cfg, xi), InvalidArgument);  // no speeds
  cfg.desired_speeds = {{0.0, 0.0}};
  CHECK_THROWS_AS(surface_field(*torus, cfg, xi), InvalidArgument);
}

TEST_CASE("coordination term placement and combination") {
  Eigen::VectorXd c1(1);
  c1 << 0.0;
  CHECK(coordination_term(2, c1).cwiseAbs().maxCoeff() == 0.0);

  Eigen::VectorXd c2(2);
  c2 << 3.0, -1.0;
  Eigen::VectorXd t2 = coordination_term(3, c2);
  REQUIRE(t2.size() == 5);
  CHECK(t2[0] == 0.0);
  CHECK(t2[1] == 0.0);
  CHECK(t2[2] == 0.0);
  CHECK(t2[3] == 3.0);
  CHECK(t2[4] == -1.0);

  Eigen::VectorXd c3(1);
  c3 << 2.0;
  Eigen::VectorXd t3 = coordination_term(2, c3);
  CHECK(t3[2] == 2.0);

  DesiredSetPtr circle = catalog("circle", {1.0});
  FieldConfig cfg = unit_gains(2);
  cfg.kc1 = 2.0;
  Eigen::VectorXd on(3);
  on << 1.0, 0.0, 0.0;
  Eigen::VectorXd half(1);
  half << 0.5;
  Eigen::VectorXd chi = combined_field(*circle, cfg, on, half).total();
  CHECK(chi[0] == Approx(0.0).scale(1.0));
  CHECK(chi[1] == Approx(1.0));
  CHECK(chi[2] == Approx(2.0));  // 1 + 2*0.5

  // c = 0 reduces to the uncoordinated field; physical slots never see c
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd xi = random_vec(3, 3.0);
    Eigen::VectorXd zero(1);
    zero << 0.0;
    CHECK((combined_field(*circle, cfg, xi, zero).total() -
           path_field(*circle, cfg, xi).total())
              .cwiseAbs()
              .maxCoeff() == 0.0);
    Eigen::VectorXd c(1);
    c << std::uniform_real_distribution<double>(-5, 5)(rng);
    Eigen::VectorXd with_c = combined_field(*circle, cfg, xi, c).total();
    Eigen::VectorXd without = combined_field(*circle, cfg, xi, zero).total();
    CHECK((with_c.head(2) - without.head(2)).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("field norm floor") {
  FieldConfig path_cfg = unit_gains(2);
  CHECK(field_norm_floor(path_cfg, 2, 1) == 1.0);

  FieldConfig s1 = unit_gains(3);
  s1.desired_speeds = {{-1.0, -1.0}};
  CHECK(field_norm_floor(s1, 3, 2) == Approx(std::sqrt(2.0)));

  FieldConfig s2 = unit_gains(3);
  s2.desired_speeds = {{0.0, 1.0}};
  CHECK(field_norm_floor(s2, 3, 2) == Approx(1.0));
}

TEST_CASE("extra tail satisfies the on-surface speed identity") {
  // wdot1 on-surface = (-1)^n v_{n+2}, wdot2 = (-1)^{n+1} v_{n+1}
  for (int n : {2, 3, 4}) {
    FieldConfig cfg;
    cfg.desired_speeds = {{0.37, -1.9}};
    const auto [v1, v2] = cfg.extra_tail(n);
    const double sign = n % 2 == 0 ? 1.0 : -1.0;
    CHECK(sign * v2 == Approx(0.37));
    CHECK(-sign * v1 == Approx(-1.9));
  }
}

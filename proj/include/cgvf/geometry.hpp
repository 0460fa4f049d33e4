#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "cgvf/errors.hpp"

namespace cgvf {

/// A parametric desired set: a path (k = 1) or surface (k = 2) in R^n,
/// x_j = f_j(w), with analytic first and second partial derivatives.
///
/// Immutable after construction. Second partials are stored column-wise
/// as (w1,w1), (w1,w2), (w2,w2) for k = 2 and as the single column f''
/// for k = 1; mixed partials are symmetric since every set is C^2.
class DesiredSet {
 public:
  virtual ~DesiredSet() = default;

  int ambient_dim() const { return n_; }
  int param_count() const { return k_; }
  const std::string& name() const { return name_; }
  const std::vector<double>& params() const { return params_; }

  /// Scenario-file rendering: "name(p1,p2)" for catalog sets,
  /// "expr: f1; f2; ..." for expression sets.
  virtual std::string spec_string() const;

  /// Fills whichever outputs are non-null in one pass. Shapes must be
  /// f: n, d1: n x k, d2: n x k(k+1)/2. The single entry point keeps
  /// repeated trigonometry out of the integration loop.
  virtual void jets(const Eigen::Ref<const Eigen::VectorXd>& w, Eigen::VectorXd* f,
                    Eigen::MatrixXd* d1, Eigen::MatrixXd* d2) const = 0;

  /// f(w) in R^n.
  Eigen::VectorXd eval(const Eigen::VectorXd& w) const;
  /// First partials, n x k: column m is df/dw_m.
  Eigen::MatrixXd first_partials(const Eigen::VectorXd& w) const;
  /// Second partials, n x k(k+1)/2, columns ordered (1,1)[,(1,2),(2,2)].
  Eigen::MatrixXd second_partials(const Eigen::VectorXd& w) const;

  /// Second partial d^2 f / (dw_l dw_m) as an n-vector; l, m are 1-based.
  Eigen::VectorXd second_partial(const Eigen::VectorXd& w, int l, int m) const;

 protected:
  DesiredSet(int n, int k, std::string name, std::vector<double> params)
      : n_(n), k_(k), name_(std::move(name)), params_(std::move(params)) {}
  void check_param(const Eigen::Ref<const Eigen::VectorXd>& w) const;

 private:
  int n_;
  int k_;
  std::string name_;
  std::vector<double> params_;
};

using DesiredSetPtr = std::shared_ptr<const DesiredSet>;

/// Generalized coordinate of one robot: physical position stacked with
/// its virtual coordinate(s), xi = (x, w) in R^{n+k}.
struct GeneralizedState {
  Eigen::VectorXd xi;

  GeneralizedState() = default;
  explicit GeneralizedState(Eigen::VectorXd v) : xi(std::move(v)) {}

  Eigen::VectorXd position(int n) const { return xi.head(n); }
  Eigen::VectorXd virtual_coords(int k) const { return xi.tail(k); }
};

/// Per-robot gains: one positive gain per surface function.
struct GainSet {
  Eigen::VectorXd k_phi;

  void validate(int n) const;
};

/// Surface-error vector Phi(xi) with Phi_j = x_j - f_j(w); zero exactly
/// on the lifted desired set.
Eigen::VectorXd phi(const DesiredSet& set, const Eigen::VectorXd& xi);

/// Gradient of phi_j with respect to the generalized coordinate:
/// e_j stacked with -df_j/dw_m. j is 1-based.
Eigen::VectorXd grad_phi(const DesiredSet& set, const Eigen::VectorXd& xi, int j);

/// Lifts a parameter value onto the set: (f(w), w) in R^{n+k}.
Eigen::VectorXd lift(const DesiredSet& set, const Eigen::VectorXd& w);

/// Max abs deviation between the analytic partials and central finite
/// differences with step h, over all components, first and second order.
double check_derivatives(const DesiredSet& set, const Eigen::VectorXd& w, double h);

/// Named catalog of analytic sets:
///   circle(a)                      - (a cos w, a sin w)
///   ellipse(a, b)                  - (a cos w, b sin w)
///   bent_infinity()                - 3D self-intersecting figure-eight
///   lissajous3d(nx,ny,nz,mx,my,mz) - (cos(nx w)+mx, cos(ny w)+my, cos(nz w)+mz)
///   harmonic3d(a1,b1,c1,...,a3,b3,c3) - f_j = a_j cos(b_j w + c_j)
///   sphere(rho)                    - (rho cos w1 cos w2, rho cos w1 sin w2, rho sin w1)
///   torus(R, r)                    - ((R + r cos w1) cos w2, ..., r sin w1)
///   flight_torus(R, r, z0)         - ((R + r cos w2) cos w1, ..., r sin w2 + z0)
DesiredSetPtr catalog(const std::string& name, const std::vector<double>& params);

/// Builds a set from one expression string per ambient coordinate, in the
/// variable w (k = 1) or w1, w2 (k = 2); differentiated symbolically once.
DesiredSetPtr make_expression_set(const std::vector<std::string>& components, int k);

}  // namespace cgvf

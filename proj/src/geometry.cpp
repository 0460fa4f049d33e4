#include "cgvf/geometry.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

#include "cgvf/expression.hpp"

namespace cgvf {

std::string DesiredSet::spec_string() const {
  std::string out = name_ + "(";
  char buf[40];
  for (size_t i = 0; i < params_.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", params_[i]);
    if (i) out += ", ";
    out += buf;
  }
  return out + ")";
}

void DesiredSet::check_param(const Eigen::Ref<const Eigen::VectorXd>& w) const {
  if (w.size() != k_) {
    throw InvalidArgument(name_ + ": parameter vector has size " +
                          std::to_string(w.size()) + ", expected " +
                          std::to_string(k_));
  }
}

Eigen::VectorXd DesiredSet::eval(const Eigen::VectorXd& w) const {
  check_param(w);
  Eigen::VectorXd f(n_);
  jets(w, &f, nullptr, nullptr);
  return f;
}

Eigen::MatrixXd DesiredSet::first_partials(const Eigen::VectorXd& w) const {
  check_param(w);
  Eigen::MatrixXd d1(n_, k_);
  jets(w, nullptr, &d1, nullptr);
  return d1;
}

Eigen::MatrixXd DesiredSet::second_partials(const Eigen::VectorXd& w) const {
  check_param(w);
  Eigen::MatrixXd d2(n_, k_ * (k_ + 1) / 2);
  jets(w, nullptr, nullptr, &d2);
  return d2;
}

Eigen::VectorXd DesiredSet::second_partial(const Eigen::VectorXd& w, int l,
                                           int m) const {
  if (l < 1 || l > k_ || m < 1 || m > k_) {
    throw InvalidArgument("second_partial indices out of range");
  }
  Eigen::MatrixXd h = second_partials(w);
  if (k_ == 1) return h.col(0);
  int lo = std::min(l, m), hi = std::max(l, m);
  int col = (lo == 1 && hi == 1) ? 0 : (lo == 1 && hi == 2) ? 1 : 2;
  return h.col(col);
}

void GainSet::validate(int n) const {
  if (k_phi.size() != n) {
    throw InvalidArgument("gain set has " + std::to_string(k_phi.size()) +
                          " entries, expected " + std::to_string(n));
  }
  for (int j = 0; j < n; ++j) {
    if (!(k_phi[j] > 0.0)) {
      throw InvalidArgument("gain k_" + std::to_string(j + 1) +
                            " must be strictly positive");
    }
  }
}

Eigen::VectorXd phi(const DesiredSet& set, const Eigen::VectorXd& xi) {
  const int n = set.ambient_dim(), k = set.param_count();
  if (xi.size() != n + k) {
    throw InvalidArgument("generalized state has size " + std::to_string(xi.size()) +
                          ", expected " + std::to_string(n + k));
  }
  return xi.head(n) - set.eval(xi.tail(k));
}

Eigen::VectorXd grad_phi(const DesiredSet& set, const Eigen::VectorXd& xi, int j) {
  const int n = set.ambient_dim(), k = set.param_count();
  if (j < 1 || j > n) {
    throw InvalidArgument("surface index " + std::to_string(j) + " outside [1," +
                          std::to_string(n) + "]");
  }
  if (xi.size() != n + k) {
    throw InvalidArgument("generalized state size mismatch in grad_phi");
  }
  Eigen::VectorXd g = Eigen::VectorXd::Zero(n + k);
  g[j - 1] = 1.0;
  g.tail(k) = -set.first_partials(xi.tail(k)).row(j - 1).transpose();
  return g;
}

Eigen::VectorXd lift(const DesiredSet& set, const Eigen::VectorXd& w) {
  Eigen::VectorXd xi(set.ambient_dim() + set.param_count());
  xi.head(set.ambient_dim()) = set.eval(w);
  xi.tail(set.param_count()) = w;
  return xi;
}

double check_derivatives(const DesiredSet& set, const Eigen::VectorXd& w, double h) {
  if (!(h > 0.0)) throw InvalidArgument("finite-difference step must be positive");
  const int k = set.param_count();
  double worst = 0.0;

  Eigen::MatrixXd first = set.first_partials(w);
  for (int m = 0; m < k; ++m) {
    Eigen::VectorXd wp = w, wm = w;
    wp[m] += h;
    wm[m] -= h;
    Eigen::VectorXd fd = (set.eval(wp) - set.eval(wm)) / (2.0 * h);
    worst = std::max(worst, (first.col(m) - fd).cwiseAbs().maxCoeff());
  }
  for (int l = 1; l <= k; ++l) {
    for (int m = l; m <= k; ++m) {
      Eigen::VectorXd wp = w, wm = w;
      wp[m - 1] += h;
      wm[m - 1] -= h;
      Eigen::VectorXd fd =
          (set.first_partials(wp).col(l - 1) - set.first_partials(wm).col(l - 1)) /
          (2.0 * h);
      worst = std::max(worst, (set.second_partial(w, l, m) - fd).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

namespace {

/// Analytic catalog entry backed by one closure filling all requested jets.
class AnalyticSet final : public DesiredSet {
 public:
  using Fn = std::function<void(const Eigen::Ref<const Eigen::VectorXd>& w,
                                Eigen::VectorXd* f, Eigen::MatrixXd* d1,
                                Eigen::MatrixXd* d2)>;

  AnalyticSet(int n, int k, std::string name, std::vector<double> params, Fn fn)
      : DesiredSet(n, k, std::move(name), std::move(params)), fn_(std::move(fn)) {}

  void jets(const Eigen::Ref<const Eigen::VectorXd>& w, Eigen::VectorXd* f,
            Eigen::MatrixXd* d1, Eigen::MatrixXd* d2) const override {
    check_param(w);
    fn_(w, f, d1, d2);
  }

 private:
  Fn fn_;
};

void require_params(const std::string& name, const std::vector<double>& p,
                    size_t count) {
  if (p.size() != count) {
    throw InvalidArgument("catalog set '" + name + "' expects " +
                          std::to_string(count) + " parameter(s), got " +
                          std::to_string(p.size()));
  }
}

DesiredSetPtr make_circle(const std::vector<double>& p) {
  require_params("circle", p, 1);
  const double a = p[0];
  return std::make_shared<AnalyticSet>(
      2, 1, "circle", p,
      [a](const Eigen::Ref<const Eigen::VectorXd>& w, Eigen::VectorXd* f,
          Eigen::MatrixXd* d1, Eigen::MatrixXd* d2) {
        const double c = std::cos(w[0]), s = std::sin(w[0]);
        if (f) *f << a * c, a * s;
        if (d1) *d1 << -a * s, a * c;
        if (d2) *d2 << -a * c, -a * s;
      });
}

DesiredSetPtr make_ellipse(const std::vector<double>& p) {
  require_params("ellipse", p, 2);
  const double a = p[0], b = p[1];
  return std::make_shared<AnalyticSet>(
      2, 1, "ellipse", p,
      [a, b](const Eigen::Ref<const Eigen::VectorXd>& w, Eigen::VectorXd* f,
             Eigen::MatrixXd* d1, Eigen::MatrixXd* d2) {
        const double c = std::cos(w[0]), s = std::sin(w[0]);
        if (f) *f << a * c, b * s;
        if (d1) *d1 << -a * s, b * c;
        if (d2) *d2 << -a * c, -b * s;
      });
}

// 3D self-intersecting bent figure-eight:
//   x1 = 15 sin 2w,  x2 = 30 sin w sqrt(0.5 (1 - 0.5 sin^2 w)),
//   x3 = 5 + 5 cos 2w - 2.
// The sqrt argument lies in [0.25, 0.5], so the curve is C^2 everywhere.
DesiredSetPtr make_bent_infinity(const std::vector<double>& p) {
  require_params("bent_infinity", p, 0);
  return std::make_shared<AnalyticSet>(
      3, 1, "bent_infinity", p,
      [](const Eigen::Ref<const Eigen::VectorXd>& w, Eigen::VectorXd* f,
         Eigen::MatrixXd* d1, Eigen::MatrixXd* d2) {
        const double s = std::sin(w[0]), c = std::cos(w[0]);
        const double s2 = std::sin(2 * w[0]), c2 = std::cos(2 * w[0]);
        const double g = 0.5 * (1.0 - 0.5 * s * s);  // in [0.25, 0.5]
        const double rg = std::sqrt(g);
        if (f) *f << 15.0 * s2, 30.0 * s * rg, 5.0 + 5.0 * c2 - 2.0;
        if (d1) *d1 << 30.0 * c2, 30.0 * c * rg - 7.5 * s * s * c / rg, -10.0 * s2;
        if (d2) {
          const double ddx2 = -30.0 * s * rg -
                              (22.5 * s * c * c - 7.5 * s * s * s) / rg -
                              1.875 * s * s * s * c * c / (g * rg);
          *d2 << -60.0 * s2, ddx2, -20.0 * c2;
        }
      });
}

DesiredSetPtr make_lissajous3d(const std::vector<double>& p) {
  require_params("lissajous3d", p, 6);
  return std::make_shared<AnalyticSet>(
      3, 1, "lissajous3d", p,
      [p](const Eigen::Ref<const Eigen::VectorXd>& w, Eigen::VectorXd* f,
          Eigen::MatrixXd* d1, Eigen::MatrixXd* d2) {
        for (int j = 0; j < 3; ++j) {
          const double nj = p[static_cast<size_t>(j)];
          const double mj = p[static_cast<size_t>(j) + 3];
          if (f) (*f)[j] = std::cos(nj * w[0]) + mj;
          if (d1) (*d1)(j, 0) = -nj * std::sin(nj * w[0]);
          if (d2) (*d2)(j, 0) = -nj * nj * std::cos(nj * w[0]);
        }
      });
}

// f_j = a_j cos(b_j w + c_j); parameters flattened (a1,b1,c1, ..., a3,b3,c3).
DesiredSetPtr make_harmonic3d(const std::vector<double>& p) {
  require_params("harmonic3d", p, 9);
  return std::make_shared<AnalyticSet>(
      3, 1, "harmonic3d", p,
      [p](const Eigen::Ref<const Eigen::VectorXd>& w, Eigen::VectorXd* f,
          Eigen::MatrixXd* d1, Eigen::MatrixXd* d2) {
        for (int j = 0; j < 3; ++j) {
          const double a = p[static_cast<size_t>(3 * j)];
          const double b = p[static_cast<size_t>(3 * j) + 1];
          const double c = p[static_cast<size_t>(3 * j) + 2];
          if (f) (*f)[j] = a * std::cos(b * w[0] + c);
          if (d1) (*d1)(j, 0) = -a * b * std::sin(b * w[0] + c);
          if (d2) (*d2)(j, 0) = -a * b * b * std::cos(b * w[0] + c);
        }
      });
}

DesiredSetPtr make_sphere(const std::vector<double>& p) {
  require_params("sphere", p, 1);
  const double rho = p[0];
  return std::make_shared<AnalyticSet>(
      3, 2, "sphere", p,
      [rho](const Eigen::Ref<const Eigen::VectorXd>& w, Eigen::VectorXd* f,
            Eigen::MatrixXd* d1, Eigen::MatrixXd* d2) {
        const double c1 = std::cos(w[0]), s1 = std::sin(w[0]);
        const double c2 = std::cos(w[1]), s2 = std::sin(w[1]);
        if (f) *f << rho * c1 * c2, rho * c1 * s2, rho * s1;
        if (d1) {
          *d1 << -rho * s1 * c2, -rho * c1 * s2,
                 -rho * s1 * s2,  rho * c1 * c2,
                  rho * c1,       0.0;
        }
        if (d2) {
          // columns: (w1,w1), (w1,w2), (w2,w2)
          *d2 << -rho * c1 * c2,  rho * s1 * s2, -rho * c1 * c2,
                 -rho * c1 * s2, -rho * s1 * c2, -rho * c1 * s2,
                 -rho * s1,       0.0,            0.0;
        }
      });
}

DesiredSetPtr make_torus(const std::vector<double>& p) {
  require_params("torus", p, 2);
  const double R = p[0], r = p[1];
  return std::make_shared<AnalyticSet>(
      3, 2, "torus", p,
      [R, r](const Eigen::Ref<const Eigen::VectorXd>& w, Eigen::VectorXd* f,
             Eigen::MatrixXd* d1, Eigen::MatrixXd* d2) {
        const double c1 = std::cos(w[0]), s1 = std::sin(w[0]);
        const double c2 = std::cos(w[1]), s2 = std::sin(w[1]);
        const double ring = R + r * c1;
        if (f) *f << ring * c2, ring * s2, r * s1;
        if (d1) {
          *d1 << -r * s1 * c2, -ring * s2,
                 -r * s1 * s2,  ring * c2,
                  r * c1,       0.0;
        }
        if (d2) {
          *d2 << -r * c1 * c2,  r * s1 * s2, -ring * c2,
                 -r * c1 * s2, -r * s1 * c2, -ring * s2,
                 -r * s1,       0.0,          0.0;
        }
      });
}

// Torus with swapped parameter roles and an altitude offset: w1 is the
// heading-plane angle, w2 the vertical loop; matches a flight pattern
// where each horizontal lap spans several vertical laps.
DesiredSetPtr make_flight_torus(const std::vector<double>& p) {
  require_params("flight_torus", p, 3);
  const double R = p[0], r = p[1], z0 = p[2];
  return std::make_shared<AnalyticSet>(
      3, 2, "flight_torus", p,
      [R, r, z0](const Eigen::Ref<const Eigen::VectorXd>& w, Eigen::VectorXd* f,
                 Eigen::MatrixXd* d1, Eigen::MatrixXd* d2) {
        const double c1 = std::cos(w[0]), s1 = std::sin(w[0]);
        const double c2 = std::cos(w[1]), s2 = std::sin(w[1]);
        const double ring = R + r * c2;
        if (f) *f << ring * c1, ring * s1, r * s2 + z0;
        if (d1) {
          *d1 << -ring * s1, -r * s2 * c1,
                  ring * c1, -r * s2 * s1,
                  0.0,        r * c2;
        }
        if (d2) {
          *d2 << -ring * c1,  r * s2 * s1, -r * c2 * c1,
                 -ring * s1, -r * s2 * c1, -r * c2 * s1,
                  0.0,        0.0,         -r * s2;
        }
      });
}

/// Expression-backed set; partials come from symbolic differentiation.
class ExpressionSet final : public DesiredSet {
 public:
  ExpressionSet(std::vector<std::string> texts, int k)
      : DesiredSet(static_cast<int>(texts.size()), k, "expr", {}),
        texts_(std::move(texts)) {
    std::vector<std::string> vars =
        k == 1 ? std::vector<std::string>{"w"} : std::vector<std::string>{"w1", "w2"};
    for (const std::string& t : texts_) {
      Component c{Expression::parse(t, vars), {}, {}};
      for (int m = 0; m < k; ++m) c.first.push_back(c.f.derivative(m));
      for (int l = 0; l < k; ++l)
        for (int m = l; m < k; ++m)
          c.second.push_back(c.first[static_cast<size_t>(l)].derivative(m));
      components_.push_back(std::move(c));
    }
  }

  void jets(const Eigen::Ref<const Eigen::VectorXd>& w, Eigen::VectorXd* f,
            Eigen::MatrixXd* d1, Eigen::MatrixXd* d2) const override {
    check_param(w);
    std::vector<double> vals(w.data(), w.data() + w.size());
    const int cols = param_count() * (param_count() + 1) / 2;
    for (int j = 0; j < ambient_dim(); ++j) {
      const Component& comp = components_[static_cast<size_t>(j)];
      if (f) (*f)[j] = comp.f.eval(vals);
      if (d1)
        for (int m = 0; m < param_count(); ++m)
          (*d1)(j, m) = comp.first[static_cast<size_t>(m)].eval(vals);
      if (d2)
        for (int c = 0; c < cols; ++c)
          (*d2)(j, c) = comp.second[static_cast<size_t>(c)].eval(vals);
    }
  }

  std::string spec_string() const override {
    std::string out = "expr: ";
    for (size_t i = 0; i < texts_.size(); ++i) {
      if (i) out += "; ";
      out += texts_[i];
    }
    return out;
  }

 private:
  struct Component {
    Expression f;
    std::vector<Expression> first;
    std::vector<Expression> second;  // (1,1)[,(1,2),(2,2)]
  };
  std::vector<std::string> texts_;
  std::vector<Component> components_;
};

}  // namespace

DesiredSetPtr catalog(const std::string& name, const std::vector<double>& params) {
  if (name == "circle") return make_circle(params);
  if (name == "ellipse") return make_ellipse(params);
  if (name == "bent_infinity") return make_bent_infinity(params);
  if (name == "lissajous3d") return make_lissajous3d(params);
  if (name == "harmonic3d") return make_harmonic3d(params);
  if (name == "sphere") return make_sphere(params);
  if (name == "torus") return make_torus(params);
  if (name == "flight_torus") return make_flight_torus(params);
  throw InvalidArgument("unknown catalog set '" + name + "'");
}

DesiredSetPtr make_expression_set(const std::vector<std::string>& components, int k) {
  if (k != 1 && k != 2) {
    throw InvalidArgument("expression sets support 1 or 2 parameters, got " +
                          std::to_string(k));
  }
  if (components.empty()) {
    throw InvalidArgument("expression set needs at least one component");
  }
  return std::make_shared<ExpressionSet>(components, k);
}

}  // namespace cgvf

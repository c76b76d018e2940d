#pragma once

// Scales of the conformal class, weighted quantities, curvature and the
// Schouten tensor.

#include "tractormass/chart.hpp"

#include <memory>

namespace tractormass {

/// A scalar field with its gradient.
struct ScalarField {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> grad;
};

// ---------------------------------------------------------------------------
// Scales. Every scale stores its metric and the log factor f relative to the
// reference scale rho^2 g, i.e. metric = e^{2f} rho^2 g. Weight-w densities
// trivialised in this scale differ from the reference trivialisation by e^{wf}.

struct Scale {
  std::string label;
  MetricField metric;
  ScalarField log_factor;

  double weight_factor(const Vec& x) const { return std::exp(log_factor.value(x)); }
};

using ScaleRef = std::shared_ptr<const Scale>;

namespace detail {
inline Vec unit_or_zero(const Vec& x) {
  const double r = x.norm();
  return r > 0.0 ? Vec(x / r) : Vec(Vec::Zero(x.size()));
}
}  // namespace detail

/// rho^2 g = 16 / (1 + r)^4 delta, smooth up to and across the boundary sphere.
inline MetricField reference_metric(int n) {
  require_dim(n);
  MetricField g;
  g.dim = n;
  g.kind = MetricKind::general;
  g.family = "reference";
  g.eval_fn = [n](const Vec& x) -> Mat {
    const double q = 1.0 + x.norm();
    return (16.0 / (q * q * q * q)) * Mat::Identity(n, n);
  };
  g.deriv_fn = [n](const Vec& x) {
    const double q = 1.0 + x.norm();
    const Vec w = detail::unit_or_zero(x);
    MatJet d(n);
    for (int k = 0; k < n; ++k) d[k] = (-64.0 * w(k) / (q * q * q * q * q)) * Mat::Identity(n, n);
    return d;
  };
  return g;
}

inline ScaleRef reference_scale(int n) {
  auto s = std::make_shared<Scale>();
  s->label = "reference";
  s->metric = reference_metric(n);
  s->log_factor = {[](const Vec&) { return 0.0; },
                   [n](const Vec&) -> Vec { return Vec::Zero(n); }};
  return s;
}

/// The hyperbolic metric itself: f = -log rho.
inline ScaleRef hyperbolic_scale(int n) {
  auto s = std::make_shared<Scale>();
  s->label = "hyperbolic";
  s->metric = hyperbolic_metric(n);
  s->log_factor = {[](const Vec& x) { return -std::log(canonical_rho(x.norm())); },
                   [](const Vec& x) -> Vec {
                     // d(-log rho) = 2 omega / (1 - r^2)
                     const double r = x.norm();
                     return (2.0 / (1.0 - r * r)) * detail::unit_or_zero(x);
                   }};
  return s;
}

/// The Euclidean metric: f = 2 log(1 + r) - log 4.
inline ScaleRef flat_scale(int n) {
  auto s = std::make_shared<Scale>();
  s->label = "flat";
  s->metric = flat_metric(n);
  s->log_factor = {[](const Vec& x) { return 2.0 * std::log1p(x.norm()) - std::log(4.0); },
                   [](const Vec& x) -> Vec {
                     return (2.0 / (1.0 + x.norm())) * detail::unit_or_zero(x);
                   }};
  return s;
}

/// e^{2f} times the metric of `base`, with exact first derivatives when the
/// base metric has them.
inline ScaleRef conformal_scale(const ScaleRef& base, ScalarField f, std::string label = "") {
  auto s = std::make_shared<Scale>();
  s->label = label.empty() ? base->label + "*e^2f" : std::move(label);
  const MetricField bm = base->metric;
  MetricField m;
  m.dim = bm.dim;
  m.kind = MetricKind::general;
  m.family = s->label;
  m.fd_step = bm.fd_step;
  m.eval_fn = [bm, f](const Vec& x) -> Mat { return std::exp(2.0 * f.value(x)) * bm.eval(x); };
  if (bm.has_analytic_deriv()) {
    m.deriv_fn = [bm, f](const Vec& x) {
      const double e = std::exp(2.0 * f.value(x));
      const Mat g = bm.eval(x);
      const Vec df = f.grad(x);
      MatJet d = bm.deriv(x);
      for (std::size_t k = 0; k < d.size(); ++k) d[k] = e * (d[k] + 2.0 * df(k) * g);
      return d;
    };
  }
  s->metric = std::move(m);
  const ScalarField lf = base->log_factor;
  s->log_factor = {[lf, f](const Vec& x) { return lf.value(x) + f.value(x); },
                   [lf, f](const Vec& x) -> Vec { return lf.grad(x) + f.grad(x); }};
  return s;
}

/// Log of the conformal factor from `from` to `to` (to = e^{2 omega} from) and its gradient.
inline std::pair<double, Vec> scale_change(const Scale& from, const Scale& to, const Vec& x) {
  return {to.log_factor.value(x) - from.log_factor.value(x),
          to.log_factor.grad(x) - from.log_factor.grad(x)};
}

// ---------------------------------------------------------------------------
// Weighted quantities trivialised in a named scale.

template <class C>
struct Weighted {
  int weight = 0;
  C value{};
  std::string scale;

  /// Components after the metric is multiplied by e^{2f}.
  Weighted rescaled(double f, std::string new_scale = "") const {
    Weighted out = *this;
    out.value = value * std::exp(weight * f);
    if (!new_scale.empty()) out.scale = std::move(new_scale);
    return out;
  }
};

using WeightedScalar = Weighted<double>;
using WeightedCovector = Weighted<Vec>;
using WeightedSym2 = Weighted<Mat>;

// ---------------------------------------------------------------------------
// Curvature.

/// dgamma[a][k](i, j) = d_a Gamma^k_ij by a five-point stencil.
inline std::vector<Christoffel> christoffel_derivatives(const MetricField& metric, const Vec& x,
                                                        double h) {
  const int n = metric.dim;
  std::vector<Christoffel> out(n, Christoffel(n, Mat::Zero(n, n)));
  for (int a = 0; a < n; ++a) {
    std::array<Christoffel, 4> s;
    const std::array<double, 4> shift{h, -h, 2.0 * h, -2.0 * h};
    for (int t = 0; t < 4; ++t) {
      Vec y = x;
      y(a) += shift[t];
      s[t] = christoffels(metric, y);
    }
    for (int k = 0; k < n; ++k)
      out[a][k] = (8.0 * (s[0][k] - s[1][k]) - (s[2][k] - s[3][k])) / (12.0 * h);
  }
  return out;
}

/// R^l_ijk with R(d_i, d_j) d_k = R^l_ijk d_l.
class Riemann {
 public:
  explicit Riemann(int n) : n_(n), c_(static_cast<std::size_t>(n * n * n * n), 0.0) {}
  double& operator()(int l, int i, int j, int k) { return c_[((l * n_ + i) * n_ + j) * n_ + k]; }
  double operator()(int l, int i, int j, int k) const {
    return c_[((l * n_ + i) * n_ + j) * n_ + k];
  }
  int dim() const { return n_; }

 private:
  int n_;
  std::vector<double> c_;
};

inline Riemann riemann(const MetricField& metric, const Vec& x) {
  const int n = metric.dim;
  const Christoffel G = christoffels(metric, x);
  const auto dG = christoffel_derivatives(metric, x, fd::nested_step(x));
  Riemann R(n);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double v = dG[i][l](j, k) - dG[j][l](i, k);
          for (int m = 0; m < n; ++m) v += G[l](i, m) * G[m](j, k) - G[l](j, m) * G[m](i, k);
          R(l, i, j, k) = v;
        }
  return R;
}

inline Mat ricci(const MetricField& metric, const Vec& x) {
  const int n = metric.dim;
  const Riemann R = riemann(metric, x);
  Mat ric = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) ric(j, k) += R(i, i, j, k);
  return 0.5 * (ric + ric.transpose());
}

/// Sectional curvature of the plane spanned by u and v.
inline double sectional_curvature(const MetricField& metric, const Vec& x, const Vec& u,
                                  const Vec& v) {
  const int n = metric.dim;
  const Riemann R = riemann(metric, x);
  const Mat g = metric.eval(x);
  double num = 0.0;
  for (int l = 0; l < n; ++l) {
    double ul = (g * u)(l);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) num += R(l, i, j, k) * u(i) * v(j) * v(k) * ul;
  }
  const double guu = u.dot(g * u), gvv = v.dot(g * v), guv = u.dot(g * v);
  const double den = guu * gvv - guv * guv;
  if (std::abs(den) < 1e-300) throw DomainError("sectional curvature needs independent vectors");
  return num / den;
}

struct SchoutenTensor {
  Mat P;
  double J = 0.0;
};

/// Ric = (n - 2) P + J g. Hyperbolic and flat metrics use their exact values
/// unless `numeric` is set.
inline SchoutenTensor schouten(const MetricField& metric, const Vec& x, bool numeric = false) {
  const int n = metric.dim;
  if (n == 2) throw DomainError("the Schouten tensor is not defined for n = 2");
  const Mat g = metric.eval(x);
  if (!numeric && metric.kind == MetricKind::hyperbolic) return {-0.5 * g, -0.5 * n};
  if (!numeric && metric.kind == MetricKind::flat) return {Mat::Zero(n, n), 0.0};
  const Mat ginv = inverse_metric(g);
  const Mat ric = ricci(metric, x);
  const double J = ginv.cwiseProduct(ric).sum() / (2.0 * (n - 1));
  return {(ric - J * g) / (n - 2), J};
}

/// nabla_a nabla_b f from a finite-difference Jacobian of the analytic gradient.
inline Mat covariant_hessian(const MetricField& metric, const ScalarField& f, const Vec& x,
                             std::optional<double> step = std::nullopt) {
  const int n = metric.dim;
  const double h = step.value_or(fd::nested_step(x));
  Mat H(n, n);
  for (int a = 0; a < n; ++a) H.row(a) = fd::central4(f.grad, x, a, h).transpose();
  H = 0.5 * (H + H.transpose()).eval();
  const Christoffel G = christoffels(metric, x);
  const Vec df = f.grad(x);
  for (int k = 0; k < n; ++k) H -= df(k) * G[k];
  return H;
}

/// Both sides of the Schouten transformation law for hat g = e^{2f} g:
/// hat P = P - nabla Upsilon + Upsilon Upsilon - 1/2 |Upsilon|^2 g, Upsilon = df.
struct ConformalChangeData {
  Vec upsilon;
  Mat lhs;
  Mat rhs;
  double residual() const { return (lhs - rhs).cwiseAbs().maxCoeff(); }
};

inline ConformalChangeData conformal_change_data(const MetricField& metric, const ScalarField& f,
                                                 const Vec& x) {
  const Vec ups = f.grad(x);
  const Mat g = metric.eval(x);
  const Mat ginv = inverse_metric(g);
  const SchoutenTensor P = schouten(metric, x);
  const Mat rhs = P.P - covariant_hessian(metric, f, x) + ups * ups.transpose() -
                  0.5 * ups.dot(ginv * ups) * g;
  auto base = std::make_shared<Scale>();
  base->metric = metric;
  base->log_factor = {[](const Vec&) { return 0.0; },
                      [n = metric.dim](const Vec&) -> Vec { return Vec::Zero(n); }};
  const ScaleRef hat = conformal_scale(base, f);
  return {ups, schouten(hat->metric, x).P, rhs};
}

}  // namespace tractormass

#pragma once

// Standard tractors in a chosen scale: metric, connection, change of scale,
// the D-operator, the splitting operator and the scale and normal tractors.
//
// A triple (top, middle, bottom) is trivialised in its own scale: the top slot
// is a weight-1 density, the middle a weight-1 covector and the bottom a
// weight -1 density, each written with respect to that scale's metric.

#include "tractormass/tensors.hpp"

namespace tractormass {

struct TractorTriple {
  ScaleRef scale;
  Vec at;          // base point
  double top = 0.0;
  Vec middle;
  double bottom = 0.0;
  int weight = 0;  // tractor weight; 0 for ordinary tractors
};

inline TractorTriple make_tractor(ScaleRef scale, const Vec& at, double top, const Vec& middle,
                                  double bottom, int weight = 0) {
  return {std::move(scale), at, top, middle, bottom, weight};
}

/// The canonical isotropic tractor X = (0, 0, 1).
inline TractorTriple tractor_X(ScaleRef scale, const Vec& at) {
  const auto n = at.size();
  return make_tractor(std::move(scale), at, 0.0, Vec::Zero(n), 1.0, 1);
}

/// Rewrite T in another scale.
inline TractorTriple change_scale(const TractorTriple& T, const ScaleRef& to) {
  if (T.scale == to) return T;
  const auto [w, ups] = scale_change(*T.scale, *to, T.at);
  const Mat ginv = inverse_metric(T.scale->metric.eval(T.at));
  const Vec ups_up = ginv * ups;
  TractorTriple out = T;
  out.scale = to;
  const double top = T.top;
  const Vec mid = T.middle + ups * T.top;
  const double bot = T.bottom - ups_up.dot(T.middle) - 0.5 * ups_up.dot(ups) * T.top;
  const double e = std::exp(w), tw = std::exp(T.weight * w);
  out.top = tw * e * top;
  out.middle = tw * e * mid;
  out.bottom = tw * bot / e;
  return out;
}

/// <T1, T2> = sigma nu' + nu sigma' + g^ab mu_a mu'_b in the scale of T1.
inline double tractor_pairing(const TractorTriple& a, const TractorTriple& b0) {
  const TractorTriple b = change_scale(b0, a.scale);
  const Mat ginv = inverse_metric(a.scale->metric.eval(a.at));
  return a.top * b.bottom + a.bottom * b.top + a.middle.dot(ginv * b.middle);
}

// ---------------------------------------------------------------------------
// Tractor connection.

using TractorField = std::function<TractorTriple(const Vec&)>;

/// nabla_a T at x, all slots in the scale of the field.
inline TractorTriple tractor_derivative(const TractorField& field, const Vec& x, int a,
                                        std::optional<double> step = std::nullopt) {
  const TractorTriple T = field(x);
  if (T.weight != 0) throw DomainError("tractor_derivative expects weight 0 tractors");
  const int n = static_cast<int>(x.size());
  const double h = step.value_or(fd::nested_step(x));
  std::array<TractorTriple, 4> s;
  const std::array<double, 4> shift{h, -h, 2.0 * h, -2.0 * h};
  for (int t = 0; t < 4; ++t) {
    Vec y = x;
    y(a) += shift[t];
    s[t] = field(y);
    if (s[t].scale != T.scale) s[t] = change_scale(s[t], T.scale);
  }
  const auto d5 = [h](double p1, double m1, double p2, double m2) {
    return (8.0 * (p1 - m1) - (p2 - m2)) / (12.0 * h);
  };
  const double dtop = d5(s[0].top, s[1].top, s[2].top, s[3].top);
  const double dbot = d5(s[0].bottom, s[1].bottom, s[2].bottom, s[3].bottom);
  const Vec dmid = (8.0 * (s[0].middle - s[1].middle) - (s[2].middle - s[3].middle)) / (12.0 * h);

  const MetricField& m = T.scale->metric;
  const Mat g = m.eval(x);
  const Mat ginv = inverse_metric(g);
  const Christoffel G = christoffels(m, x);
  const Mat P = schouten(m, x).P;
  Vec nabla_mid = dmid;
  for (int b = 0; b < n; ++b)
    for (int k = 0; k < n; ++k) nabla_mid(b) -= G[k](a, b) * T.middle(k);

  TractorTriple out = T;
  out.top = dtop - T.middle(a);
  out.middle = nabla_mid + g.col(a) * T.bottom + P.col(a) * T.top;
  out.bottom = dbot - P.row(a).dot(ginv * T.middle);
  return out;
}

// ---------------------------------------------------------------------------
// D-operator on a weight-w density tau trivialised in `scale`:
// (w(n + 2w - 2) tau, (n + 2w - 2) nabla tau, -(Delta + J) tau), weight w - 1.

inline TractorTriple D_operator(const ScaleRef& scale, const ScalarField& tau, int w,
                                const Vec& x, std::optional<double> step = std::nullopt) {
  const MetricField& m = scale->metric;
  const int n = m.dim;
  const double t = tau.value(x);
  const Mat ginv = inverse_metric(m.eval(x));
  const Mat H = covariant_hessian(m, tau, x, step);
  const SchoutenTensor P = schouten(m, x);
  const double c = n + 2.0 * w - 2.0;
  return make_tractor(scale, x, w * c * t, c * tau.grad(x), -(ginv.cwiseProduct(H).sum() + P.J * t),
                      w - 1);
}

/// The weight-1 density whose scale is the hyperbolic metric, trivialised in `scale`.
inline ScalarField hyperbolic_density(const ScaleRef& scale) {
  const ScalarField f = scale->log_factor;
  return {[f](const Vec& x) { return std::exp(f.value(x)) * canonical_rho(x.norm()); },
          [f](const Vec& x) -> Vec {
            const double r = x.norm();
            const double rho = canonical_rho(r);
            const Vec drho = (-4.0 / ((1.0 + r) * (1.0 + r))) * detail::unit_or_zero(x);
            return std::exp(f.value(x)) * (drho + rho * f.grad(x));
          }};
}

/// I = (1/n) D sigma for the hyperbolic metric, expressed in `scale`.
inline TractorTriple scale_tractor(const ScaleRef& scale, const Vec& x,
                                   std::optional<double> step = std::nullopt) {
  const int n = scale->metric.dim;
  if (scale->label == "hyperbolic") {
    // sigma is constant in its own scale and J = -n/2
    return make_tractor(scale, x, 1.0, Vec::Zero(n), 0.5);
  }
  TractorTriple I = D_operator(scale, hyperbolic_density(scale), 1, x, step);
  I.top /= n;
  I.middle /= n;
  I.bottom /= n;
  return I;
}

// ---------------------------------------------------------------------------
// Boundary tractors.

/// Unit conormal of the level sets of rho for the metric of `scale`, along d rho.
inline Vec unit_conormal(const ScaleRef& scale, const Vec& x) {
  const double r = x.norm();
  const Vec drho = (-4.0 / ((1.0 + r) * (1.0 + r))) * detail::unit_or_zero(x);
  const Mat ginv = inverse_metric(scale->metric.eval(x));
  return drho / std::sqrt(drho.dot(ginv * drho));
}

/// Mean curvature of the level set of rho through x: div(unit normal) / (n - 1).
inline double mean_curvature(const ScaleRef& scale, const Vec& x, double step = 1e-3) {
  const int n = scale->metric.dim;
  const auto density = [&scale](const Vec& y) -> Vec {
    const Mat g = scale->metric.eval(y);
    return std::sqrt(g.determinant()) * (inverse_metric(g) * unit_conormal(scale, y));
  };
  double div = 0.0;
  for (int k = 0; k < n; ++k) div += fd::central4(density, x, k, step)(k);
  return div / std::sqrt(scale->metric.eval(x).determinant()) / (n - 1);
}

/// N = (0, n_a, -H) at the boundary point omega.
inline TractorTriple normal_tractor(const ScaleRef& scale, const Vec& omega, double step = 1e-3) {
  if (std::abs(omega.norm() - 1.0) > 1e-12) throw DomainError("normal_tractor needs a unit vector");
  return make_tractor(scale, omega, 0.0, unit_conormal(scale, omega),
                      -mean_curvature(scale, omega, step));
}

/// Identification of tractors orthogonal to N with boundary tractors:
/// (sigma, mu - H n sigma, nu + H^2 sigma / 2).
inline TractorTriple boundary_identification(const TractorTriple& T, const Vec& n, double H) {
  TractorTriple out = T;
  out.middle = T.middle - H * n * T.top;
  out.bottom = T.bottom + 0.5 * H * H * T.top;
  return out;
}

// ---------------------------------------------------------------------------
// Tractor-valued one-forms and the splitting operator.

struct TractorOneForm {
  ScaleRef scale;
  Vec at;
  std::vector<TractorTriple> comp;  // comp[a] is the d x^a component
};

/// Degree-one kernel of the Kostant codifferential: top slots vanish and the
/// middle slots form a trace-free matrix.
inline bool in_codifferential_kernel(const TractorOneForm& f, double tol = 1e-10) {
  const int n = static_cast<int>(f.comp.size());
  Mat M(n, n);
  double scale = 1.0;
  for (int a = 0; a < n; ++a) {
    if (std::abs(f.comp[a].top) > tol) return false;
    M.row(a) = f.comp[a].middle.transpose();
    scale = std::max(scale, f.comp[a].middle.cwiseAbs().maxCoeff());
  }
  const Mat ginv = inverse_metric(f.scale->metric.eval(f.at));
  return std::abs(ginv.cwiseProduct(M).sum()) <= tol * scale;
}

struct Sym2Field {
  std::function<Mat(const Vec&)> value;
};

/// S(phi) = (0, phi_ab, -1/(n-1) g^ij nabla_i phi_aj) for trace-free phi.
inline TractorOneForm splitting_S(const ScaleRef& scale, const Sym2Field& phi, const Vec& x,
                                  double trace_tol = 1e-10,
                                  std::optional<double> step = std::nullopt) {
  const MetricField& m = scale->metric;
  const int n = m.dim;
  const Mat p = phi.value(x);
  const Mat ginv = inverse_metric(m.eval(x));
  const double tr = ginv.cwiseProduct(p).sum();
  if (std::abs(tr) > trace_tol * std::max(1.0, p.cwiseAbs().maxCoeff())) {
    throw DomainError("splitting_S needs a trace-free argument");
  }
  const double h = step.value_or(fd::nested_step(x));
  MatJet dp(n);
  for (int k = 0; k < n; ++k) dp[k] = fd::central4(phi.value, x, k, h);
  const Christoffel G = christoffels(m, x);
  // div_a = g^ij nabla_i phi_aj
  Vec div = Vec::Zero(n);
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double d = dp[i](a, j);
        for (int k = 0; k < n; ++k) d -= G[k](i, a) * p(k, j) + G[k](i, j) * p(a, k);
        div(a) += ginv(i, j) * d;
      }
  TractorOneForm out{scale, x, {}};
  for (int a = 0; a < n; ++a) {
    out.comp.push_back(make_tractor(scale, x, 0.0, p.row(a).transpose(), -div(a) / (n - 1)));
  }
  return out;
}

/// Normalisation residual for S(phi): with F_ab = nabla_a S_b - nabla_b S_a,
/// returns the g-contraction of the first form index with the middle slot
/// (a covector, zero for S(phi)) and the largest top-slot entry of F.
struct SplittingResidual {
  Vec middle_trace;
  double top = 0.0;
  double max() const { return std::max(middle_trace.cwiseAbs().maxCoeff(), std::abs(top)); }
};

inline SplittingResidual splitting_residual(const ScaleRef& scale, const Sym2Field& phi,
                                            const Vec& x, double h_outer = 2e-3) {
  const int n = scale->metric.dim;
  const Mat ginv = inverse_metric(scale->metric.eval(x));
  // nabla_a of the component S_b
  std::vector<std::vector<TractorTriple>> dS(n);
  for (int b = 0; b < n; ++b) {
    const TractorField Sb = [&, b](const Vec& y) {
      return splitting_S(scale, phi, y, 1e-8).comp[b];
    };
    for (int a = 0; a < n; ++a) dS[a].push_back(tractor_derivative(Sb, x, a, h_outer));
  }
  SplittingResidual res{Vec::Zero(n), 0.0};
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      res.top = std::max(res.top, std::abs(dS[a][b].top - dS[b][a].top));
      const Vec F = dS[a][b].middle - dS[b][a].middle;  // F_ab, middle index c
      for (int c = 0; c < n; ++c) res.middle_trace(b) += ginv(a, c) * F(c);
    }
  return res;
}

}  // namespace tractormass

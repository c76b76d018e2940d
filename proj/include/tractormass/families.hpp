#pragma once

// Built-in metric families on the ball, each the hyperbolic background plus
// an explicit perturbation that is blended to zero below r = 1/2.

#include "tractormass/chart.hpp"
#include "tractormass/harmonics.hpp"

namespace tractormass {

inline constexpr double kBlendInner = 0.3;
inline constexpr double kBlendOuter = 0.5;

/// C-infinity step: 0 for r <= 0.3, 1 for r >= 0.5.
template <class T>
T interior_blend(const T& r) {
  using std::exp;
  const double t = (value_of(r) - kBlendInner) / (kBlendOuter - kBlendInner);
  if (t <= 0.0) return T(0.0);
  if (t >= 1.0) return T(1.0);
  const T s = (r - kBlendInner) / (kBlendOuter - kBlendInner);
  const T a = exp(-1.0 / s);
  const T b = exp(-1.0 / (1.0 - s));
  return a / (a + b);
}

namespace detail {
using std::exp;
using std::sqrt;

template <class T>
T radius_of(const PointT<T>& x) {
  T r2(0.0);
  for (int i = 0; i < x.n; ++i) r2 = r2 + x[i] * x[i];
  return sqrt(r2);
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Schwarzschild-AdS: (1 + s^2 - 2 m s^(2-n))^-1 ds^2 + s^2 dOmega^2 pulled back
// along s = 2r/(1 - r^2).

struct SchwarzschildPerturbation {
  int n = 3;
  double m = 0.0;

  template <class T>
  Tensor2T<T> operator()(const PointT<T>& x) const {
    using std::exp;
    using std::sqrt;
    Tensor2T<T> out(n);
    const T r = detail::radius_of(x);
    if (value_of(r) <= kBlendInner || m == 0.0) return out;
    const T a = 1.0 - r * r;
    const T s = 2.0 * r / a;
    const T s2 = s * s;
    const T tail = 2.0 * m * ipow(s, 2 - n);
    const T lapse = 1.0 + s2 - tail;
    const T dsdr = 2.0 * (1.0 + r * r) / (a * a);
    const T radial = interior_blend(r) * tail / (lapse * (1.0 + s2)) * dsdr * dsdr;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out(i, j) = radial * x[i] * x[j] / (r * r);
    return out;
  }
};

inline MetricField schwarzschild_ads(int n, double m) {
  require_dim(n);
  if (!(m >= 0.0) || !std::isfinite(m)) throw DomainError("schwarzschild-ads needs m >= 0");
  // the lapse grows with s, so positivity at the inner edge covers the shell
  const double s = 2.0 * kBlendInner / (1.0 - kBlendInner * kBlendInner);
  if (1.0 + s * s - 2.0 * m * std::pow(s, 2 - n) <= 0.0) {
    throw DomainError("schwarzschild-ads horizon lies inside the sampling shell");
  }
  if (m == 0.0) {
    MetricField g = hyperbolic_metric(n);
    g.family = "schwarzschild-ads";
    g.params = {{"m", 0.0}};
    return g;
  }
  return perturbed_hyperbolic(n, make_perturbation(SchwarzschildPerturbation{n, m}),
                              "schwarzschild-ads", {{"m", m}});
}

// ---------------------------------------------------------------------------
// Aspect perturbations h = g + rho^k chi(omega) T(omega), k = n - 2 by default.

enum class AspectProfile { trace, normal, tangential };

inline AspectProfile parse_profile(const std::string& s) {
  if (s == "trace") return AspectProfile::trace;
  if (s == "normal") return AspectProfile::normal;
  if (s == "tangential") return AspectProfile::tangential;
  throw DomainError("unknown profile '" + s + "' (trace | normal | tangential)");
}

inline std::string to_string(AspectProfile p) {
  switch (p) {
    case AspectProfile::trace: return "trace";
    case AspectProfile::normal: return "normal";
    case AspectProfile::tangential: return "tangential";
  }
  return "trace";
}

struct AspectPerturbationField {
  int n = 3;
  SphericalAspect chi;
  AspectProfile profile = AspectProfile::trace;
  int decay = 1;

  template <class T>
  Tensor2T<T> operator()(const PointT<T>& x) const {
    Tensor2T<T> out(n);
    const T r = detail::radius_of(x);
    if (value_of(r) <= kBlendInner) return out;
    PointT<T> w;
    w.n = n;
    for (int i = 0; i < n; ++i) w[i] = x[i] / r;
    const T rho = 2.0 * (1.0 - r) / (1.0 + r);
    const T amp = interior_blend(r) * ipow(rho, decay) * chi(w);
    switch (profile) {
      case AspectProfile::trace: {
        // chi times (rho^2 g) / n, so the extracted trace aspect is chi itself
        const T q = 1.0 + r;
        const T conformal = 16.0 / (q * q * q * q) / double(n);
        for (int i = 0; i < n; ++i) out(i, i) = amp * conformal;
        break;
      }
      case AspectProfile::normal:
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) out(i, j) = amp * w[i] * w[j];
        break;
      case AspectProfile::tangential: {
        // projection of e_1 e_1^T onto the tangent space, trace removed
        PointT<T> p;
        p.n = n;
        for (int i = 0; i < n; ++i) p[i] = (i == 0 ? T(1.0) : T(0.0)) - w[0] * w[i];
        const T tr = (1.0 - w[0] * w[0]) / double(n - 1);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            const T proj = (i == j ? T(1.0) : T(0.0)) - w[i] * w[j];
            out(i, j) = amp * (p[i] * p[j] - tr * proj);
          }
        break;
      }
    }
    return out;
  }
};

/// Deterministic probe points for positivity checks on the shell r >= 0.3.
inline std::vector<Vec> shell_probe_points(int n) {
  std::vector<Vec> dirs;
  for (int i = 0; i < n; ++i)
    for (double s : {-1.0, 1.0}) {
      Vec d = Vec::Zero(n);
      d(i) = s;
      dirs.push_back(d);
    }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (double s : {-1.0, 1.0}) {
        Vec d = Vec::Zero(n);
        d(i) = 1.0;
        d(j) = s;
        dirs.push_back(d.normalized());
      }
  Vec diag = Vec::Ones(n);
  dirs.push_back(diag.normalized());
  dirs.push_back(-diag.normalized());
  std::vector<Vec> pts;
  for (const Vec& d : dirs)
    for (double r : {0.35, 0.45, 0.5, 0.6, 0.75, 0.9, 0.99, 0.999}) pts.push_back(r * d);
  return pts;
}

inline MetricField aspect_perturbation(int n, const SphericalAspect& chi, AspectProfile profile,
                                       std::optional<int> decay = std::nullopt) {
  require_dim(n);
  if (chi.dim() != n) throw DomainError("chi dimension does not match the metric dimension");
  const int k = decay.value_or(n - 2);
  if (k < 0) throw DomainError("aspect decay exponent must be non-negative");
  std::map<std::string, double> params{{"decay", double(k)},
                                       {"profile", double(static_cast<int>(profile))}};
  if (chi.is_zero()) {
    MetricField g = hyperbolic_metric(n);
    g.family = "aspect-perturbation";
    g.params = params;
    return g;
  }
  MetricField h = perturbed_hyperbolic(
      n, make_perturbation(AspectPerturbationField{n, chi, profile, k}), "aspect-perturbation",
      params);
  for (const Vec& x : shell_probe_points(n)) {
    if (!is_positive_definite(h.eval(x))) {
      throw DomainError("aspect perturbation is not positive definite at a probe point");
    }
  }
  return h;
}

}  // namespace tractormass

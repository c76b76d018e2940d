#pragma once

// Poincare ball model: hyperbolic background, the canonical adapted defining
// function, Christoffel symbols and the KID (Killing initial data) basis.

#include "tractormass/core.hpp"

#include <map>
#include <optional>
#include <utility>

namespace tractormass {

/// Interior point of the open unit ball.
class BallPoint {
 public:
  explicit BallPoint(Vec x) : x_(std::move(x)) {
    require_dim(static_cast<int>(x_.size()));
    if (!(x_.norm() < 1.0)) throw DomainError("BallPoint must satisfy |x| < 1");
  }
  BallPoint(const Vec& omega, double r) : BallPoint(Vec(r * omega)) {}

  const Vec& coords() const { return x_; }
  double radius() const { return x_.norm(); }
  int dim() const { return static_cast<int>(x_.size()); }

 private:
  Vec x_;
};

enum class MetricKind { hyperbolic, flat, perturbed, general };

/// A symmetric 2-tensor h - g_hyp given by value and first partials.
struct Perturbation {
  std::function<Mat(const Vec&)> value;
  std::function<std::pair<Mat, MatJet>(const Vec&)> jet;
};

/// Wrap a templated functor `Tensor2T<T> f(const PointT<T>&)` so that its
/// partials come from dual-number evaluation.
template <class F>
Perturbation make_perturbation(F f) {
  Perturbation p;
  p.value = [f](const Vec& x) { return to_mat(f(to_point(x))); };
  p.jet = [f](const Vec& x) { return tensor_jet(f, x); };
  return p;
}

struct MetricField {
  int dim = 0;
  MetricKind kind = MetricKind::general;
  std::function<Mat(const Vec&)> eval_fn;
  std::function<MatJet(const Vec&)> deriv_fn;  // empty: finite differences
  double fd_step = 1e-5;
  /// Present when the metric is the hyperbolic background plus a known
  /// perturbation; lets differences of nearby metrics avoid cancellation.
  std::optional<Perturbation> perturbation;
  std::string family = "custom";
  std::map<std::string, double> params;

  Mat eval(const Vec& x) const { return eval_fn(x); }

  bool has_analytic_deriv() const { return static_cast<bool>(deriv_fn); }

  MatJet deriv(const Vec& x) const {
    if (deriv_fn) return deriv_fn(x);
    MatJet d(dim);
    for (int k = 0; k < dim; ++k) d[k] = fd::central(eval_fn, x, k, fd_step);
    return d;
  }
};

// ---------------------------------------------------------------------------

inline double hyperbolic_factor(double r2) {
  const double a = 1.0 - r2;
  return 4.0 / (a * a);
}

inline MetricField hyperbolic_metric(int n) {
  require_dim(n);
  MetricField g;
  g.dim = n;
  g.kind = MetricKind::hyperbolic;
  g.family = "hyperbolic";
  g.eval_fn = [n](const Vec& x) -> Mat {
    return hyperbolic_factor(x.squaredNorm()) * Mat::Identity(n, n);
  };
  g.deriv_fn = [n](const Vec& x) {
    const double a = 1.0 - x.squaredNorm();
    MatJet d(n);
    for (int k = 0; k < n; ++k) d[k] = (16.0 * x(k) / (a * a * a)) * Mat::Identity(n, n);
    return d;
  };
  g.perturbation = Perturbation{
      [n](const Vec&) -> Mat { return Mat::Zero(n, n); },
      [n](const Vec&) { return std::make_pair(Mat(Mat::Zero(n, n)), MatJet(n, Mat::Zero(n, n))); }};
  return g;
}

inline MetricField flat_metric(int n) {
  require_dim(n);
  MetricField g;
  g.dim = n;
  g.kind = MetricKind::flat;
  g.family = "flat";
  g.eval_fn = [n](const Vec&) -> Mat { return Mat::Identity(n, n); };
  g.deriv_fn = [n](const Vec&) { return MatJet(n, Mat::Zero(n, n)); };
  return g;
}

/// Hyperbolic background plus perturbation, with exact first partials.
inline MetricField perturbed_hyperbolic(int n, Perturbation p, std::string family,
                                        std::map<std::string, double> params = {}) {
  MetricField h = hyperbolic_metric(n);
  const MetricField g = h;
  h.kind = MetricKind::perturbed;
  h.family = std::move(family);
  h.params = std::move(params);
  h.eval_fn = [g, p](const Vec& x) -> Mat { return g.eval(x) + p.value(x); };
  h.deriv_fn = [g, p](const Vec& x) {
    MatJet d = g.deriv(x);
    const auto jet = p.jet(x);
    for (std::size_t k = 0; k < d.size(); ++k) d[k] += jet.second[k];
    return d;
  };
  h.perturbation = std::move(p);
  return h;
}

/// lambda = h - g at x.
inline Mat metric_difference(const MetricField& g, const MetricField& h, const Vec& x) {
  if (g.perturbation && h.perturbation) {
    return h.perturbation->value(x) - g.perturbation->value(x);
  }
  return h.eval(x) - g.eval(x);
}

/// lambda = h - g and its coordinate partials at x.
inline std::pair<Mat, MatJet> metric_difference_jet(const MetricField& g, const MetricField& h,
                                                    const Vec& x) {
  if (g.perturbation && h.perturbation) {
    auto a = h.perturbation->jet(x);
    const auto b = g.perturbation->jet(x);
    a.first -= b.first;
    for (std::size_t k = 0; k < a.second.size(); ++k) a.second[k] -= b.second[k];
    return a;
  }
  const MatJet dg = g.deriv(x);
  MatJet dh = h.deriv(x);
  for (std::size_t k = 0; k < dh.size(); ++k) dh[k] -= dg[k];
  return {h.eval(x) - g.eval(x), dh};
}

/// Sum of the perturbations of two perturbed-hyperbolic metrics.
inline MetricField superpose(const MetricField& a, const MetricField& b) {
  if (!a.perturbation || !b.perturbation || a.dim != b.dim) {
    throw DomainError("superpose needs two perturbations of the same hyperbolic background");
  }
  const Perturbation pa = *a.perturbation, pb = *b.perturbation;
  Perturbation sum;
  sum.value = [pa, pb](const Vec& x) -> Mat { return pa.value(x) + pb.value(x); };
  sum.jet = [pa, pb](const Vec& x) {
    auto ja = pa.jet(x);
    const auto jb = pb.jet(x);
    ja.first += jb.first;
    for (std::size_t k = 0; k < ja.second.size(); ++k) ja.second[k] += jb.second[k];
    return ja;
  };
  std::map<std::string, double> params;
  for (const auto& [k, v] : a.params) params["a." + k] = v;
  for (const auto& [k, v] : b.params) params["b." + k] = v;
  return perturbed_hyperbolic(a.dim, std::move(sum), a.family + "+" + b.family, std::move(params));
}

/// Push forward by the rotation x -> R x: h'(x) = R h(R^T x) R^T.
inline MetricField rotate_metric(const MetricField& h, const Mat& R) {
  MetricField out = h;
  const auto push = [R](const std::function<Mat(const Vec&)>& f) {
    return [R, f](const Vec& x) -> Mat { return R * f(R.transpose() * x) * R.transpose(); };
  };
  const auto push_jet = [R](const MatJet& d) {
    // d/dx^k of f(R^T x) = sum_l (d_l f)(R^T x) R_{kl}
    const auto n = static_cast<Eigen::Index>(d.size());
    MatJet out(d.size(), Mat::Zero(n, n));
    for (Eigen::Index k = 0; k < n; ++k)
      for (Eigen::Index l = 0; l < n; ++l) out[k] += R(k, l) * (R * d[l] * R.transpose());
    return out;
  };
  out.eval_fn = push(h.eval_fn);
  out.deriv_fn = [h, R, push_jet](const Vec& x) { return push_jet(h.deriv(R.transpose() * x)); };
  if (h.perturbation) {
    const Perturbation p = *h.perturbation;
    out.perturbation = Perturbation{
        push(p.value), [p, R, push_jet](const Vec& x) {
          auto j = p.jet(R.transpose() * x);
          return std::make_pair(Mat(R * j.first * R.transpose()), push_jet(j.second));
        }};
  }
  // hyperbolic and flat metrics are rotation invariant and keep their kind
  if (out.kind != MetricKind::hyperbolic && out.kind != MetricKind::flat) {
    out.family = h.family + "(rotated)";
  }
  return out;
}

/// Inverse of a metric matrix; throws on singular or indefinite input.
inline Mat inverse_metric(const Mat& g) {
  Eigen::LLT<Mat> llt(g);
  if (llt.info() != Eigen::Success || llt.rcond() < 1e-14) {
    throw SingularMetricError("metric matrix is singular or not positive definite");
  }
  return llt.solve(Mat::Identity(g.rows(), g.cols()));
}

inline bool is_positive_definite(const Mat& g) {
  Eigen::LLT<Mat> llt(g);
  return llt.info() == Eigen::Success && llt.rcond() > 1e-14;
}

// ---------------------------------------------------------------------------
// Christoffel symbols: gamma[k](i, j) = Gamma^k_ij.

using Christoffel = std::vector<Mat>;

inline Christoffel christoffels_from(const Mat& g_inv, const MatJet& dg) {
  const auto n = g_inv.rows();
  Christoffel gamma(n, Mat::Zero(n, n));
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i; j < n; ++j) {
        double s = 0.0;
        for (Eigen::Index l = 0; l < n; ++l)
          s += g_inv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
        gamma[k](i, j) = gamma[k](j, i) = 0.5 * s;
      }
  return gamma;
}

inline Christoffel christoffels(const MetricField& metric, const Vec& x) {
  const int n = metric.dim;
  if (metric.kind == MetricKind::flat) return Christoffel(n, Mat::Zero(n, n));
  if (metric.kind == MetricKind::hyperbolic) {
    // conformally flat closed form with u = grad log(2 / (1 - r^2))
    const Vec u = (2.0 / (1.0 - x.squaredNorm())) * x;
    Christoffel gamma(n, Mat::Zero(n, n));
    for (int k = 0; k < n; ++k) {
      gamma[k].row(k) += u.transpose();
      gamma[k].col(k) += u;
      gamma[k].diagonal().array() -= u(k);
    }
    return gamma;
  }
  return christoffels_from(inverse_metric(metric.eval(x)), metric.deriv(x));
}

// ---------------------------------------------------------------------------
// Defining functions.

struct DefiningFunction {
  std::function<double(const Vec&)> eval;
  std::function<Vec(const Vec&)> grad;
  /// Optional closed-form inverse along rays: the radius r with rho(r omega) = eps.
  std::function<double(double, const Vec&)> level_radius;
};

inline double canonical_rho(double r) { return 2.0 * (1.0 - r) / (1.0 + r); }
inline double canonical_radius(double rho) { return (2.0 - rho) / (2.0 + rho); }

/// rho = 2(1 - r)/(1 + r); |d rho|^2 in rho^2 g is identically one.
inline DefiningFunction adapted_rho(int n) {
  require_dim(n);
  DefiningFunction rho;
  rho.eval = [](const Vec& x) { return canonical_rho(x.norm()); };
  rho.grad = [](const Vec& x) -> Vec {
    const double r = x.norm();
    if (r == 0.0) throw DomainError("gradient of rho is undefined at the origin");
    return (-4.0 / ((1.0 + r) * (1.0 + r) * r)) * x;
  };
  rho.level_radius = [](double eps, const Vec&) { return canonical_radius(eps); };
  return rho;
}

/// Radius along the ray through omega where rho equals eps. Assumes rho
/// decreases monotonically to zero on [1/4, 1).
inline double level_radius(const DefiningFunction& rho, double eps, const Vec& omega) {
  if (rho.level_radius) return rho.level_radius(eps, omega);
  double lo = 0.25, hi = 1.0;
  if (rho.eval(lo * omega) < eps) throw DomainError("level set of rho lies inside r = 1/4");
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    (rho.eval(mid * omega) > eps ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// e^f rho for a smooth f, typically one vanishing on the boundary sphere.
inline DefiningFunction rescaled_rho(const DefiningFunction& rho,
                                     std::function<double(const Vec&)> f,
                                     std::function<Vec(const Vec&)> grad_f) {
  DefiningFunction out;
  out.eval = [rho, f](const Vec& x) { return std::exp(f(x)) * rho.eval(x); };
  out.grad = [rho, f, grad_f](const Vec& x) -> Vec {
    return std::exp(f(x)) * (rho.grad(x) + rho.eval(x) * grad_f(x));
  };
  return out;
}

// ---------------------------------------------------------------------------
// KID basis: V_0 = (1 + r^2)/(1 - r^2), V_i = 2 x_i/(1 - r^2).

struct KIDSolution {
  int index = 0;
  std::function<double(const Vec&)> eval;
  std::function<Vec(const Vec&)> grad;
  std::function<double(const Vec&)> boundary_value;
};

inline std::vector<KIDSolution> kid_basis(int n) {
  require_dim(n);
  std::vector<KIDSolution> basis;
  KIDSolution v0;
  v0.index = 0;
  v0.eval = [](const Vec& x) {
    const double r2 = x.squaredNorm();
    return (1.0 + r2) / (1.0 - r2);
  };
  v0.grad = [](const Vec& x) -> Vec {
    const double a = 1.0 - x.squaredNorm();
    return (4.0 / (a * a)) * x;
  };
  v0.boundary_value = [](const Vec&) { return 1.0; };
  basis.push_back(v0);
  for (int i = 0; i < n; ++i) {
    KIDSolution vi;
    vi.index = i + 1;
    vi.eval = [i](const Vec& x) { return 2.0 * x(i) / (1.0 - x.squaredNorm()); };
    vi.grad = [i](const Vec& x) -> Vec {
      const double a = 1.0 - x.squaredNorm();
      Vec g = (4.0 * x(i) / (a * a)) * x;
      g(i) += 2.0 / a;
      return g;
    };
    vi.boundary_value = [i](const Vec& omega) { return omega(i); };
    basis.push_back(vi);
  }
  return basis;
}

/// Residual of Hess V - g Lap V + (n - 1) g V, assembled with a finite-difference
/// Hessian of the analytic gradient and the metric's Christoffel symbols.
inline Mat kid_residual(const KIDSolution& V, const MetricField& g, const Vec& x) {
  const int n = g.dim;
  const double h = fd::nested_step(x);
  Mat hess(n, n);
  for (int k = 0; k < n; ++k) hess.row(k) = fd::central4(V.grad, x, k, h).transpose();
  hess = 0.5 * (hess + hess.transpose()).eval();
  const Christoffel gamma = christoffels(g, x);
  const Vec dv = V.grad(x);
  for (int k = 0; k < n; ++k) hess -= dv(k) * gamma[k];
  const Mat gm = g.eval(x);
  const double lap = (inverse_metric(gm).cwiseProduct(hess)).sum();
  return hess - gm * lap + (n - 1) * gm * V.eval(x);
}

}  // namespace tractormass

#pragma once

// Product quadrature on spheres S^d, 2 <= d <= 5: the last coordinate t is
// sampled at Gauss-Gegenbauer nodes for the weight (1 - t^2)^((d-2)/2), the
// remaining unit vector recursively, down to a trapezoid rule on the circle.

#include "tractormass/core.hpp"

#include <Eigen/Eigenvalues>

namespace tractormass {

struct QuadratureRule {
  int sphere_dim = 2;
  int degree = 0;  // exact for polynomials of total degree <= degree
  std::vector<Vec> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }

  template <class F>
  double integrate(const F& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};

/// Area of the unit sphere S^d.
inline double sphere_area(int d) {
  const double h = 0.5 * (d + 1);
  return 2.0 * std::pow(M_PI, h) / std::tgamma(h);
}

/// Gauss rule with k nodes for the weight (1 - t^2)^a on [-1, 1] (Golub-Welsch).
inline std::pair<Vec, Vec> gauss_gegenbauer(int k, double a) {
  Mat J = Mat::Zero(k, k);
  for (int i = 1; i < k; ++i) {
    const double b = i * (i + 2.0 * a) / ((2.0 * i + 2.0 * a + 1.0) * (2.0 * i + 2.0 * a - 1.0));
    J(i, i - 1) = J(i - 1, i) = std::sqrt(b);
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(J);
  const double mu0 =
      std::pow(2.0, 2.0 * a + 1.0) * std::pow(std::tgamma(a + 1.0), 2) / std::tgamma(2.0 * a + 2.0);
  Vec t = es.eigenvalues();
  Vec w = mu0 * es.eigenvectors().row(0).transpose().array().square();
  // exact symmetry about t = 0
  for (int i = 0; i < k / 2; ++i) {
    const double tt = 0.5 * (t(k - 1 - i) - t(i));
    const double ww = 0.5 * (w(i) + w(k - 1 - i));
    t(i) = -tt;
    t(k - 1 - i) = tt;
    w(i) = w(k - 1 - i) = ww;
  }
  if (k % 2 == 1) t(k / 2) = 0.0;
  return {t, w};
}

namespace detail {
inline QuadratureRule sphere_rule(int d, int k) {
  QuadratureRule q;
  q.sphere_dim = d;
  if (d == 1) {
    const int M = 2 * k;
    for (int j = 0; j < M; ++j) {
      const double phi = 2.0 * M_PI * (j + 0.5) / M;
      Vec p(2);
      p << std::cos(phi), std::sin(phi);
      q.nodes.push_back(p);
      q.weights.push_back(2.0 * M_PI / M);
    }
    return q;
  }
  const QuadratureRule inner = sphere_rule(d - 1, k);
  const auto [t, w] = gauss_gegenbauer(k, 0.5 * (d - 2));
  for (int i = 0; i < k; ++i) {
    const double s = std::sqrt(std::max(0.0, 1.0 - t(i) * t(i)));
    for (std::size_t j = 0; j < inner.size(); ++j) {
      Vec p(d + 1);
      p.head(d) = s * inner.nodes[j];
      p(d) = t(i);
      q.nodes.push_back(p);
      q.weights.push_back(w(i) * inner.weights[j]);
    }
  }
  return q;
}
}  // namespace detail

/// Level L uses 2L + 2 Gauss nodes per polar angle and 4L + 4 azimuth nodes;
/// exact through degree 4L + 3.
inline QuadratureRule sphere_quadrature(int sphere_dim, int level) {
  if (sphere_dim < 2 || sphere_dim > 5) {
    throw DomainError("sphere_quadrature supports boundary dimension 2..5");
  }
  if (level < 1 || level > 12) throw DomainError("quadrature level must lie in [1, 12]");
  const int k = 2 * level + 2;
  QuadratureRule q = detail::sphere_rule(sphere_dim, k);
  q.degree = 2 * k - 1;
  return q;
}

}  // namespace tractormass

#pragma once

// Shared numerical vocabulary: Eigen aliases, error types, forward-mode
// dual numbers and central finite-difference stencils.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tractormass {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Partial derivatives of a tensor field: element k holds d/dx^k.
using MatJet = std::vector<Mat>;

inline constexpr int kMinDim = 3;
inline constexpr int kMaxDim = 6;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: unsupported dimension, malformed coefficients, invalid schedule.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Matrix that should be invertible or positive definite is not.
class SingularMetricError : public Error {
 public:
  using Error::Error;
};

/// An extrapolated sequence failed to settle.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

inline void require_dim(int n) {
  if (n < kMinDim || n > kMaxDim) {
    throw DomainError("unsupported dimension " + std::to_string(n) +
                      " (supported: 3..6)");
  }
}

// ---------------------------------------------------------------------------
// Dual numbers with up to kMaxDim partials. Only the first `dim` slots of
// `d` are meaningful; the rest stay zero.

struct Dual {
  double v = 0.0;
  std::array<double, kMaxDim> d{};

  Dual() = default;
  Dual(double value) : v(value) {}  // NOLINT(google-explicit-constructor)

  static Dual variable(double value, int slot) {
    Dual x(value);
    x.d[slot] = 1.0;
    return x;
  }

  Dual& operator+=(const Dual& o) {
    v += o.v;
    for (int i = 0; i < kMaxDim; ++i) d[i] += o.d[i];
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    for (int i = 0; i < kMaxDim; ++i) d[i] -= o.d[i];
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    for (int i = 0; i < kMaxDim; ++i) d[i] = d[i] * o.v + v * o.d[i];
    v *= o.v;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    const double inv = 1.0 / o.v;
    for (int i = 0; i < kMaxDim; ++i) d[i] = (d[i] - v * inv * o.d[i]) * inv;
    v *= inv;
    return *this;
  }
};

inline Dual operator-(Dual a) {
  a.v = -a.v;
  for (auto& x : a.d) x = -x;
  return a;
}
inline Dual operator+(Dual a, const Dual& b) { return a += b; }
inline Dual operator-(Dual a, const Dual& b) { return a -= b; }
inline Dual operator*(Dual a, const Dual& b) { return a *= b; }
inline Dual operator/(Dual a, const Dual& b) { return a /= b; }
inline Dual operator+(Dual a, double b) { a.v += b; return a; }
inline Dual operator+(double b, Dual a) { a.v += b; return a; }
inline Dual operator-(Dual a, double b) { a.v -= b; return a; }
inline Dual operator-(double b, const Dual& a) { return Dual(b) - a; }
inline Dual operator*(Dual a, double b) {
  a.v *= b;
  for (auto& x : a.d) x *= b;
  return a;
}
inline Dual operator*(double b, Dual a) { return a * b; }
inline Dual operator/(Dual a, double b) { return a * (1.0 / b); }
inline Dual operator/(double b, const Dual& a) { return Dual(b) / a; }

namespace detail {
inline Dual chain(const Dual& a, double value, double slope) {
  Dual r(value);
  for (int i = 0; i < kMaxDim; ++i) r.d[i] = slope * a.d[i];
  return r;
}
}  // namespace detail

inline Dual sqrt(const Dual& a) {
  const double s = std::sqrt(a.v);
  return detail::chain(a, s, 0.5 / s);
}
inline Dual exp(const Dual& a) {
  const double e = std::exp(a.v);
  return detail::chain(a, e, e);
}
inline Dual log(const Dual& a) { return detail::chain(a, std::log(a.v), 1.0 / a.v); }
inline Dual pow(const Dual& a, double p) {
  const double base = std::pow(a.v, p);
  return detail::chain(a, base, p * std::pow(a.v, p - 1.0));
}

inline double value_of(double x) { return x; }
inline double value_of(const Dual& x) { return x.v; }

// Integer powers by repeated multiplication keep dual partials exact.
template <class T>
T ipow(const T& x, int p) {
  if (p < 0) return T(1.0) / ipow(x, -p);
  T r(1.0);
  T b = x;
  while (p > 0) {
    if (p & 1) r = r * b;
    b = b * b;
    p >>= 1;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Small dense containers usable with double or Dual entries.

template <class T>
struct PointT {
  int n = 0;
  std::array<T, kMaxDim> c{};
  T& operator[](int i) { return c[i]; }
  const T& operator[](int i) const { return c[i]; }
};

template <class T>
struct Tensor2T {
  int n = 0;
  std::array<T, kMaxDim * kMaxDim> c{};
  explicit Tensor2T(int dim = 0) : n(dim) {
    for (auto& x : c) x = T(0.0);
  }
  T& operator()(int i, int j) { return c[i * kMaxDim + j]; }
  const T& operator()(int i, int j) const { return c[i * kMaxDim + j]; }
};

inline PointT<double> to_point(const Vec& x) {
  PointT<double> p;
  p.n = static_cast<int>(x.size());
  for (int i = 0; i < p.n; ++i) p[i] = x(i);
  return p;
}

inline Mat to_mat(const Tensor2T<double>& t) {
  Mat m(t.n, t.n);
  for (int i = 0; i < t.n; ++i)
    for (int j = 0; j < t.n; ++j) m(i, j) = t(i, j);
  return m;
}

/// Evaluate a templated tensor functor at x with forward-mode partials.
template <class F>
std::pair<Mat, MatJet> tensor_jet(const F& f, const Vec& x) {
  const int n = static_cast<int>(x.size());
  PointT<Dual> p;
  p.n = n;
  for (int i = 0; i < n; ++i) p[i] = Dual::variable(x(i), i);
  const Tensor2T<Dual> t = f(p);
  Mat value(n, n);
  MatJet d(n, Mat(n, n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      value(i, j) = t(i, j).v;
      for (int k = 0; k < n; ++k) d[k](i, j) = t(i, j).d[k];
    }
  }
  return {value, d};
}

// ---------------------------------------------------------------------------
// Central finite differences.

namespace fd {

/// Second-order central difference of f along coordinate k.
template <class F>
auto central(const F& f, const Vec& x, int k, double h) {
  Vec xp = x, xm = x;
  xp(k) += h;
  xm(k) -= h;
  return ((f(xp) - f(xm)) / (2.0 * h)).eval();
}

/// Fourth-order five-point central difference of f along coordinate k.
template <class F>
auto central4(const F& f, const Vec& x, int k, double h) {
  Vec x1 = x, x2 = x, x3 = x, x4 = x;
  x1(k) += h;
  x2(k) -= h;
  x3(k) += 2.0 * h;
  x4(k) -= 2.0 * h;
  return ((8.0 * (f(x1) - f(x2)) - (f(x3) - f(x4))) / (12.0 * h)).eval();
}

inline double central4_scalar(const std::function<double(const Vec&)>& f,
                              const Vec& x, int k, double h) {
  Vec x1 = x, x2 = x, x3 = x, x4 = x;
  x1(k) += h;
  x2(k) -= h;
  x3(k) += 2.0 * h;
  x4(k) -= 2.0 * h;
  return (8.0 * (f(x1) - f(x2)) - (f(x3) - f(x4))) / (12.0 * h);
}

/// Step for nested (fourth-order) differences. Fields on the ball vary on the
/// scale of the distance to the boundary sphere, so the step shrinks with it.
inline double nested_step(const Vec& x) {
  const double gap = 1.0 - x.norm();
  return 2e-3 * std::min(1.0, std::max(gap, 1e-6));
}

}  // namespace fd

}  // namespace tractormass

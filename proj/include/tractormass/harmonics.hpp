#pragma once

// Aspect functions chi on the boundary sphere given by harmonic coefficients.
//
// n = 3: real Schmidt semi-normalised spherical harmonics without the
// Condon-Shortley phase, polar axis omega_3. Z_0^0 = 1, Z_1^1 = omega_1,
// Z_1^-1 = omega_2, Z_1^0 = omega_3.
// n >= 4: degree 0 (m = 0, the constant 1) and degree 1 (m = k selects
// omega_k, 1 <= k <= n) only.

#include "tractormass/core.hpp"

#include <nlohmann/json.hpp>

#include <cstdlib>

namespace tractormass {

struct HarmonicTerm {
  int l = 0;
  int m = 0;
  double coeff = 0.0;
};

class SphericalAspect {
 public:
  SphericalAspect() = default;
  SphericalAspect(int dim, std::vector<HarmonicTerm> terms) : dim_(dim), terms_(std::move(terms)) {
    require_dim(dim_);
    for (const auto& t : terms_) validate(t);
  }

  static SphericalAspect constant(int dim, double c) { return {dim, {{0, 0, c}}}; }

  /// Parse `[[l, m, coeff], ...]`.
  static SphericalAspect from_json(int dim, const nlohmann::json& j) {
    if (!j.is_array()) throw DomainError("chi coefficients must be a JSON array");
    std::vector<HarmonicTerm> terms;
    for (const auto& e : j) {
      if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() ||
          !e[1].is_number_integer() || !e[2].is_number()) {
        throw DomainError("each chi coefficient must be [l, m, coeff] with integer l, m");
      }
      terms.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<double>()});
    }
    return {dim, std::move(terms)};
  }

  nlohmann::json to_json() const {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& t : terms_) j.push_back({t.l, t.m, t.coeff});
    return j;
  }

  int dim() const { return dim_; }
  const std::vector<HarmonicTerm>& terms() const { return terms_; }
  bool is_zero() const {
    for (const auto& t : terms_)
      if (t.coeff != 0.0) return false;
    return true;
  }

  /// chi(omega) for a unit vector omega (double or Dual components).
  template <class T>
  T operator()(const PointT<T>& omega) const {
    T sum(0.0);
    for (const auto& t : terms_) sum = sum + t.coeff * basis(t.l, t.m, omega);
    return sum;
  }

  double operator()(const Vec& omega) const { return (*this)(to_point(omega)); }

  template <class T>
  T basis(int l, int m, const PointT<T>& w) const {
    if (dim_ != 3) {
      if (l == 0) return T(1.0);
      return w[m - 1];
    }
    const int am = std::abs(m);
    // q = d^am P_l / dt^am at t = omega_3, by upward recurrence in l
    const T t = w[2];
    T q_prev(0.0);
    double dfact = 1.0;
    for (int k = 1; k <= am; ++k) dfact *= (2.0 * k - 1.0);
    T q(dfact);
    for (int k = am + 1; k <= l; ++k) {
      const T next = ((2.0 * k - 1.0) * t * q - (k + am - 1.0) * q_prev) / double(k - am);
      q_prev = q;
      q = next;
    }
    double ratio = 1.0;  // (l - am)! / (l + am)!
    for (int k = l - am + 1; k <= l + am; ++k) ratio /= k;
    const double norm = std::sqrt((am == 0 ? 1.0 : 2.0) * ratio);
    // Re / Im of (omega_1 + i omega_2)^am
    T re(1.0), im(0.0);
    for (int k = 0; k < am; ++k) {
      const T nre = re * w[0] - im * w[1];
      im = re * w[1] + im * w[0];
      re = nre;
    }
    return norm * q * (m >= 0 ? re : im);
  }

 private:
  void validate(const HarmonicTerm& t) const {
    if (!std::isfinite(t.coeff)) throw DomainError("chi coefficient is not finite");
    if (dim_ == 3) {
      if (t.l < 0 || std::abs(t.m) > t.l) {
        throw DomainError("chi term needs l >= 0 and |m| <= l");
      }
      if (t.l > 32) throw DomainError("chi degree above 32 is not supported");
      return;
    }
    const bool ok = (t.l == 0 && t.m == 0) || (t.l == 1 && t.m >= 1 && t.m <= dim_);
    if (!ok) {
      throw DomainError("for n >= 4 chi terms are limited to (0,0) and (1,k) with 1 <= k <= n");
    }
  }

  int dim_ = 3;
  std::vector<HarmonicTerm> terms_;
};

}  // namespace tractormass

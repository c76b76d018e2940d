#pragma once

// Boundary coefficients of h - g along rays: the trace aspect mu, the trace-free
// part mu0, Richardson extrapolation in the defining function and the
// decay-order test.

#include "tractormass/chart.hpp"

#include <limits>

namespace tractormass {

/// Geometric sample values eps_j = eps0 q^j, j < count, extrapolated with
/// `stages` Richardson columns.
struct EpsilonSchedule {
  double eps0 = 0.1;
  double ratio = 0.5;
  int count = 8;
  int stages = 4;

  void validate() const {
    if (!(eps0 > 0.0) || !(eps0 < 2.0 / 3.0)) {
      throw DomainError("eps0 must lie in (0, 2/3) so that every sample radius exceeds 1/2");
    }
    if (!(ratio > 0.0 && ratio < 1.0)) throw DomainError("ratio must lie in (0, 1)");
    if (count < 2) throw DomainError("schedule count must be at least 2");
    if (stages < 0 || stages > count - 2) {
      throw DomainError("stages must lie in [0, count - 2]");
    }
    if (eps0 * std::pow(ratio, count - 1) < 1e-12) {
      throw DomainError("smallest eps falls below 1e-12");
    }
  }

  std::vector<double> values() const {
    std::vector<double> e(count);
    for (int j = 0; j < count; ++j) e[j] = eps0 * std::pow(ratio, j);
    return e;
  }
};

enum class Convergence { converged, inconclusive, divergent };

inline std::string to_string(Convergence c) {
  switch (c) {
    case Convergence::converged: return "converged";
    case Convergence::inconclusive: return "inconclusive";
    case Convergence::divergent: return "divergent";
  }
  return "inconclusive";
}

inline Convergence worst(Convergence a, Convergence b) { return std::max(a, b); }

struct Extrapolation {
  double value = 0.0;
  double err = 0.0;
  Convergence status = Convergence::converged;
  std::vector<std::vector<double>> table;  // table[k][j], j <= min(k, stages)
};

/// Richardson extrapolation to eps -> 0 of samples at eps0 q^k, removing the
/// integer powers eps^1 .. eps^stages. Converged means err <= tol max(1, |value|).
inline Extrapolation richardson(const std::vector<double>& f, double ratio, int stages,
                                double tol) {
  const int K = static_cast<int>(f.size());
  if (K < stages + 2) throw DomainError("richardson needs at least stages + 2 samples");
  Extrapolation ex;
  ex.table.assign(K, {});
  double fmax = 0.0, amp = 1.0;
  for (int k = 0; k < K; ++k) {
    ex.table[k].push_back(f[k]);
    fmax = std::max(fmax, std::abs(f[k]));
    for (int j = 1; j <= std::min(k, stages); ++j) {
      const double qj = std::pow(ratio, j);
      ex.table[k].push_back((ex.table[k][j - 1] - qj * ex.table[k - 1][j - 1]) / (1.0 - qj));
    }
  }
  for (int j = 1; j <= stages; ++j) {
    const double qj = std::pow(ratio, j);
    amp *= (1.0 + qj) / (1.0 - qj);
  }
  const auto col = [&](int k) { return ex.table[k][stages]; };
  ex.value = col(K - 1);
  const double d1 = std::abs(col(K - 1) - col(K - 2));
  const double floor = 16.0 * std::numeric_limits<double>::epsilon() * fmax * amp;
  ex.err = d1 + floor;
  if (!std::isfinite(ex.value)) {
    ex.status = Convergence::divergent;
  } else if (ex.err <= tol * std::max(1.0, std::abs(ex.value))) {
    ex.status = Convergence::converged;
  } else if (K >= stages + 3 && d1 > floor && d1 >= std::abs(col(K - 2) - col(K - 3))) {
    ex.status = Convergence::divergent;
  } else {
    ex.status = Convergence::inconclusive;
  }
  return ex;
}

// ---------------------------------------------------------------------------
// Orthonormal frame of the boundary metric at omega: column 0 is omega, the
// rest come from Gram-Schmidt on the coordinate axes.

inline Mat boundary_frame(const Vec& omega) {
  const int n = static_cast<int>(omega.size());
  Mat E(n, n);
  E.col(0) = omega.normalized();
  int skip = 0;
  omega.cwiseAbs().maxCoeff(&skip);
  int c = 1;
  for (int i = 0; i < n; ++i) {
    if (i == skip) continue;
    Vec v = Vec::Unit(n, i);
    for (int j = 0; j < c; ++j) v -= E.col(j).dot(v) * E.col(j);
    for (int j = 0; j < c; ++j) v -= E.col(j).dot(v) * E.col(j);
    E.col(c++) = v.normalized();
  }
  return E;
}

struct AsymptoticData {
  Vec omega;
  double mu_inf = 0.0;
  Mat mu0_inf;
  double err_mu = 0.0;
  double err_mu0 = 0.0;  // largest entrywise error
  Convergence status = Convergence::converged;
  // values before extrapolation, one per schedule entry
  std::vector<double> mu_samples;
  std::vector<double> mu0_nn_samples;
};

struct ExtractionOptions {
  EpsilonSchedule schedule;
  double tol = 1e-6;
  std::optional<Mat> frame;  // overrides boundary_frame(omega)
};

namespace detail {
inline double sample_radius(const DefiningFunction& rho, double eps, const Vec& omega) {
  const double r = level_radius(rho, eps, omega);
  if (!(r > 0.5 && r < 1.0)) throw DomainError("sample radius outside (1/2, 1)");
  return r;
}
}  // namespace detail

/// mu_inf: limit of eps^-n g^ij (h_ij - g_ij) along the ray through omega.
inline Extrapolation extract_mu(const MetricField& g, const MetricField& h,
                                const DefiningFunction& rho, const Vec& omega,
                                const ExtractionOptions& opt = {}) {
  opt.schedule.validate();
  const int n = g.dim;
  std::vector<double> f;
  for (double eps : opt.schedule.values()) {
    const Vec x = detail::sample_radius(rho, eps, omega) * omega;
    const double tr = inverse_metric(g.eval(x)).cwiseProduct(metric_difference(g, h, x)).sum();
    f.push_back(tr / std::pow(eps, n));
  }
  return richardson(f, opt.schedule.ratio, opt.schedule.stages, opt.tol);
}

/// mu0_inf: limit of eps^(2-n) [lambda - (tr_g lambda / n) g] in the boundary frame.
inline std::pair<Mat, Mat> extract_mu0_with_err(const MetricField& g, const MetricField& h,
                                                const DefiningFunction& rho, const Vec& omega,
                                                const ExtractionOptions& opt,
                                                Convergence* status = nullptr,
                                                std::vector<double>* nn_samples = nullptr) {
  opt.schedule.validate();
  const int n = g.dim;
  const Mat E = opt.frame.value_or(boundary_frame(omega));
  std::vector<Mat> samples;
  for (double eps : opt.schedule.values()) {
    const Vec x = detail::sample_radius(rho, eps, omega) * omega;
    const Mat gm = g.eval(x);
    const Mat lam = metric_difference(g, h, x);
    const double tr = inverse_metric(gm).cwiseProduct(lam).sum();
    const Mat m0 = (lam - (tr / n) * gm) / std::pow(eps, n - 2);
    samples.push_back(E.transpose() * m0 * E);
  }
  Mat value(n, n), err(n, n);
  Convergence st = Convergence::converged;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      std::vector<double> f;
      for (const Mat& s : samples) f.push_back(0.5 * (s(i, j) + s(j, i)));
      const Extrapolation ex = richardson(f, opt.schedule.ratio, opt.schedule.stages, opt.tol);
      value(i, j) = value(j, i) = ex.value;
      err(i, j) = err(j, i) = ex.err;
      st = worst(st, ex.status);
    }
  if (status) *status = st;
  if (nn_samples) {
    nn_samples->clear();
    for (const Mat& m : samples) nn_samples->push_back(m(0, 0));
  }
  return {value, err};
}

inline Mat extract_mu0(const MetricField& g, const MetricField& h, const DefiningFunction& rho,
                       const Vec& omega, const ExtractionOptions& opt = {}) {
  return extract_mu0_with_err(g, h, rho, omega, opt).first;
}

inline AsymptoticData extract_asymptotics(const MetricField& g, const MetricField& h,
                                          const DefiningFunction& rho, const Vec& omega,
                                          const ExtractionOptions& opt = {}) {
  AsymptoticData d;
  d.omega = omega;
  const Extrapolation mu = extract_mu(g, h, rho, omega, opt);
  Convergence st = Convergence::converged;
  const auto [m0, e0] = extract_mu0_with_err(g, h, rho, omega, opt, &st, &d.mu0_nn_samples);
  for (const auto& row : mu.table) d.mu_samples.push_back(row[0]);
  d.mu_inf = mu.value;
  d.err_mu = mu.err;
  d.mu0_inf = m0;
  d.err_mu0 = e0.maxCoeff();
  d.status = worst(mu.status, st);
  return d;
}

// ---------------------------------------------------------------------------
// Decay order of rho^2 (h - g) along the schedule.

struct EquivalenceResult {
  bool pass = false;
  double order = 0.0;  // +infinity when h and g agree to roundoff
  bool inconclusive = false;
  std::vector<double> residuals;  // per eps, max over directions of |rho^2 (h - g)|_max
};

/// Probe directions used by check_equivalence: coordinate axes and diagonals.
inline std::vector<Vec> equivalence_directions(int n) {
  std::vector<Vec> dirs;
  for (int i = 0; i < n; ++i) {
    dirs.push_back(Vec::Unit(n, i));
    dirs.push_back(-Vec::Unit(n, i));
  }
  Vec d = Vec::Ones(n);
  for (int i = 0; i < n; ++i) d(i) = 1.0 + 0.1 * i;
  dirs.push_back(d.normalized());
  d(0) = -d(0);
  dirs.push_back(d.normalized());
  return dirs;
}

inline EquivalenceResult check_equivalence(const MetricField& g, const MetricField& h,
                                           const EpsilonSchedule& schedule,
                                           const DefiningFunction& rho) {
  schedule.validate();
  const int n = g.dim;
  const auto dirs = equivalence_directions(n);
  EquivalenceResult res;
  const auto eps = schedule.values();
  for (double e : eps) {
    double m = 0.0;
    for (const Vec& w : dirs) {
      const Vec x = detail::sample_radius(rho, e, w) * w;
      m = std::max(m, (e * e * metric_difference(g, h, x)).cwiseAbs().maxCoeff());
    }
    res.residuals.push_back(m);
  }
  if (*std::max_element(res.residuals.begin(), res.residuals.end()) < 1e-14) {
    res.pass = true;
    res.order = std::numeric_limits<double>::infinity();
    return res;
  }
  for (std::size_t k = 1; k < eps.size(); ++k) {
    if (!(res.residuals[k] < res.residuals[k - 1]) || res.residuals[k] <= 0.0) {
      res.inconclusive = true;
      return res;
    }
  }
  // least-squares slope over the last four samples, where the leading power dominates
  const std::size_t first = eps.size() > 4 ? eps.size() - 4 : 0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(eps.size() - first);
  for (std::size_t k = first; k < eps.size(); ++k) {
    const double lx = std::log(eps[k]), ly = std::log(res.residuals[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  res.order = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  res.pass = res.order >= n - 0.1;
  return res;
}

inline EquivalenceResult check_equivalence(const MetricField& g, const MetricField& h,
                                           const EpsilonSchedule& schedule = {}) {
  return check_equivalence(g, h, schedule, adapted_rho(g.dim));
}

}  // namespace tractormass

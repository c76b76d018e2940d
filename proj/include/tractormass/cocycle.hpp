#pragma once

// Boundary cocycle densities against vol X^A and the alignment transform.

#include "tractormass/asymptotics.hpp"

namespace tractormass {

enum class CocycleKind { c1, c2, combined };

struct CocycleDensity {
  CocycleKind kind = CocycleKind::combined;
  double value = 0.0;
  double err = 0.0;
};

/// ((n^2 - 1)/2) mu_inf.
inline CocycleDensity c1_density(const AsymptoticData& d) {
  const int n = static_cast<int>(d.omega.size());
  const double k = 0.5 * (n * n - 1.0);
  return {CocycleKind::c1, k * d.mu_inf, k * d.err_mu};
}

/// Minus the normal-normal entry of mu0_inf (frame column 0 is the normal).
inline CocycleDensity c2_density(const AsymptoticData& d) {
  return {CocycleKind::c2, -d.mu0_inf(0, 0), d.err_mu0};
}

/// multiple * (-(2/n) c1 - c2).
inline CocycleDensity combined_c_density(const CocycleDensity& d1, const CocycleDensity& d2, int n,
                                         double multiple = 1.0) {
  if (d1.kind != CocycleKind::c1 || d2.kind != CocycleKind::c2) {
    throw DomainError("combined_c_density expects a c1 and a c2 density");
  }
  const double a = 2.0 / n;
  return {CocycleKind::combined, multiple * (-a * d1.value - d2.value),
          std::abs(multiple) * (a * d1.err + d2.err)};
}

inline CocycleDensity combined_c_density(const AsymptoticData& d, double multiple = 1.0) {
  return combined_c_density(c1_density(d), c2_density(d), static_cast<int>(d.omega.size()),
                            multiple);
}

// ---------------------------------------------------------------------------
// Densities of a boundary mu matrix given in an orthonormal frame whose
// `normal` index is the unit normal: mu_inf = tr mu, mu0 = mu - (tr mu / n) I.

struct MatrixDensities {
  double c1 = 0.0;
  double c2 = 0.0;
  double combined = 0.0;
};

inline MatrixDensities densities_from_mu(const Mat& mu, int normal = 0, double multiple = 1.0) {
  const auto n = static_cast<int>(mu.rows());
  const double tr = mu.trace();
  MatrixDensities out;
  out.c1 = 0.5 * (n * n - 1.0) * tr;
  out.c2 = -(mu(normal, normal) - tr / n);
  out.combined = multiple * (-(2.0 / n) * out.c1 - out.c2);
  return out;
}

struct AlignmentInput {
  Mat mu;
  int normal = 0;
  int order = 3;  // N
};

/// mu~_ij = mu_ij - n_i mu_jk - n_j mu_ik + (mu_kk / N)(delta_ij + (N - 1) n_i n_j), k = normal.
inline Mat alignment_transform(const AlignmentInput& in) {
  const Mat& mu = in.mu;
  const auto n = mu.rows();
  if (mu.cols() != n) throw DomainError("alignment_transform needs a square matrix");
  if ((mu - mu.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, mu.cwiseAbs().maxCoeff())) {
    throw DomainError("alignment_transform needs a symmetric matrix");
  }
  if (in.normal < 0 || in.normal >= n) throw DomainError("normal index out of range");
  if (in.order < 2) throw DomainError("alignment order must be at least 2");
  const int k = in.normal;
  const double N = in.order;
  const double mkk = mu(k, k);
  Mat out = mu;
  out.row(k) -= mu.row(k);
  out.col(k) -= mu.col(k);
  out += (mkk / N) * Mat::Identity(n, n);
  out(k, k) += mkk * (N - 1.0) / N;
  return out;
}

}  // namespace tractormass

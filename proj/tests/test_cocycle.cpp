#include <gtest/gtest.h>

#include <random>

#include "tractormass/cocycle.hpp"
#include "tractormass/families.hpp"

using namespace tractormass;

namespace {

Vec random_direction(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> N(0.0, 1.0);
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = N(rng);
  return v.normalized();
}

Mat random_symmetric(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  Mat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) m(i, j) = m(j, i) = U(rng);
  return m;
}

AsymptoticData data(int n, double mu, double mu0_nn) {
  AsymptoticData d;
  d.omega = Vec::Unit(n, 0);
  d.mu_inf = mu;
  d.mu0_inf = Mat::Zero(n, n);
  d.mu0_inf(0, 0) = mu0_nn;
  return d;
}

MetricField random_aspect(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> U(-0.1, 0.1);
  std::uniform_int_distribution<int> P(0, 2);
  const int m = n == 3 ? -1 : 2;
  const SphericalAspect chi(n, {{0, 0, U(rng)}, {1, 1, U(rng)}, {1, m, U(rng)}});
  return aspect_perturbation(n, chi, static_cast<AspectProfile>(P(rng)));
}

}  // namespace

TEST(Densities, Arithmetic) {
  EXPECT_EQ(c1_density(data(3, 0.0, 0.0)).value, 0.0);
  EXPECT_DOUBLE_EQ(c1_density(data(3, 1.0, 0.0)).value, 4.0);
  EXPECT_EQ(c2_density(data(3, 0.0, 0.0)).value, 0.0);
  EXPECT_DOUBLE_EQ(c2_density(data(4, 0.0, 0.7)).value, -0.7);
  EXPECT_EQ(combined_c_density(data(3, 0.0, 0.0)).value, 0.0);
  EXPECT_NEAR(combined_c_density(data(3, 1.0, 0.0)).value, -8.0 / 3.0, 1e-15);
  EXPECT_NEAR(combined_c_density(data(3, 1.0, 0.0), 2.0).value, -16.0 / 3.0, 1e-15);
}

TEST(Densities, CombinedClosedForm) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  for (int n = 3; n <= 6; ++n) {
    for (int t = 0; t < 20; ++t) {
      const double mu = U(rng), nn = U(rng);
      const AsymptoticData d = data(n, mu, nn);
      const double expected = nn - ((n * n - 1.0) / n) * mu;
      EXPECT_NEAR(combined_c_density(d).value, expected, 1e-13);
      EXPECT_NEAR(combined_c_density(c1_density(d), c2_density(d), n).value,
                  -(2.0 / n) * c1_density(d).value - c2_density(d).value, 1e-15);
    }
  }
}

TEST(Densities, KindMismatchRejected) {
  const AsymptoticData d = data(3, 1.0, 0.0);
  EXPECT_THROW(combined_c_density(c2_density(d), c1_density(d), 3), DomainError);
}

TEST(Densities, ErrorPropagation) {
  AsymptoticData d = data(3, 1.0, 0.5);
  d.err_mu = 1e-8;
  d.err_mu0 = 2e-8;
  EXPECT_DOUBLE_EQ(c1_density(d).err, 4e-8);
  EXPECT_DOUBLE_EQ(c2_density(d).err, 2e-8);
  EXPECT_NEAR(combined_c_density(d).err, (2.0 / 3.0) * 4e-8 + 2e-8, 1e-22);
}

TEST(Densities, FromMatrixAgreesWithExtractedForm) {
  std::mt19937_64 rng(2);
  for (int n = 3; n <= 5; ++n) {
    const Mat mu = random_symmetric(rng, n);
    AsymptoticData d;
    d.omega = Vec::Unit(n, 0);
    d.mu_inf = mu.trace();
    d.mu0_inf = mu - (mu.trace() / n) * Mat::Identity(n, n);
    const MatrixDensities m = densities_from_mu(mu);
    EXPECT_NEAR(m.c1, c1_density(d).value, 1e-14);
    EXPECT_NEAR(m.c2, c2_density(d).value, 1e-14);
    EXPECT_NEAR(m.combined, combined_c_density(d).value, 1e-14);
  }
}

TEST(Alignment, ZeroNormalColumnIsFixed) {
  Mat mu = Mat::Zero(3, 3);
  mu(1, 1) = 0.4;
  mu(1, 2) = mu(2, 1) = -0.3;
  mu(2, 2) = 1.1;
  EXPECT_LT((alignment_transform({mu, 0, 3}) - mu).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Alignment, RejectsBadInput) {
  Mat mu = Mat::Identity(3, 3);
  mu(0, 1) = 1.0;
  EXPECT_THROW(alignment_transform({mu, 0, 3}), DomainError);
  EXPECT_THROW(alignment_transform({Mat::Identity(3, 3), 3, 3}), DomainError);
  EXPECT_THROW(alignment_transform({Mat::Identity(3, 2), 0, 3}), DomainError);
}

TEST(Alignment, NormalColumnVanishesAfterTransform) {
  std::mt19937_64 rng(3);
  for (int n : {3, 4, 5}) {
    for (int t = 0; t < 100; ++t) {
      const Mat mu = random_symmetric(rng, n);
      const int k = t % n;
      const Mat out = alignment_transform({mu, k, n});
      EXPECT_LT(out.col(k).cwiseAbs().maxCoeff(), 1e-14);
      EXPECT_LT((out - out.transpose()).cwiseAbs().maxCoeff(), 1e-15);
    }
  }
}

TEST(Alignment, CombinedDensityInvariant) {
  std::mt19937_64 rng(4);
  for (int n : {3, 4}) {
    double c1_change = 0.0, c2_change = 0.0;
    for (int t = 0; t < 100; ++t) {
      const Mat mu = random_symmetric(rng, n);
      const Mat out = alignment_transform({mu, 0, n});
      const MatrixDensities a = densities_from_mu(mu), b = densities_from_mu(out);
      EXPECT_LE(std::abs(a.combined - b.combined), 1e-12);
      EXPECT_NEAR((n / 2.0) * out.trace() - 0.5 * out(0, 0),
                  (n / 2.0) * mu.trace() - 0.5 * mu(0, 0), 1e-12);
      c1_change = std::max(c1_change, std::abs(a.c1 - b.c1));
      c2_change = std::max(c2_change, std::abs(a.c2 - b.c2));
    }
    EXPECT_GT(c1_change, 1e-6);
    EXPECT_GT(c2_change, 1e-6);
  }
}

TEST(Alignment, OtherOrderBreaksInvariance) {
  std::mt19937_64 rng(5);
  const Mat mu = random_symmetric(rng, 3);
  const MatrixDensities a = densities_from_mu(mu),
                        b = densities_from_mu(alignment_transform({mu, 0, 4}));
  EXPECT_GT(std::abs(a.combined - b.combined), 1e-6);
}

TEST(CocycleAlgebra, AntisymmetryAndAdditivity) {
  const int n = 3;
  const auto rho = adapted_rho(n);
  for (int seed = 0; seed < 5; ++seed) {
    std::mt19937_64 rng(100 + seed);
    const MetricField g = hyperbolic_metric(n);
    const MetricField h = random_aspect(rng, n);
    const MetricField k = superpose(h, random_aspect(rng, n));
    for (int t = 0; t < 20; ++t) {
      const Vec w = random_direction(rng, n);
      const AsymptoticData gh = extract_asymptotics(g, h, rho, w);
      const AsymptoticData hg = extract_asymptotics(h, g, rho, w);
      const AsymptoticData gk = extract_asymptotics(g, k, rho, w);
      const AsymptoticData hk = extract_asymptotics(h, k, rho, w);
      ASSERT_EQ(gh.status, Convergence::converged);
      using F = CocycleDensity (*)(const AsymptoticData&);
      const F kinds[] = {c1_density, c2_density,
                         [](const AsymptoticData& d) { return combined_c_density(d); }};
      for (F f : kinds) {
        const CocycleDensity a = f(gh), b = f(hg);
        EXPECT_LE(std::abs(a.value + b.value), 5 * (a.err + b.err) + 1e-15);
        const CocycleDensity x = f(gk), z = f(hk);
        EXPECT_LE(std::abs(x.value - a.value - z.value), 5 * (x.err + a.err + z.err) + 1e-15);
      }
    }
  }
}

TEST(CocycleAlgebra, TangentialProfileHasNoNormalComponent) {
  const int n = 3;
  const MetricField h =
      aspect_perturbation(n, SphericalAspect(n, {{0, 0, 0.2}}), AspectProfile::tangential);
  std::mt19937_64 rng(6);
  for (int t = 0; t < 5; ++t) {
    const AsymptoticData d =
        extract_asymptotics(hyperbolic_metric(n), h, adapted_rho(n), random_direction(rng, n));
    EXPECT_NEAR(c2_density(d).value, 0.0, 1e-9);
    EXPECT_NEAR(c1_density(d).value, 0.0, 1e-9);
  }
}

TEST(CocycleAlgebra, CombinedIndependentOfTangentialFrame) {
  const int n = 4;
  std::mt19937_64 rng(7);
  const MetricField h = random_aspect(rng, n);
  const Vec w = random_direction(rng, n);
  ExtractionOptions opt;
  const AsymptoticData a = extract_asymptotics(hyperbolic_metric(n), h, adapted_rho(n), w, opt);
  // rotate the tangential frame vectors among themselves
  Mat E = boundary_frame(w);
  const Mat T = E.rightCols(n - 1);
  const Mat Q = Eigen::HouseholderQR<Mat>(random_symmetric(rng, n - 1)).householderQ();
  E.rightCols(n - 1) = T * Q;
  opt.frame = E;
  const AsymptoticData b = extract_asymptotics(hyperbolic_metric(n), h, adapted_rho(n), w, opt);
  EXPECT_NEAR(combined_c_density(a).value, combined_c_density(b).value, 1e-12);
  EXPECT_NEAR(c2_density(a).value, c2_density(b).value, 1e-12);
}

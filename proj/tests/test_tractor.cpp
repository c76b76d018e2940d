#include <gtest/gtest.h>

#include <random>

#include "tractormass/tractor.hpp"

using namespace tractormass;

namespace {

Vec random_point(std::mt19937_64& rng, int n, double rmin, double rmax) {
  std::normal_distribution<double> N(0.0, 1.0);
  std::uniform_real_distribution<double> U(rmin, rmax);
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = N(rng);
  return U(rng) * v.normalized();
}

TractorTriple random_triple(std::mt19937_64& rng, const ScaleRef& s, const Vec& x) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  Vec mid(x.size());
  for (int i = 0; i < mid.size(); ++i) mid(i) = U(rng);
  return make_tractor(s, x, U(rng), mid, U(rng));
}

double slot_max(const TractorTriple& t) {
  return std::max({std::abs(t.top), t.middle.cwiseAbs().maxCoeff(), std::abs(t.bottom)});
}

TractorTriple diff(const TractorTriple& a, const TractorTriple& b) {
  TractorTriple d = a;
  d.top -= b.top;
  d.middle -= b.middle;
  d.bottom -= b.bottom;
  return d;
}

ScalarField random_factor(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> U(-0.4, 0.4);
  Vec a(n);
  for (int i = 0; i < n; ++i) a(i) = U(rng);
  const double b = U(rng);
  return {[=](const Vec& x) { return a.dot(x) + b * x.squaredNorm(); },
          [=](const Vec& x) -> Vec { return a + 2.0 * b * x; }};
}

Sym2Field random_trace_free(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  auto sym = [&] {
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) m(i, j) = m(j, i) = U(rng);
    return Mat(m - (m.trace() / n) * Mat::Identity(n, n));
  };
  const Mat A = sym(), B = sym(), C = sym();
  return {[=](const Vec& x) -> Mat { return A + x(0) * B + x(1) * x(2) * C; }};
}

}  // namespace

TEST(TractorPairing, CanonicalTractorX) {
  const ScaleRef s = reference_scale(3);
  const Vec x = Vec::Constant(3, 0.3);
  const TractorTriple X = tractor_X(s, x);
  Vec mid(3);
  mid << 0.2, -0.5, 0.1;
  EXPECT_DOUBLE_EQ(tractor_pairing(X, make_tractor(s, x, 1.7, mid, -3.0)), 1.7);
  EXPECT_EQ(tractor_pairing(X, X), 0.0);
}

TEST(ChangeScale, ZeroUpsilonIsIdentity) {
  const ScaleRef s = reference_scale(3);
  const ScalarField zero{[](const Vec&) { return 0.0; },
                         [](const Vec&) -> Vec { return Vec::Zero(3); }};
  const ScaleRef t = conformal_scale(s, zero);
  std::mt19937_64 rng(1);
  const Vec x = random_point(rng, 3, 0.2, 0.8);
  const TractorTriple T = random_triple(rng, s, x);
  EXPECT_LT(slot_max(diff(change_scale(T, t), T)), 1e-15);
}

TEST(ChangeScale, TopSlotOnly) {
  const int n = 3;
  const ScaleRef s = reference_scale(n);
  Vec a(n);
  a << 0.3, -0.1, 0.2;
  const ScaleRef t = conformal_scale(
      s, {[a](const Vec& x) { return a.dot(x); }, [a](const Vec&) -> Vec { return a; }});
  const Vec x = Vec::Constant(n, 0.25);
  const double sigma = 1.3, f = a.dot(x);
  const TractorTriple T = change_scale(make_tractor(s, x, sigma, Vec::Zero(n), 0.0), t);
  const Mat ginv = s->metric.eval(x).inverse();
  // (sigma, Upsilon sigma, -|Upsilon|^2 sigma / 2) in the old trivialisation
  EXPECT_NEAR(T.top, std::exp(f) * sigma, 1e-14);
  EXPECT_LT((T.middle - std::exp(f) * sigma * a).norm(), 1e-14);
  EXPECT_NEAR(T.bottom, -std::exp(-f) * 0.5 * a.dot(ginv * a) * sigma, 1e-14);
}

TEST(ChangeScale, RoundTripAndPairingInvariance) {
  std::mt19937_64 rng(2);
  for (int n = 3; n <= 6; ++n) {
    const ScaleRef s = hyperbolic_scale(n);
    const ScaleRef t = conformal_scale(s, random_factor(rng, n));
    for (int k = 0; k < 10; ++k) {
      const Vec x = random_point(rng, n, 0.1, 0.9);
      const TractorTriple A = random_triple(rng, s, x), B = random_triple(rng, s, x);
      const TractorTriple At = change_scale(A, t), Bt = change_scale(B, t);
      EXPECT_NEAR(tractor_pairing(At, Bt), tractor_pairing(A, B), 1e-12);
      EXPECT_NEAR(tractor_pairing(At, B), tractor_pairing(A, B), 1e-12);
      EXPECT_LT(slot_max(diff(change_scale(At, s), A)), 1e-12);
    }
  }
}

TEST(TractorDerivative, ConstantFlatTriple) {
  const ScaleRef flat = flat_scale(3);
  const TractorField one = [flat](const Vec& y) {
    return make_tractor(flat, y, 1.0, Vec::Zero(3), 0.0);
  };
  for (int a = 0; a < 3; ++a)
    EXPECT_LT(slot_max(tractor_derivative(one, Vec::Constant(3, 0.2), a)), 1e-12);
}

TEST(TractorDerivative, ScaleTractorIsParallel) {
  std::mt19937_64 rng(3);
  for (int n : {3, 4}) {
    for (const ScaleRef& s : {hyperbolic_scale(n), reference_scale(n), flat_scale(n)}) {
      const TractorField I = [s](const Vec& y) { return scale_tractor(s, y); };
      double worst = 0.0;
      for (int k = 0; k < 20; ++k) {
        const Vec x = random_point(rng, n, 0.1, 0.95);
        std::uniform_int_distribution<int> A(0, n - 1);
        worst = std::max(worst, slot_max(tractor_derivative(I, x, A(rng))));
      }
      EXPECT_LT(worst, 1e-5) << s->label << " n=" << n;
    }
  }
}

TEST(TractorDerivative, MetricCompatibility) {
  std::mt19937_64 rng(4);
  const int n = 3;
  const ScaleRef s = reference_scale(n);
  const TractorField T = [s](const Vec& y) {
    Vec mid(3);
    mid << std::sin(y(0)), y(1) * y(2), 1.0 + y(0) * y(0);
    return make_tractor(s, y, std::cos(y(1)) + y(2), mid, y(0) - y(1) * y(1));
  };
  for (int k = 0; k < 5; ++k) {
    const Vec x = random_point(rng, n, 0.2, 0.8);
    const Vec v = random_point(rng, n, 1.0, 1.0);
    const double h = 1e-4;
    const auto norm_along = [&](double t) {
      const TractorTriple a = T(Vec(x + t * v));
      return tractor_pairing(a, a);
    };
    const double lhs =
        (8 * (norm_along(h) - norm_along(-h)) - (norm_along(2 * h) - norm_along(-2 * h))) /
        (12 * h);
    TractorTriple dv = T(x);
    dv.top = 0;
    dv.middle.setZero();
    dv.bottom = 0;
    for (int a = 0; a < n; ++a) {
      const TractorTriple d = tractor_derivative(T, x, a);
      dv.top += v(a) * d.top;
      dv.middle += v(a) * d.middle;
      dv.bottom += v(a) * d.bottom;
    }
    EXPECT_NEAR(lhs, 2 * tractor_pairing(dv, T(x)), 1e-5);
  }
}

TEST(TractorDerivative, ScaleCovariance) {
  std::mt19937_64 rng(5);
  const int n = 3;
  const ScaleRef s = reference_scale(n);
  const TractorField T = [s](const Vec& y) {
    Vec mid(3);
    mid << y(0) * y(1), 0.5 - y(2), y(0);
    return make_tractor(s, y, 1.0 + y(2) * y(2), mid, y(1));
  };
  for (int k = 0; k < 3; ++k) {
    const ScaleRef t = conformal_scale(s, random_factor(rng, n));
    const TractorField Tt = [&](const Vec& y) { return change_scale(T(y), t); };
    const Vec x = random_point(rng, n, 0.3, 0.8);
    for (int a = 0; a < n; ++a) {
      const TractorTriple lhs = change_scale(tractor_derivative(T, x, a), t);
      const TractorTriple rhs = tractor_derivative(Tt, x, a);
      EXPECT_LT(slot_max(diff(lhs, rhs)), 1e-8);
    }
  }
}

TEST(DOperator, ConstantOnFlat) {
  const ScaleRef flat = flat_scale(4);
  const ScalarField one{[](const Vec&) { return 1.0; },
                        [](const Vec&) -> Vec { return Vec::Zero(4); }};
  const TractorTriple D = D_operator(flat, one, 1, Vec::Constant(4, 0.1));
  EXPECT_DOUBLE_EQ(D.top, 4.0);
  EXPECT_LT(D.middle.norm(), 1e-12);
  EXPECT_LT(std::abs(D.bottom), 1e-12);
  EXPECT_EQ(D.weight, 0);
}

TEST(DOperator, HyperbolicScaleTractor) {
  for (int n = 3; n <= 6; ++n) {
    const ScaleRef hyp = hyperbolic_scale(n);
    const ScalarField one{[](const Vec&) { return 1.0; },
                          [n](const Vec&) -> Vec { return Vec::Zero(n); }};
    const Vec x = Vec::Constant(n, 0.2);
    TractorTriple D = D_operator(hyp, one, 1, x);
    EXPECT_NEAR(D.top / n, 1.0, 1e-15);
    EXPECT_NEAR(D.bottom / n, 0.5, 1e-9);
    const TractorTriple I = scale_tractor(hyp, x);
    EXPECT_NEAR(tractor_pairing(I, I), 1.0, 1e-8);
  }
}

TEST(DOperator, ScaleCovariance) {
  std::mt19937_64 rng(6);
  const int n = 3;
  const ScaleRef s = reference_scale(n);
  const ScalarField tau{[](const Vec& y) { return 1.0 + y(0) * y(1) + 0.3 * y(2); },
                        [](const Vec& y) -> Vec {
                          Vec g(3);
                          g << y(1), y(0), 0.3;
                          return g;
                        }};
  for (int k = 0; k < 3; ++k) {
    const ScalarField f = random_factor(rng, n);
    const ScaleRef t = conformal_scale(s, f);
    // a weight-1 density picks up e^f
    const ScalarField tau_t{[=](const Vec& y) { return std::exp(f.value(y)) * tau.value(y); },
                            [=](const Vec& y) -> Vec {
                              return std::exp(f.value(y)) *
                                     (tau.grad(y) + tau.value(y) * f.grad(y));
                            }};
    const Vec x = random_point(rng, n, 0.3, 0.8);
    const TractorTriple lhs = change_scale(D_operator(s, tau, 1, x), t);
    const TractorTriple rhs = D_operator(t, tau_t, 1, x);
    EXPECT_LT(slot_max(diff(lhs, rhs)), 1e-8);
  }
}

TEST(NormalTractor, NormAndOrthogonality) {
  std::mt19937_64 rng(7);
  for (int n : {3, 4, 5}) {
    const ScaleRef ref = reference_scale(n);
    for (int k = 0; k < 20; ++k) {
      const Vec w = random_point(rng, n, 1.0, 1.0);
      const TractorTriple N = normal_tractor(ref, w);
      EXPECT_NEAR(tractor_pairing(N, N), 1.0, 1e-8);
      EXPECT_EQ(tractor_pairing(N, tractor_X(ref, w)), 0.0);
    }
  }
}

TEST(NormalTractor, MeanCurvatureOfBoundarySphere) {
  const Vec w = Vec::Unit(3, 2);
  EXPECT_NEAR(mean_curvature(reference_scale(3), w), 0.0, 1e-9);
  EXPECT_NEAR(mean_curvature(flat_scale(3), w), -1.0, 1e-9);
  EXPECT_THROW(normal_tractor(reference_scale(3), Vec::Constant(3, 0.5)), DomainError);
}

TEST(NormalTractor, ScaleTractorMeetsNormalAtBoundary) {
  std::mt19937_64 rng(8);
  for (int n : {3, 4}) {
    const ScaleRef ref = reference_scale(n), flat = flat_scale(n);
    for (int k = 0; k < 10; ++k) {
      const Vec w = random_point(rng, n, 1.0, 1.0);
      for (const ScaleRef& s : {ref, flat}) {
        const TractorTriple I = scale_tractor(s, w, 1e-3);
        EXPECT_LT(slot_max(diff(I, normal_tractor(s, w))), 1e-6) << s->label;
      }
    }
  }
}

TEST(NormalTractor, BoundaryIdentification) {
  const ScaleRef s = flat_scale(3);
  const Vec w = Vec::Unit(3, 0);
  const TractorTriple N = normal_tractor(s, w);
  const TractorTriple T = make_tractor(s, w, 0.7, Vec::Unit(3, 1), 0.2);
  const TractorTriple B = boundary_identification(T, N.middle, -N.bottom);
  EXPECT_NEAR(B.top, 0.7, 1e-15);
  EXPECT_LT((B.middle - (Vec::Unit(3, 1) - 0.7 * w)).norm(), 1e-8);
  EXPECT_NEAR(B.bottom, 0.2 + 0.35, 1e-8);
  const TractorTriple same = boundary_identification(T, N.middle, 0.0);
  EXPECT_LT(slot_max(diff(same, T)), 1e-15);
}

TEST(SplittingOperator, ZeroAndConstantFields) {
  const ScaleRef flat = flat_scale(3);
  const Vec x = Vec::Constant(3, 0.2);
  const TractorOneForm z =
      splitting_S(flat, {[](const Vec&) -> Mat { return Mat::Zero(3, 3); }}, x);
  for (const auto& c : z.comp) EXPECT_EQ(slot_max(c), 0.0);
  Mat A(3, 3);
  A << 1, 2, 0, 2, -3, 1, 0, 1, 2;
  const TractorOneForm S = splitting_S(flat, {[A](const Vec&) -> Mat { return A; }}, x);
  for (int a = 0; a < 3; ++a) {
    EXPECT_NEAR(S.comp[a].bottom, 0.0, 1e-12);
    EXPECT_EQ(S.comp[a].top, 0.0);
    EXPECT_LT((S.comp[a].middle - A.row(a).transpose()).norm(), 1e-15);
  }
  EXPECT_TRUE(in_codifferential_kernel(S));
}

TEST(SplittingOperator, RejectsTrace) {
  const ScaleRef flat = flat_scale(3);
  EXPECT_THROW(
      splitting_S(flat, {[](const Vec&) -> Mat { return Mat::Identity(3, 3); }}, Vec::Zero(3)),
      DomainError);
}

TEST(SplittingOperator, KernelPredicateDetectsViolations) {
  const ScaleRef flat = flat_scale(3);
  const Vec x = Vec::Zero(3);
  TractorOneForm f{flat, x, {}};
  for (int a = 0; a < 3; ++a) f.comp.push_back(make_tractor(flat, x, 0.0, Vec::Unit(3, a), 0.0));
  EXPECT_FALSE(in_codifferential_kernel(f));  // middle slot is the identity
  f.comp[0].middle = Vec::Unit(3, 1);
  f.comp[1].middle = Vec::Unit(3, 0);
  f.comp[2].middle = Vec::Zero(3);
  EXPECT_TRUE(in_codifferential_kernel(f));
  f.comp[2].top = 1e-3;
  EXPECT_FALSE(in_codifferential_kernel(f));
}

TEST(SplittingOperator, NormalisationResidual) {
  std::mt19937_64 rng(9);
  for (int n : {3, 4}) {
    for (const ScaleRef& s : {hyperbolic_scale(n), flat_scale(n)}) {
      for (int k = 0; k < 3; ++k) {
        const Sym2Field phi = random_trace_free(rng, n);
        const Vec x = random_point(rng, n, 0.3, 0.8);
        EXPECT_LT(splitting_residual(s, phi, x).max(), 1e-4) << s->label;
        EXPECT_TRUE(in_codifferential_kernel(splitting_S(s, phi, x)));
      }
    }
  }
}

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "affine2f/errors.hpp"
#include "affine2f/limit_laws.hpp"
#include "affine2f/moments.hpp"

using namespace affine2f;

namespace {

ModelSpec spec_of(double a, double b, double alpha, double beta, double gamma, double s1, double s2,
                  double s3, double rho) {
  ModelSpec spec;
  spec.drift = {a, b, alpha, beta, gamma};
  spec.diffusion = {s1, s2, s3, rho};
  spec.init.y0 = 1.0;
  spec.init.x0 = 0.0;
  return spec;
}

ModelSpec demo_spec() { return spec_of(1, 1, 0.5, 0.2, 0.8, 0.5, 0.3, 0.4, 0.3); }

double min_eigenvalue(const Matrix5d& m) {
  return Eigen::SelfAdjointEigenSolver<Matrix5d>(m).eigenvalues().minCoeff();
}

}  // namespace

TEST(SubcriticalLimit, GInfYBlockExample) {
  const SubcriticalLimit lim = subcritical_limit(spec_of(1, 1, 0.5, 0.2, 0.8, 1, 0.3, 0.4, 0.3));
  EXPECT_NEAR(lim.g_inf(0, 0), 1.0, 1e-14);
  EXPECT_NEAR(lim.g_inf(0, 1), -1.0, 1e-14);
  EXPECT_NEAR(lim.g_inf(1, 0), -1.0, 1e-14);
  EXPECT_NEAR(lim.g_inf(1, 1), 1.5, 1e-14);
}

TEST(SubcriticalLimit, Structure) {
  const SubcriticalLimit lim = subcritical_limit(demo_spec());
  EXPECT_TRUE((lim.g_inf.block<2, 3>(0, 2).isZero(0.0)));
  EXPECT_TRUE((lim.g_inf.block<3, 2>(2, 0).isZero(0.0)));
  EXPECT_TRUE(lim.g_inf.isApprox(lim.g_inf.transpose(), 0.0));
  EXPECT_GT(min_eigenvalue(lim.g_inf), 0.0);
  EXPECT_LT((lim.asym_cov - lim.asym_cov.transpose()).norm(), 1e-12 * lim.asym_cov.norm());
  EXPECT_GE(min_eigenvalue(lim.asym_cov), -1e-10 * lim.asym_cov.trace());
}

TEST(SubcriticalLimit, GTildeEntriesFromMoments) {
  const ModelSpec spec = demo_spec();
  const DiffusionParams& s = spec.diffusion;
  const MomentTable m = stationary_moments(spec, 3, 2);
  const SubcriticalLimit lim = subcritical_limit(spec);
  const double s11 = s.sigma1 * s.sigma1, s22 = s.sigma2 * s.sigma2, s33 = s.sigma3 * s.sigma3;
  const double s12 = s.rho * s.sigma1 * s.sigma2;
  EXPECT_NEAR(lim.g_tilde_inf(0, 0), s11 * m(1, 0), 1e-10);
  EXPECT_NEAR(lim.g_tilde_inf(0, 1), -s11 * m(2, 0), 1e-10);
  EXPECT_NEAR(lim.g_tilde_inf(1, 1), s11 * m(3, 0), 1e-10);
  EXPECT_NEAR(lim.g_tilde_inf(0, 2), s12 * m(1, 0), 1e-10);
  EXPECT_NEAR(lim.g_tilde_inf(1, 4), s12 * m(2, 1), 1e-10);
  EXPECT_NEAR(lim.g_tilde_inf(2, 2), s22 * m(1, 0) + s33, 1e-10);
  EXPECT_NEAR(lim.g_tilde_inf(3, 3), s22 * m(3, 0) + s33 * m(2, 0), 1e-10);
  EXPECT_NEAR(lim.g_tilde_inf(4, 4), s22 * m(1, 2) + s33 * m(0, 2), 1e-10);
  EXPECT_NEAR(lim.g_tilde_inf(3, 4), s22 * m(2, 1) + s33 * m(1, 1), 1e-10);
}

TEST(SubcriticalLimit, NoCrossBlocksWithoutSigma2) {
  const SubcriticalLimit lim = subcritical_limit(spec_of(1, 1, 0.5, 0.2, 0.8, 0.5, 0.0, 1.0, 0.7));
  EXPECT_TRUE((lim.g_tilde_inf.block<2, 3>(0, 2).isZero(0.0)));
  EXPECT_TRUE((lim.g_tilde_inf.block<3, 2>(2, 0).isZero(0.0)));
}

TEST(SubcriticalLimit, YBlockDependsOnlyOnYParameters) {
  const Eigen::Matrix2d base = subcritical_limit(demo_spec()).asym_cov.topLeftCorner<2, 2>();
  const Eigen::Matrix2d moved =
      subcritical_limit(spec_of(1, 1, -0.7, 0.9, 2.5, 0.5, 0.8, 0.1, -0.6)).asym_cov.topLeftCorner<2, 2>();
  EXPECT_EQ(base, moved);
}

TEST(SubcriticalLimit, RejectsNonSubcritical) {
  EXPECT_THROW(subcritical_limit(spec_of(1, 0, 0.5, 0, 0, 0.5, 0.3, 0.4, 0.3)), HypothesisViolation);
}

TEST(SupercriticalLimit, Examples) {
  const Matrix5d v = supercritical_v_matrix(-0.5, -1.0, 2.0, 3.0);
  EXPECT_NEAR(v.determinant(), 8.0, 1e-10 * 8.0);
  EXPECT_NEAR(supercritical_v_det(-0.5, -1.0, 2.0, 3.0), 8.0, 1e-15);
  const Matrix5d e = supercritical_eta_sq(-0.5, -1.0, 1.0, 0.7, 0.4, 2.0, 3.0);
  EXPECT_NEAR(e(0, 0), 4.0, 1e-15);
}

TEST(SupercriticalLimit, NoCrossBlocksWithoutCorrelation) {
  const Matrix5d e = supercritical_eta_sq(-0.5, -1.0, 1.0, 0.7, 0.0, 2.0, 3.0);
  EXPECT_TRUE((e.block<2, 3>(0, 2).isZero(0.0)));
  EXPECT_TRUE((e.block<3, 2>(2, 0).isZero(0.0)));
}

TEST(SupercriticalLimit, RandomTuples) {
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> u(0.05, 3.0), r(-0.95, 0.95);
  for (int i = 0; i < 100; ++i) {
    const double b = -u(gen);
    const double gamma = b - u(gen);
    const double vy = u(gen), vx = (i % 2 ? 1.0 : -1.0) * u(gen);
    const Matrix5d v = supercritical_v_matrix(b, gamma, vy, vx);
    const double closed = supercritical_v_det(b, gamma, vy, vx);
    EXPECT_NEAR(v.determinant(), closed, 1e-10 * std::abs(closed));
    const Matrix5d e = supercritical_eta_sq(b, gamma, u(gen), u(gen), r(gen), vy, vx);
    EXPECT_TRUE(e.isApprox(e.transpose(), 0.0));
    EXPECT_GE(min_eigenvalue(e), -1e-10 * e.trace());
  }
}

TEST(SupercriticalLimit, SampleAssembly) {
  ModelSpec spec = spec_of(1, -0.5, 0.5, -0.2, -1, 0.5, 0.3, 0.4, 0.3);
  RngStream rng(5, 0);
  const SupercriticalDraw d = supercritical_limit_sample(spec, 0.0, 1e-2, rng);
  EXPECT_GT(d.limit.v_y, 0.0);
  EXPECT_EQ(d.limit.v_matrix, supercritical_v_matrix(-0.5, -1.0, d.limit.v_y, d.limit.v_x));
  EXPECT_TRUE(d.value.allFinite());
  EXPECT_THROW(supercritical_limit(spec, 0.0, 1.0), NonPositiveVY);
  // b < gamma < 0 lies outside the theorem.
  spec.drift.gamma = -0.2;
  EXPECT_THROW(supercritical_limit_sample(spec, 0.0, 1e-2, rng), HypothesisViolation);
}

TEST(PsdSqrt, SquaresBackAndClips) {
  std::mt19937_64 gen(7);
  std::normal_distribution<double> n;
  Matrix5d a;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) a(i, j) = n(gen);
  }
  const Matrix5d m = a * a.transpose();
  const Matrix5d r = psd_sqrt(m);
  EXPECT_TRUE(r.isApprox(r.transpose(), 1e-14));
  EXPECT_LT((r * r - m).norm(), 1e-12 * m.norm());
  Matrix5d d = Matrix5d::Zero();
  d.diagonal() << 4.0, 1.0, 0.0, -1e-15, 9.0;
  const Matrix5d rd = psd_sqrt(d);
  EXPECT_NEAR(rd(0, 0), 2.0, 1e-15);
  EXPECT_EQ(rd(3, 3), 0.0);
  EXPECT_NEAR(rd(4, 4), 3.0, 1e-15);
}

TEST(CriticalLimit, DeterministicYGivesZeroFirstBlock) {
  // sigma1 = 0 makes the auxiliary Y equal a t, so Y_1 - a = 0 and the
  // second entry -Y_1^2/2 + a int Y vanishes in the continuum. With
  // left-point sums over N steps it is -a^2 dt / 2, solved in closed form.
  const double a = 1.5, dt = 1e-3;
  const double N = 1.0 / dt;
  const double int_y = a * dt * dt * N * (N - 1) / 2.0;
  const double int_y2 = a * a * dt * dt * dt * (N - 1) * N * (2 * N - 1) / 6.0;
  Eigen::Matrix2d gram;
  gram << 1.0, -int_y, -int_y, int_y2;
  const Eigen::Vector2d expected = gram.inverse() * Eigen::Vector2d(0.0, -a * a * dt / 2.0);
  RngStream rng(11, 0);
  const CriticalLimitDraw d = critical_limit_sample(a, 0.5, 0.0, 0.6, 0.4, 0.0, dt, rng);
  EXPECT_NEAR(d.value(0), expected(0), 1e-10);
  EXPECT_NEAR(d.value(1), expected(1), 1e-10);
  EXPECT_TRUE(d.value.allFinite());
}

TEST(CriticalLimit, ConventionChangesOnlyXBlock) {
  RngStream r1(12, 0), r2(12, 0);
  const Vector5d a = critical_limit_sample(1, 0.5, 0.5, 0.3, 0.4, 0.3, 1e-3, r1).value;
  const Vector5d b =
      critical_limit_sample(1, 0.5, 0.5, 0.3, 0.4, 0.3, 1e-3, r2, CriticalConvention::kWithSigma3Constant)
          .value;
  EXPECT_EQ(a.head<2>(), b.head<2>());
  EXPECT_NE(a.tail<3>(), b.tail<3>());
}

TEST(CriticalLimit, SecondComponentIsNonNormal) {
  const int n = 10000;
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) {
    RngStream rng(13, i);
    v[i] = critical_limit_sample(1, 0.5, 0.5, 0.3, 0.4, 0.3, 1e-3, rng).value(1);
  }
  double mean = 0.0;
  for (double x : v) mean += x / n;
  double m2 = 0.0, m4 = 0.0;
  for (double x : v) {
    const double c = (x - mean) * (x - mean);
    m2 += c / n;
    m4 += c * c / n;
  }
  ASSERT_TRUE(std::isfinite(mean));
  const double excess = m4 / (m2 * m2) - 3.0;
  // Standard error of the excess kurtosis of a normal sample.
  EXPECT_GT(std::abs(excess), 4.0 * std::sqrt(24.0 / n));
}

#pragma once

#include <cmath>

#include "affine2f/model.hpp"
#include "affine2f/moments.hpp"
#include "affine2f/rng.hpp"
#include "affine2f/simulator.hpp"
#include "affine2f/types.hpp"

namespace affine2f {

// Normal limit of sqrt(T)(theta_hat - theta) in the subcritical regime.
struct SubcriticalLimit {
  Matrix5d g_inf;        // E(G_inf), block diagonal 2x2 + 3x3
  Matrix5d g_tilde_inf;  // E(G~_inf), quadratic variation density of h
  Matrix5d asym_cov;     // E(G_inf)^{-1} E(G~_inf) E(G_inf)^{-1}
};

// E(G_inf) from stationary moments (table needs k_max >= 2, l_max >= 2).
Matrix5d expected_g_inf(const MomentTable& m);
// E(G~_inf) from stationary moments (table needs k_max >= 3, l_max >= 2).
Matrix5d expected_g_tilde_inf(const DiffusionParams& s, const MomentTable& m);

SubcriticalLimit subcritical_limit(const ModelSpec& spec);

// Supercritical scaling matrix V for gamma < b < 0.
template <typename Scalar>
Matrix5<Scalar> supercritical_v_matrix(Scalar b, Scalar gamma, Scalar vy, Scalar vx) {
  Matrix5<Scalar> v = Matrix5<Scalar>::Zero();
  v(0, 0) = Scalar(1);
  v(0, 1) = vy / b;
  v(1, 1) = -vy * vy / (Scalar(2) * b);
  v(2, 2) = Scalar(1);
  v(2, 3) = vy / b;
  v(2, 4) = vx / gamma;
  v(3, 3) = -vy * vy / (Scalar(2) * b);
  v(3, 4) = -vy * vx / (b + gamma);
  v(4, 3) = -vy * vx / (b + gamma);
  v(4, 4) = -vx * vx / (Scalar(2) * gamma);
  return v;
}

// Closed form det V = -(b - gamma)^2 V_Y^4 V_X^2 / (8 (b + gamma)^2 b^2 gamma).
template <typename Scalar>
Scalar supercritical_v_det(Scalar b, Scalar gamma, Scalar vy, Scalar vx) {
  const Scalar bg = b - gamma, sum = b + gamma;
  return -bg * bg * vy * vy * vy * vy * vx * vx / (Scalar(8) * sum * sum * b * b * gamma);
}

// Covariance matrix eta eta^T of the supercritical mixed-normal limit.
template <typename Scalar>
Matrix5<Scalar> supercritical_eta_sq(Scalar b, Scalar gamma, Scalar sigma1, Scalar sigma2,
                                     Scalar rho, Scalar vy, Scalar vx) {
  const Scalar s11 = sigma1 * sigma1;
  const Scalar s12 = rho * sigma1 * sigma2;
  const Scalar s22 = sigma2 * sigma2;
  const Scalar vy2 = vy * vy, vy3 = vy2 * vy;
  Matrix5<Scalar> e;
  e(0, 0) = -s11 * vy / b;
  e(0, 1) = s11 * vy2 / (Scalar(2) * b);
  e(0, 2) = -s12 * vy / b;
  e(0, 3) = s12 * vy2 / (Scalar(2) * b);
  e(0, 4) = s12 * vy * vx / (b + gamma);
  e(1, 1) = -s11 * vy3 / (Scalar(3) * b);
  e(1, 2) = s12 * vy2 / (Scalar(2) * b);
  e(1, 3) = -s12 * vy3 / (Scalar(3) * b);
  e(1, 4) = -s12 * vy2 * vx / (Scalar(2) * b + gamma);
  e(2, 2) = -s22 * vy / b;
  e(2, 3) = s22 * vy2 / (Scalar(2) * b);
  e(2, 4) = s22 * vy * vx / (b + gamma);
  e(3, 3) = -s22 * vy3 / (Scalar(3) * b);
  e(3, 4) = -s22 * vy2 * vx / (Scalar(2) * b + gamma);
  e(4, 4) = -s22 * vy * vx * vx / (b + Scalar(2) * gamma);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < i; ++j) e(i, j) = e(j, i);
  }
  return e;
}

// Symmetric square root of a PSD matrix; negative eigenvalues clipped to 0.
Matrix5d psd_sqrt(const Matrix5d& m);

// Scaling of theta_hat - theta in each regime at horizon T.
Vector5d regime_scaling(const DriftParams& drift, Regime regime, double T);

// Treatment of the constant sigma3^2/2 in the third X-block entry of the
// critical limit. It carries no power of T under the scaling, so it vanishes
// in the limit; kWithSigma3Constant keeps it for comparison.
enum class CriticalConvention { kScalingLimit, kWithSigma3Constant };

struct CriticalLimitDraw {
  Vector5d value = Vector5d::Zero();
  int redraws = 0;  // singular Gram draws rejected before this one
};

// Evaluates the critical limit functional on one auxiliary path; throws
// SingularGram if either Gram block is degenerate.
Vector5d critical_limit_functional(const PathGrid& aux, double a, double alpha, double sigma1,
                                   double sigma2, double sigma3, double rho,
                                   CriticalConvention convention);

CriticalLimitDraw critical_limit_sample(double a, double alpha, double sigma1, double sigma2,
                                        double sigma3, double rho, double dt, RngStream& rng,
                                        CriticalConvention convention =
                                            CriticalConvention::kScalingLimit);

struct SupercriticalLimit {
  double v_y = 0.0;
  double v_x = 0.0;
  Matrix5d v_matrix = Matrix5d::Zero();
  Matrix5d eta_sq = Matrix5d::Zero();
};

struct SupercriticalDraw {
  SupercriticalLimit limit;
  Vector5d value = Vector5d::Zero();
};

// Default probe horizon 30 / |b|.
double default_probe_horizon(const DriftParams& drift);

// Draw of V^{-1} eta xi with (V_Y, V_X) read off a simulated path at T_probe
// and xi standard normal, independent of the path.
SupercriticalDraw supercritical_limit_sample(const ModelSpec& spec, double T_probe, double dt,
                                             RngStream& rng);

SupercriticalLimit supercritical_limit(const ModelSpec& spec, double v_y, double v_x);

}  // namespace affine2f

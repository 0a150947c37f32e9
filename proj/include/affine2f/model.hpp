#pragma once

#include <string>
#include <vector>

#include "affine2f/types.hpp"

namespace affine2f {

// Drift constants theta = (a, b, alpha, beta, gamma) of
//   dY = (a - bY) dt + sigma1 sqrt(Y) dW
//   dX = (alpha - beta Y - gamma X) dt + sigma2 sqrt(Y) dW~ + sigma3 dL.
struct DriftParams {
  double a = 0.0;
  double b = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;

  Vector5d theta() const { return Vector5d(a, b, alpha, beta, gamma); }
  static DriftParams from_theta(const Vector5d& theta);
};

// Diffusion constants; W~ = rho W + sqrt(1 - rho^2) B.
struct DiffusionParams {
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  double sigma3 = 0.0;
  double rho = 0.0;

  // (1 - rho^2) sigma2^2 + sigma3^2 > 0: the X-block Gram matrix is a.s. invertible.
  bool second_block_ok() const;
};

enum class InitKind {
  kPoint,             // (y0, x0) deterministic
  kGammaY,            // Y0 ~ stationary gamma law, X0 = x0
  kBurnedInStationary // approximately stationary pair, see stationary_init
};

struct InitialLaw {
  InitKind kind = InitKind::kPoint;
  double y0 = 0.0;
  double x0 = 0.0;
  // Burn-in horizon for kBurnedInStationary; <= 0 selects 20 / min(b, gamma).
  double burn_in = 0.0;
};

struct ModelSpec {
  DriftParams drift;
  DiffusionParams diffusion;
  InitialLaw init;
};

enum class Regime { kSubcritical, kCritical, kSupercritical };

std::string to_string(Regime regime);
Regime regime_from_string(const std::string& name);
std::string to_string(InitKind kind);
InitKind init_kind_from_string(const std::string& name);

// Regime by the sign of min(b, gamma); exact comparison with zero.
Regime classify_regime(const DriftParams& drift);

// Throws ConfigError naming the offending field when a parameter lies
// outside its admissible domain (a >= 0, sigmas >= 0, |rho| <= 1, y0 >= 0).
void check_domain(const ModelSpec& spec);

enum class Purpose {
  kSimulation,
  kContinuousClse,
  kSubcriticalLimit,
  kCriticalLimit,
  kSupercriticalLimit,
  kDiffusionStats,
};

std::string to_string(Purpose purpose);

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> violations;  // hypotheses that fail (ok == false)
  std::vector<std::string> warnings;    // conditions that weaken guarantees
};

ValidationReport validate_spec(const ModelSpec& spec, Purpose purpose);

// E(Y_{s+dt} | Y_s = y_s) = e^{-b dt} y_s + a psi(b, dt).
double conditional_mean_y(const ModelSpec& spec, double y_s, double dt);

// E(X_{s+dt} | Y_s = y_s, X_s = x_s).
double conditional_mean_x(const ModelSpec& spec, double y_s, double x_s, double dt);

// Coefficients of the one-step conditional mean at step h = 1/n:
//   E(Y | .) = y + c - d y,   E(X | .) = x + delta - epsilon y - zeta x.
struct TransformedParams {
  double c = 0.0;
  double d = 0.0;
  double delta = 0.0;
  double epsilon = 0.0;
  double zeta = 0.0;

  Vector5d vector() const { return Vector5d(c, d, delta, epsilon, zeta); }
};

// Forward map g_n.
TransformedParams gn_forward(const DriftParams& drift, double n);

// Inverse map g_n^{-1}; throws OutOfDomain if d >= 1 or zeta >= 1.
DriftParams gn_backward(const TransformedParams& tp, double n);

}  // namespace affine2f

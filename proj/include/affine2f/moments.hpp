#pragma once

#include <Eigen/Dense>

#include "affine2f/model.hpp"

namespace affine2f {

// Mixed moments E(Y^k X^l) on the lattice k <= k_max, l <= l_max.
struct MomentTable {
  enum class Mode { kTransient, kStationary };

  Mode mode = Mode::kStationary;
  double t = 0.0;          // evaluation time for kTransient
  Eigen::MatrixXd values;  // (k_max + 1) x (l_max + 1)
  bool converged = true;   // transient: grid refinement met the tolerance

  int k_max() const { return static_cast<int>(values.rows()) - 1; }
  int l_max() const { return static_cast<int>(values.cols()) - 1; }
  // Moment with the convention that negative indices give 0.
  double operator()(int k, int l) const;
};

// Moments of the initial law, E(Y0^k X0^l), on the given lattice.
Eigen::MatrixXd initial_moments(const ModelSpec& spec, int k_max, int l_max);

// E(Y_t^k X_t^l) from the linear Volterra relations of the moment curves,
// integrated on a uniform grid with cubic interpolation and Richardson
// refinement. Throws ConfigError for t < 0.
MomentTable transient_moments(const ModelSpec& spec, double t, int k_max, int l_max,
                              double rel_tol = 1e-10);

// E(Y_inf^n X_inf^p) by the stationary recursion; subcritical specs only
// (HypothesisViolation otherwise).
MomentTable stationary_moments(const ModelSpec& spec, int n_max, int p_max);

// Residual of the stationary recursion at (n, p) evaluated on `table`.
// Requires n + 1 <= table.k_max() when p >= 1.
double stationary_recursion_residual(const ModelSpec& spec, const MomentTable& table, int n,
                                     int p);

// Stationary gamma law of Y: shape 2a/sigma1^2, rate 2b/sigma1^2.
struct GammaLaw {
  double shape = 0.0;
  double rate = 0.0;
};
GammaLaw stationary_y_law(const ModelSpec& spec);

// E exp(-lambda Y_t) given Y_0 = y0.
double laplace_y(const ModelSpec& spec, double t, double lambda, double y0);

// Leading-order growth of E(Y_t) and E(X_t) as t -> infinity.
enum class GrowthClass {
  kConstant,   // c
  kLinear,     // c t
  kQuadratic,  // c t^2
  kExpGamma,   // c e^{-gamma t}
  kExpB,       // c e^{-b t}
  kTExpB,      // c t e^{-b t}
};

struct GrowthDescriptor {
  GrowthClass y_class = GrowthClass::kConstant;
  double y_coef = 0.0;
  GrowthClass x_class = GrowthClass::kConstant;
  double x_coef = 0.0;
};

GrowthDescriptor mean_growth_check(const ModelSpec& spec);

// coef * g(t) for the growth class g.
double growth_leading_term(GrowthClass cls, double coef, const DriftParams& drift, double t);

}  // namespace affine2f

#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "affine2f/model.hpp"
#include "affine2f/rng.hpp"

namespace affine2f {

// Uniformly sampled trajectory (t0 + i dt, y_i, x_i).
struct PathGrid {
  double t0 = 0.0;
  double dt = 0.0;
  Eigen::VectorXd y;
  Eigen::VectorXd x;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  Eigen::Index size() const { return y.size(); }
  double horizon() const { return static_cast<double>(size() - 1) * dt; }
  double time(Eigen::Index i) const { return t0 + static_cast<double>(i) * dt; }
};

enum class Scheme {
  kExactYEulerX,  // exact CIR transitions for Y, Euler for X
  kFullEuler,     // full-truncation Euler for Y, Euler for X
};

std::string to_string(Scheme scheme);
Scheme scheme_from_string(const std::string& name);

// Below this level the Wiener increment is not reconstructed from the Y step.
inline constexpr double kYFloor = 1e-12;

// Number of grid points floor(T/dt) + 1, tolerant to representation error in T/dt.
Eigen::Index grid_points(double T, double dt);

// Exact draw from the law of Y_{s+dt} given Y_s = y_s (scaled noncentral chi-square).
double sample_cir_transition(double a, double b, double sigma1, double y_s, double dt,
                             RngStream& rng);

PathGrid simulate_path(const ModelSpec& spec, double T, double dt, Scheme scheme,
                       RngStream& rng);

// Auxiliary critical-regime process on [0, 1] started from (0, 0):
//   dYc = a dt + sigma1 sqrt(Yc) dW,  dXc = alpha dt + sigma2 sqrt(Yc) dW~.
PathGrid simulate_critical_limit_process(double a, double alpha, double sigma1, double sigma2,
                                         double rho, double dt, RngStream& rng);

// Approximately stationary starting pair: Y drawn exactly from its gamma
// stationary law, then (Y, X) evolved jointly for burn_in time units from
// X = E(X_inf). Exact transitions keep Y's marginal stationary throughout.
std::pair<double, double> stationary_init(const ModelSpec& spec, double burn_in, double dt,
                                          RngStream& rng);

// Default burn-in horizon 20 / min(b, gamma).
double default_burn_in(const DriftParams& drift);

}  // namespace affine2f

#pragma once

#include "affine2f/simulator.hpp"

namespace affine2f {

// Realized quadratic (co)variations and left-point time integrals of Y.
// The half horizon is the first floor(N/2) increments.
struct QuadraticVariations {
  double qv_y_T = 0.0;
  double qv_x_T = 0.0;
  double qv_x_halfT = 0.0;
  double qcov_yx_T = 0.0;
  double int_y_T = 0.0;
  double int_y_halfT = 0.0;
  double T = 0.0;
  double half_T = 0.0;
};

QuadraticVariations realized_qv(const PathGrid& path);

struct DiffusionEstimate {
  double sigma1_sq = 0.0;
  double sigma2_sq = 0.0;          // raw solve, may be slightly negative
  double sigma3_sq = 0.0;          // raw solve, may be slightly negative
  double sigma2_sq_floored = 0.0;  // max(sigma2_sq, 0)
  double sigma3_sq_floored = 0.0;  // max(sigma3_sq, 0)
  double rho = 0.0;                // clamped to [-1, 1]
  double rho_raw = 0.0;
  bool rho_clamped = false;
  double system_det = 0.0;         // determinant of the 2x2 system
  double system_scale = 0.0;       // |T int_y_halfT| + |halfT int_y_T|
};

// Throws InsufficientData for short paths, NumericalError if int Y = 0 and
// SingularSystem when the 2x2 system is degenerate.
DiffusionEstimate estimate_diffusion(const QuadraticVariations& qv);
DiffusionEstimate estimate_diffusion(const PathGrid& path);

}  // namespace affine2f

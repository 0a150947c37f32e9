#include "affine2f/diffusion_stats.hpp"

#include <algorithm>
#include <cmath>

#include "affine2f/errors.hpp"

namespace affine2f {

QuadraticVariations realized_qv(const PathGrid& path) {
  const Eigen::Index n = path.size();
  if (n < 3) {
    throw InsufficientData("quadratic variation statistics need at least 3 observations");
  }
  const Eigen::Index increments = n - 1;
  const Eigen::Index half = increments / 2;
  QuadraticVariations qv;
  for (Eigen::Index i = 1; i <= increments; ++i) {
    const double dy = path.y(i) - path.y(i - 1);
    const double dx = path.x(i) - path.x(i - 1);
    qv.qv_y_T += dy * dy;
    qv.qv_x_T += dx * dx;
    qv.qcov_yx_T += dy * dx;
    qv.int_y_T += path.y(i - 1);
    if (i == half) {
      qv.qv_x_halfT = qv.qv_x_T;
      qv.int_y_halfT = qv.int_y_T;
    }
  }
  qv.int_y_T *= path.dt;
  qv.int_y_halfT *= path.dt;
  qv.T = static_cast<double>(increments) * path.dt;
  qv.half_T = static_cast<double>(half) * path.dt;
  return qv;
}

DiffusionEstimate estimate_diffusion(const QuadraticVariations& qv) {
  if (!(qv.int_y_T > 0.0)) {
    throw NumericalError("time integral of Y vanishes; diffusion statistics undefined");
  }
  DiffusionEstimate est;
  est.sigma1_sq = qv.qv_y_T / qv.int_y_T;

  // [int_0^T Y, T; int_0^{T/2} Y, T/2] (sigma2^2, sigma3^2) = (<X>_T, <X>_{T/2}).
  est.system_det = qv.int_y_T * qv.half_T - qv.T * qv.int_y_halfT;
  est.system_scale = std::abs(qv.int_y_T * qv.half_T) + std::abs(qv.T * qv.int_y_halfT);
  if (!(std::abs(est.system_det) >= 1e-12 * est.system_scale) || est.system_scale == 0.0) {
    throw SingularSystem("quadratic-variation system is singular: int_0^{T/2} Y is proportional to int_0^T Y");
  }
  est.sigma2_sq = (qv.qv_x_T * qv.half_T - qv.T * qv.qv_x_halfT) / est.system_det;
  est.sigma3_sq = (qv.int_y_T * qv.qv_x_halfT - qv.int_y_halfT * qv.qv_x_T) / est.system_det;
  est.sigma2_sq_floored = std::max(est.sigma2_sq, 0.0);
  est.sigma3_sq_floored = std::max(est.sigma3_sq, 0.0);

  const double s1s2 = std::sqrt(est.sigma1_sq * est.sigma2_sq_floored);
  est.rho_raw = s1s2 > 0.0 ? qv.qcov_yx_T / (s1s2 * qv.int_y_T) : 0.0;
  est.rho = std::clamp(est.rho_raw, -1.0, 1.0);
  est.rho_clamped = est.rho != est.rho_raw;
  return est;
}

DiffusionEstimate estimate_diffusion(const PathGrid& path) {
  return estimate_diffusion(realized_qv(path));
}

}  // namespace affine2f

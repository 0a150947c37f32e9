#include "affine2f/limit_laws.hpp"

#include <algorithm>
#include <cmath>

#include "affine2f/errors.hpp"
#include "affine2f/estimators.hpp"

namespace affine2f {

Matrix5d expected_g_inf(const MomentTable& m) {
  const double ey = m(1, 0), ey2 = m(2, 0), ex = m(0, 1), eyx = m(1, 1), ex2 = m(0, 2);
  Matrix5d g = Matrix5d::Zero();
  g.topLeftCorner<2, 2>() << 1.0, -ey, -ey, ey2;
  g.bottomRightCorner<3, 3>() << 1.0, -ey, -ex, -ey, ey2, eyx, -ex, eyx, ex2;
  return g;
}

Matrix5d expected_g_tilde_inf(const DiffusionParams& s, const MomentTable& m) {
  const double ey = m(1, 0), ey2 = m(2, 0), ey3 = m(3, 0);
  const double ex = m(0, 1), eyx = m(1, 1), ex2 = m(0, 2), ey2x = m(2, 1), eyx2 = m(1, 2);
  const double s11 = s.sigma1 * s.sigma1;
  const double s12 = s.rho * s.sigma1 * s.sigma2;
  const double s22 = s.sigma2 * s.sigma2;
  const double s33 = s.sigma3 * s.sigma3;
  Matrix5d g;
  g(0, 0) = s11 * ey;
  g(0, 1) = -s11 * ey2;
  g(0, 2) = s12 * ey;
  g(0, 3) = -s12 * ey2;
  g(0, 4) = -s12 * eyx;
  g(1, 1) = s11 * ey3;
  g(1, 2) = -s12 * ey2;
  g(1, 3) = s12 * ey3;
  g(1, 4) = s12 * ey2x;
  g(2, 2) = s22 * ey + s33;
  g(2, 3) = -(s22 * ey2 + s33 * ey);
  g(2, 4) = -(s22 * eyx + s33 * ex);
  g(3, 3) = s22 * ey3 + s33 * ey2;
  g(3, 4) = s22 * ey2x + s33 * eyx;
  g(4, 4) = s22 * eyx2 + s33 * ex2;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < i; ++j) g(i, j) = g(j, i);
  }
  return g;
}

SubcriticalLimit subcritical_limit(const ModelSpec& spec) {
  const ValidationReport report = validate_spec(spec, Purpose::kSubcriticalLimit);
  if (!report.ok) {
    std::string message = "subcritical limit hypotheses violated:";
    for (const auto& v : report.violations) message += " " + v + ";";
    throw HypothesisViolation(message);
  }
  const MomentTable m = stationary_moments(spec, 3, 2);
  SubcriticalLimit out;
  out.g_inf = expected_g_inf(m);
  out.g_tilde_inf = expected_g_tilde_inf(spec.diffusion, m);
  // Block-diagonal inverse keeps the (a, b) block independent of the X block.
  Matrix5d inv = Matrix5d::Zero();
  inv.topLeftCorner<2, 2>() = out.g_inf.topLeftCorner<2, 2>().inverse();
  inv.bottomRightCorner<3, 3>() = out.g_inf.bottomRightCorner<3, 3>().inverse();
  out.asym_cov = inv * out.g_tilde_inf * inv;
  out.asym_cov = (0.5 * (out.asym_cov + out.asym_cov.transpose())).eval();
  return out;
}

Matrix5d psd_sqrt(const Matrix5d& m) {
  Eigen::SelfAdjointEigenSolver<Matrix5d> eig(m);
  const Vector5d roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * roots.asDiagonal() * eig.eigenvectors().transpose();
}

Vector5d regime_scaling(const DriftParams& drift, Regime regime, double T) {
  switch (regime) {
    case Regime::kSubcritical:
      return Vector5d::Constant(std::sqrt(T));
    case Regime::kCritical:
      return Vector5d(1.0, T, 1.0, T, T);
    case Regime::kSupercritical: {
      const double b = drift.b, g = drift.gamma;
      const double fast = T * std::exp(b * T / 2.0);
      const double slow = std::exp(-b * T / 2.0);
      return Vector5d(fast, slow, fast, slow, std::exp((b - 2.0 * g) * T / 2.0));
    }
  }
  return Vector5d::Ones();
}

Vector5d critical_limit_functional(const PathGrid& aux, double a, double alpha, double sigma1,
                                   double sigma2, double sigma3, double rho,
                                   CriticalConvention convention) {
  const PathIntegrals p = path_integrals(aux);
  const Eigen::Index last = aux.size() - 1;
  const double y1 = aux.y(last);
  const double x1 = aux.x(last);
  // int X dY by left-point sums (not part of PathIntegrals).
  double int_x_dy = 0.0;
  for (Eigen::Index i = 1; i <= last; ++i) int_x_dy += aux.x(i - 1) * (aux.y(i) - aux.y(i - 1));

  Matrix2<double> g1;
  g1 << p.T, -p.int_y, -p.int_y, p.int_y2;
  const Vector2<double> v1(y1 - a, -0.5 * y1 * y1 + (a + 0.5 * sigma1 * sigma1) * p.int_y);
  Matrix3<double> g2;
  g2 << p.T, -p.int_y, -p.int_x, -p.int_y, p.int_y2, p.int_xy, -p.int_x, p.int_xy, p.int_x2;
  double third = -0.5 * x1 * x1 + alpha * p.int_x + 0.5 * sigma2 * sigma2 * p.int_y;
  if (convention == CriticalConvention::kWithSigma3Constant) third += 0.5 * sigma3 * sigma3;
  const Vector3<double> v2(x1 - alpha,
                           -y1 * x1 + (alpha + rho * sigma1 * sigma2) * p.int_y + int_x_dy, third);

  double cond1 = 0.0, cond2 = 0.0;
  Vector5d out;
  out.head<2>() = solve_gram(g1, v1, cond1, "critical limit block 1");
  out.tail<3>() = solve_gram(g2, v2, cond2, "critical limit block 2");
  return out;
}

CriticalLimitDraw critical_limit_sample(double a, double alpha, double sigma1, double sigma2,
                                        double sigma3, double rho, double dt, RngStream& rng,
                                        CriticalConvention convention) {
  constexpr int kMaxRedraws = 1000;
  CriticalLimitDraw draw;
  for (;;) {
    const PathGrid aux = simulate_critical_limit_process(a, alpha, sigma1, sigma2, rho, dt, rng);
    try {
      draw.value = critical_limit_functional(aux, a, alpha, sigma1, sigma2, sigma3, rho, convention);
      return draw;
    } catch (const SingularGram&) {
      if (++draw.redraws > kMaxRedraws) throw;
    }
  }
}

double default_probe_horizon(const DriftParams& drift) { return 30.0 / std::abs(drift.b); }

SupercriticalLimit supercritical_limit(const ModelSpec& spec, double v_y, double v_x) {
  if (!(v_y > 0.0)) {
    throw NonPositiveVY("extracted V_Y is not positive; probe horizon too short or scheme artifact");
  }
  const DriftParams& d = spec.drift;
  const DiffusionParams& s = spec.diffusion;
  SupercriticalLimit out;
  out.v_y = v_y;
  out.v_x = v_x;
  out.v_matrix = supercritical_v_matrix(d.b, d.gamma, v_y, v_x);
  out.eta_sq = supercritical_eta_sq(d.b, d.gamma, s.sigma1, s.sigma2, s.rho, v_y, v_x);
  return out;
}

SupercriticalDraw supercritical_limit_sample(const ModelSpec& spec, double T_probe, double dt,
                                             RngStream& rng) {
  const ValidationReport report = validate_spec(spec, Purpose::kSupercriticalLimit);
  if (!report.ok) {
    std::string message = "supercritical limit hypotheses violated:";
    for (const auto& v : report.violations) message += " " + v + ";";
    throw HypothesisViolation(message);
  }
  if (!(T_probe > 0.0)) T_probe = default_probe_horizon(spec.drift);
  const PathGrid path = simulate_path(spec, T_probe, dt, Scheme::kExactYEulerX, rng);
  const double T = path.horizon();
  const Eigen::Index last = path.size() - 1;
  SupercriticalDraw draw;
  draw.limit = supercritical_limit(spec, std::exp(spec.drift.b * T) * path.y(last),
                                   std::exp(spec.drift.gamma * T) * path.x(last));
  Vector5d xi;
  for (int i = 0; i < 5; ++i) xi(i) = rng.normal(Substream::kB);
  const Vector5d eta_xi = psd_sqrt(draw.limit.eta_sq) * xi;
  draw.value = draw.limit.v_matrix.colPivHouseholderQr().solve(eta_xi);
  return draw;
}

}  // namespace affine2f

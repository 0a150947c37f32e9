#include "affine2f/estimators.hpp"

#include "affine2f/errors.hpp"

namespace affine2f {

namespace {

void require_points(Eigen::Index points, const char* what) {
  if (points < 3) {
    throw InsufficientData(std::string(what) + " needs at least 3 observations, got " +
                           std::to_string(points));
  }
}

}  // namespace

std::string to_string(EstimatorSource source) {
  switch (source) {
    case EstimatorSource::kDiscrete:
      return "discrete";
    case EstimatorSource::kApproximate:
      return "approximate";
    case EstimatorSource::kContinuous:
      return "continuous";
  }
  return "unknown";
}

PathIntegrals path_integrals(const PathGrid& path) {
  require_points(path.size(), "continuous CLSE");
  const Eigen::Index n = path.size();
  const double dt = path.dt;
  PathIntegrals out;
  out.T = path.horizon();
  for (Eigen::Index i = 1; i < n; ++i) {
    const double y = path.y(i - 1);
    const double x = path.x(i - 1);
    const double dy = path.y(i) - y;
    const double dx = path.x(i) - x;
    out.int_y += y;
    out.int_y2 += y * y;
    out.int_x += x;
    out.int_xy += x * y;
    out.int_x2 += x * x;
    out.int_y_dy += y * dy;
    out.int_y_dx += y * dx;
    out.int_x_dx += x * dx;
  }
  out.int_y *= dt;
  out.int_y2 *= dt;
  out.int_x *= dt;
  out.int_xy *= dt;
  out.int_x2 *= dt;
  out.y_increment = path.y(n - 1) - path.y(0);
  out.x_increment = path.x(n - 1) - path.x(0);
  return out;
}

namespace {

// Sums over the subsampled grid i * stride, i = 0..m, left-point convention.
struct DiscreteSums {
  Eigen::Index m = 0;
  double sy = 0.0, sy2 = 0.0, sx = 0.0, sxy = 0.0, sx2 = 0.0;
  double sdy_y = 0.0, sdx_y = 0.0, sdx_x = 0.0;
  double dy_total = 0.0, dx_total = 0.0;
};

DiscreteSums discrete_sums(const PathGrid& path, int stride) {
  if (stride < 1) throw ConfigError("stride: must be >= 1");
  DiscreteSums s;
  s.m = (path.size() - 1) / stride;
  require_points(s.m + 1, "discrete CLSE");
  for (Eigen::Index i = 1; i <= s.m; ++i) {
    const double y = path.y((i - 1) * stride);
    const double x = path.x((i - 1) * stride);
    const double dy = path.y(i * stride) - y;
    const double dx = path.x(i * stride) - x;
    s.sy += y;
    s.sy2 += y * y;
    s.sx += x;
    s.sxy += x * y;
    s.sx2 += x * x;
    s.sdy_y += dy * y;
    s.sdx_y += dx * y;
    s.sdx_x += dx * x;
  }
  s.dy_total = path.y(s.m * stride) - path.y(0);
  s.dx_total = path.x(s.m * stride) - path.x(0);
  return s;
}

}  // namespace

Vector2<double> clse_discrete_y_block(const PathGrid& path, int stride, double* condition) {
  const DiscreteSums s = discrete_sums(path, stride);
  Matrix2<double> gram1;
  gram1 << static_cast<double>(s.m), -s.sy, -s.sy, s.sy2;
  double cond = 0.0;
  const Vector2<double> cd = solve_gram(gram1, Vector2<double>(s.dy_total, -s.sdy_y), cond, "Gamma(1)");
  if (condition) *condition = cond;
  return cd;
}

TransformedEstimate clse_discrete_transformed(const PathGrid& path, int stride) {
  const DiscreteSums s = discrete_sums(path, stride);
  const double count = static_cast<double>(s.m);

  TransformedEstimate te;
  te.n = 1.0 / (stride * path.dt);
  te.gram1 << count, -s.sy, -s.sy, s.sy2;
  te.gram2 << count, -s.sy, -s.sx, -s.sy, s.sy2, s.sxy, -s.sx, s.sxy, s.sx2;
  const Vector2<double> phi1(s.dy_total, -s.sdy_y);
  const Vector3<double> phi2(s.dx_total, -s.sdx_y, -s.sdx_x);

  const Vector2<double> cd = solve_gram(te.gram1, phi1, te.cond1, "Gamma(1)");
  const Vector3<double> dez = solve_gram(te.gram2, phi2, te.cond2, "Gamma(2)");
  te.params = TransformedParams{cd(0), cd(1), dez(0), dez(1), dez(2)};
  return te;
}

DriftEstimate gn_inverse(const TransformedEstimate& te) {
  DriftEstimate est;
  est.theta_hat = gn_backward(te.params, te.n).theta();
  est.source = EstimatorSource::kDiscrete;
  est.n = te.n;
  est.gram1 = te.gram1;
  est.gram2 = te.gram2;
  est.cond1 = te.cond1;
  est.cond2 = te.cond2;
  return est;
}

DriftEstimate clse_approx(const TransformedEstimate& te) {
  DriftEstimate est;
  est.theta_hat = te.n * te.params.vector();
  est.source = EstimatorSource::kApproximate;
  est.n = te.n;
  est.gram1 = te.gram1;
  est.gram2 = te.gram2;
  est.cond1 = te.cond1;
  est.cond2 = te.cond2;
  return est;
}

Matrix5d ContinuousSystem::gram() const {
  Matrix5d g = Matrix5d::Zero();
  g.topLeftCorner<2, 2>() = g1;
  g.bottomRightCorner<3, 3>() = g2;
  return g;
}

Vector5d ContinuousSystem::rhs() const {
  Vector5d f;
  f << f1, f2;
  return f;
}

ContinuousSystem continuous_system(const PathIntegrals& p) {
  ContinuousSystem sys;
  sys.g1 << p.T, -p.int_y, -p.int_y, p.int_y2;
  sys.f1 << p.y_increment, -p.int_y_dy;
  sys.g2 << p.T, -p.int_y, -p.int_x, -p.int_y, p.int_y2, p.int_xy, -p.int_x, p.int_xy, p.int_x2;
  sys.f2 << p.x_increment, -p.int_y_dx, -p.int_x_dx;
  return sys;
}

DriftEstimate clse_continuous(const PathGrid& path) {
  const ContinuousSystem sys = continuous_system(path_integrals(path));
  DriftEstimate est;
  est.source = EstimatorSource::kContinuous;
  est.gram1 = sys.g1;
  est.gram2 = sys.g2;
  est.theta_hat.head<2>() = solve_gram(sys.g1, sys.f1, est.cond1, "G(1)");
  est.theta_hat.tail<3>() = solve_gram(sys.g2, sys.f2, est.cond2, "G(2)");
  return est;
}

Vector5d h_vector(const PathGrid& path, const DriftParams& true_theta,
                  const DiffusionParams& /*diffusion*/) {
  const ContinuousSystem sys = continuous_system(path_integrals(path));
  return sys.rhs() - sys.gram() * true_theta.theta();
}

}  // namespace affine2f

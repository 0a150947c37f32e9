#include "affine2f/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "affine2f/errors.hpp"
#include "affine2f/expint.hpp"

namespace affine2f {

namespace {

// Scaled noncentral chi-square: scale * chi'^2(df, lambda).
//
// For df >= 1 the draw is (Z + sqrt(lambda))^2 + chi^2(df - 1), which needs
// one normal and one gamma variate and stays exact for huge noncentralities
// (exploding Y). Below df = 1 the Poisson mixture of gammas is used.
double noncentral_chi_square(double df, double lambda, RngStream& rng) {
  if (df >= 1.0) {
    const double z = rng.normal(Substream::kW) + std::sqrt(lambda);
    const double rest = df > 1.0 ? 2.0 * rng.gamma(Substream::kW, 0.5 * (df - 1.0)) : 0.0;
    return z * z + rest;
  }
  const double shape = 0.5 * df + static_cast<double>(rng.poisson(Substream::kW, 0.5 * lambda));
  if (shape <= 0.0) return 0.0;
  return 2.0 * rng.gamma(Substream::kW, shape);
}

// One-step propagator for (Y, X) on a fixed dt.
class Stepper {
 public:
  Stepper(const ModelSpec& spec, double dt, Scheme scheme)
      : d_(spec.drift), s_(spec.diffusion), dt_(dt), sqrt_dt_(std::sqrt(dt)), scheme_(scheme) {
    decay_ = std::exp(-d_.b * dt);
    level_ = d_.a * psi(d_.b, dt);
    scale_ = s_.sigma1 * s_.sigma1 * psi(d_.b, dt) / 4.0;
    df_ = s_.sigma1 > 0.0 ? 4.0 * d_.a / (s_.sigma1 * s_.sigma1) : 0.0;
    rho_bar_ = std::sqrt(std::max(0.0, 1.0 - s_.rho * s_.rho));
  }

  // Advances the internal state; `y_internal` may be negative under full
  // truncation, the emitted value is max(y_internal, 0).
  void step(double& y_internal, double& x, RngStream& rng) const {
    const double y = std::max(y_internal, 0.0);
    const double sqrt_y = std::sqrt(y);
    double sqrt_y_dw = 0.0;  // sqrt(Y) * dW
    double y_next = 0.0;
    if (scheme_ == Scheme::kExactYEulerX) {
      if (s_.sigma1 > 0.0) {
        y_next = scale_ * noncentral_chi_square(df_, decay_ * y / scale_, rng);
      } else {
        y_next = decay_ * y + level_;
      }
      if (s_.sigma1 > 0.0 && y >= kYFloor) {
        sqrt_y_dw = (y_next - y - (d_.a - d_.b * y) * dt_) / s_.sigma1;
      } else {
        sqrt_y_dw = sqrt_y * sqrt_dt_ * rng.normal(Substream::kW);
      }
    } else {
      const double dw = sqrt_dt_ * rng.normal(Substream::kW);
      sqrt_y_dw = sqrt_y * dw;
      y_next = y_internal + (d_.a - d_.b * y) * dt_ + s_.sigma1 * sqrt_y_dw;
    }
    const double db = sqrt_dt_ * rng.normal(Substream::kB);
    const double dl = sqrt_dt_ * rng.normal(Substream::kL);
    x += (d_.alpha - d_.beta * y - d_.gamma * x) * dt_ +
         s_.sigma2 * (s_.rho * sqrt_y_dw + rho_bar_ * sqrt_y * db) + s_.sigma3 * dl;
    y_internal = y_next;
  }

 private:
  DriftParams d_;
  DiffusionParams s_;
  double dt_;
  double sqrt_dt_;
  Scheme scheme_;
  double decay_ = 0.0;
  double level_ = 0.0;
  double scale_ = 0.0;
  double df_ = 0.0;
  double rho_bar_ = 0.0;
};

void check_step(double T, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt: must be > 0");
  if (!(T >= dt) || !std::isfinite(T)) throw ConfigError("T: must be >= dt");
}

double stationary_gamma_draw(const ModelSpec& spec, RngStream& rng) {
  const double s2 = spec.diffusion.sigma1 * spec.diffusion.sigma1;
  if (!(spec.drift.b > 0.0 && spec.drift.a > 0.0 && s2 > 0.0)) {
    throw HypothesisViolation("stationary gamma law requires a>0, b>0 and sigma1>0");
  }
  return rng.gamma(Substream::kW, 2.0 * spec.drift.a / s2) * s2 / (2.0 * spec.drift.b);
}

}  // namespace

std::string to_string(Scheme scheme) {
  return scheme == Scheme::kExactYEulerX ? "exact_y_euler_x" : "full_euler";
}

Scheme scheme_from_string(const std::string& name) {
  if (name == "exact_y_euler_x") return Scheme::kExactYEulerX;
  if (name == "full_euler") return Scheme::kFullEuler;
  throw ConfigError("scheme: unknown value '" + name + "'");
}

Eigen::Index grid_points(double T, double dt) {
  return static_cast<Eigen::Index>(std::floor(T / dt * (1.0 + 1e-12))) + 1;
}

double default_burn_in(const DriftParams& drift) {
  return 20.0 / std::min(drift.b, drift.gamma);
}

double sample_cir_transition(double a, double b, double sigma1, double y_s, double dt,
                             RngStream& rng) {
  if (!(sigma1 > 0.0)) {
    throw ConfigError("sigma1: exact CIR transition requires sigma1 > 0");
  }
  if (!(dt > 0.0)) throw ConfigError("dt: must be > 0");
  if (!(y_s >= 0.0)) throw ConfigError("y_s: must be >= 0");
  const double scale = sigma1 * sigma1 * psi(b, dt) / 4.0;
  const double df = 4.0 * a / (sigma1 * sigma1);
  return scale * noncentral_chi_square(df, std::exp(-b * dt) * y_s / scale, rng);
}

std::pair<double, double> stationary_init(const ModelSpec& spec, double burn_in, double dt,
                                          RngStream& rng) {
  const DriftParams& d = spec.drift;
  if (classify_regime(d) != Regime::kSubcritical) {
    throw HypothesisViolation("stationary initialization requires min(b,gamma)>0");
  }
  if (!(spec.diffusion.sigma1 > 0.0)) {
    throw HypothesisViolation("stationary initialization requires sigma1>0");
  }
  if (!(dt > 0.0)) throw ConfigError("dt: must be > 0");
  if (!(burn_in > 0.0)) burn_in = default_burn_in(d);
  double y = stationary_gamma_draw(spec, rng);
  double x = (d.b * d.alpha - d.a * d.beta) / (d.b * d.gamma);
  const Stepper stepper(spec, dt, Scheme::kExactYEulerX);
  const Eigen::Index steps = grid_points(burn_in, dt) - 1;
  for (Eigen::Index i = 0; i < steps; ++i) stepper.step(y, x, rng);
  return {y, x};
}

PathGrid simulate_path(const ModelSpec& spec, double T, double dt, Scheme scheme,
                       RngStream& rng) {
  check_step(T, dt);
  check_domain(spec);

  double y = spec.init.y0;
  double x = spec.init.x0;
  switch (spec.init.kind) {
    case InitKind::kPoint:
      break;
    case InitKind::kGammaY:
      if (classify_regime(spec.drift) != Regime::kSubcritical || !(spec.diffusion.sigma1 > 0.0)) {
        throw HypothesisViolation("gamma_y initialization requires b>0, gamma>0 and sigma1>0");
      }
      y = stationary_gamma_draw(spec, rng);
      break;
    case InitKind::kBurnedInStationary:
      std::tie(y, x) = stationary_init(spec, spec.init.burn_in, dt, rng);
      break;
  }

  const Eigen::Index n = grid_points(T, dt);
  PathGrid path;
  path.dt = dt;
  path.seed = rng.seed();
  path.stream_id = rng.stream_id();
  path.y.resize(n);
  path.x.resize(n);
  path.y(0) = y;
  path.x(0) = x;
  const Stepper stepper(spec, dt, scheme);
  for (Eigen::Index i = 1; i < n; ++i) {
    stepper.step(y, x, rng);
    path.y(i) = std::max(y, 0.0);
    path.x(i) = x;
  }
  return path;
}

PathGrid simulate_critical_limit_process(double a, double alpha, double sigma1, double sigma2,
                                         double rho, double dt, RngStream& rng) {
  ModelSpec spec;
  spec.drift = DriftParams{a, 0.0, alpha, 0.0, 0.0};
  spec.diffusion = DiffusionParams{sigma1, sigma2, 0.0, rho};
  spec.init = InitialLaw{InitKind::kPoint, 0.0, 0.0, 0.0};
  return simulate_path(spec, 1.0, dt, Scheme::kExactYEulerX, rng);
}

}  // namespace affine2f

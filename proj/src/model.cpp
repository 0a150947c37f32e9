#include "affine2f/model.hpp"

#include <algorithm>
#include <cmath>

#include "affine2f/errors.hpp"
#include "affine2f/expint.hpp"

namespace affine2f {

DriftParams DriftParams::from_theta(const Vector5d& theta) {
  return DriftParams{theta(0), theta(1), theta(2), theta(3), theta(4)};
}

bool DiffusionParams::second_block_ok() const {
  return (1.0 - rho * rho) * sigma2 * sigma2 + sigma3 * sigma3 > 0.0;
}

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::kSubcritical:
      return "subcritical";
    case Regime::kCritical:
      return "critical";
    case Regime::kSupercritical:
      return "supercritical";
  }
  return "unknown";
}

Regime regime_from_string(const std::string& name) {
  if (name == "subcritical") return Regime::kSubcritical;
  if (name == "critical") return Regime::kCritical;
  if (name == "supercritical") return Regime::kSupercritical;
  throw ConfigError("regime: unknown value '" + name + "'");
}

std::string to_string(InitKind kind) {
  switch (kind) {
    case InitKind::kPoint:
      return "point";
    case InitKind::kGammaY:
      return "gamma_y";
    case InitKind::kBurnedInStationary:
      return "stationary";
  }
  return "unknown";
}

InitKind init_kind_from_string(const std::string& name) {
  if (name == "point") return InitKind::kPoint;
  if (name == "gamma_y") return InitKind::kGammaY;
  if (name == "stationary") return InitKind::kBurnedInStationary;
  throw ConfigError("init.kind: unknown value '" + name + "'");
}

std::string to_string(Purpose purpose) {
  switch (purpose) {
    case Purpose::kSimulation:
      return "simulation";
    case Purpose::kContinuousClse:
      return "continuous-clse";
    case Purpose::kSubcriticalLimit:
      return "subcritical-limit";
    case Purpose::kCriticalLimit:
      return "critical-limit";
    case Purpose::kSupercriticalLimit:
      return "supercritical-limit";
    case Purpose::kDiffusionStats:
      return "diffusion-stats";
  }
  return "unknown";
}

Regime classify_regime(const DriftParams& drift) {
  const double m = std::min(drift.b, drift.gamma);
  if (m > 0.0) return Regime::kSubcritical;
  if (m < 0.0) return Regime::kSupercritical;
  return Regime::kCritical;
}

void check_domain(const ModelSpec& spec) {
  const auto require = [](bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
  };
  const auto finite = [](double v) { return std::isfinite(v); };
  const DriftParams& d = spec.drift;
  const DiffusionParams& s = spec.diffusion;
  require(finite(d.a) && d.a >= 0.0, "a: must be a finite value >= 0");
  require(finite(d.b), "b: must be finite");
  require(finite(d.alpha), "alpha: must be finite");
  require(finite(d.beta), "beta: must be finite");
  require(finite(d.gamma), "gamma: must be finite");
  require(finite(s.sigma1) && s.sigma1 >= 0.0, "sigma1: must be a finite value >= 0");
  require(finite(s.sigma2) && s.sigma2 >= 0.0, "sigma2: must be a finite value >= 0");
  require(finite(s.sigma3) && s.sigma3 >= 0.0, "sigma3: must be a finite value >= 0");
  require(finite(s.rho) && s.rho >= -1.0 && s.rho <= 1.0, "rho: must lie in [-1, 1]");
  require(finite(spec.init.y0) && spec.init.y0 >= 0.0, "init.y0: must be a finite value >= 0");
  require(finite(spec.init.x0), "init.x0: must be finite");
  require(finite(spec.init.burn_in) && spec.init.burn_in >= 0.0,
          "init.burn_in: must be a finite value >= 0");
}

ValidationReport validate_spec(const ModelSpec& spec, Purpose purpose) {
  ValidationReport report;
  const auto fail = [&report](const std::string& message) {
    report.ok = false;
    report.violations.push_back(message);
  };
  const DriftParams& d = spec.drift;
  const DiffusionParams& s = spec.diffusion;

  try {
    check_domain(spec);
  } catch (const ConfigError& e) {
    fail(e.what());
  }

  const bool sigma1_ok = s.sigma1 > 0.0;
  const bool block2_ok = s.second_block_ok();
  switch (purpose) {
    case Purpose::kSimulation:
      if (spec.init.kind == InitKind::kGammaY) {
        if (!(d.b > 0.0)) fail("b>0 required for gamma_y initialization");
        if (!(d.a > 0.0)) fail("a>0 required for gamma_y initialization");
        if (!sigma1_ok) fail("sigma1>0 required for gamma_y initialization");
      } else if (spec.init.kind == InitKind::kBurnedInStationary) {
        if (classify_regime(d) != Regime::kSubcritical) {
          fail("min(b,gamma)>0 required for stationary initialization");
        }
        if (!(d.a > 0.0)) fail("a>0 required for stationary initialization");
        if (!sigma1_ok) fail("sigma1>0 required for stationary initialization");
      }
      break;
    case Purpose::kContinuousClse:
      if (!sigma1_ok) fail("sigma1>0 violated");
      if (!block2_ok) fail("(1-rho^2)sigma2^2+sigma3^2>0 violated");
      break;
    case Purpose::kSubcriticalLimit:
      if (classify_regime(d) != Regime::kSubcritical) fail("min(b,gamma)>0 violated");
      if (!sigma1_ok) fail("sigma1>0 violated");
      if (!block2_ok) fail("(1-rho^2)sigma2^2+sigma3^2>0 violated");
      break;
    case Purpose::kCriticalLimit:
      if (d.b != 0.0) fail("b=0 required");
      if (d.beta != 0.0) fail("beta=0 required");
      if (d.gamma != 0.0) fail("gamma=0 required");
      break;
    case Purpose::kSupercriticalLimit: {
      if (!(d.gamma < d.b && d.b < 0.0)) fail("gamma<b<0 violated");
      if (!(d.alpha * d.beta <= 0.0)) fail("alpha*beta<=0 violated");
      const double feller_part =
          (d.a - s.sigma1 * s.sigma1 / 2.0) * (1.0 - s.rho * s.rho) * s.sigma2 * s.sigma2;
      if (!(s.sigma3 > 0.0 || feller_part > 0.0)) {
        fail("sigma3>0 or (a-sigma1^2/2)(1-rho^2)sigma2^2>0 violated");
      }
      break;
    }
    case Purpose::kDiffusionStats:
      if (!(d.a > s.sigma1 * s.sigma1)) {
        report.warnings.push_back("a>sigma1^2 does not hold; invertibility of the 2x2 system is not guaranteed");
      }
      if (!sigma1_ok) report.warnings.push_back("sigma1=0: rho is not identifiable");
      break;
  }
  return report;
}

double conditional_mean_y(const ModelSpec& spec, double y_s, double dt) {
  const DriftParams& d = spec.drift;
  return std::exp(-d.b * dt) * y_s + d.a * psi(d.b, dt);
}

double conditional_mean_x(const ModelSpec& spec, double y_s, double x_s, double dt) {
  const DriftParams& d = spec.drift;
  return std::exp(-d.gamma * dt) * x_s + d.alpha * psi(d.gamma, dt) -
         d.beta * y_s * coupling_integral(d.b, d.gamma, dt) -
         d.a * d.beta * nested_integral(d.b, d.gamma, dt);
}

TransformedParams gn_forward(const DriftParams& drift, double n) {
  const double h = 1.0 / n;
  TransformedParams tp;
  tp.c = drift.a * psi(drift.b, h);
  tp.d = -std::expm1(-drift.b * h);
  tp.delta = drift.alpha * psi(drift.gamma, h) -
             drift.a * drift.beta * nested_integral(drift.b, drift.gamma, h);
  tp.epsilon = drift.beta * coupling_integral(drift.b, drift.gamma, h);
  tp.zeta = -std::expm1(-drift.gamma * h);
  return tp;
}

DriftParams gn_backward(const TransformedParams& tp, double n) {
  if (!(tp.d < 1.0)) throw OutOfDomain("transformed estimate d >= 1; inverse map undefined");
  if (!(tp.zeta < 1.0)) throw OutOfDomain("transformed estimate zeta >= 1; inverse map undefined");
  const double h = 1.0 / n;
  DriftParams drift;
  drift.b = -n * std::log1p(-tp.d);
  drift.a = tp.c / psi(drift.b, h);
  drift.gamma = -n * std::log1p(-tp.zeta);
  drift.beta = tp.epsilon / coupling_integral(drift.b, drift.gamma, h);
  drift.alpha = (tp.delta + drift.a * drift.beta * nested_integral(drift.b, drift.gamma, h)) /
                psi(drift.gamma, h);
  return drift;
}

}  // namespace affine2f

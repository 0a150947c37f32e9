#include "affine2f/moments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "affine2f/errors.hpp"
#include "affine2f/expint.hpp"

namespace affine2f {

namespace {

// Gauss-Legendre rule with 8 nodes, mapped to [0, 1].
constexpr std::array<double, 4> kGlX{0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                                     0.9602898564975363};
constexpr std::array<double, 4> kGlW{0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                     0.1012285362903763};

// Cubic Lagrange basis on nodes {0, 1, 2, 3} evaluated at position p.
double lagrange(int q, double p) {
  double v = 1.0;
  for (int r = 0; r < 4; ++r) {
    if (r != q) v *= (p - r) / static_cast<double>(q - r);
  }
  return v;
}

// Triangular lattice l <= L, k <= K + L - l: every moment the recursion
// needs to reach the (K, L) box.
class Lattice {
 public:
  Lattice(int k_max, int l_max) : k_max_(k_max), l_max_(l_max) {
    offsets_.resize(l_max + 2, 0);
    for (int l = 0; l <= l_max; ++l) offsets_[l + 1] = offsets_[l] + k_limit(l) + 1;
  }
  int k_limit(int l) const { return k_max_ + l_max_ - l; }
  int size() const { return offsets_.back(); }
  bool contains(int k, int l) const {
    return k >= 0 && l >= 0 && l <= l_max_ && k <= k_limit(l);
  }
  int index(int k, int l) const { return offsets_[l] + k; }

 private:
  int k_max_;
  int l_max_;
  std::vector<int> offsets_;
};

// Coefficients of the lower-order moments in d/dt E(Y^k X^l):
//   -(k b + l gamma) M(k,l) + cy M(k-1,l) + cx M(k,l-1) + cyx M(k+1,l-1)
//   + cyxx M(k+1,l-2) + cxx M(k,l-2).
struct RecursionCoefficients {
  double rate;
  double cy;
  double cx;
  double cyx;
  double cyxx;
  double cxx;
};

RecursionCoefficients coefficients(const ModelSpec& spec, int k, int l) {
  const DriftParams& d = spec.drift;
  const DiffusionParams& s = spec.diffusion;
  const double kk = k, ll = l;
  return RecursionCoefficients{
      kk * d.b + ll * d.gamma,
      kk * d.a + 0.5 * kk * (kk - 1.0) * s.sigma1 * s.sigma1,
      ll * (d.alpha + kk * s.rho * s.sigma1 * s.sigma2),
      -ll * d.beta,
      0.5 * ll * (ll - 1.0) * s.sigma2 * s.sigma2,
      0.5 * ll * (ll - 1.0) * s.sigma3 * s.sigma3,
  };
}

// Moment curves on the uniform grid t_j = j t / n; returns the full lattice at t.
Eigen::MatrixXd solve_on_grid(const ModelSpec& spec, double t, int k_max, int l_max, int n,
                              const Eigen::MatrixXd& init) {
  const Lattice lattice(k_max, l_max);
  const double h = t / n;
  std::vector<Eigen::VectorXd> curves(lattice.size());
  Eigen::MatrixXd result = Eigen::MatrixXd::Zero(k_max + l_max + 1, l_max + 1);

  for (int l = 0; l <= l_max; ++l) {
    for (int k = 0; k <= lattice.k_limit(l); ++k) {
      const RecursionCoefficients c = coefficients(spec, k, l);
      Eigen::VectorXd f = Eigen::VectorXd::Zero(n + 1);
      const auto add = [&](double coef, int kk, int lk) {
        if (coef != 0.0 && lattice.contains(kk, lk)) f += coef * curves[lattice.index(kk, lk)];
      };
      add(c.cy, k - 1, l);
      add(c.cx, k, l - 1);
      add(c.cyx, k + 1, l - 1);
      add(c.cyxx, k + 1, l - 2);
      add(c.cxx, k, l - 2);

      // Weights of the exponentially weighted cubic interpolant over one step,
      // for the three stencil positions (left edge, interior, right edge).
      double w[3][4] = {};
      for (int off = 0; off < 3; ++off) {
        for (int g = 0; g < 8; ++g) {
          const double s = g < 4 ? 0.5 * (1.0 - kGlX[3 - g]) : 0.5 * (1.0 + kGlX[g - 4]);
          const double wg = 0.5 * (g < 4 ? kGlW[3 - g] : kGlW[g - 4]);
          const double kernel = h * wg * std::exp(-c.rate * h * (1.0 - s));
          for (int q = 0; q < 4; ++q) w[off][q] += kernel * lagrange(q, off + s);
        }
      }
      const double decay = std::exp(-c.rate * h);

      Eigen::VectorXd m(n + 1);
      m(0) = init(k, l);
      for (int j = 0; j < n; ++j) {
        const int j0 = std::clamp(j - 1, 0, n - 3);
        const int off = j - j0;
        m(j + 1) = decay * m(j) + w[off][0] * f(j0) + w[off][1] * f(j0 + 1) +
                   w[off][2] * f(j0 + 2) + w[off][3] * f(j0 + 3);
      }
      result(k, l) = m(n);
      curves[lattice.index(k, l)] = std::move(m);
    }
  }
  return result;
}

double gamma_moment(const GammaLaw& law, int k) {
  double v = 1.0;
  for (int j = 0; j < k; ++j) v *= (law.shape + j) / law.rate;
  return v;
}

}  // namespace

double MomentTable::operator()(int k, int l) const {
  if (k < 0 || l < 0) return 0.0;
  return values(k, l);
}

GammaLaw stationary_y_law(const ModelSpec& spec) {
  const double s2 = spec.diffusion.sigma1 * spec.diffusion.sigma1;
  return GammaLaw{2.0 * spec.drift.a / s2, 2.0 * spec.drift.b / s2};
}

Eigen::MatrixXd initial_moments(const ModelSpec& spec, int k_max, int l_max) {
  Eigen::MatrixXd m(k_max + 1, l_max + 1);
  switch (spec.init.kind) {
    case InitKind::kPoint:
      for (int k = 0; k <= k_max; ++k) {
        for (int l = 0; l <= l_max; ++l) {
          m(k, l) = std::pow(spec.init.y0, k) * std::pow(spec.init.x0, l);
        }
      }
      break;
    case InitKind::kGammaY: {
      if (classify_regime(spec.drift) != Regime::kSubcritical || !(spec.diffusion.sigma1 > 0.0)) {
        throw HypothesisViolation("gamma_y initialization requires b>0, gamma>0 and sigma1>0");
      }
      const GammaLaw law = stationary_y_law(spec);
      for (int k = 0; k <= k_max; ++k) {
        for (int l = 0; l <= l_max; ++l) {
          m(k, l) = gamma_moment(law, k) * std::pow(spec.init.x0, l);
        }
      }
      break;
    }
    case InitKind::kBurnedInStationary:
      m = stationary_moments(spec, k_max, l_max).values;
      break;
  }
  return m;
}

MomentTable transient_moments(const ModelSpec& spec, double t, int k_max, int l_max,
                              double rel_tol) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError("t: must be a finite value >= 0");
  if (k_max < 0 || l_max < 0) throw ConfigError("moment orders must be >= 0");

  MomentTable table;
  table.mode = MomentTable::Mode::kTransient;
  table.t = t;
  const Eigen::MatrixXd init = initial_moments(spec, k_max + l_max, l_max);
  if (t == 0.0) {
    table.values = init.topLeftCorner(k_max + 1, l_max + 1);
    return table;
  }

  double max_rate = 1.0;
  for (int l = 0; l <= l_max; ++l) {
    for (int k = 0; k <= k_max + l_max - l; ++k) {
      max_rate = std::max(max_rate, std::abs(coefficients(spec, k, l).rate));
    }
  }
  constexpr int kMaxNodes = 1 << 19;
  int n = static_cast<int>(std::min<double>(kMaxNodes / 2, std::max(64.0, std::ceil(8.0 * t * max_rate))));
  Eigen::MatrixXd coarse = solve_on_grid(spec, t, k_max, l_max, n, init);
  Eigen::MatrixXd fine = coarse;
  bool converged = false;
  while (n < kMaxNodes) {
    n *= 2;
    fine = solve_on_grid(spec, t, k_max, l_max, n, init);
    converged = true;
    for (int l = 0; l <= l_max && converged; ++l) {
      for (int k = 0; k <= k_max; ++k) {
        double degree_scale = 0.0;
        for (int j = 0; j <= k + l; ++j) {
          if (j <= k_max + l_max && k + l - j <= l_max) {
            degree_scale = std::max(degree_scale, std::abs(fine(j, k + l - j)));
          }
        }
        const double scale = std::max({std::abs(fine(k, l)), 1e-6 * degree_scale, 1e-300});
        if (std::abs(fine(k, l) - coarse(k, l)) > rel_tol * scale) {
          converged = false;
          break;
        }
      }
    }
    if (converged) break;
    coarse = fine;
  }
  // Fourth-order local error: Richardson extrapolation of the last pair.
  const Eigen::MatrixXd extrapolated = fine + (fine - coarse) / 15.0;
  table.values = extrapolated.topLeftCorner(k_max + 1, l_max + 1);
  table.converged = converged;
  return table;
}

MomentTable stationary_moments(const ModelSpec& spec, int n_max, int p_max) {
  if (classify_regime(spec.drift) != Regime::kSubcritical) {
    throw HypothesisViolation("stationary moments require min(b,gamma)>0");
  }
  if (n_max < 0 || p_max < 0) throw ConfigError("moment orders must be >= 0");
  const Lattice lattice(n_max, p_max);
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(n_max + p_max + 2, p_max + 1);
  const auto at = [&](int k, int l) { return (k < 0 || l < 0) ? 0.0 : full(k, l); };
  for (int p = 0; p <= p_max; ++p) {
    for (int n = 0; n <= lattice.k_limit(p); ++n) {
      if (n == 0 && p == 0) {
        full(0, 0) = 1.0;
        continue;
      }
      const RecursionCoefficients c = coefficients(spec, n, p);
      full(n, p) = (c.cy * at(n - 1, p) + c.cx * at(n, p - 1) + c.cyx * at(n + 1, p - 1) +
                    c.cyxx * at(n + 1, p - 2) + c.cxx * at(n, p - 2)) /
                   c.rate;
    }
  }
  MomentTable table;
  table.mode = MomentTable::Mode::kStationary;
  table.values = full.topLeftCorner(n_max + 1, p_max + 1);
  return table;
}

double stationary_recursion_residual(const ModelSpec& spec, const MomentTable& table, int n,
                                     int p) {
  const RecursionCoefficients c = coefficients(spec, n, p);
  const double rhs = c.cy * table(n - 1, p) + c.cx * table(n, p - 1) +
                     c.cyx * table(n + 1, p - 1) + c.cyxx * table(n + 1, p - 2) +
                     c.cxx * table(n, p - 2);
  return c.rate * table(n, p) - rhs;
}

double laplace_y(const ModelSpec& spec, double t, double lambda, double y0) {
  const double s2 = spec.diffusion.sigma1 * spec.diffusion.sigma1;
  const double denom = 1.0 + 0.5 * s2 * lambda * psi(spec.drift.b, t);
  return std::pow(denom, -2.0 * spec.drift.a / s2) *
         std::exp(-lambda * std::exp(-spec.drift.b * t) * y0 / denom);
}

GrowthDescriptor mean_growth_check(const ModelSpec& spec) {
  const Eigen::MatrixXd m0 = initial_moments(spec, 1, 1);
  const double ey0 = m0(1, 0);
  const double ex0 = m0(0, 1);
  const DriftParams& d = spec.drift;
  const double a = d.a, b = d.b, al = d.alpha, be = d.beta, g = d.gamma;

  GrowthDescriptor out;
  if (b > 0.0) {
    out.y_class = GrowthClass::kConstant;
    out.y_coef = a / b;
    if (g > 0.0) {
      out.x_class = GrowthClass::kConstant;
      out.x_coef = al / g - a * be / (b * g);
    } else if (g == 0.0) {
      out.x_class = GrowthClass::kLinear;
      out.x_coef = al - a * be / b;
    } else {
      out.x_class = GrowthClass::kExpGamma;
      out.x_coef = be / (g - b) * ey0 + ex0 - al / g + a * be / (b * g) - a * be / ((g - b) * b);
    }
  } else if (b == 0.0) {
    out.y_class = GrowthClass::kLinear;
    out.y_coef = a;
    if (g > 0.0) {
      out.x_class = GrowthClass::kLinear;
      out.x_coef = -a * be / g;
    } else if (g == 0.0) {
      out.x_class = GrowthClass::kQuadratic;
      out.x_coef = -0.5 * a * be;
    } else {
      out.x_class = GrowthClass::kExpGamma;
      out.x_coef = be / g * ey0 + ex0 - al / g - a * be / (g * g);
    }
  } else {
    out.y_class = GrowthClass::kExpB;
    out.y_coef = ey0 - a / b;
    if (g > b && g != 0.0) {
      out.x_class = GrowthClass::kExpB;
      out.x_coef = -be / (g - b) * ey0 + a * be / ((g - b) * b);
    } else if (g == 0.0) {
      // E(X_0) stays O(1) and does not enter the e^{-bt} coefficient.
      out.x_class = GrowthClass::kExpB;
      out.x_coef = be / b * ey0 - be * a / (b * b);
    } else if (g == b) {
      out.x_class = GrowthClass::kTExpB;
      out.x_coef = -be * ey0 + a * be / b;
    } else {
      out.x_class = GrowthClass::kExpGamma;
      out.x_coef = be / (g - b) * ey0 + ex0 - al / g + a * be / (b * g) - a * be / (b * (g - b));
    }
  }
  return out;
}

double growth_leading_term(GrowthClass cls, double coef, const DriftParams& drift, double t) {
  switch (cls) {
    case GrowthClass::kConstant:
      return coef;
    case GrowthClass::kLinear:
      return coef * t;
    case GrowthClass::kQuadratic:
      return coef * t * t;
    case GrowthClass::kExpGamma:
      return coef * std::exp(-drift.gamma * t);
    case GrowthClass::kExpB:
      return coef * std::exp(-drift.b * t);
    case GrowthClass::kTExpB:
      return coef * t * std::exp(-drift.b * t);
  }
  return 0.0;
}

}  // namespace affine2f

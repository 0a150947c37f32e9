#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

// Exponential integrals with removable singularities.
//
// Every integral of the form  int_0^t exp(affine(w)) dw  (single or nested)
// is a divided difference of exp, scaled by a power of t. Divided differences
// are evaluated by the recursive quotient when the nodes are well separated
// and by a Taylor expansion about their mean when they are not, so b = 0,
// gamma = 0 and b = gamma are hit exactly.

namespace affine2f {

namespace detail {

// Node spread below which the two- and three-point divided differences are
// expanded in series.
inline constexpr double kSeriesThreshold2 = 1e-6;
inline constexpr double kSeriesThreshold3 = 1e-2;

}  // namespace detail

// (e^z - 1) / z with the z -> 0 limit 1.
template <typename Scalar>
Scalar phi1(Scalar z) {
  using std::abs;
  using std::expm1;
  if (abs(z) < Scalar(detail::kSeriesThreshold2)) {
    return Scalar(1) + z / Scalar(2) * (Scalar(1) + z / Scalar(3) * (Scalar(1) + z / Scalar(4)));
  }
  return expm1(z) / z;
}

// exp[x0, x1] = (e^{x1} - e^{x0}) / (x1 - x0).
template <typename Scalar>
Scalar divdiff_exp(Scalar x0, Scalar x1) {
  using std::exp;
  return exp(x0) * phi1(x1 - x0);
}

// exp[x0, x1, x2], the second divided difference of exp.
template <typename Scalar>
Scalar divdiff_exp(Scalar x0, Scalar x1, Scalar x2) {
  using std::abs;
  using std::exp;
  std::array<Scalar, 3> x{x0, x1, x2};
  std::sort(x.begin(), x.end());
  const Scalar spread = x[2] - x[0];
  if (spread >= Scalar(detail::kSeriesThreshold3)) {
    return (divdiff_exp(x[1], x[2]) - divdiff_exp(x[0], x[1])) / spread;
  }
  // exp[x] = e^m * sum_k h_k(y) / (k+2)!, with y = x - m and h_k the complete
  // homogeneous symmetric polynomial of degree k.
  const Scalar m = (x[0] + x[1] + x[2]) / Scalar(3);
  const Scalar y0 = x[0] - m, y1 = x[1] - m, y2 = x[2] - m;
  constexpr int kTerms = 9;
  // h_k(y0, y1, y2) = sum_{i+j <= k} y0^i y1^j y2^{k-i-j}.
  std::array<Scalar, kTerms> p0{}, p1{}, p2{};
  p0[0] = p1[0] = p2[0] = Scalar(1);
  for (int k = 1; k < kTerms; ++k) {
    p0[k] = p0[k - 1] * y0;
    p1[k] = p1[k - 1] * y1;
    p2[k] = p2[k - 1] * y2;
  }
  Scalar sum = Scalar(0);
  Scalar factorial = Scalar(2);
  for (int k = 0; k < kTerms; ++k) {
    Scalar h = Scalar(0);
    for (int i = 0; i <= k; ++i) {
      for (int j = 0; i + j <= k; ++j) {
        h += p0[i] * p1[j] * p2[k - i - j];
      }
    }
    sum += h / factorial;
    factorial *= Scalar(k + 3);
  }
  return exp(m) * sum;
}

// psi(c, t) = int_0^t e^{-c w} dw.
template <typename Scalar>
Scalar psi(Scalar c, Scalar t) {
  return t * phi1(-c * t);
}

// K(b, gamma, t) = int_0^t e^{(gamma - b) w - gamma t} dw.
template <typename Scalar>
Scalar coupling_integral(Scalar b, Scalar gamma, Scalar t) {
  return t * divdiff_exp(-gamma * t, -b * t);
}

// D(b, gamma, t) = int_0^t e^{gamma w - gamma t} psi(b, w) dw.
template <typename Scalar>
Scalar nested_integral(Scalar b, Scalar gamma, Scalar t) {
  return t * t * divdiff_exp(Scalar(0), -b * t, -gamma * t);
}

}  // namespace affine2f

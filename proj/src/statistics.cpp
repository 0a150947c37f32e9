#include "affine2f/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace affine2f {

double normal_cdf(double x, double mean, double sd) {
  return 0.5 * std::erfc(-(x - mean) / (sd * std::sqrt(2.0)));
}

double regularized_gamma_p(double s, double x) {
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  const double log_prefactor = s * std::log(x) - x - std::lgamma(s);
  constexpr int kMaxIter = 100000;
  constexpr double kEps = 1e-16;
  if (x < s + 1.0) {
    // Series: P = e^{-x} x^s / Gamma(s+1) * sum x^n / ((s+1)...(s+n)).
    double term = 1.0 / s;
    double sum = term;
    for (int n = 1; n < kMaxIter; ++n) {
      term *= x / (s + n);
      sum += term;
      if (std::abs(term) < std::abs(sum) * kEps) break;
    }
    return std::min(1.0, sum * std::exp(log_prefactor));
  }
  // Continued fraction for Q (modified Lentz).
  constexpr double kTiny = std::numeric_limits<double>::min() / kEps;
  double b = x + 1.0 - s;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return std::max(0.0, 1.0 - std::exp(log_prefactor) * h);
}

double gamma_cdf(double x, double shape, double rate) {
  return regularized_gamma_p(shape, rate * x);
}

double noncentral_chi_square_cdf(double x, double df, double lambda) {
  if (x <= 0.0) return 0.0;
  const double half = 0.5 * lambda;
  if (half == 0.0) return regularized_gamma_p(0.5 * df, 0.5 * x);
  // Sum outward from the Poisson mode until the remaining weight is negligible.
  const long mode = static_cast<long>(std::floor(half));
  const auto weight = [half](long j) {
    return std::exp(j * std::log(half) - half - std::lgamma(j + 1.0));
  };
  double total = 0.0;
  double mass = 0.0;
  for (long j = mode; j >= 0; --j) {
    const double w = weight(j);
    total += w * regularized_gamma_p(0.5 * df + j, 0.5 * x);
    mass += w;
    if (w < 1e-18 && j < mode) break;
  }
  for (long j = mode + 1;; ++j) {
    const double w = weight(j);
    total += w * regularized_gamma_p(0.5 * df + j, 0.5 * x);
    mass += w;
    if (w < 1e-18 || mass > 1.0 - 1e-16) break;
  }
  return std::clamp(total, 0.0, 1.0);
}

double ks_one_sample(std::vector<double> sample, const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, f - i / n, (i + 1) / n - f});
  }
  return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  return d;
}

double quantile(std::vector<double> sample, double q) {
  std::sort(sample.begin(), sample.end());
  const double pos = q * (sample.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sample.size() - 1);
  return sample[lo] + (pos - lo) * (sample[hi] - sample[lo]);
}

Vector5d column_means(const SampleMatrix& samples) {
  return samples.colwise().mean().transpose();
}

Matrix5d sample_covariance(const SampleMatrix& samples) {
  const SampleMatrix centered = samples.rowwise() - samples.colwise().mean();
  return centered.transpose() * centered / static_cast<double>(samples.rows() - 1);
}

double frobenius_relative_gap(const Matrix5d& a, const Matrix5d& b) {
  return (a - b).norm() / b.norm();
}

}  // namespace affine2f

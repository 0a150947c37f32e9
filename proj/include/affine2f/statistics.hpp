#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "affine2f/types.hpp"

namespace affine2f {

double normal_cdf(double x, double mean = 0.0, double sd = 1.0);

// Regularized lower incomplete gamma function P(s, x).
double regularized_gamma_p(double s, double x);

// CDF of Gamma(shape, rate).
double gamma_cdf(double x, double shape, double rate);

// CDF of the noncentral chi-square law with `df` degrees of freedom and
// noncentrality `lambda`, as a Poisson(lambda/2) mixture of central laws.
double noncentral_chi_square_cdf(double x, double df, double lambda);

// Kolmogorov-Smirnov distance sup |F_n - F| of a sample against a CDF.
double ks_one_sample(std::vector<double> sample, const std::function<double(double)>& cdf);

// Two-sample Kolmogorov-Smirnov distance sup |F_n - G_m|.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

// Empirical quantile with linear interpolation between order statistics.
double quantile(std::vector<double> sample, double q);

// Column means and unbiased covariance of a sample (one row per draw).
Vector5d column_means(const SampleMatrix& samples);
Matrix5d sample_covariance(const SampleMatrix& samples);

// ||A - B||_F / ||B||_F.
double frobenius_relative_gap(const Matrix5d& a, const Matrix5d& b);

}  // namespace affine2f

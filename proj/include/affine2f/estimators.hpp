#pragma once

#include <limits>
#include <string>

#include "affine2f/errors.hpp"
#include "affine2f/model.hpp"
#include "affine2f/simulator.hpp"
#include "affine2f/types.hpp"

namespace affine2f {

// Gram matrices above this (equilibrated) condition number are rejected.
inline constexpr double kGramConditionLimit = 1e12;

// Discrete CLSE of the one-step conditional-mean coefficients.
struct TransformedEstimate {
  TransformedParams params;
  Matrix2<double> gram1;  // Gamma^(1)
  Matrix3<double> gram2;  // Gamma^(2)
  double cond1 = 0.0;
  double cond2 = 0.0;
  double n = 0.0;         // grid frequency, steps per unit time
};

enum class EstimatorSource { kDiscrete, kApproximate, kContinuous };

std::string to_string(EstimatorSource source);

struct DriftEstimate {
  Vector5d theta_hat = Vector5d::Zero();  // (a, b, alpha, beta, gamma)
  EstimatorSource source = EstimatorSource::kContinuous;
  double n = 0.0;                         // grid frequency for discrete/approximate
  Matrix2<double> gram1 = Matrix2<double>::Zero();
  Matrix3<double> gram2 = Matrix3<double>::Zero();
  double cond1 = 0.0;
  double cond2 = 0.0;
};

// Time and Ito integrals of a path, all by left-point sums.
struct PathIntegrals {
  double T = 0.0;
  double int_y = 0.0;
  double int_y2 = 0.0;
  double int_x = 0.0;
  double int_xy = 0.0;
  double int_x2 = 0.0;
  double int_y_dy = 0.0;
  double int_y_dx = 0.0;
  double int_x_dx = 0.0;
  double y_increment = 0.0;  // Y_T - Y_0
  double x_increment = 0.0;  // X_T - X_0
};

PathIntegrals path_integrals(const PathGrid& path);

// Condition number of D^{-1/2} G D^{-1/2} with D = diag(G): invariant to the
// scale of the regressors, so exploding paths are not mistaken for collinear ones.
template <typename Derived>
double equilibrated_condition(const Eigen::MatrixBase<Derived>& gram) {
  using Matrix = typename Derived::PlainObject;
  const auto d = gram.diagonal().cwiseAbs().cwiseSqrt().cwiseInverse().eval();
  if (!d.allFinite()) return std::numeric_limits<double>::infinity();
  const Matrix scaled = d.asDiagonal() * gram * d.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(scaled, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

// Solves gram * theta = rhs after symmetric equilibration with a
// column-pivoting QR; throws SingularGram above the condition limit.
template <typename GramType, typename RhsType>
typename RhsType::PlainObject solve_gram(const Eigen::MatrixBase<GramType>& gram,
                                         const Eigen::MatrixBase<RhsType>& rhs, double& condition,
                                         const char* label) {
  condition = equilibrated_condition(gram);
  if (!(condition <= kGramConditionLimit)) {
    throw SingularGram(std::string(label) + " Gram matrix is singular or ill-conditioned (condition " +
                           std::to_string(condition) + ")",
                       condition);
  }
  const auto d = gram.diagonal().cwiseSqrt().cwiseInverse().eval();
  const typename GramType::PlainObject scaled = d.asDiagonal() * gram * d.asDiagonal();
  Eigen::ColPivHouseholderQR<typename GramType::PlainObject> qr(scaled);
  return d.asDiagonal() * qr.solve((d.asDiagonal() * rhs).eval());
}

// Discrete CLSE from the path subsampled every `stride` points.
TransformedEstimate clse_discrete_transformed(const PathGrid& path, int stride);

// (c, d) alone: the Y block needs only the Y column and stays solvable when the
// X block is not (fewer increments than X-block unknowns).
Vector2<double> clse_discrete_y_block(const PathGrid& path, int stride, double* condition = nullptr);

// Back-transform through g_n^{-1}.
DriftEstimate gn_inverse(const TransformedEstimate& te);

// n * (c, d, delta, epsilon, zeta).
DriftEstimate clse_approx(const TransformedEstimate& te);

// Continuous-time CLSE G_T^{-1} f_T.
DriftEstimate clse_continuous(const PathGrid& path);

// Normal-equation blocks of the continuous CLSE.
struct ContinuousSystem {
  Matrix2<double> g1;
  Vector2<double> f1;
  Matrix3<double> g2;
  Vector3<double> f2;

  Matrix5d gram() const;  // block-diagonal G_T
  Vector5d rhs() const;   // (f_T^(1), f_T^(2))
};

ContinuousSystem continuous_system(const PathIntegrals& integrals);

// h_T = f_T - G_T theta.
// The diffusion constants do not enter the path-based formula; they are
// accepted so the call mirrors the martingale representation it discretizes.
Vector5d h_vector(const PathGrid& path, const DriftParams& true_theta,
                  const DiffusionParams& diffusion);

}  // namespace affine2f

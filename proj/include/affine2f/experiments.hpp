#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "affine2f/limit_laws.hpp"
#include "affine2f/model.hpp"
#include "affine2f/simulator.hpp"
#include "affine2f/types.hpp"

namespace affine2f {

// Stream ids at and above this offset feed reference (limit-law) draws, so
// they never collide with replication streams 0, 1, 2, ...
inline constexpr std::uint64_t kReferenceStreamOffset = std::uint64_t{1} << 40;

// 0 selects the hardware concurrency.
int resolve_threads(int requested);

// Runs fn(i) for i in [0, count) on `threads` workers with a fixed
// interleaved partition; results must be written to per-index slots.
// The first exception thrown by any worker is rethrown after joining.
template <typename Fn>
void parallel_for(int count, int threads, Fn&& fn) {
  threads = std::max(1, std::min(resolve_threads(threads), count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (int w = 0; w < threads; ++w) {
    workers.emplace_back([&, w] {
      try {
        for (int i = w; i < count; i += threads) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : workers) t.join();
  if (error) std::rethrow_exception(error);
}

struct ExperimentPlan {
  ModelSpec spec;
  Regime regime = Regime::kSubcritical;
  double T = 0.0;
  double dt = 0.0;
  int replications = 0;
  std::uint64_t base_seed = 0;
  Scheme scheme = Scheme::kExactYEulerX;
  // Sample-based theories (critical, supercritical): number of reference
  // draws (0 = same as replications) and their discretization.
  int reference_draws = 0;
  double limit_dt = 1e-4;  // auxiliary path step for critical draws
  double probe_T = 0.0;    // supercritical probe horizon, 0 = 30/|b|
  CriticalConvention convention = CriticalConvention::kScalingLimit;
  // KS thresholds: 0.05 against a normal marginal, 0.1 two-sample.
  double ks_threshold = 0.0;  // 0 = regime default
  double frobenius_threshold = 0.10;
  double exclusion_cap = 0.01;  // fraction of replications

  Vector5d scaling() const { return regime_scaling(spec.drift, regime, T); }
};

// Throws HypothesisViolation when the plan's regime does not match the drift
// or the regime's limit theorem hypotheses fail, ConfigError on bad sizes.
void validate_plan(const ExperimentPlan& plan);

struct LimitLawReport {
  enum class Theory { kNormal, kSampleBased };

  Regime regime = Regime::kSubcritical;
  int replications = 0;
  int excluded = 0;
  SampleMatrix scaled_errors;               // included replications, in stream order
  std::vector<std::uint64_t> stream_ids;    // stream id of each row
  std::vector<int> vx_sign;                 // supercritical: sign of e^{gamma T} X_T per row
  Theory theory = Theory::kNormal;
  Matrix5d theory_cov = Matrix5d::Zero();   // kNormal
  SampleMatrix reference;                   // kSampleBased
  int reference_redraws = 0;
  Vector5d mean = Vector5d::Zero();
  Vector5d sd = Vector5d::Zero();
  Matrix5d empirical_cov = Matrix5d::Zero();
  Vector5d ks = Vector5d::Zero();
  double frobenius_gap = 0.0;               // kNormal only
  double ks_threshold = 0.0;
  double frobenius_threshold = 0.0;
  Eigen::Array<bool, 5, 1> ks_pass = Eigen::Array<bool, 5, 1>::Constant(false);
  bool cov_pass = true;
  bool pass = false;
};

LimitLawReport run_experiment(const ExperimentPlan& plan, int threads = 0);

// Independent draws from the plan's limit law on streams kReferenceStreamOffset + i:
// the sandwich normal (subcritical), the limit functional of the auxiliary
// process (critical) or V^{-1} eta xi (supercritical). `redraws` receives the
// number of rejected singular critical draws.
SampleMatrix limit_law_samples(const ExperimentPlan& plan, int count, int threads = 0,
                               int* redraws = nullptr);

struct SweepRow {
  double T = 0.0;
  Vector5d median = Vector5d::Zero();  // median |theta_hat - theta|
  Vector5d p90 = Vector5d::Zero();     // 90th percentile |theta_hat - theta|
};

struct ConsistencyTable {
  std::vector<SweepRow> rows;
  // Number of successive T steps on which the 90th percentile decreased.
  Eigen::Matrix<int, 5, 1> decreasing_steps = Eigen::Matrix<int, 5, 1>::Zero();
  int excluded = 0;
};

// Absolute estimation errors on nested horizons of the same replications.
ConsistencyTable consistency_sweep(const ModelSpec& spec, std::vector<double> T_list, double dt,
                                   int replications, std::uint64_t seed, int threads = 0,
                                   Scheme scheme = Scheme::kExactYEulerX);

// Monte Carlo estimates of E(Y_T), E(X_T), E(Y_T^2), E(Y_T X_T), E(X_T^2)
// with their standard errors.
struct MomentEstimate {
  Vector5d mean = Vector5d::Zero();
  Vector5d standard_error = Vector5d::Zero();
};

MomentEstimate monte_carlo_moments(const ModelSpec& spec, double T, double dt, int paths,
                                   std::uint64_t seed, int threads = 0,
                                   Scheme scheme = Scheme::kExactYEulerX);

// Sample mean and variance of e^{bT} Y_T at each T of T_list (nested horizons).
struct ScaledYSummary {
  std::vector<double> T;
  std::vector<double> mean;
  std::vector<double> variance;
};

ScaledYSummary scaled_y_stabilization(const ModelSpec& spec, std::vector<double> T_list, double dt,
                                      int replications, std::uint64_t seed, int threads = 0);

}  // namespace affine2f

#include "affine2f/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "affine2f/errors.hpp"
#include "affine2f/estimators.hpp"
#include "affine2f/statistics.hpp"

namespace affine2f {

namespace {

std::vector<double> column(const SampleMatrix& m, int j) {
  return std::vector<double>(m.col(j).data(), m.col(j).data() + m.rows());
}

PathGrid prefix(const PathGrid& path, Eigen::Index points) {
  PathGrid out = path;
  out.y = path.y.head(points);
  out.x = path.x.head(points);
  return out;
}

Purpose limit_purpose(Regime regime) {
  switch (regime) {
    case Regime::kSubcritical:
      return Purpose::kSubcriticalLimit;
    case Regime::kCritical:
      return Purpose::kCriticalLimit;
    case Regime::kSupercritical:
      return Purpose::kSupercriticalLimit;
  }
  return Purpose::kSimulation;
}

}  // namespace

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void validate_plan(const ExperimentPlan& plan) {
  check_domain(plan.spec);
  if (!(plan.dt > 0.0)) throw ConfigError("dt: must be > 0");
  if (!(plan.T >= plan.dt)) throw ConfigError("T: must be >= dt");
  if (plan.replications < 2) throw ConfigError("replications: must be >= 2");
  const Regime actual = classify_regime(plan.spec.drift);
  if (actual != plan.regime) {
    throw HypothesisViolation("regime: plan declares " + to_string(plan.regime) +
                              " but min(b,gamma) makes the model " + to_string(actual));
  }
  const ValidationReport report = validate_spec(plan.spec, limit_purpose(plan.regime));
  const ValidationReport clse = validate_spec(plan.spec, Purpose::kContinuousClse);
  std::vector<std::string> violations = report.violations;
  violations.insert(violations.end(), clse.violations.begin(), clse.violations.end());
  if (!violations.empty()) {
    std::string message = "hypotheses violated:";
    for (const auto& v : violations) message += " " + v + ";";
    throw HypothesisViolation(message);
  }
}

LimitLawReport run_experiment(const ExperimentPlan& plan, int threads) {
  validate_plan(plan);
  const int R = plan.replications;
  const Vector5d theta = plan.spec.drift.theta();
  const Vector5d scale = plan.scaling();

  std::vector<Vector5d> errors(R, Vector5d::Zero());
  std::vector<char> included(R, 0);
  std::vector<int> signs(R, 0);
  parallel_for(R, threads, [&](int r) {
    RngStream rng(plan.base_seed, static_cast<std::uint64_t>(r));
    const PathGrid path = simulate_path(plan.spec, plan.T, plan.dt, plan.scheme, rng);
    const double x_end = path.x(path.size() - 1);
    signs[r] = (x_end > 0.0) - (x_end < 0.0);
    try {
      const DriftEstimate est = clse_continuous(path);
      errors[r] = scale.cwiseProduct(est.theta_hat - theta);
      included[r] = errors[r].allFinite() ? 1 : 0;
    } catch (const NumericalError&) {
      included[r] = 0;
    }
  });

  LimitLawReport report;
  report.regime = plan.regime;
  report.replications = R;
  report.excluded = static_cast<int>(std::count(included.begin(), included.end(), 0));
  if (report.excluded > plan.exclusion_cap * R) {
    throw NumericalError("excluded " + std::to_string(report.excluded) + " of " +
                         std::to_string(R) + " replications, above the exclusion cap");
  }
  report.scaled_errors.resize(R - report.excluded, 5);
  for (int r = 0, row = 0; r < R; ++r) {
    if (!included[r]) continue;
    report.scaled_errors.row(row++) = errors[r].transpose();
    report.stream_ids.push_back(static_cast<std::uint64_t>(r));
    if (plan.regime == Regime::kSupercritical) report.vx_sign.push_back(signs[r]);
  }

  report.mean = column_means(report.scaled_errors);
  report.empirical_cov = sample_covariance(report.scaled_errors);
  report.sd = report.empirical_cov.diagonal().cwiseSqrt();
  report.frobenius_threshold = plan.frobenius_threshold;

  if (plan.regime == Regime::kSubcritical) {
    report.theory = LimitLawReport::Theory::kNormal;
    report.theory_cov = subcritical_limit(plan.spec).asym_cov;
    report.ks_threshold = plan.ks_threshold > 0.0 ? plan.ks_threshold : 0.05;
    for (int j = 0; j < 5; ++j) {
      const double sd = std::sqrt(report.theory_cov(j, j));
      report.ks(j) = ks_one_sample(column(report.scaled_errors, j),
                                   [sd](double v) { return normal_cdf(v, 0.0, sd); });
    }
    report.frobenius_gap = frobenius_relative_gap(report.empirical_cov, report.theory_cov);
    report.cov_pass = report.frobenius_gap < plan.frobenius_threshold;
  } else {
    report.theory = LimitLawReport::Theory::kSampleBased;
    report.ks_threshold = plan.ks_threshold > 0.0 ? plan.ks_threshold : 0.1;
    const int M = plan.reference_draws > 0 ? plan.reference_draws : R;
    report.reference = limit_law_samples(plan, M, threads, &report.reference_redraws);
    for (int j = 0; j < 5; ++j) {
      report.ks(j) = ks_two_sample(column(report.scaled_errors, j), column(report.reference, j));
    }
    report.cov_pass = true;
  }
  report.ks_pass = report.ks.array() < report.ks_threshold;
  report.pass = report.ks_pass.all() && report.cov_pass;
  return report;
}

SampleMatrix limit_law_samples(const ExperimentPlan& plan, int count, int threads,
                               int* redraws) {
  if (count < 1) throw ConfigError("count: must be >= 1");
  const ModelSpec& spec = plan.spec;
  Matrix5d root = Matrix5d::Zero();
  if (plan.regime == Regime::kSubcritical) root = psd_sqrt(subcritical_limit(spec).asym_cov);
  std::vector<Vector5d> draws(count, Vector5d::Zero());
  std::vector<int> rejected(count, 0);
  parallel_for(count, threads, [&](int i) {
    RngStream rng(plan.base_seed, kReferenceStreamOffset + static_cast<std::uint64_t>(i));
    if (plan.regime == Regime::kSubcritical) {
      Vector5d xi;
      for (int j = 0; j < 5; ++j) xi(j) = rng.normal(Substream::kW);
      draws[i] = root * xi;
    } else if (plan.regime == Regime::kCritical) {
      const CriticalLimitDraw d = critical_limit_sample(
          spec.drift.a, spec.drift.alpha, spec.diffusion.sigma1, spec.diffusion.sigma2,
          spec.diffusion.sigma3, spec.diffusion.rho, plan.limit_dt, rng, plan.convention);
      draws[i] = d.value;
      rejected[i] = d.redraws;
    } else {
      draws[i] = supercritical_limit_sample(spec, plan.probe_T, plan.dt, rng).value;
    }
  });
  SampleMatrix out(count, 5);
  for (int i = 0; i < count; ++i) out.row(i) = draws[i].transpose();
  if (redraws) {
    *redraws = 0;
    for (int r : rejected) *redraws += r;
  }
  return out;
}

ConsistencyTable consistency_sweep(const ModelSpec& spec, std::vector<double> T_list, double dt,
                                   int replications, std::uint64_t seed, int threads,
                                   Scheme scheme) {
  if (T_list.empty()) throw ConfigError("T_list: must not be empty");
  if (replications < 1) throw ConfigError("replications: must be >= 1");
  std::sort(T_list.begin(), T_list.end());
  const int R = replications;
  const std::size_t nT = T_list.size();
  const Vector5d theta = spec.drift.theta();
  std::vector<std::vector<Vector5d>> errors(R, std::vector<Vector5d>(nT));
  std::vector<char> included(R, 1);
  parallel_for(R, threads, [&](int r) {
    RngStream rng(seed, static_cast<std::uint64_t>(r));
    const PathGrid path = simulate_path(spec, T_list.back(), dt, scheme, rng);
    try {
      for (std::size_t k = 0; k < nT; ++k) {
        const PathGrid sub = prefix(path, grid_points(T_list[k], dt));
        errors[r][k] = (clse_continuous(sub).theta_hat - theta).cwiseAbs();
      }
    } catch (const NumericalError&) {
      included[r] = 0;
    }
  });

  ConsistencyTable table;
  table.excluded = static_cast<int>(std::count(included.begin(), included.end(), 0));
  for (std::size_t k = 0; k < nT; ++k) {
    SweepRow row;
    row.T = T_list[k];
    for (int j = 0; j < 5; ++j) {
      std::vector<double> values;
      for (int r = 0; r < R; ++r) {
        if (included[r]) values.push_back(errors[r][k](j));
      }
      if (values.empty()) throw NumericalError("every replication was excluded");
      row.median(j) = quantile(values, 0.5);
      row.p90(j) = quantile(values, 0.9);
    }
    table.rows.push_back(row);
  }
  for (std::size_t k = 1; k < nT; ++k) {
    for (int j = 0; j < 5; ++j) {
      if (table.rows[k].p90(j) < table.rows[k - 1].p90(j)) ++table.decreasing_steps(j);
    }
  }
  return table;
}

MomentEstimate monte_carlo_moments(const ModelSpec& spec, double T, double dt, int paths,
                                   std::uint64_t seed, int threads, Scheme scheme) {
  if (paths < 2) throw ConfigError("paths: must be >= 2");
  std::vector<Vector5d> values(paths);
  parallel_for(paths, threads, [&](int r) {
    RngStream rng(seed, static_cast<std::uint64_t>(r));
    const PathGrid path = simulate_path(spec, T, dt, scheme, rng);
    const double y = path.y(path.size() - 1);
    const double x = path.x(path.size() - 1);
    values[r] = Vector5d(y, x, y * y, y * x, x * x);
  });
  SampleMatrix m(paths, 5);
  for (int r = 0; r < paths; ++r) m.row(r) = values[r].transpose();
  MomentEstimate out;
  out.mean = column_means(m);
  out.standard_error = (sample_covariance(m).diagonal() / static_cast<double>(paths)).cwiseSqrt();
  return out;
}

ScaledYSummary scaled_y_stabilization(const ModelSpec& spec, std::vector<double> T_list, double dt,
                                      int replications, std::uint64_t seed, int threads) {
  if (T_list.empty()) throw ConfigError("T_list: must not be empty");
  if (replications < 2) throw ConfigError("replications: must be >= 2");
  std::sort(T_list.begin(), T_list.end());
  const std::size_t nT = T_list.size();
  std::vector<std::vector<double>> values(replications, std::vector<double>(nT));
  parallel_for(replications, threads, [&](int r) {
    RngStream rng(seed, static_cast<std::uint64_t>(r));
    const PathGrid path = simulate_path(spec, T_list.back(), dt, Scheme::kExactYEulerX, rng);
    for (std::size_t k = 0; k < nT; ++k) {
      const Eigen::Index i = grid_points(T_list[k], dt) - 1;
      values[r][k] = std::exp(spec.drift.b * path.time(i)) * path.y(i);
    }
  });
  ScaledYSummary out;
  out.T = T_list;
  for (std::size_t k = 0; k < nT; ++k) {
    double mean = 0.0;
    for (int r = 0; r < replications; ++r) mean += values[r][k];
    mean /= replications;
    double var = 0.0;
    for (int r = 0; r < replications; ++r) var += (values[r][k] - mean) * (values[r][k] - mean);
    var /= replications - 1;
    out.mean.push_back(mean);
    out.variance.push_back(var);
  }
  return out;
}

}  // namespace affine2f

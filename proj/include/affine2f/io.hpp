#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "affine2f/diffusion_stats.hpp"
#include "affine2f/estimators.hpp"
#include "affine2f/experiments.hpp"
#include "affine2f/limit_laws.hpp"
#include "affine2f/model.hpp"
#include "affine2f/moments.hpp"
#include "affine2f/simulator.hpp"

namespace affine2f {

// 17 significant digits: lossless for binary64.
std::string format_double(double v);

// Strict decimal parsing of a whole token; throws ConfigError naming `field`.
double parse_double(const std::string& text, const std::string& field);
std::int64_t parse_int(const std::string& text, const std::string& field);
std::uint64_t parse_uint(const std::string& text, const std::string& field);

// `[experiment]` section of a run configuration.
struct ExperimentSection {
  bool present = false;
  std::optional<double> T;
  std::optional<double> dt;
  std::optional<int> replications;
  std::optional<Regime> regime;
  Scheme scheme = Scheme::kExactYEulerX;
  std::optional<std::uint64_t> seed;
  int reference_draws = 0;
  double limit_dt = 1e-4;
  double probe_T = 0.0;
  CriticalConvention convention = CriticalConvention::kScalingLimit;
};

// `[output]` section of a run configuration.
struct OutputSection {
  std::string dir = "out";
  std::string format = "csv";
};

// Declarative key = value configuration: model keys at top level, then the
// optional [experiment] and [output] sections. Unknown or repeated keys and
// out-of-domain values are rejected.
struct RunConfig {
  ModelSpec spec;
  ExperimentSection experiment;
  OutputSection output;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& config);

// Builds the experiment plan; requires T, dt and replications to be set.
ExperimentPlan make_plan(const RunConfig& config, std::uint64_t seed);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

// Columnar path file with header `t,y,x`.
std::string format_path(const PathGrid& path);
PathGrid parse_path(const std::string& text);
// Metadata sidecar: model keys plus a [simulation] section.
std::string format_path_metadata(const ModelSpec& spec, const PathGrid& path, Scheme scheme);

std::string format_moment_table(const MomentTable& table);
std::string format_estimate(const DriftEstimate& estimate);
std::string format_diffusion_estimate(const DiffusionEstimate& estimate,
                                      const QuadraticVariations& qv);
std::string format_matrix(const std::string& label, const Eigen::MatrixXd& m);
std::string format_samples(const SampleMatrix& samples);
std::string format_report(const ExperimentPlan& plan, const LimitLawReport& report);

}  // namespace affine2f

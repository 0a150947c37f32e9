#include "affine2f/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "affine2f/diffusion_stats.hpp"
#include "affine2f/errors.hpp"
#include "affine2f/estimators.hpp"
#include "affine2f/experiments.hpp"
#include "affine2f/io.hpp"
#include "affine2f/moments.hpp"
#include "affine2f/simulator.hpp"

namespace affine2f {

namespace {

struct GlobalOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string threads = "auto";
};

int parse_threads(const std::string& text) {
  if (text == "auto") return 0;
  const std::int64_t n = parse_int(text, "--threads");
  if (n < 1) throw ConfigError("--threads: must be a positive integer or 'auto'");
  return static_cast<int>(n);
}

RunConfig require_config(const GlobalOptions& g) {
  if (g.config.empty()) throw ConfigError("--config: required by this command");
  return load_config(g.config);
}

std::uint64_t resolve_seed(const GlobalOptions& g, const RunConfig* config) {
  if (g.seed) return *g.seed;
  if (config && config->experiment.seed) return *config->experiment.seed;
  return 0;
}

std::filesystem::path output_dir(const GlobalOptions& g, const RunConfig* config) {
  std::filesystem::path dir = !g.out_dir.empty() ? g.out_dir : (config ? config->output.dir : "out");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("--out: cannot create '" + dir.string() + "': " + ec.message());
  return dir;
}

void emit(std::ostream& out, const std::filesystem::path& file, const std::string& text) {
  write_file(file.string(), text);
  out << "wrote " << file.string() << '\n';
}

void require_hypotheses(const ModelSpec& spec, Purpose purpose) {
  const ValidationReport report = validate_spec(spec, purpose);
  if (report.ok) return;
  std::string message = to_string(purpose) + " hypotheses violated:";
  for (const auto& v : report.violations) message += " " + v + ";";
  throw HypothesisViolation(message);
}

void print_warnings(const ModelSpec& spec, Purpose purpose, std::ostream& err) {
  for (const auto& w : validate_spec(spec, purpose).warnings) err << "warning: " << w << '\n';
}

// Grid stride realizing observation frequency n on a path with step dt.
int stride_for(double n, double dt) {
  if (!(n > 0.0) || !std::isfinite(n)) throw ConfigError("--estimator: n must be > 0");
  const double ratio = 1.0 / (n * dt);
  const double stride = std::round(ratio);
  if (stride < 1.0 || std::abs(ratio - stride) > 1e-6 * stride) {
    throw ConfigError("--estimator: 1/n must be a whole multiple of the path step " +
                      format_double(dt));
  }
  return static_cast<int>(stride);
}

std::string format_transformed(const TransformedParams& tp) {
  std::ostringstream out;
  out << "transformed.c = " << format_double(tp.c) << '\n';
  out << "transformed.d = " << format_double(tp.d) << '\n';
  out << "transformed.delta = " << format_double(tp.delta) << '\n';
  out << "transformed.epsilon = " << format_double(tp.epsilon) << '\n';
  out << "transformed.zeta = " << format_double(tp.zeta) << '\n';
  return out.str();
}

int cmd_simulate(const GlobalOptions& g, std::optional<double> T, std::optional<double> dt,
                 const std::string& scheme_name, std::uint64_t stream, std::ostream& out,
                 std::ostream& err) {
  RunConfig config = require_config(g);
  const double horizon = T ? *T : config.experiment.T.value_or(0.0);
  const double step = dt ? *dt : config.experiment.dt.value_or(0.0);
  if (!T && !config.experiment.T) throw ConfigError("T: set experiment.T or pass --T");
  if (!dt && !config.experiment.dt) throw ConfigError("dt: set experiment.dt or pass --dt");
  const Scheme scheme = scheme_name.empty() ? config.experiment.scheme : scheme_from_string(scheme_name);
  require_hypotheses(config.spec, Purpose::kSimulation);
  print_warnings(config.spec, Purpose::kSimulation, err);
  RngStream rng(resolve_seed(g, &config), stream);
  const PathGrid path = simulate_path(config.spec, horizon, step, scheme, rng);
  const auto dir = output_dir(g, &config);
  emit(out, dir / "path.csv", format_path(path));
  emit(out, dir / "path.meta", format_path_metadata(config.spec, path, scheme));
  return kExitOk;
}

int cmd_estimate(const GlobalOptions& g, const std::string& path_file, const std::string& estimator,
                 std::ostream& out) {
  const PathGrid path = parse_path(read_file(path_file));
  std::string record;
  if (estimator == "continuous") {
    record = format_estimate(clse_continuous(path));
  } else {
    const auto colon = estimator.find(':');
    const std::string kind = estimator.substr(0, colon);
    if (colon == std::string::npos || (kind != "discrete" && kind != "approx")) {
      throw ConfigError("--estimator: expected continuous, discrete:n or approx:n");
    }
    const double n = parse_double(estimator.substr(colon + 1), "--estimator");
    if (path.size() < 3) throw InsufficientData("path has fewer than 3 observations");
    const TransformedEstimate te = clse_discrete_transformed(path, stride_for(n, path.dt));
    record = format_estimate(kind == "discrete" ? gn_inverse(te) : clse_approx(te)) +
             format_transformed(te.params);
  }
  out << record;
  emit(out, output_dir(g, nullptr) / "estimate.txt", record);
  return kExitOk;
}

int cmd_moments(const GlobalOptions& g, const std::string& t_text, int kmax, int lmax,
                std::ostream& out) {
  const RunConfig config = require_config(g);
  if (kmax < 0 || lmax < 0) throw ConfigError("--kmax/--lmax: must be >= 0");
  MomentTable table;
  if (t_text == "stationary") {
    table = stationary_moments(config.spec, kmax, lmax);
  } else {
    table = transient_moments(config.spec, parse_double(t_text, "--t"), kmax, lmax);
  }
  const std::string text = format_moment_table(table);
  out << text;
  emit(out, output_dir(g, &config) / "moments.csv", text);
  return kExitOk;
}

int cmd_diffstats(const GlobalOptions& g, const std::string& path_file, std::ostream& out) {
  const PathGrid path = parse_path(read_file(path_file));
  const QuadraticVariations qv = realized_qv(path);
  const std::string text = format_diffusion_estimate(estimate_diffusion(qv), qv);
  out << text;
  emit(out, output_dir(g, nullptr) / "diffstats.txt", text);
  return kExitOk;
}

int cmd_mc_verify(const GlobalOptions& g, std::ostream& out) {
  const RunConfig config = require_config(g);
  const ExperimentPlan plan = make_plan(config, resolve_seed(g, &config));
  const LimitLawReport report = run_experiment(plan, parse_threads(g.threads));
  const std::string text = format_report(plan, report);
  out << text;
  const auto dir = output_dir(g, &config);
  emit(out, dir / "report.txt", text);
  emit(out, dir / "scaled_errors.csv", format_samples(report.scaled_errors));
  if (report.theory == LimitLawReport::Theory::kSampleBased) {
    emit(out, dir / "reference.csv", format_samples(report.reference));
  }
  return kExitOk;
}

int cmd_limit_sample(const GlobalOptions& g, int count, std::ostream& out) {
  const RunConfig config = require_config(g);
  const ExperimentSection& ex = config.experiment;
  ExperimentPlan plan;
  plan.spec = config.spec;
  plan.regime = ex.regime ? *ex.regime : classify_regime(config.spec.drift);
  plan.T = ex.T.value_or(1.0);
  plan.dt = ex.dt.value_or(1e-3);
  plan.base_seed = resolve_seed(g, &config);
  plan.limit_dt = ex.limit_dt;
  plan.probe_T = ex.probe_T;
  plan.convention = ex.convention;
  if (classify_regime(plan.spec.drift) != plan.regime) {
    throw HypothesisViolation("regime: configuration declares " + to_string(plan.regime) +
                              " but min(b,gamma) makes the model " +
                              to_string(classify_regime(plan.spec.drift)));
  }
  if (plan.regime == Regime::kSubcritical) require_hypotheses(plan.spec, Purpose::kSubcriticalLimit);
  if (plan.regime == Regime::kCritical) require_hypotheses(plan.spec, Purpose::kCriticalLimit);
  int redraws = 0;
  const SampleMatrix samples = limit_law_samples(plan, count, parse_threads(g.threads), &redraws);
  out << "regime = " << to_string(plan.regime) << '\n';
  out << "count = " << count << '\n';
  out << "redraws = " << redraws << '\n';
  emit(out, output_dir(g, &config) / "limit_samples.csv", format_samples(samples));
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulation, estimation and limit-law verification for a two-factor affine diffusion"};
  app.require_subcommand(1);
  GlobalOptions g;
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "Base seed (overrides experiment.seed)");
  app.add_option("--config", g.config, "Run configuration file");
  app.add_option("--out", g.out_dir, "Output directory (overrides output.dir)");
  app.add_option("--threads", g.threads, "Worker threads: a positive integer or 'auto'");

  auto* simulate = app.add_subcommand("simulate", "Simulate one path and write it with a metadata sidecar");
  simulate->fallthrough();
  double sim_T = 0.0, sim_dt = 0.0;
  std::string sim_scheme;
  std::uint64_t sim_stream = 0;
  auto* T_opt = simulate->add_option("--T", sim_T, "Horizon (overrides experiment.T)");
  auto* dt_opt = simulate->add_option("--dt", sim_dt, "Step (overrides experiment.dt)");
  simulate->add_option("--scheme", sim_scheme, "exact_y_euler_x or full_euler");
  simulate->add_option("--stream", sim_stream, "Replication stream id");

  auto* estimate = app.add_subcommand("estimate", "Estimate the drift parameters from a path file");
  estimate->fallthrough();
  std::string est_path, est_kind = "continuous";
  estimate->add_option("--path", est_path, "Path file with header t,y,x")->required();
  estimate->add_option("--estimator", est_kind, "continuous, discrete:n or approx:n");

  auto* moments = app.add_subcommand("moments", "Tabulate mixed moments E(Y^k X^l)");
  moments->fallthrough();
  std::string mom_t = "stationary";
  int kmax = 2, lmax = 2;
  moments->add_option("--t", mom_t, "Time t or 'stationary'");
  moments->add_option("--kmax", kmax, "Largest power of Y");
  moments->add_option("--lmax", lmax, "Largest power of X");

  auto* diffstats = app.add_subcommand("diffstats", "Estimate the diffusion constants from a path file");
  diffstats->fallthrough();
  std::string diff_path;
  diffstats->add_option("--path", diff_path, "Path file with header t,y,x")->required();

  auto* mc_verify = app.add_subcommand("mc-verify", "Monte Carlo check of the regime's limit law");
  mc_verify->fallthrough();

  auto* limit_sample = app.add_subcommand("limit-sample", "Draw from the regime's limit law");
  limit_sample->fallthrough();
  int count = 1000;
  limit_sample->add_option("--count", count, "Number of draws");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }
  if (*seed_opt) g.seed = seed;

  try {
    if (*simulate) {
      return cmd_simulate(g, *T_opt ? std::optional<double>(sim_T) : std::nullopt,
                          *dt_opt ? std::optional<double>(sim_dt) : std::nullopt, sim_scheme,
                          sim_stream, out, err);
    }
    if (*estimate) return cmd_estimate(g, est_path, est_kind, out);
    if (*moments) return cmd_moments(g, mom_t, kmax, lmax, out);
    if (*diffstats) return cmd_diffstats(g, diff_path, out);
    if (*mc_verify) return cmd_mc_verify(g, out);
    if (*limit_sample) return cmd_limit_sample(g, count, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const HypothesisViolation& e) {
    err << "hypothesis violation: " << e.what() << '\n';
    return kExitHypothesis;
  } catch (const SingularGram& e) {
    err << "numerical failure: " << e.what() << " [condition " << format_double(e.condition())
        << "]\n";
    return kExitNumerical;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUnexpected;
  }
  return kExitUnexpected;
}

}  // namespace affine2f

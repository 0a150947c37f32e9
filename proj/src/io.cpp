#include "affine2f/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "affine2f/errors.hpp"

namespace affine2f {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

void line(std::ostringstream& out, const std::string& key, const std::string& value) {
  out << key << " = " << value << '\n';
}

void line(std::ostringstream& out, const std::string& key, double value) {
  line(out, key, format_double(value));
}

std::string convention_name(CriticalConvention c) {
  return c == CriticalConvention::kScalingLimit ? "scaling_limit" : "with_sigma3_constant";
}

CriticalConvention convention_from_string(const std::string& name) {
  if (name == "scaling_limit") return CriticalConvention::kScalingLimit;
  if (name == "with_sigma3_constant") return CriticalConvention::kWithSigma3Constant;
  throw ConfigError("critical_convention: unknown value '" + name + "'");
}

void write_model(std::ostringstream& out, const ModelSpec& spec) {
  line(out, "a", spec.drift.a);
  line(out, "b", spec.drift.b);
  line(out, "alpha", spec.drift.alpha);
  line(out, "beta", spec.drift.beta);
  line(out, "gamma", spec.drift.gamma);
  line(out, "sigma1", spec.diffusion.sigma1);
  line(out, "sigma2", spec.diffusion.sigma2);
  line(out, "sigma3", spec.diffusion.sigma3);
  line(out, "rho", spec.diffusion.rho);
  line(out, "init.kind", to_string(spec.init.kind));
  line(out, "init.y0", spec.init.y0);
  line(out, "init.x0", spec.init.x0);
  line(out, "init.burn_in", spec.init.burn_in);
}

void write_vector(std::ostringstream& out, const std::string& key, const Vector5d& v) {
  std::string s;
  for (int j = 0; j < 5; ++j) s += (j ? "," : "") + format_double(v(j));
  line(out, key, s);
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& text, const std::string& field) {
  const std::string t = trim(text);
  double v = 0.0;
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  if (!t.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (t.empty() || ec != std::errc() || ptr != end) {
    throw ConfigError(field + ": expected a number, got '" + t + "'");
  }
  return v;
}

std::int64_t parse_int(const std::string& text, const std::string& field) {
  const std::string t = trim(text);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ConfigError(field + ": expected an integer, got '" + t + "'");
  }
  return v;
}

std::uint64_t parse_uint(const std::string& text, const std::string& field) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ConfigError(field + ": expected an unsigned integer, got '" + t + "'");
  }
  return v;
}

RunConfig parse_config(const std::string& text) {
  RunConfig config;
  std::string section;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string l = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (l.empty()) continue;
    if (l.front() == '[') {
      if (l.back() != ']') throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
      section = trim(l.substr(1, l.size() - 2));
      if (section != "experiment" && section != "output") {
        throw ConfigError("line " + std::to_string(line_no) + ": unknown section [" + section + "]");
      }
      if (section == "experiment") config.experiment.present = true;
      continue;
    }
    const auto eq = l.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(l.substr(0, eq));
    const std::string value = trim(l.substr(eq + 1));
    const std::string qualified = section.empty() ? key : section + "." + key;
    if (!seen.insert(qualified).second) throw ConfigError(qualified + ": duplicate key");

    ModelSpec& spec = config.spec;
    ExperimentSection& ex = config.experiment;
    if (section.empty()) {
      if (key == "a") spec.drift.a = parse_double(value, key);
      else if (key == "b") spec.drift.b = parse_double(value, key);
      else if (key == "alpha") spec.drift.alpha = parse_double(value, key);
      else if (key == "beta") spec.drift.beta = parse_double(value, key);
      else if (key == "gamma") spec.drift.gamma = parse_double(value, key);
      else if (key == "sigma1") spec.diffusion.sigma1 = parse_double(value, key);
      else if (key == "sigma2") spec.diffusion.sigma2 = parse_double(value, key);
      else if (key == "sigma3") spec.diffusion.sigma3 = parse_double(value, key);
      else if (key == "rho") spec.diffusion.rho = parse_double(value, key);
      else if (key == "init.kind") spec.init.kind = init_kind_from_string(value);
      else if (key == "init.y0") spec.init.y0 = parse_double(value, key);
      else if (key == "init.x0") spec.init.x0 = parse_double(value, key);
      else if (key == "init.burn_in") spec.init.burn_in = parse_double(value, key);
      else throw ConfigError(key + ": unknown key");
    } else if (section == "experiment") {
      if (key == "T") ex.T = parse_double(value, qualified);
      else if (key == "dt") ex.dt = parse_double(value, qualified);
      else if (key == "replications") ex.replications = static_cast<int>(parse_int(value, qualified));
      else if (key == "regime") ex.regime = regime_from_string(value);
      else if (key == "scheme") ex.scheme = scheme_from_string(value);
      else if (key == "seed") ex.seed = parse_uint(value, qualified);
      else if (key == "reference_draws") ex.reference_draws = static_cast<int>(parse_int(value, qualified));
      else if (key == "limit_dt") ex.limit_dt = parse_double(value, qualified);
      else if (key == "probe_T") ex.probe_T = parse_double(value, qualified);
      else if (key == "critical_convention") ex.convention = convention_from_string(value);
      else throw ConfigError(qualified + ": unknown key");
    } else {
      if (key == "dir") config.output.dir = value;
      else if (key == "format") {
        if (value != "csv") throw ConfigError("output.format: only 'csv' is supported");
        config.output.format = value;
      } else {
        throw ConfigError(qualified + ": unknown key");
      }
    }
  }
  check_domain(config.spec);
  const ExperimentSection& ex = config.experiment;
  if (ex.T && !(*ex.T > 0.0)) throw ConfigError("experiment.T: must be > 0");
  if (ex.dt && !(*ex.dt > 0.0)) throw ConfigError("experiment.dt: must be > 0");
  if (ex.replications && *ex.replications < 1) throw ConfigError("experiment.replications: must be >= 1");
  if (ex.reference_draws < 0) throw ConfigError("experiment.reference_draws: must be >= 0");
  if (!(ex.limit_dt > 0.0)) throw ConfigError("experiment.limit_dt: must be > 0");
  if (!(ex.probe_T >= 0.0)) throw ConfigError("experiment.probe_T: must be >= 0");
  return config;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << contents;
}

RunConfig load_config(const std::string& path) { return parse_config(read_file(path)); }

std::string serialize_config(const RunConfig& config) {
  std::ostringstream out;
  write_model(out, config.spec);
  const ExperimentSection& ex = config.experiment;
  if (ex.present) {
    out << "\n[experiment]\n";
    if (ex.T) line(out, "T", *ex.T);
    if (ex.dt) line(out, "dt", *ex.dt);
    if (ex.replications) line(out, "replications", std::to_string(*ex.replications));
    if (ex.regime) line(out, "regime", to_string(*ex.regime));
    line(out, "scheme", to_string(ex.scheme));
    if (ex.seed) line(out, "seed", std::to_string(*ex.seed));
    line(out, "reference_draws", std::to_string(ex.reference_draws));
    line(out, "limit_dt", ex.limit_dt);
    line(out, "probe_T", ex.probe_T);
    line(out, "critical_convention", convention_name(ex.convention));
  }
  out << "\n[output]\n";
  line(out, "dir", config.output.dir);
  line(out, "format", config.output.format);
  return out.str();
}

ExperimentPlan make_plan(const RunConfig& config, std::uint64_t seed) {
  const ExperimentSection& ex = config.experiment;
  if (!ex.T) throw ConfigError("experiment.T: required");
  if (!ex.dt) throw ConfigError("experiment.dt: required");
  if (!ex.replications) throw ConfigError("experiment.replications: required");
  ExperimentPlan plan;
  plan.spec = config.spec;
  plan.regime = ex.regime ? *ex.regime : classify_regime(config.spec.drift);
  plan.T = *ex.T;
  plan.dt = *ex.dt;
  plan.replications = *ex.replications;
  plan.base_seed = seed;
  plan.scheme = ex.scheme;
  plan.reference_draws = ex.reference_draws;
  plan.limit_dt = ex.limit_dt;
  plan.probe_T = ex.probe_T;
  plan.convention = ex.convention;
  return plan;
}

std::string format_path(const PathGrid& path) {
  std::ostringstream out;
  out << "t,y,x\n";
  for (Eigen::Index i = 0; i < path.size(); ++i) {
    out << format_double(path.time(i)) << ',' << format_double(path.y(i)) << ','
        << format_double(path.x(i)) << '\n';
  }
  return out.str();
}

PathGrid parse_path(const std::string& text) {
  std::istringstream in(text);
  std::string l;
  if (!std::getline(in, l) || trim(l) != "t,y,x") {
    throw ConfigError("path file: expected header 't,y,x'");
  }
  std::vector<double> t, y, x;
  int line_no = 1;
  while (std::getline(in, l)) {
    ++line_no;
    if (trim(l).empty()) continue;
    const auto fields = split(trim(l), ',');
    if (fields.size() != 3) {
      throw ConfigError("path file line " + std::to_string(line_no) + ": expected 3 columns");
    }
    t.push_back(parse_double(fields[0], "t"));
    y.push_back(parse_double(fields[1], "y"));
    x.push_back(parse_double(fields[2], "x"));
    if (y.back() < 0.0) {
      throw ConfigError("path file line " + std::to_string(line_no) + ": y must be >= 0");
    }
  }
  if (t.empty()) throw ConfigError("path file: no observations");
  PathGrid path;
  path.t0 = t.front();
  path.dt = t.size() >= 2 ? t[1] - t[0] : 0.0;
  if (t.size() >= 2 && !(path.dt > 0.0)) throw ConfigError("path file: time column must increase");
  path.y = Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()));
  path.x = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
  return path;
}

std::string format_path_metadata(const ModelSpec& spec, const PathGrid& path, Scheme scheme) {
  std::ostringstream out;
  write_model(out, spec);
  out << "\n[simulation]\n";
  line(out, "T", path.horizon());
  line(out, "dt", path.dt);
  line(out, "points", std::to_string(path.size()));
  line(out, "scheme", to_string(scheme));
  line(out, "seed", std::to_string(path.seed));
  line(out, "stream_id", std::to_string(path.stream_id));
  return out.str();
}

std::string format_moment_table(const MomentTable& table) {
  std::ostringstream out;
  if (table.mode == MomentTable::Mode::kTransient) {
    out << "# mode = transient\n# t = " << format_double(table.t) << '\n';
    out << "# converged = " << (table.converged ? "true" : "false") << '\n';
  } else {
    out << "# mode = stationary\n";
  }
  out << "k,l,value\n";
  for (int k = 0; k <= table.k_max(); ++k) {
    for (int l = 0; l <= table.l_max(); ++l) {
      out << k << ',' << l << ',' << format_double(table(k, l)) << '\n';
    }
  }
  return out.str();
}

std::string format_estimate(const DriftEstimate& e) {
  std::ostringstream out;
  line(out, "source", to_string(e.source));
  if (e.source != EstimatorSource::kContinuous) line(out, "n", e.n);
  line(out, "a", e.theta_hat(0));
  line(out, "b", e.theta_hat(1));
  line(out, "alpha", e.theta_hat(2));
  line(out, "beta", e.theta_hat(3));
  line(out, "gamma", e.theta_hat(4));
  line(out, "cond_gram1", e.cond1);
  line(out, "cond_gram2", e.cond2);
  return out.str();
}

std::string format_diffusion_estimate(const DiffusionEstimate& e, const QuadraticVariations& qv) {
  std::ostringstream out;
  line(out, "sigma1_sq", e.sigma1_sq);
  line(out, "sigma2_sq", e.sigma2_sq);
  line(out, "sigma3_sq", e.sigma3_sq);
  line(out, "sigma2_sq_floored", e.sigma2_sq_floored);
  line(out, "sigma3_sq_floored", e.sigma3_sq_floored);
  line(out, "rho", e.rho);
  line(out, "rho_raw", e.rho_raw);
  line(out, "rho_clamped", e.rho_clamped ? "true" : "false");
  line(out, "system_det", e.system_det);
  line(out, "system_scale", e.system_scale);
  line(out, "qv_y_T", qv.qv_y_T);
  line(out, "qv_x_T", qv.qv_x_T);
  line(out, "qv_x_halfT", qv.qv_x_halfT);
  line(out, "qcov_yx_T", qv.qcov_yx_T);
  line(out, "int_y_T", qv.int_y_T);
  line(out, "int_y_halfT", qv.int_y_halfT);
  return out.str();
}

std::string format_matrix(const std::string& label, const Eigen::MatrixXd& m) {
  std::ostringstream out;
  out << "[matrix " << label << ' ' << m.rows() << 'x' << m.cols() << "]\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << format_double(m(i, j));
    out << '\n';
  }
  return out.str();
}

std::string format_samples(const SampleMatrix& samples) {
  std::ostringstream out;
  out << "a,b,alpha,beta,gamma\n";
  for (Eigen::Index i = 0; i < samples.rows(); ++i) {
    for (int j = 0; j < 5; ++j) out << (j ? "," : "") << format_double(samples(i, j));
    out << '\n';
  }
  return out.str();
}

std::string format_report(const ExperimentPlan& plan, const LimitLawReport& r) {
  std::ostringstream out;
  line(out, "regime", to_string(r.regime));
  line(out, "T", plan.T);
  line(out, "dt", plan.dt);
  line(out, "seed", std::to_string(plan.base_seed));
  line(out, "replications", std::to_string(r.replications));
  line(out, "excluded", std::to_string(r.excluded));
  line(out, "included", std::to_string(r.scaled_errors.rows()));
  write_vector(out, "scaling", plan.scaling());
  line(out, "theory", r.theory == LimitLawReport::Theory::kNormal ? "normal" : "sample_based");
  if (r.theory == LimitLawReport::Theory::kSampleBased) {
    line(out, "reference_draws", std::to_string(r.reference.rows()));
    line(out, "reference_redraws", std::to_string(r.reference_redraws));
  }
  write_vector(out, "mean", r.mean);
  write_vector(out, "sd", r.sd);
  write_vector(out, "ks", r.ks);
  line(out, "ks_threshold", r.ks_threshold);
  std::string flags;
  for (int j = 0; j < 5; ++j) flags += std::string(j ? "," : "") + (r.ks_pass(j) ? "pass" : "fail");
  line(out, "ks_pass", flags);
  if (r.theory == LimitLawReport::Theory::kNormal) {
    line(out, "frobenius_gap", r.frobenius_gap);
    line(out, "frobenius_threshold", r.frobenius_threshold);
    line(out, "cov_pass", r.cov_pass ? "pass" : "fail");
  }
  if (!r.vx_sign.empty()) {
    const auto positive = std::count(r.vx_sign.begin(), r.vx_sign.end(), 1);
    line(out, "vx_positive", std::to_string(positive));
    line(out, "vx_nonpositive", std::to_string(r.vx_sign.size() - positive));
  }
  line(out, "pass", r.pass ? "true" : "false");
  out << '\n' << format_matrix("empirical_cov", r.empirical_cov);
  if (r.theory == LimitLawReport::Theory::kNormal) out << format_matrix("theory_cov", r.theory_cov);
  return out.str();
}

}  // namespace affine2f

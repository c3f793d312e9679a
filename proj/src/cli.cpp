#include "siren/cli.hpp"

#include "siren/config.hpp"
#include "siren/density_plugin.hpp"
#include "siren/harness.hpp"
#include "siren/oracle.hpp"
#include "siren/parallel.hpp"
#include "siren/rates.hpp"
#include "siren/selection.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>

namespace siren {

namespace {

// Thrown for bad input that is the caller's fault.
struct UserError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

void require_file(const std::string& path, const std::string& what)
{
  if (path.empty())
    throw UserError("missing --" + what);
  if (!std::filesystem::is_regular_file(path))
    throw UserError(what + " file '" + path + "' does not exist");
}

std::ofstream open_output(const std::string& path)
{
  if (path.empty())
    throw UserError("missing --out");
  std::ofstream out(path, std::ios::trunc);
  if (!out)
    throw UserError("cannot write '" + path + "'");
  return out;
}

struct CommonOptions
{
  std::string config_path;
  std::vector<std::string> overrides;
  std::string mode;
  long long seed = -1;
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonOptions& o)
{
  cmd->add_option("--config", o.config_path, "experiment config file");
  cmd->add_option("--set", o.overrides, "override a config key: key=value");
  cmd->add_option("--mode", o.mode, "threshold mode: theory or calibrated");
  cmd->add_option("--seed", o.seed, "base seed");
  cmd->add_option("--threads", o.threads, "worker cap");
}

Config load_config(const CommonOptions& o)
{
  Config cfg;
  if (!o.config_path.empty()) {
    require_file(o.config_path, "config");
    cfg = Config::load(o.config_path);
  }
  for (const auto& s : o.overrides)
    cfg.apply_override(s);
  if (!o.mode.empty())
    cfg.apply_override("mode=" + o.mode);
  if (o.seed >= 0)
    cfg.apply_override("seed=" + std::to_string(o.seed));
  if (o.threads > 0)
    set_worker_count(o.threads);
  return cfg;
}

double parse_number(const std::string& flag, const std::string& text)
{
  try {
    const auto v = parse_config_value(flag, text, false);
    if (v.type == Config::Type::number)
      return v.number;
  } catch (const ConfigError&) {
  }
  throw UserError("--" + flag + " expects a number, got '" + text + "'");
}

int cmd_simulate(const CommonOptions& o, const std::string& out_path, std::ostream& out)
{
  const ExperimentConfig cfg = experiment_from_config(load_config(o));
  auto file = open_output(out_path);
  const RiskReport report = run_experiment(cfg);
  write_report_csv(file, report);
  write_report_csv(out, report);
  return exit_ok;
}

int cmd_estimate(const CommonOptions& o, const std::string& data, const std::string& points_path,
                 const std::string& out_path, const std::string& design_density,
                 const std::string& aux_path, double gamma, std::ostream& out)
{
  Config raw = load_config(o);
  if (design_density != "known" && design_density != "unknown")
    throw UserError("--design-density must be 'known' or 'unknown'");
  const ExperimentConfig cfg = experiment_from_config(raw);
  require_file(data, "data");
  require_file(points_path, "points");
  const Sample sample = read_sample_csv(data);
  const auto points = read_points_csv(points_path);
  for (const auto& p : points)
    if (std::abs(p.x) > 0.5 || std::abs(p.y) > 0.5)
      throw UserError("estimation points must lie in [-1/2, 1/2]^2");
  const auto n = static_cast<std::int64_t>(sample.size());
  if (n < 3)
    throw UserError("the sample needs at least 3 observations");
  const Kernel1D kernel = cfg.kernel();
  const NoiseEnvelope env = cfg.noise.envelope();

  std::vector<SelectionResult> results;
  if (design_density == "unknown") {
    require_file(aux_path, "aux-data");
    if (!(gamma > 0.0))
      throw UserError("--gamma must be positive");
    const Sample aux = read_sample_csv(aux_path);
    const DensityEstimate de = kde_truncated(aux.xs(), n, gamma, kernel);
    if (de.truncation_active)
      out << "warning: density estimate truncated at b_n = " << de.b_n << '\n';
    const Estimator est(sample, de.as_design(), kernel);
    const DerivedConstants dc = derive_constants(n, env, plugin_params(cfg.params(), de));
    results = estimate_on_grid(points, make_plugin_context(est, cfg.n_theta, dc, de,
                                                           kernel.sup_norm(), kernel.l1_norm()));
  } else {
    const Estimator est(sample, cfg.design.density(), kernel);
    const DerivedConstants dc = derive_constants(n, env, cfg.params());
    results = estimate_on_grid(points, make_selection_context(est, cfg.n_theta, dc, kernel.sup_norm()));
  }

  auto file = open_output(out_path);
  file << "t1,t2,estimate,theta_hat_angle,h_hat,objective,r1,r2,th\n" << std::setprecision(17);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& r = results[i];
    file << points[i].x << ',' << points[i].y << ',' << r.estimate << ',' << r.theta_hat.angle()
         << ',' << r.h_hat << ',' << r.objective << ',' << r.r1 << ',' << r.r2 << ',' << r.th
         << '\n';
  }
  out << "wrote " << points.size() << " rows to " << out_path << '\n';
  return exit_ok;
}

int cmd_oracle(const std::string& link, long long n, double y, const std::string& kernel_type,
               int kernel_order, double omega, std::ostream& out)
{
  if (n < 3)
    throw UserError("--n must be >= 3");
  const LinkFunction f = parse_link_spec(link);
  const Kernel1D k = make_kernel(kernel_type, kernel_order);
  const double h_min = bandwidth_scales(n, omega).h_min;
  if (h_min > 1.0)
    throw UserError("h_min exceeds 1 for this n; increase --n");
  const OracleReport rep = oracle_bandwidth(f, k, n, y, h_min);
  out << std::setprecision(10) << "h_star = " << rep.h_star << '\n'
      << "delta_star = " << rep.delta_star_at_h_star << '\n'
      << "slack = " << rep.criterion_slack << '\n'
      << "at_h_min = " << (rep.at_floor ? "true" : "false") << '\n';
  return exit_ok;
}

int cmd_rates(long long n, double beta, double L, const std::string& p_text, double r,
              std::ostream& out)
{
  const double p = parse_number("p", p_text);
  const RateQuery q{ n, beta, L, p, r };
  out << std::setprecision(8) << "psi = " << pointwise_rate(q) << '\n';
  const GlobalRate g = global_rate(q);
  out << "phi_upper = " << g.upper << '\n'
      << "phi_lower = " << g.lower << '\n'
      << "regime = " << to_string(g.regime) << '\n';
  return exit_ok;
}

int cmd_calibrate(const CommonOptions& o, std::ostream& out, std::ostream& err)
{
  const ExperimentConfig cfg = experiment_from_config(load_config(o));
  const CalibrationResult res = calibrate(cfg);
  std::ostream& table = res.kappa ? out : err;
  table << "kappa,runs,h_below_1,fraction,qualifies\n";
  for (const auto& row : res.sweep)
    table << row.kappa << ',' << row.runs << ',' << row.small_h << ',' << row.fraction << ','
          << (row.qualifies ? "yes" : "no") << '\n';
  if (!res.kappa) {
    err << "calibration failed: no kappa in [2^-4, 2^6] keeps h_hat < 1 within 5% of null runs\n";
    return exit_user_error;
  }
  std::ostringstream lit;
  lit << std::setprecision(17) << *res.kappa;
  out << "kappa = " << lit.str() << '\n';
  if (!o.config_path.empty()) {
    persist_config_value(o.config_path, "kappa", lit.str());
    out << "saved kappa to " << o.config_path << '\n';
  }
  return exit_ok;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
  CLI::App app{ "Adaptive single-index kernel regression" };
  app.require_subcommand(1);

  CommonOptions sim_opts, est_opts, cal_opts;
  std::string sim_out, est_data, est_points, est_out, aux_data, design_density = "known";
  double gamma = 2.0;
  std::string link_spec, kernel_type = "triangular", p_text = "inf";
  long long orc_n = 0, rates_n = 0;
  double orc_y = 0.0, omega = 2.0, beta = 1.0, L = 1.0, r = 1.0;
  int kernel_order = 1;

  auto* sim = app.add_subcommand("simulate", "Monte Carlo risk report");
  add_common(sim, sim_opts);
  sim->add_option("--out", sim_out, "report CSV")->required();

  auto* est = app.add_subcommand("estimate", "adaptive estimates at given points");
  add_common(est, est_opts);
  est->add_option("--data", est_data, "sample CSV x1,x2,y")->required();
  est->add_option("--points", est_points, "points CSV t1,t2")->required();
  est->add_option("--out", est_out, "results CSV")->required();
  est->add_option("--design-density", design_density, "known or unknown");
  est->add_option("--aux-data", aux_data, "auxiliary design sample CSV x1,x2,y");
  est->add_option("--gamma", gamma, "design density smoothness");

  auto* orc = app.add_subcommand("oracle-bandwidth", "oracle bandwidth of a link");
  orc->add_option("--link", link_spec, "e.g. holder:beta=1,L=1")->required();
  orc->add_option("--n", orc_n, "sample size")->required();
  orc->add_option("--y", orc_y, "index value");
  orc->add_option("--kernel-type", kernel_type, "triangular or orthopoly");
  orc->add_option("--kernel-order", kernel_order, "orthopoly order");
  orc->add_option("--omega", omega, "noise tail exponent for h_min");

  auto* rates = app.add_subcommand("rates", "rate formulas");
  rates->add_option("--n", rates_n, "sample size")->required();
  rates->add_option("--beta", beta, "smoothness")->required();
  rates->add_option("--L", L, "radius")->required();
  rates->add_option("--p", p_text, "Nikol'skii index, inf for Hoelder");
  rates->add_option("--r", r, "risk order");

  auto* cal = app.add_subcommand("calibrate", "null-experiment calibration of kappa");
  add_common(cal, cal_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_user_error;
  }

  try {
    if (*sim)
      return cmd_simulate(sim_opts, sim_out, out);
    if (*est)
      return cmd_estimate(est_opts, est_data, est_points, est_out, design_density, aux_data,
                          gamma, out);
    if (*orc)
      return cmd_oracle(link_spec, orc_n, orc_y, kernel_type, kernel_order, omega, out);
    if (*rates)
      return cmd_rates(rates_n, beta, L, p_text, r, out);
    if (*cal)
      return cmd_calibrate(cal_opts, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return exit_user_error;
  } catch (const CsvError& e) {
    err << "csv error (line " << e.line() << "): " << e.what() << '\n';
    return exit_user_error;
  } catch (const UserError& e) {
    err << "error: " << e.what() << '\n';
    return exit_user_error;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return exit_user_error;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return exit_internal_error;
  }
  return exit_internal_error;
}

} // namespace siren

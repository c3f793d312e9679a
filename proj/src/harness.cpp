#include "siren/harness.hpp"

#include "siren/density_plugin.hpp"
#include "siren/parallel.hpp"
#include "siren/random.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <set>
#include <stdexcept>

namespace siren {

// ---------------------------------------------------------------- noise

void NoiseSpec::validate() const
{
  if (kind == "gaussian") {
    if (!(sigma >= 0.0) || !std::isfinite(sigma))
      throw ConfigError("noise.sigma", "must be a finite value >= 0");
  } else if (kind == "laplace") {
    if (!(b > 0.0) || !std::isfinite(b))
      throw ConfigError("noise.b", "must be positive");
  } else if (kind == "sym_weibull") {
    if (!(omega > 0.0) || !(scale > 0.0))
      throw ConfigError("noise.omega", "shape and scale must be positive");
  } else {
    throw ConfigError("noise.kind", "unknown noise kind '" + kind + "'");
  }
}

NoiseEnvelope NoiseSpec::envelope() const
{
  validate();
  if (kind == "gaussian")
    return { 0.5, sigma > 0.0 ? std::min(1.0, 1.0 / (2.0 * sigma * sigma)) : 1.0, 2.0 };
  if (kind == "laplace")
    return { 0.5, std::min(1.0, 1.0 / b), 1.0 };
  return { 0.5, std::min(1.0, std::pow(scale, -omega)), omega };
}

double NoiseSpec::tail(double x) const
{
  if (kind == "gaussian")
    return sigma > 0.0 ? 0.5 * std::erfc(x / (sigma * std::numbers::sqrt2)) : (x < 0.0 ? 1.0 : 0.0);
  if (kind == "laplace")
    return 0.5 * std::exp(-x / b);
  return 0.5 * std::exp(-std::pow(x / scale, omega));
}

double NoiseSpec::draw(std::mt19937_64& rng) const
{
  if (kind == "gaussian") {
    if (sigma == 0.0)
      return 0.0;
    return std::normal_distribution<double>(0.0, sigma)(rng);
  }
  const bool negative = (rng() >> 63) != 0;
  double mag;
  if (kind == "laplace")
    mag = std::exponential_distribution<double>(1.0 / b)(rng);
  else
    mag = std::weibull_distribution<double>(omega, scale)(rng);
  return negative ? -mag : mag;
}

// ---------------------------------------------------------------- design

void DesignSpec::validate() const
{
  if (kind == "uniform")
    return;
  if (kind == "box") {
    if (!(half_width >= 3.0) || !std::isfinite(half_width))
      throw ConfigError("design.half_width", "must be >= 3 so the density is positive on [-3, 3]^2");
    return;
  }
  if (kind == "truncated_gaussian") {
    if (!(sigma > 0.0))
      throw ConfigError("design.sigma", "must be positive");
    if (!(radius >= 3.0) || !std::isfinite(radius))
      throw ConfigError("design.radius", "must be >= 3");
    return;
  }
  throw ConfigError("design.kind", "unknown design kind '" + kind + "'");
}

DesignDensity DesignSpec::density() const
{
  validate();
  if (kind == "uniform")
    return DesignDensity::uniform_box(3.0);
  if (kind == "box")
    return DesignDensity::uniform_box(half_width);
  const double s = sigma, rad = radius;
  const double z = std::erf(rad / (s * std::numbers::sqrt2));
  auto axis = [s, rad, z](double x) {
    if (std::abs(x) > rad)
      return 0.0;
    return std::exp(-0.5 * x * x / (s * s)) / (s * z * std::sqrt(2.0 * std::numbers::pi));
  };
  return { [axis](Point x) { return axis(x.x) * axis(x.y); }, axis(3.0) * axis(3.0),
           axis(0.0) * axis(0.0) };
}

Point DesignSpec::draw(std::mt19937_64& rng) const
{
  if (kind == "uniform" || kind == "box") {
    const double w = kind == "uniform" ? 3.0 : half_width;
    std::uniform_real_distribution<double> u(-w, w);
    const double x = u(rng);
    return { x, u(rng) };
  }
  std::normal_distribution<double> nd(0.0, sigma);
  auto coord = [&] {
    for (;;) {
      const double v = nd(rng);
      if (std::abs(v) <= radius)
        return v;
    }
  };
  const double x = coord();
  return { x, coord() };
}

// ---------------------------------------------------------------- links

double LinkSpec::bump_scale(std::int64_t n) const
{
  if (h_scale > 0.0)
    return h_scale;
  const double dn = static_cast<double>(n);
  return std::min(1.0, std::pow(frak_a * std::log(dn) / (L * L * dn), 1.0 / (2.0 * beta + 1.0)));
}

LinkFunction LinkSpec::make(std::int64_t n) const
{
  if (kind == "bump")
    return bump_link(beta, L, bump_scale(n));
  if (kind == "holder")
    return holder_link(beta, L);
  if (kind == "power")
    return power_link(a);
  if (kind == "constant")
    return constant_link(c);
  if (kind == "linear")
    return linear_link(slope);
  throw ConfigError("link.kind", "unknown link kind '" + kind + "'");
}

// ---------------------------------------------------------------- config

void ExperimentConfig::validate() const
{
  if (n_values.empty())
    throw ConfigError("n_values", "must not be empty");
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (n_values[i] < 3)
      throw ConfigError("n_values", "every n must be >= 3");
    if (i > 0 && n_values[i] <= n_values[i - 1])
      throw ConfigError("n_values", "must be strictly ascending");
  }
  if (reps < 1)
    throw ConfigError("reps", "must be >= 1");
  if (n_theta < 4 || n_theta % 2 != 0)
    throw ConfigError("n_theta", "must be even and >= 4");
  if (!(r >= 1.0))
    throw ConfigError("risk_order", "must be >= 1");
  if (!(kappa > 0.0))
    throw ConfigError("kappa", "must be positive");
  if (risk != "pointwise" && risk != "global")
    throw ConfigError("risk", "must be \"pointwise\" or \"global\"");
  if (global_grid < 1)
    throw ConfigError("global_grid", "must be >= 1");
  if (!(gamma > 0.0))
    throw ConfigError("gamma", "must be positive");
  if (!(std::hypot(theta_star[0], theta_star[1]) > 0.0))
    throw ConfigError("theta_star", "must be a nonzero vector");
  noise.validate();
  design.validate();
  if (std::abs(t.x) > 0.5 || std::abs(t.y) > 0.5)
    throw ConfigError("t", "must lie in [-1/2, 1/2]^2");
}

Direction ExperimentConfig::index_direction() const
{
  return Direction::normalize(theta_star[0], theta_star[1]);
}

LinkFunction ExperimentConfig::link_for(std::int64_t n) const
{
  const double norm = std::hypot(theta_star[0], theta_star[1]);
  LinkFunction f = link.make(n);
  return norm == 1.0 ? f : rescaled_argument(f, norm);
}

Kernel1D ExperimentConfig::kernel() const { return make_kernel(kernel_type, kernel_order); }

ProcedureParams ExperimentConfig::params() const
{
  const Kernel1D k = kernel();
  ProcedureParams p;
  p.r = r;
  p.g_lower = design.density().g_lower_on_core;
  p.kernel_sup = k.sup_norm();
  p.kernel_l1 = k.l1_norm();
  p.lipschitz_q = k.lipschitz();
  p.mode = mode;
  p.kappa = kappa;
  return p;
}

const std::vector<std::string>& experiment_config_keys()
{
  static const std::vector<std::string> keys{
    "n_values",        "reps",         "seed",         "n_theta",       "risk_order",
    "mode",            "kappa",        "risk",         "t",             "global_grid",
    "theta_star",      "design_density", "gamma",      "kernel.type",   "kernel.order",
    "link.kind",       "link.beta",    "link.L",       "link.h_scale",  "link.frak_a",
    "link.c",          "link.a",       "link.slope",   "noise.kind",    "noise.sigma",
    "noise.b",         "noise.omega",  "noise.scale",  "design.kind",   "design.half_width",
    "design.sigma",    "design.radius", "calibrate.reps", "calibrate.n_values",
  };
  return keys;
}

namespace {

std::vector<std::int64_t> int_list(const Config& cfg, const std::string& key,
                                   const std::vector<std::int64_t>& fallback)
{
  if (!cfg.has(key))
    return fallback;
  std::vector<std::int64_t> out;
  for (double v : cfg.get_array(key, {})) {
    if (v != std::floor(v) || v < 0 || v > 9e15)
      throw ConfigError(key, "entries must be nonnegative integers");
    out.push_back(static_cast<std::int64_t>(v));
  }
  return out;
}

} // namespace

ExperimentConfig experiment_from_config(const Config& cfg)
{
  const auto unknown = cfg.unknown_keys(experiment_config_keys());
  if (!unknown.empty())
    throw ConfigError(unknown.front(), "unknown configuration key");

  ExperimentConfig e;
  e.n_values = int_list(cfg, "n_values", e.n_values);
  const long long reps = cfg.get_int("reps", static_cast<long long>(e.reps));
  if (reps < 1)
    throw ConfigError("reps", "must be >= 1");
  e.reps = static_cast<std::size_t>(reps);
  const long long seed = cfg.get_int("seed", static_cast<long long>(e.base_seed));
  if (seed < 0)
    throw ConfigError("seed", "must be >= 0");
  e.base_seed = static_cast<std::uint64_t>(seed);
  e.n_theta = static_cast<int>(cfg.get_int("n_theta", e.n_theta));
  e.r = cfg.get_double("risk_order", e.r);

  const std::string mode = cfg.get_string("mode", "calibrated");
  if (mode == "theory")
    e.mode = ThresholdMode::theory;
  else if (mode == "calibrated")
    e.mode = ThresholdMode::calibrated;
  else
    throw ConfigError("mode", "must be \"theory\" or \"calibrated\"");
  e.kappa = cfg.get_double("kappa", e.kappa);
  e.risk = cfg.get_string("risk", e.risk);
  const auto t = cfg.get_array("t", { e.t.x, e.t.y });
  if (t.size() != 2)
    throw ConfigError("t", "expected two coordinates");
  e.t = { t[0], t[1] };
  e.global_grid = static_cast<int>(cfg.get_int("global_grid", e.global_grid));
  const auto th = cfg.get_array("theta_star", { e.theta_star[0], e.theta_star[1] });
  if (th.size() != 2)
    throw ConfigError("theta_star", "expected two coordinates");
  e.theta_star[0] = th[0];
  e.theta_star[1] = th[1];

  const std::string dd = cfg.get_string("design_density", "known");
  if (dd != "known" && dd != "unknown")
    throw ConfigError("design_density", "must be \"known\" or \"unknown\"");
  e.plugin_density = dd == "unknown";
  e.gamma = cfg.get_double("gamma", e.gamma);

  e.kernel_type = cfg.get_string("kernel.type", e.kernel_type);
  e.kernel_order = static_cast<int>(cfg.get_int("kernel.order", e.kernel_order));
  try {
    (void)e.kernel();
  } catch (const std::invalid_argument& ex) {
    throw ConfigError("kernel.type", ex.what());
  }

  e.link.kind = cfg.get_string("link.kind", e.link.kind);
  e.link.beta = cfg.get_double("link.beta", e.link.beta);
  e.link.L = cfg.get_double("link.L", e.link.L);
  e.link.h_scale = cfg.get_double("link.h_scale", e.link.h_scale);
  e.link.frak_a = cfg.get_double("link.frak_a", e.link.frak_a);
  e.link.c = cfg.get_double("link.c", e.link.c);
  e.link.a = cfg.get_double("link.a", e.link.a);
  e.link.slope = cfg.get_double("link.slope", e.link.slope);
  try {
    (void)e.link.make(e.n_values.empty() ? 3 : e.n_values.front());
  } catch (const std::invalid_argument& ex) {
    throw ConfigError("link.kind", ex.what());
  }

  e.noise.kind = cfg.get_string("noise.kind", e.noise.kind);
  e.noise.sigma = cfg.get_double("noise.sigma", e.noise.sigma);
  e.noise.b = cfg.get_double("noise.b", e.noise.b);
  e.noise.omega = cfg.get_double("noise.omega", e.noise.omega);
  e.noise.scale = cfg.get_double("noise.scale", e.noise.scale);

  e.design.kind = cfg.get_string("design.kind", e.design.kind);
  e.design.half_width = cfg.get_double("design.half_width", e.design.half_width);
  e.design.sigma = cfg.get_double("design.sigma", e.design.sigma);
  e.design.radius = cfg.get_double("design.radius", e.design.radius);

  const long long creps = cfg.get_int("calibrate.reps", static_cast<long long>(e.calibrate_reps));
  if (creps < 1)
    throw ConfigError("calibrate.reps", "must be >= 1");
  e.calibrate_reps = static_cast<std::size_t>(creps);
  e.calibrate_n_values = int_list(cfg, "calibrate.n_values", {});

  e.validate();
  return e;
}

// ---------------------------------------------------------------- samples

Sample gen_sample(const ExperimentConfig& cfg, std::int64_t n, std::size_t rep)
{
  if (n < 1)
    throw std::invalid_argument("sample size must be positive");
  auto design_rng = make_rng(cfg.base_seed, static_cast<std::uint64_t>(n), rep, Stream::design);
  auto noise_rng = make_rng(cfg.base_seed, static_cast<std::uint64_t>(n), rep, Stream::noise);
  const LinkFunction f = cfg.link_for(n);
  const Direction index = cfg.index_direction();
  std::vector<Point> xs(static_cast<std::size_t>(n));
  std::vector<double> ys(xs.size());
  for (auto& x : xs)
    x = cfg.design.draw(design_rng);
  for (std::size_t i = 0; i < xs.size(); ++i)
    ys[i] = f(index.dot(xs[i])) + cfg.noise.draw(noise_rng);
  return Sample(std::move(xs), std::move(ys));
}

Sample gen_aux_sample(const ExperimentConfig& cfg, std::int64_t n, std::size_t rep)
{
  auto rng = make_rng(cfg.base_seed, static_cast<std::uint64_t>(n), rep, Stream::aux_design);
  std::vector<Point> xs(static_cast<std::size_t>(n));
  for (auto& x : xs)
    x = cfg.design.draw(rng);
  return Sample(std::move(xs), std::vector<double>(xs.size(), 0.0));
}

std::vector<Direction> direction_family(int count)
{
  if (count < 1)
    throw std::invalid_argument("direction family needs N >= 1");
  std::vector<Direction> out;
  for (int j = 1; j <= count; ++j)
    out.push_back(Direction::from_angle(static_cast<double>(j) / count));
  return out;
}

double axis_angle(Direction a, Direction b)
{
  const double c = std::min(1.0, std::abs(a.dot(b)));
  const double s = std::abs(a.x() * b.y() - a.y() * b.x());
  return std::atan2(s, c);
}

// ---------------------------------------------------------------- risk

namespace {

std::vector<Point> risk_points(const ExperimentConfig& cfg)
{
  if (cfg.risk == "pointwise")
    return { cfg.t };
  std::vector<Point> pts;
  const int g = cfg.global_grid;
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j)
      pts.push_back({ -0.5 + (i + 0.5) / g, -0.5 + (j + 0.5) / g });
  return pts;
}

struct RepOutcome
{
  double error;
  double h_hat;
  double angle;
};

RepOutcome run_replication(const ExperimentConfig& cfg, std::int64_t n, std::size_t rep,
                           const std::vector<Point>& pts, const std::vector<double>& truth,
                           const Kernel1D& kernel, const DerivedConstants& dc)
{
  const Sample sample = gen_sample(cfg, n, rep);
  std::vector<SelectionResult> sel(pts.size());
  auto run_all = [&](const SelectionContext& ctx) {
    for (std::size_t i = 0; i < pts.size(); ++i)
      sel[i] = select(pts[i], ctx);
  };
  if (cfg.plugin_density) {
    const DensityEstimate de = kde_truncated(gen_aux_sample(cfg, n, rep).xs(), n, cfg.gamma, kernel);
    const Estimator est(sample, de.as_design(), kernel);
    const DerivedConstants dcp =
      derive_constants(n, cfg.noise.envelope(), plugin_params(cfg.params(), de));
    run_all(make_plugin_context(est, cfg.n_theta, dcp, de, kernel.sup_norm(), kernel.l1_norm()));
  } else {
    const Estimator est(sample, cfg.design.density(), kernel);
    run_all(make_selection_context(est, cfg.n_theta, dc, kernel.sup_norm()));
  }

  const Direction index = cfg.index_direction();
  double err_r = 0.0, h = 0.0, angle = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    err_r += std::pow(std::abs(sel[i].estimate - truth[i]), cfg.r);
    h += sel[i].h_hat;
    angle += axis_angle(sel[i].theta_hat, index);
  }
  const double m = static_cast<double>(pts.size());
  return { std::pow(err_r / m, 1.0 / cfg.r), h / m, angle / m };
}

} // namespace

McResult mc_risk(const ExperimentConfig& cfg, std::int64_t n)
{
  cfg.validate();
  const Kernel1D kernel = cfg.kernel();
  const DerivedConstants dc = derive_constants(n, cfg.noise.envelope(), cfg.params());
  const auto pts = risk_points(cfg);
  const LinkFunction f = cfg.link_for(n);
  const Direction index = cfg.index_direction();
  std::vector<double> truth;
  for (const auto& p : pts)
    truth.push_back(f(index.dot(p)));

  std::vector<RepOutcome> out(cfg.reps);
  parallel_for(cfg.reps, [&](std::size_t rep) {
    out[rep] = run_replication(cfg, n, rep, pts, truth, kernel, dc);
  });

  McResult res;
  const double reps = static_cast<double>(cfg.reps);
  double h_sum = 0.0, angle_sum = 0.0;
  for (const auto& o : out) {
    res.errors.push_back(o.error);
    res.h_hats.push_back(o.h_hat);
    h_sum += o.h_hat;
    angle_sum += o.angle;
  }
  res.row.n = n;
  res.row.mean_h_hat = h_sum / reps;
  res.row.mean_angle_err = angle_sum / reps;

  if (cfg.risk == "pointwise") {
    std::vector<double> powered;
    double total = 0.0;
    for (double e : res.errors) {
      powered.push_back(std::pow(e, cfg.r));
      total += powered.back();
    }
    res.row.risk = std::pow(total / reps, 1.0 / cfg.r);
    double se = 0.0;
    if (cfg.reps > 1) {
      std::vector<double> loo;
      double loo_mean = 0.0;
      for (double v : powered) {
        loo.push_back(std::pow(std::max(0.0, total - v) / (reps - 1.0), 1.0 / cfg.r));
        loo_mean += loo.back();
      }
      loo_mean /= reps;
      double ss = 0.0;
      for (double v : loo)
        ss += (v - loo_mean) * (v - loo_mean);
      se = std::sqrt((reps - 1.0) / reps * ss);
    }
    res.row.std_error = se;
  } else {
    double total = 0.0;
    for (double e : res.errors)
      total += e;
    const double mean = total / reps;
    double ss = 0.0;
    for (double e : res.errors)
      ss += (e - mean) * (e - mean);
    res.row.risk = mean;
    res.row.std_error = cfg.reps > 1 ? std::sqrt(ss / (reps - 1.0) / reps) : 0.0;
  }
  return res;
}

RiskReport run_experiment(const ExperimentConfig& cfg)
{
  RiskReport report;
  for (auto n : cfg.n_values)
    report.rows.push_back(mc_risk(cfg, n).row);
  return report;
}

void write_report_csv(std::ostream& out, const RiskReport& report)
{
  out << "n,risk,std_error,mean_h_hat,mean_angle_err\n";
  out << std::setprecision(17);
  for (const auto& r : report.rows)
    out << r.n << ',' << r.risk << ',' << r.std_error << ',' << r.mean_h_hat << ','
        << r.mean_angle_err << '\n';
}

RiskReport read_report_csv(std::istream& in)
{
  RiskReport report;
  const auto rows =
    read_numeric_csv(in, { "n", "risk", "std_error", "mean_h_hat", "mean_angle_err" });
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r[0] != std::floor(r[0]) || r[0] < 0)
      throw CsvError("column n must hold nonnegative integers", i + 2);
    report.rows.push_back({ static_cast<std::int64_t>(r[0]), r[1], r[2], r[3], r[4] });
  }
  return report;
}

RateFit rate_fit(const RiskReport& report)
{
  std::set<std::int64_t> distinct;
  for (const auto& r : report.rows)
    distinct.insert(r.n);
  if (distinct.size() < 3)
    throw std::invalid_argument("rate fit needs at least three distinct n");
  std::vector<double> x, y;
  for (const auto& r : report.rows) {
    if (!(r.risk > 0.0) || r.n < 3)
      throw std::invalid_argument("rate fit needs positive risks and n >= 3");
    const double n = static_cast<double>(r.n);
    x.push_back(std::log(std::log(n) / n));
    y.push_back(std::log(r.risk));
  }
  const double m = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - intercept - slope * x[i];
    ssr += e * e;
  }
  const double se = x.size() > 2 ? std::sqrt(ssr / (m - 2.0) / sxx) : 0.0;
  return { slope, intercept, se };
}

// ---------------------------------------------------------------- calibration

CalibrationResult calibrate(const ExperimentConfig& cfg)
{
  cfg.validate();
  ExperimentConfig null_cfg = cfg;
  null_cfg.link = LinkSpec{};
  null_cfg.link.kind = "constant";
  null_cfg.link.c = 0.0;
  null_cfg.mode = ThresholdMode::calibrated;
  null_cfg.base_seed = splitmix64(cfg.base_seed ^ 0xca11b7a7e5ULL);

  std::vector<double> kappas;
  for (int e = -4; e <= 6; ++e)
    kappas.push_back(std::ldexp(1.0, e));

  const auto ns = cfg.calibrate_n_values.empty() ? cfg.n_values : cfg.calibrate_n_values;
  const Kernel1D kernel = cfg.kernel();
  const NoiseEnvelope env = cfg.noise.envelope();
  ProcedureParams params = null_cfg.params();

  std::vector<std::size_t> small(kappas.size(), 0);
  std::size_t runs = 0;
  for (auto n : ns) {
    params.kappa = 1.0;
    const Grids grids = build_grids(cfg.n_theta, derive_constants(n, env, params));
    const double frak_h = bandwidth_scales(n, env.omega).frak_h;
    std::vector<std::vector<char>> flags(null_cfg.calibrate_reps,
                                         std::vector<char>(kappas.size(), 0));
    parallel_for(null_cfg.calibrate_reps, [&](std::size_t rep) {
      const Estimator est(gen_sample(null_cfg, n, rep), cfg.design.density(), kernel);
      const LocalEstimates le = compute_local_estimates(est, grids, cfg.t);
      const double grid_max = est.preliminary_sup(frak_h, 0.0).grid_max;
      for (std::size_t i = 0; i < kappas.size(); ++i) {
        ProcedureParams p = params;
        p.kappa = kappas[i];
        const DerivedConstants dc = derive_constants(n, env, p);
        const double f_hat_inf = 2.0 * grid_max + 2.0 * dc.C5;
        const auto th = threshold_table(grids, n, f_hat_inf, dc, kernel.sup_norm());
        flags[rep][i] = select_from(le, grids, th).h_index > 0 ? 1 : 0;
      }
    });
    for (const auto& f : flags)
      for (std::size_t i = 0; i < kappas.size(); ++i)
        small[i] += static_cast<std::size_t>(f[i]);
    runs += null_cfg.calibrate_reps;
  }

  CalibrationResult res;
  for (std::size_t i = 0; i < kappas.size(); ++i) {
    const double frac = static_cast<double>(small[i]) / static_cast<double>(runs);
    const bool ok = frac <= 0.05;
    res.sweep.push_back({ kappas[i], runs, small[i], frac, ok });
    if (ok && !res.kappa)
      res.kappa = kappas[i];
  }
  return res;
}

} // namespace siren

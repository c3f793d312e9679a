#pragma once

#include "siren/config.hpp"
#include "siren/constants.hpp"
#include "siren/links.hpp"
#include "siren/sample.hpp"
#include "siren/selection.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace siren {

//! gaussian (sigma), laplace (scale b) or sym_weibull (shape omega, scale).
struct NoiseSpec
{
  std::string kind = "gaussian";
  double sigma = 0.5;
  double b = 1.0;
  double omega = 1.5;
  double scale = 1.0;

  void validate() const;
  //! Envelope (Upsilon, Omega, omega) with P(eps > x) <= Upsilon exp(-Omega x^omega):
  //!   gaussian     (1/2, min(1, 1/(2 sigma^2)), 2)
  //!   laplace      (1/2, min(1, 1/b), 1)
  //!   sym_weibull  (1/2, min(1, scale^-omega), omega)
  NoiseEnvelope envelope() const;
  //! Exact P(eps > x), x >= 0.
  double tail(double x) const;
  double draw(std::mt19937_64& rng) const;
};

//! uniform on [-3, 3]^2, box (uniform on [-half_width, half_width]^2) or
//! truncated_gaussian (independent N(0, sigma^2) coordinates cut to [-radius, radius]).
struct DesignSpec
{
  std::string kind = "uniform";
  double half_width = 3.0;
  double sigma = 2.0;
  double radius = 4.0;

  void validate() const;
  DesignDensity density() const;
  Point draw(std::mt19937_64& rng) const;
};

//! Link description; for the bump, a nonpositive h_scale selects the
//! n-dependent scale (frak_a ln n / (L^2 n))^{1 / (2 beta + 1)}.
struct LinkSpec
{
  std::string kind = "bump";
  double beta = 1.0;
  double L = 1.0;
  double h_scale = 1.0;
  double frak_a = 1.0;
  double c = 1.0;
  double a = 0.5;
  double slope = 1.0;

  double bump_scale(std::int64_t n) const;
  LinkFunction make(std::int64_t n) const;
};

struct ExperimentConfig
{
  std::vector<std::int64_t> n_values{ 1024, 2048, 4096, 8192, 16384 };
  LinkSpec link;
  double theta_star[2] = { 0.5403023058681398, 0.8414709848078965 }; // (cos 1, sin 1)
  NoiseSpec noise;
  DesignSpec design;
  double r = 1.0;
  std::size_t reps = 200;
  std::uint64_t base_seed = 1;
  int n_theta = 64;
  ThresholdMode mode = ThresholdMode::calibrated;
  double kappa = 1.0;
  std::string kernel_type = "triangular";
  int kernel_order = 1;
  std::string risk = "pointwise"; // or "global"
  Point t{ 0.0, 0.0 };
  int global_grid = 33;
  bool plugin_density = false; // design density estimated from an auxiliary sample
  double gamma = 2.0;
  std::size_t calibrate_reps = 100;
  std::vector<std::int64_t> calibrate_n_values; // empty: use n_values

  void validate() const;
  //! Unit index direction theta_star / |theta_star|.
  Direction index_direction() const;
  //! f_{theta*}(z) = f(|theta*| z) for the sample size n.
  LinkFunction link_for(std::int64_t n) const;
  Kernel1D kernel() const;
  ProcedureParams params() const;
};

//! Every key understood by experiment_from_config.
const std::vector<std::string>& experiment_config_keys();

//! Throws ConfigError naming the key on type errors, unknown keys or invalid values.
ExperimentConfig experiment_from_config(const Config& cfg);

//! Deterministic in (base_seed, n, rep); design and noise use separate streams.
Sample gen_sample(const ExperimentConfig& cfg, std::int64_t n, std::size_t rep);
//! Auxiliary design sample of size n from an independent stream, responses 0.
Sample gen_aux_sample(const ExperimentConfig& cfg, std::int64_t n, std::size_t rep);

//! theta_j = (cos(j/N), sin(j/N)), j = 1..N.
std::vector<Direction> direction_family(int count);

//! Angle between two axes, ignoring orientation, in [0, pi/2].
double axis_angle(Direction a, Direction b);

struct RiskRow
{
  std::int64_t n;
  double risk;
  double std_error;
  double mean_h_hat;
  double mean_angle_err;
};

struct RiskReport
{
  std::vector<RiskRow> rows;
};

//! Per-replication detail behind one RiskRow.
struct McResult
{
  RiskRow row;
  std::vector<double> errors; // |F_hat(t) - F(t)| (pointwise) or the L_r norm (global)
  std::vector<double> h_hats;
};

//! Pointwise: (mean |F_hat(t) - F(t)|^r)^{1/r} with a jackknife standard error.
//! Global: L_r norm over the midpoint grid on [-1/2, 1/2]^2, averaged over reps.
McResult mc_risk(const ExperimentConfig& cfg, std::int64_t n);

RiskReport run_experiment(const ExperimentConfig& cfg);

void write_report_csv(std::ostream& out, const RiskReport& report);
RiskReport read_report_csv(std::istream& in);

struct RateFit
{
  double slope;
  double intercept;
  double slope_stderr;
};

//! Least squares of log risk on log(ln n / n). Throws std::invalid_argument
//! with fewer than three distinct n or a nonpositive risk.
RateFit rate_fit(const RiskReport& report);

//! One row of the calibration sweep.
struct CalibrationRow
{
  double kappa;
  std::size_t runs;
  std::size_t small_h; // runs with h_hat < 1
  double fraction;
  bool qualifies;
};

struct CalibrationResult
{
  std::vector<CalibrationRow> sweep;
  std::optional<double> kappa; // smallest qualifying kappa
};

//! Null experiment (responses are pure noise) for kappa in {2^-4, ..., 2^6}; a
//! kappa qualifies when h_hat < 1 in at most 5% of the runs.
CalibrationResult calibrate(const ExperimentConfig& cfg);

} // namespace siren

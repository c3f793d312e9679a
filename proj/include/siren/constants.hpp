#pragma once

#include <cstdint>
#include <optional>

namespace siren {

//! Tail envelope of the noise: P(eps > x) <= upsilon * exp(-omega_cap * x^omega).
struct NoiseEnvelope
{
  double upsilon = 0.5;
  double omega_cap = 1.0;
  double omega = 2.0;

  //! Throws std::invalid_argument unless all fields are positive and omega_cap <= 1.
  void validate() const;
  //! 2 Upsilon Omega^{-2/omega} Gamma(1 + 2/omega), an upper bound on the noise
  //! variance over the whole envelope class.
  double variance_bound() const;
};

enum class ThresholdMode
{
  theory,
  calibrated
};

struct ProcedureParams
{
  double r = 1.0;         // risk order
  double g_lower = 1.0 / 36.0;
  double kernel_sup = 2.0;
  double kernel_l1 = 1.0;
  double lipschitz_q = 4.0;
  ThresholdMode mode = ThresholdMode::theory;
  double kappa = 1.0;     // used in calibrated mode only

  void validate() const;
};

struct BandwidthScales
{
  double h_min;
  double frak_h;
};

//! h_min = ln^{1+2/omega}(n) / n,  frak_h = sqrt(ln^{1+1/omega}(n) / n). n >= 3.
BandwidthScales bandwidth_scales(std::int64_t n, double omega);

struct DerivedConstants
{
  std::int64_t n;
  double h_min;
  double frak_h;
  double tau;
  double sigma_sq;
  double c1, c2, c3, c4;
  double C1, C2, C3, C4, C5;
};

//! All n-dependent quantities of the selection procedure. In calibrated mode
//! C1 = C2 = kappa sqrt(ln n), and C3 = C4 = kappa sqrt(n frak_h^2 / ln n), so
//! that C5 = ||K||_1^2 + 1/2 + kappa / sqrt(ln n).
DerivedConstants derive_constants(std::int64_t n, const NoiseEnvelope& noise,
                                  const ProcedureParams& params);

struct SampleSizeBounds
{
  std::optional<std::int64_t> n0;
  std::optional<std::int64_t> n1;
};

//! Smallest m such that the n0 (resp. n1) condition holds for every n in
//! [m, n_scan_cap]; empty when the condition already fails at the cap.
SampleSizeBounds min_sample_sizes(double beta0, double big_m, const NoiseEnvelope& noise,
                                  const ProcedureParams& params, std::int64_t n_scan_cap);

//! TH(eta) = 2 [ ||K||_inf^2 sqrt(ln n) + f_hat_inf C1 + C2 ] (eta n)^{-1/2}.
double threshold(double eta, std::int64_t n, double f_hat_inf, const DerivedConstants& dc,
                 double kernel_sup);

} // namespace siren

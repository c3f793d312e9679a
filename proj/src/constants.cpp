#include "siren/constants.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace siren {

void NoiseEnvelope::validate() const
{
  if (!(upsilon > 0.0) || !(omega_cap > 0.0) || omega_cap > 1.0 || !(omega > 0.0))
    throw std::invalid_argument("noise envelope needs upsilon > 0, omega_cap in (0,1], omega > 0");
}

double NoiseEnvelope::variance_bound() const
{
  return 2.0 * upsilon * std::pow(omega_cap, -2.0 / omega) * std::tgamma(1.0 + 2.0 / omega);
}

void ProcedureParams::validate() const
{
  if (!(g_lower > 0.0) || !(g_lower < 1.0))
    throw std::invalid_argument("g_lower must lie in (0, 1)");
  if (!(r >= 1.0))
    throw std::invalid_argument("risk order r must be >= 1");
  if (mode == ThresholdMode::calibrated && !(kappa > 0.0))
    throw std::invalid_argument("kappa must be positive in calibrated mode");
}

BandwidthScales bandwidth_scales(std::int64_t n, double omega)
{
  if (n < 3)
    throw std::invalid_argument("bandwidth scales need n >= 3");
  const double nn = static_cast<double>(n);
  const double ln = std::log(nn);
  return { std::pow(ln, 1.0 + 2.0 / omega) / nn, std::sqrt(std::pow(ln, 1.0 + 1.0 / omega) / nn) };
}

DerivedConstants derive_constants(std::int64_t n, const NoiseEnvelope& noise,
                                  const ProcedureParams& params)
{
  noise.validate();
  params.validate();
  const auto [h_min, frak_h] = bandwidth_scales(n, noise.omega);
  const double nn = static_cast<double>(n);
  const double ln = std::log(nn);
  const double r = params.r;
  const double q = params.lipschitz_q;
  const double g_inv = 1.0 / params.g_lower;
  const double g_inv_sqrt = std::sqrt(g_inv);
  const double ksup2 = params.kernel_sup * params.kernel_sup;
  const double tail = (4.0 * r + 1.0) / noise.omega_cap;

  DerivedConstants dc{};
  dc.n = n;
  dc.h_min = h_min;
  dc.frak_h = frak_h;
  dc.tau = std::pow(tail * ln, 1.0 / noise.omega);
  dc.sigma_sq = noise.variance_bound();

  const double lip_term = 12.0 * q + std::sqrt(2.0);
  dc.c1 = 730.0 * std::log(16.0 * nn * nn * g_inv_sqrt * lip_term) + 8.0 * r * ln + 394.0;
  dc.c2 = 730.0 * std::log(16.0 * nn * nn * dc.tau * g_inv_sqrt * lip_term) + 8.0 * r * ln + 394.0;
  dc.c3 = 365.0 * std::log(5.0 * nn * nn * q * g_inv_sqrt) + 8.0 * r * ln + 197.0;
  dc.c4 = 365.0 * std::log(5.0 * nn * nn * dc.tau * q * g_inv_sqrt) + 8.0 * r * ln + 197.0;

  const double sigma_or_one = std::max(std::sqrt(dc.sigma_sq), 1.0);
  const double nh2 = nn * frak_h * frak_h;
  const double inv_sqrt_nh2 = 1.0 / std::sqrt(nh2);

  if (params.mode == ThresholdMode::calibrated) {
    dc.C1 = params.kappa * std::sqrt(ln);
    dc.C2 = params.kappa * std::sqrt(ln);
    dc.C3 = params.kappa * std::sqrt(nh2 / ln);
    dc.C4 = params.kappa * std::sqrt(nh2 / ln);
    dc.C5 = params.kernel_l1 * params.kernel_l1 + 0.5 + params.kappa / std::sqrt(ln);
    return dc;
  }

  const double w = noise.omega;
  dc.C1 = 2.0 * std::sqrt(2.0) * g_inv_sqrt * ksup2 * std::sqrt(dc.c1) +
          (8.0 / 3.0) * dc.c1 * std::pow(ln, -(2.0 + w) / (2.0 * w)) * g_inv * ksup2;
  dc.C2 = 2.0 * std::sqrt(2.0) * sigma_or_one * g_inv_sqrt * ksup2 * std::sqrt(dc.c2) +
          (8.0 / 3.0) * dc.c2 * std::pow(ln, -0.5) * g_inv * ksup2 * std::pow(tail, 1.0 / w);
  dc.C3 = 2.0 * std::sqrt(2.0) * g_inv_sqrt * ksup2 * std::sqrt(dc.c3) +
          (8.0 / 3.0) * g_inv * ksup2 * dc.c3 * inv_sqrt_nh2;
  dc.C4 = 2.0 * std::sqrt(2.0) * sigma_or_one * g_inv_sqrt * ksup2 * std::sqrt(dc.c4) +
          (8.0 / 3.0) * dc.tau * dc.c4 * inv_sqrt_nh2 * g_inv * ksup2;
  dc.C5 = params.kernel_l1 * params.kernel_l1 + inv_sqrt_nh2 * dc.C4 + 0.5;
  return dc;
}

SampleSizeBounds min_sample_sizes(double beta0, double big_m, const NoiseEnvelope& noise,
                                  const ProcedureParams& params, std::int64_t n_scan_cap)
{
  if (n_scan_cap < 3)
    throw std::invalid_argument("n_scan_cap must be >= 3");
  const double m_or_one = std::max(big_m, 1.0);

  auto cond0 = [&](std::int64_t n) {
    auto [h_min, frak_h] = bandwidth_scales(n, noise.omega);
    double ln = std::log(static_cast<double>(n));
    double worst = std::max(std::pow(frak_h, beta0),
                            std::pow(ln, 1.0 / noise.omega) * std::pow(h_min, beta0));
    return m_or_one * worst <= 1.0;
  };
  auto cond1 = [&](std::int64_t n) {
    auto dc = derive_constants(n, noise, params);
    double nh2 = static_cast<double>(n) * dc.frak_h * dc.frak_h;
    return dc.C3 / std::sqrt(nh2) <= 0.5;
  };

  auto scan = [&](auto&& cond) -> std::optional<std::int64_t> {
    if (!cond(n_scan_cap))
      return std::nullopt;
    std::int64_t m = n_scan_cap;
    while (m > 3 && cond(m - 1))
      --m;
    // n = 1, 2 are outside the domain of the bandwidth scales
    return m;
  };

  return { scan(cond0), scan(cond1) };
}

double threshold(double eta, std::int64_t n, double f_hat_inf, const DerivedConstants& dc,
                 double kernel_sup)
{
  if (!(eta > 0.0))
    throw std::invalid_argument("threshold needs eta > 0");
  const double nn = static_cast<double>(n);
  return 2.0 *
         (kernel_sup * kernel_sup * std::sqrt(std::log(nn)) + f_hat_inf * dc.C1 + dc.C2) /
         std::sqrt(eta * nn);
}

} // namespace siren

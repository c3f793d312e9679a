#pragma once

#include "siren/constants.hpp"
#include "siren/kernels.hpp"
#include "siren/sample.hpp"
#include "siren/selection.hpp"

#include <cstdint>
#include <memory>
#include <span>

namespace siren {

//! Product-kernel density estimate from an auxiliary design sample, with the
//! truncation level b_n = ln^{-3} n and accuracy a_n = (ln n / n)^{gamma / (2 (gamma + 1))}.
struct DensityEstimate
{
  std::shared_ptr<const std::function<double(Point)>> raw; // g_hat
  double bandwidth;
  double g_hat_min;  // inf of g_hat over the [-3, 3]^2 grid
  double g_hat_sup;  // max of g_hat over a grid on the auxiliary bounding box
  double b_n;
  double a_n;
  bool truncation_active; // g_hat_min <= b_n

  //! g_hat vee b_n
  double operator()(Point x) const;
  //! max(g_hat_min, b_n)
  double lower() const { return g_hat_min > b_n ? g_hat_min : b_n; }
  //! The truncated estimate as a design density for the estimators.
  DesignDensity as_design() const;
};

//! Bandwidth (ln n / n)^{1 / (2 (gamma + 1))} on both axes, built from the
//! auxiliary design points alone. Throws std::invalid_argument on an empty
//! sample, gamma <= 0 or n < 3.
DensityEstimate kde_truncated(std::span<const Point> aux_design, std::int64_t n, double gamma,
                              const Kernel1D& k, int grid_points = 121);

//! params with g_lower^{-1} replaced by 8 g_hat_min^{-2} ||g_hat||_inf.
ProcedureParams plugin_params(const ProcedureParams& params, const DensityEstimate& de);

//! 2 a_n g_hat_min^{-1} ||K||_1^2 F_hat_inf
double plugin_threshold_extra(const DensityEstimate& de, double kernel_l1, double f_hat_inf);

struct PluginThreshold
{
  double value;
  bool truncation_warning;
};

//! TH_new(eta) = TH_hat(eta) + 2 a_n g_hat_min^{-1} ||K||_1^2 F_hat_inf, with
//! TH_hat built from plugin constants.
PluginThreshold plugin_threshold(double eta, std::int64_t n, double f_hat_inf,
                                 const DensityEstimate& de, const DerivedConstants& dc_plugin,
                                 double kernel_sup, double kernel_l1);

//! Selection context for an estimator built on de.as_design().
SelectionContext make_plugin_context(const Estimator& est, int n_theta,
                                     const DerivedConstants& dc_plugin, const DensityEstimate& de,
                                     double kernel_sup, double kernel_l1);

} // namespace siren

#include "siren/density_plugin.hpp"

#include "siren/bucket_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace siren {

double DensityEstimate::operator()(Point x) const { return std::max((*raw)(x), b_n); }

DesignDensity DensityEstimate::as_design() const
{
  auto self = *this;
  return { [self](Point x) { return self(x); }, lower(), std::max(g_hat_sup, b_n) };
}

DensityEstimate kde_truncated(std::span<const Point> aux_design, std::int64_t n, double gamma,
                              const Kernel1D& k, int grid_points)
{
  if (aux_design.empty())
    throw std::invalid_argument("kde needs a nonempty auxiliary sample");
  if (!(gamma > 0.0) || n < 3 || grid_points < 2)
    throw std::invalid_argument("kde needs gamma > 0, n >= 3 and at least two grid points");
  const double dn = static_cast<double>(n);
  const double ln_n = std::log(dn);
  const double bw = std::pow(ln_n / dn, 1.0 / (2.0 * (gamma + 1.0)));

  struct Kde
  {
    std::vector<Point> pts;
    Kernel1D kernel;
    double bw;
    BucketGrid grid;
    double operator()(Point x) const
    {
      const double e = 0.5 * bw;
      double total = 0.0;
      for (auto i : grid.query({ x.x - e, x.y - e }, { x.x + e, x.y + e })) {
        const Point d = pts[i] - x;
        total += kernel(d.x / bw) * kernel(d.y / bw);
      }
      return total / (static_cast<double>(pts.size()) * bw * bw);
    }
  };
  std::vector<Point> pts(aux_design.begin(), aux_design.end());
  double extent = 3.0;
  for (const auto& p : pts)
    extent = std::max({ extent, std::abs(p.x), std::abs(p.y) });
  extent = std::ceil(extent + 1.0);
  auto kde = std::make_shared<Kde>(Kde{ pts, k, bw, BucketGrid(pts, std::max(0.5, bw), extent) });

  DensityEstimate de;
  de.raw = std::make_shared<const std::function<double(Point)>>(
    [kde](Point x) { return (*kde)(x); });
  de.bandwidth = bw;
  de.b_n = std::pow(ln_n, -3.0);
  de.a_n = std::pow(ln_n / dn, gamma / (2.0 * (gamma + 1.0)));

  de.g_hat_min = std::numeric_limits<double>::infinity();
  const double step = 6.0 / (grid_points - 1);
  for (int i = 0; i < grid_points; ++i)
    for (int j = 0; j < grid_points; ++j)
      de.g_hat_min = std::min(de.g_hat_min, (*kde)({ -3.0 + i * step, -3.0 + j * step }));

  double lo_x = pts[0].x, hi_x = pts[0].x, lo_y = pts[0].y, hi_y = pts[0].y;
  for (const auto& p : pts) {
    lo_x = std::min(lo_x, p.x);
    hi_x = std::max(hi_x, p.x);
    lo_y = std::min(lo_y, p.y);
    hi_y = std::max(hi_y, p.y);
  }
  de.g_hat_sup = 0.0;
  for (int i = 0; i < grid_points; ++i)
    for (int j = 0; j < grid_points; ++j) {
      const Point x{ lo_x + (hi_x - lo_x) * i / (grid_points - 1),
                     lo_y + (hi_y - lo_y) * j / (grid_points - 1) };
      de.g_hat_sup = std::max(de.g_hat_sup, (*kde)(x));
    }
  de.truncation_active = de.g_hat_min <= de.b_n;
  return de;
}

ProcedureParams plugin_params(const ProcedureParams& params, const DensityEstimate& de)
{
  ProcedureParams out = params;
  const double g = de.lower();
  out.g_lower = g * g / (8.0 * std::max(de.g_hat_sup, de.b_n));
  return out;
}

double plugin_threshold_extra(const DensityEstimate& de, double kernel_l1, double f_hat_inf)
{
  return 2.0 * de.a_n / de.lower() * kernel_l1 * kernel_l1 * f_hat_inf;
}

PluginThreshold plugin_threshold(double eta, std::int64_t n, double f_hat_inf,
                                 const DensityEstimate& de, const DerivedConstants& dc_plugin,
                                 double kernel_sup, double kernel_l1)
{
  return { threshold(eta, n, f_hat_inf, dc_plugin, kernel_sup) +
             plugin_threshold_extra(de, kernel_l1, f_hat_inf),
           de.truncation_active };
}

SelectionContext make_plugin_context(const Estimator& est, int n_theta,
                                     const DerivedConstants& dc_plugin, const DensityEstimate& de,
                                     double kernel_sup, double kernel_l1)
{
  SelectionContext ctx{ &est, build_grids(n_theta, dc_plugin), {} };
  const double f_hat_inf = est.preliminary_sup(dc_plugin.frak_h, dc_plugin.C5).f_hat_inf;
  const auto n = static_cast<std::int64_t>(est.n());
  for (double h : ctx.grids.h.values)
    ctx.thresholds.push_back(
      plugin_threshold(h, n, f_hat_inf, de, dc_plugin, kernel_sup, kernel_l1).value);
  return ctx;
}

} // namespace siren

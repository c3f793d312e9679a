#include "siren/selection.hpp"

#include "siren/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace siren {

BandwidthGrid build_bandwidth_grid(double h_min)
{
  BandwidthGrid g;
  g.values.push_back(1.0);
  for (int k = 1;; ++k) {
    double h = std::ldexp(1.0, -k);
    if (h < 0.5 * h_min)
      break;
    g.values.push_back(h);
  }
  return g;
}

DirectionGrid build_direction_grid(int n_theta)
{
  if (n_theta < 4 || n_theta % 2 != 0)
    throw std::invalid_argument("direction grid size must be even and at least 4");
  DirectionGrid g;
  const auto n = static_cast<std::size_t>(n_theta);
  g.directions.resize(n);
  for (std::size_t j = 0; j < n / 2; ++j) {
    g.directions[j] =
      Direction::from_angle(2.0 * std::numbers::pi * static_cast<double>(j) / n_theta);
    g.directions[j + n / 2] = -g.directions[j];
  }
  return g;
}

Grids build_grids(int n_theta, const DerivedConstants& dc)
{
  return { build_bandwidth_grid(dc.h_min), build_direction_grid(n_theta) };
}

LocalEstimates compute_local_estimates(const Estimator& est, const Grids& grids, Point t)
{
  const auto& hs = grids.h.values;
  const auto& dirs = grids.theta.directions;
  LocalEstimates le;
  le.n_h = hs.size();
  le.n_theta = dirs.size();
  const std::size_t nt = le.n_theta, nh = le.n_h;

  const LocalWindow window = est.local_window(t);
  le.singles.resize(nh * nt);
  le.pairs.resize(nh * nt * nt);
  for (std::size_t k = 0; k < nh; ++k) {
    for (std::size_t j = 0; j < nt; ++j)
      le.singles[k * nt + j] = est.single(window, dirs[j], hs[k]);

    double* table = &le.pairs[k * nt * nt];
    for (std::size_t j = 0; j < nt; ++j) {
      const std::size_t ja = grids.theta.antipode(j);
      for (std::size_t m = 0; m < nt; ++m) {
        const std::size_t ma = grids.theta.antipode(m);
        const std::size_t self = j * nt + m;
        const std::size_t canon = std::min({ self, m * nt + j, ja * nt + ma, ma * nt + ja });
        table[self] =
          canon == self ? est.pair(window, dirs[j], dirs[m], hs[k]) : table[canon];
      }
    }
  }

  le.d1.assign(nt * nh, 0.0);
  for (std::size_t j = 0; j < nt; ++j)
    for (std::size_t k = 0; k < nh; ++k) {
      double best = 0.0;
      for (std::size_t m = 0; m < nt; ++m)
        best = std::max(best, std::abs(le.pair(k, j, m) - le.single(k, m)));
      le.d1[j * nh + k] = best;
    }

  le.d2.assign(nh * nh, 0.0);
  for (std::size_t kh = 0; kh < nh; ++kh)
    for (std::size_t ke = kh; ke < nh; ++ke) {
      double best = 0.0;
      for (std::size_t j = 0; j < nt; ++j)
        best = std::max(best, std::abs(le.single(kh, j) - le.single(ke, j)));
      le.d2[kh * nh + ke] = best;
    }
  return le;
}

std::vector<double> threshold_table(const Grids& grids, std::int64_t n, double f_hat_inf,
                                    const DerivedConstants& dc, double kernel_sup)
{
  std::vector<double> th;
  th.reserve(grids.h.values.size());
  for (double h : grids.h.values)
    th.push_back(threshold(h, n, f_hat_inf, dc, kernel_sup));
  return th;
}

Residuals residuals(const LocalEstimates& le, const std::vector<double>& th, std::size_t j,
                    std::size_t k)
{
  if (th.size() != le.n_h || j >= le.n_theta || k >= le.n_h)
    throw std::invalid_argument("residuals: index or threshold table out of range");
  Residuals r{ 0.0, 0.0 };
  for (std::size_t ke = k; ke < le.n_h; ++ke) {
    r.r1 = std::max(r.r1, std::max(0.0, le.d1[j * le.n_h + ke] - th[ke]));
    r.r2 = std::max(r.r2, std::max(0.0, le.d2[k * le.n_h + ke] - th[ke]));
  }
  return r;
}

SelectionResult select_from(const LocalEstimates& le, const Grids& grids,
                            const std::vector<double>& th)
{
  SelectionResult best;
  bool have = false;
  for (std::size_t k = 0; k < le.n_h; ++k)
    for (std::size_t j = 0; j < le.n_theta; ++j) {
      const Residuals r = residuals(le, th, j, k);
      const double obj = (r.r1 + r.r2) + th[k];
      if (!have || obj < best.objective) {
        have = true;
        best.theta_hat = grids.theta.directions[j];
        best.theta_index = j;
        best.h_hat = grids.h.values[k];
        best.h_index = k;
        best.objective = obj;
        best.r1 = r.r1;
        best.r2 = r.r2;
        best.th = th[k];
        best.estimate = le.single(k, j);
      }
    }
  return best;
}

SelectionContext make_selection_context(const Estimator& est, int n_theta,
                                        const DerivedConstants& dc, double kernel_sup)
{
  SelectionContext ctx{ &est, build_grids(n_theta, dc), {} };
  const double f_hat_inf = est.preliminary_sup(dc.frak_h, dc.C5).f_hat_inf;
  ctx.thresholds =
    threshold_table(ctx.grids, static_cast<std::int64_t>(est.n()), f_hat_inf, dc, kernel_sup);
  return ctx;
}

SelectionResult select(Point t, const SelectionContext& ctx)
{
  return select_from(compute_local_estimates(*ctx.estimator, ctx.grids, t), ctx.grids,
                     ctx.thresholds);
}

std::vector<SelectionResult> estimate_on_grid(const std::vector<Point>& points,
                                              const SelectionContext& ctx)
{
  std::vector<SelectionResult> out(points.size());
  parallel_for(points.size(), [&](std::size_t i) { out[i] = select(points[i], ctx); });
  return out;
}

} // namespace siren

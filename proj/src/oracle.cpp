#include "siren/oracle.hpp"

#include "siren/parallel.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace siren {

namespace {

using boost::math::quadrature::gauss;
using boost::math::quadrature::gauss_kronrod;

constexpr int kDeltaSteps = 48;
constexpr int kMaxAExponent = 12;
constexpr int kAveragePanels = 8;

template <class F>
double integrate_adaptive(F&& fn, double a, double b, double tol = 1e-10)
{
  if (!(b > a))
    return 0.0;
  return gauss_kronrod<double, 15>::integrate(fn, a, b, 12, tol);
}

// Sorted cut points in [lo, hi] from the kernel pieces and mapped breakpoints.
std::vector<double> cuts(const Kernel1D& k, const std::vector<double>& extra, double lo,
                         double hi)
{
  std::vector<double> out{ lo, hi };
  for (double b : k.breakpoints())
    if (b > lo && b < hi)
      out.push_back(b);
  for (double b : extra)
    if (b > lo && b < hi)
      out.push_back(b);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double inner_bias(const LinkFunction& f, const Kernel1D& k, double delta, double z)
{
  std::vector<double> mapped;
  for (double b : f.breakpoints)
    mapped.push_back((b - z) / delta);
  const auto c = cuts(k, mapped, -0.5, 0.5);
  const double fz = f(z);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < c.size(); ++i)
    total += integrate_adaptive([&](double v) { return k(v) * (f(z + delta * v) - fz); },
                                c[i], c[i + 1]);
  return std::abs(total);
}

} // namespace

double approx_error(const LinkFunction& f, const Kernel1D& k, double h, double z)
{
  if (!(h > 0.0) || h > 1.0)
    throw std::invalid_argument("approx_error needs h in (0, 1]");
  double best = 0.0;
  for (int j = 0; j < kDeltaSteps; ++j)
    best = std::max(best, inner_bias(f, k, h * std::exp2(-j / 8.0), z));
  return best;
}

double maximal_approx_error(const LinkFunction& f, const Kernel1D& k, double h, double y)
{
  double best = approx_error(f, k, h, y);
  for (int j = 0; j <= kMaxAExponent; ++j) {
    const double a = std::ldexp(1.0, -j);
    const double width = 2.0 * a / kAveragePanels;
    double total = 0.0;
    for (int p = 0; p < kAveragePanels; ++p) {
      const double lo = y - a + p * width;
      total += gauss<double, 4>::integrate([&](double z) { return approx_error(f, k, h, z); }, lo,
                                           lo + width);
    }
    best = std::max(best, total / (2.0 * a));
  }
  return best;
}

OracleReport oracle_bandwidth_profile(const std::function<double(double)>& delta_star,
                                      double kernel_sup, std::int64_t n, double h_min,
                                      double rel_tol)
{
  if (n < 3 || !(h_min > 0.0) || h_min > 1.0)
    throw std::invalid_argument("oracle bandwidth needs n >= 3 and h_min in (0, 1]");
  const double dn = static_cast<double>(n);
  const double target = kernel_sup * std::sqrt(std::log(dn));
  auto criterion = [&](double h, double& ds) {
    ds = delta_star(h);
    return std::sqrt(dn * h) * ds;
  };

  double ds_hi = 0.0;
  const double g_hi = criterion(1.0, ds_hi);
  if (g_hi <= target)
    return { 1.0, ds_hi, g_hi - target, false };
  double ds_lo = 0.0;
  const double g_lo = criterion(h_min, ds_lo);
  if (g_lo > target)
    return { h_min, ds_lo, g_lo - target, true };

  double lo = h_min, hi = 1.0, g_at_lo = g_lo;
  while (hi / lo - 1.0 > rel_tol) {
    const double mid = std::sqrt(lo * hi);
    double ds = 0.0;
    const double g = criterion(mid, ds);
    if (g <= target) {
      lo = mid;
      ds_lo = ds;
      g_at_lo = g;
    } else {
      hi = mid;
    }
  }
  return { lo, ds_lo, g_at_lo - target, false };
}

OracleReport oracle_bandwidth(const LinkFunction& f, const Kernel1D& k, std::int64_t n, double y,
                              double h_min, double rel_tol)
{
  return oracle_bandwidth_profile(
    [&](double h) { return maximal_approx_error(f, k, h, y); }, k.sup_norm(), n, h_min, rel_tol);
}

double bias_functional(const LinkFunction& f, Direction theta_star, const Kernel1D& k,
                       Direction theta, double h, Point t, std::optional<Direction> pair_with)
{
  if (!(h > 0.0) || h > 1.0)
    throw std::invalid_argument("bias_functional needs h in (0, 1]");
  // x = t + c (h u a + v a_perp) in window coordinates (u, v) in [-1/2, 1/2]^2
  Direction axis = theta;
  double c = 1.0;
  if (pair_with) {
    const PairFrame frame = pair_frame(theta, *pair_with);
    axis = frame.axis;
    c = frame.dilation();
  }
  const double base = theta_star.dot(t);
  const double du = c * h * axis.dot(theta_star);
  const double dv = c * axis.perp().dot(theta_star);

  auto outer = [&](double v) {
    const double z0 = base + dv * v;
    std::vector<double> mapped;
    if (du != 0.0)
      for (double b : f.breakpoints)
        mapped.push_back((b - z0) / du);
    const auto u_cuts = cuts(k, mapped, -0.5, 0.5);
    double inner = 0.0;
    for (std::size_t i = 0; i + 1 < u_cuts.size(); ++i)
      inner += integrate_adaptive([&](double u) { return k(u) * f(z0 + du * u); }, u_cuts[i],
                                  u_cuts[i + 1]);
    return k(v) * inner;
  };
  // cut v where the whole inner line crosses a breakpoint when du == 0
  std::vector<double> extra;
  if (dv != 0.0)
    for (double b : f.breakpoints)
      extra.push_back((b - base) / dv);
  const auto vc = cuts(k, extra, -0.5, 0.5);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < vc.size(); ++i)
    total += integrate_adaptive(outer, vc[i], vc[i + 1], 1e-9);
  return total;
}

double oracle_point_risk(const LinkFunction& f, Direction theta_star, double h_star, Point t,
                         double r, std::size_t reps,
                         const std::function<Estimator(std::size_t)>& make_estimator)
{
  if (!(r >= 1.0) || reps == 0)
    throw std::invalid_argument("oracle_point_risk needs r >= 1 and reps >= 1");
  const double truth = f(theta_star.dot(t));
  std::vector<double> err(reps);
  parallel_for(reps, [&](std::size_t i) {
    const Estimator est = make_estimator(i);
    err[i] = std::pow(std::abs(est.single(theta_star, h_star, t) - truth), r);
  });
  double total = 0.0;
  for (double e : err)
    total += e;
  return std::pow(total / static_cast<double>(reps), 1.0 / r);
}

} // namespace siren

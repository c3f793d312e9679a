#include "siren/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace siren {

namespace {

// Neumaier compensated accumulator.
struct CompensatedSum
{
  double sum = 0.0;
  double comp = 0.0;

  void add(double x)
  {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

constexpr double kLocalRadiusSq = 2.0;

} // namespace

double directional_sum(const Kernel1D& k, std::span<const LocalTerm> terms, Direction axis,
                       double along, double across)
{
  const Direction perp = axis.perp();
  const double ax = axis.x(), ay = axis.y();
  const double px = perp.x(), py = perp.y();
  const double inv_along = 1.0 / along, inv_across = 1.0 / across;
  CompensatedSum acc;
  for (const auto& term : terms) {
    const double u = (ax * term.dx + ay * term.dy) * inv_along;
    if (u > 0.5 || u < -0.5)
      continue;
    const double v = (px * term.dx + py * term.dy) * inv_across;
    if (v > 0.5 || v < -0.5)
      continue;
    if (!std::isfinite(term.weight))
      throw std::domain_error("design density vanishes at contributing point " +
                              std::to_string(term.index));
    acc.add((k(u) * k(v)) * term.weight);
  }
  return acc.value();
}

Estimator::Estimator(Sample sample, DesignDensity density, Kernel1D kernel)
  : sample_(std::move(sample))
  , density_(std::move(density))
  , kernel_(std::move(kernel))
  , grid_(sample_.xs())
{
  weights_.resize(sample_.size());
  for (std::size_t i = 0; i < sample_.size(); ++i) {
    double g = density_(sample_.xs()[i]);
    weights_[i] = g > 0.0 ? sample_.ys()[i] / g : std::numeric_limits<double>::quiet_NaN();
  }
}

std::vector<LocalTerm> Estimator::terms_in_box(Point t, Point lo, Point hi) const
{
  std::vector<LocalTerm> out;
  for (auto i : grid_.query(lo, hi)) {
    Point d = sample_.xs()[i] - t;
    out.push_back({ d.x, d.y, weights_[i], i });
  }
  return out;
}

LocalWindow Estimator::local_window(Point t) const
{
  const double r = std::sqrt(kLocalRadiusSq) + 1e-9;
  LocalWindow w{ t, {} };
  for (const auto& term : terms_in_box(t, { t.x - r, t.y - r }, { t.x + r, t.y + r }))
    if (term.dx * term.dx + term.dy * term.dy <= kLocalRadiusSq + 1e-9)
      w.terms.push_back(term);
  return w;
}

double Estimator::single(const LocalWindow& w, Direction theta, double h) const
{
  if (!(h > 0.0) || h > 1.0)
    throw std::invalid_argument("bandwidth must lie in (0, 1]");
  return directional_sum(kernel_, w.terms, theta, h, 1.0) / (static_cast<double>(n()) * h);
}

double Estimator::pair(const LocalWindow& w, Direction theta, Direction nu, double h) const
{
  if (!(h > 0.0) || h > 1.0)
    throw std::invalid_argument("bandwidth must lie in (0, 1]");
  const PairFrame frame = pair_frame(theta, nu);
  const double dil = frame.dilation();
  return directional_sum(kernel_, w.terms, frame.axis, h * dil, dil) /
         (static_cast<double>(n()) * 2.0 * frame.s * h);
}

double Estimator::single(Direction theta, double h, Point t) const
{
  // window: |theta.d| <= h/2, |theta_perp.d| <= 1/2
  const double ex = 0.5 * (h * std::abs(theta.x()) + std::abs(theta.y())) + 1e-9;
  const double ey = 0.5 * (h * std::abs(theta.y()) + std::abs(theta.x())) + 1e-9;
  LocalWindow w{ t, terms_in_box(t, { t.x - ex, t.y - ey }, { t.x + ex, t.y + ey }) };
  return single(w, theta, h);
}

double Estimator::pair(Direction theta, Direction nu, double h, Point t) const
{
  const PairFrame frame = pair_frame(theta, nu);
  const double dil = frame.dilation();
  const Direction a = frame.axis;
  const double ex = 0.5 * dil * (h * std::abs(a.x()) + std::abs(a.y())) + 1e-9;
  const double ey = 0.5 * dil * (h * std::abs(a.y()) + std::abs(a.x())) + 1e-9;
  LocalWindow w{ t, terms_in_box(t, { t.x - ex, t.y - ey }, { t.x + ex, t.y + ey }) };
  return pair(w, theta, nu, h);
}

double Estimator::preliminary(Point v, double frak_h) const
{
  const double e = 0.5 * frak_h + 1e-9;
  auto terms = terms_in_box(v, { v.x - e, v.y - e }, { v.x + e, v.y + e });
  return directional_sum(kernel_, terms, Direction(), frak_h, frak_h) /
         (static_cast<double>(n()) * frak_h * frak_h);
}

PreliminarySup Estimator::preliminary_sup(double frak_h, double c5, int refine) const
{
  if (!(frak_h > 0.0) || refine < 1)
    throw std::invalid_argument("preliminary_sup needs frak_h > 0 and refine >= 1");
  constexpr double lo = -2.5;
  constexpr double span = 5.0;
  const auto intervals = static_cast<std::int64_t>(std::ceil(span / (frak_h / 4.0))) * refine;
  const double step = span / static_cast<double>(intervals);
  const std::size_t m = static_cast<std::size_t>(intervals) + 1;
  auto node = [&](std::int64_t k) { return lo + static_cast<double>(k) * step; };

  // Scatter every observation onto the nodes of its kernel window, in index
  // order, so each node accumulates exactly the sum preliminary() would form.
  std::vector<CompensatedSum> acc(m * m);
  const double half = 0.5 * frak_h;
  const double inv_h = 1.0 / frak_h;
  for (std::size_t i = 0; i < n(); ++i) {
    const Point x = sample_.xs()[i];
    auto k_lo = [&](double c) {
      return std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil((c - half - lo) / step)) - 1);
    };
    auto k_hi = [&](double c) {
      return std::min<std::int64_t>(intervals,
                                    static_cast<std::int64_t>(std::floor((c + half - lo) / step)) + 1);
    };
    const std::int64_t x0 = k_lo(x.x), x1 = k_hi(x.x);
    const std::int64_t y0 = k_lo(x.y), y1 = k_hi(x.y);
    if (x0 > x1 || y0 > y1)
      continue;
    for (std::int64_t ky_i = y0; ky_i <= y1; ++ky_i) {
      const double dy = x.y - node(ky_i);
      for (std::int64_t kx_i = x0; kx_i <= x1; ++kx_i) {
        const double dx = x.x - node(kx_i);
        // same arithmetic as directional_sum with axis (1, 0)
        const double u = (1.0 * dx + 0.0 * dy) * inv_h;
        if (u > 0.5 || u < -0.5)
          continue;
        const double v = (-0.0 * dx + 1.0 * dy) * inv_h;
        if (v > 0.5 || v < -0.5)
          continue;
        if (!std::isfinite(weights_[i]))
          throw std::domain_error("design density vanishes at contributing point " +
                                  std::to_string(i));
        acc[static_cast<std::size_t>(ky_i) * m + static_cast<std::size_t>(kx_i)].add(
          (kernel_(u) * kernel_(v)) * weights_[i]);
      }
    }
  }
  const double scale = static_cast<double>(n()) * frak_h * frak_h;
  double best = 0.0;
  for (const auto& a : acc)
    best = std::max(best, std::abs(a.value() / scale));
  return { best, 2.0 * best + 2.0 * c5, step };
}

double Estimator::preliminary_lipschitz(double frak_h) const
{
  double total = 0.0;
  for (double w : weights_)
    if (std::isfinite(w))
      total += std::abs(w);
  return kernel_.lipschitz() * kernel_.sup_norm() * total /
         (static_cast<double>(n()) * frak_h * frak_h * frak_h);
}

} // namespace siren

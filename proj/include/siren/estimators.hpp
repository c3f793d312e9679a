#pragma once

#include "siren/bucket_grid.hpp"
#include "siren/geometry.hpp"
#include "siren/kernels.hpp"
#include "siren/sample.hpp"

#include <cstdint>
#include <vector>

namespace siren {

//! One observation seen from an estimation point t: d = X_i - t and the
//! inverse-density weighted response Y_i / g(X_i).
struct LocalTerm
{
  double dx;
  double dy;
  double weight;
  std::uint32_t index;
};

//! All observations within distance sqrt(2) of t, in index order. Every single
//! and pair window centred at t lies inside this disc.
struct LocalWindow
{
  Point t;
  std::vector<LocalTerm> terms;
};

//! Sum over terms of K(axis.d / along) K(axis_perp.d / across) * weight, in term
//! order with Neumaier compensation. Throws std::domain_error when a
//! contributing term has a non-finite weight (zero design density).
double directional_sum(const Kernel1D& k, std::span<const LocalTerm> terms, Direction axis,
                       double along, double across);

struct PreliminarySup
{
  double grid_max;  // max |F_hat(v)| over the grid on [-5/2, 5/2]^2
  double f_hat_inf; // 2 grid_max + 2 C5
  double step;      // grid spacing, at most frak_h / (4 refine)
};

//! Kernel estimators F_(theta,h), F_(theta,h)(nu,h) and the preliminary
//! estimator at scale frak_h for a fixed sample and design density.
//!
//! A pair estimate is evaluated through the factorisation
//! E_(theta,h)(nu,h) = (2s)^{-1/2} E_(axis,h), so singles and pairs share one
//! summation path and one bucket index.
class Estimator
{
public:
  Estimator(Sample sample, DesignDensity density, Kernel1D kernel);

  std::size_t n() const { return sample_.size(); }
  const Sample& sample() const { return sample_; }
  const Kernel1D& kernel() const { return kernel_; }
  const DesignDensity& density() const { return density_; }

  double single(Direction theta, double h, Point t) const;
  double pair(Direction theta, Direction nu, double h, Point t) const;

  LocalWindow local_window(Point t) const;
  double single(const LocalWindow& w, Direction theta, double h) const;
  double pair(const LocalWindow& w, Direction theta, Direction nu, double h) const;

  //! F_hat(v) = n^{-1} sum g^{-1}(X_i) K_frak_h(X_i - v) Y_i.
  double preliminary(Point v, double frak_h) const;

  //! Max of |F_hat| over a uniform grid on [-5/2, 5/2]^2 with spacing at most
  //! frak_h / (4 refine). Grid nodes of refine = 1 are a subset of those of any
  //! integer refine.
  PreliminarySup preliminary_sup(double frak_h, double c5, int refine = 1) const;

  //! Bound on the l1-Lipschitz constant of F_hat in v:
  //! Q ||K||_inf frak_h^{-3} n^{-1} sum_i |Y_i / g(X_i)|.
  double preliminary_lipschitz(double frak_h) const;

private:
  std::vector<LocalTerm> terms_in_box(Point t, Point lo, Point hi) const;

  Sample sample_;
  DesignDensity density_;
  Kernel1D kernel_;
  std::vector<double> weights_; // Y_i / g(X_i); NaN where g(X_i) <= 0
  BucketGrid grid_;
};

} // namespace siren

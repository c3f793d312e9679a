#pragma once

#include "siren/constants.hpp"
#include "siren/estimators.hpp"

#include <vector>

namespace siren {

//! Dyadic bandwidths {2^-k} within [h_min / 2, 1], largest first.
struct BandwidthGrid
{
  std::vector<double> values;
};

//! theta_j = (cos 2 pi j / N, sin 2 pi j / N). The second half is stored as the
//! exact negation of the first half, so theta_{j + N/2} == -theta_j bitwise.
struct DirectionGrid
{
  std::vector<Direction> directions;
  std::size_t size() const { return directions.size(); }
  std::size_t antipode(std::size_t j) const { return (j + size() / 2) % size(); }
};

struct Grids
{
  BandwidthGrid h;
  DirectionGrid theta;
};

//! Throws std::invalid_argument when n_theta is odd or below 4.
Grids build_grids(int n_theta, const DerivedConstants& dc);
BandwidthGrid build_bandwidth_grid(double h_min);
DirectionGrid build_direction_grid(int n_theta);

//! Every estimate the selection rule needs at one point t, independent of the
//! thresholds. Bandwidth indices follow the grid (0 = largest).
struct LocalEstimates
{
  std::size_t n_h = 0;
  std::size_t n_theta = 0;
  std::vector<double> singles; // [k * n_theta + j]  F_(theta_j, h_k)(t)
  std::vector<double> pairs;   // [(k * n_theta + j) * n_theta + m]  F_(theta_j,h_k)(theta_m,h_k)(t)
  std::vector<double> d1;      // [j * n_h + k]  max_m |pair(j, m, k) - single(m, k)|
  std::vector<double> d2;      // [kh * n_h + ke] max_j |single(j, kh) - single(j, ke)|, ke >= kh

  double single(std::size_t k, std::size_t j) const { return singles[k * n_theta + j]; }
  double pair(std::size_t k, std::size_t j, std::size_t m) const
  {
    return pairs[(k * n_theta + j) * n_theta + m];
  }
};

//! Pair values are computed once per class of the symmetries
//! (theta, nu) -> (nu, theta) and (theta, nu) -> (-theta, -nu), both exact.
LocalEstimates compute_local_estimates(const Estimator& est, const Grids& grids, Point t);

//! TH(h_k) for every bandwidth of the grid.
std::vector<double> threshold_table(const Grids& grids, std::int64_t n, double f_hat_inf,
                                    const DerivedConstants& dc, double kernel_sup);

struct Residuals
{
  double r1;
  double r2;
};

//! R1(theta_j, h_k) = max_{k' >= k} [d1(j, k') - TH(k')]_+ and
//! R2(h_k) = max_{k' >= k} [d2(k, k') - TH(k')]_+.
Residuals residuals(const LocalEstimates& le, const std::vector<double>& th, std::size_t j,
                    std::size_t k);

struct SelectionResult
{
  Direction theta_hat;
  std::size_t theta_index = 0;
  double h_hat = 1.0;
  std::size_t h_index = 0;
  double objective = 0.0;
  double r1 = 0.0;
  double r2 = 0.0;
  double th = 0.0;
  double estimate = 0.0;
};

//! Minimiser of R1 + R2 + TH over the grids. Ties go to the larger h, then to
//! the smaller direction index.
SelectionResult select_from(const LocalEstimates& le, const Grids& grids,
                            const std::vector<double>& th);

//! Estimator, grids and thresholds for one sample.
struct SelectionContext
{
  const Estimator* estimator;
  Grids grids;
  std::vector<double> thresholds;
};

//! Known-design context: computes F_hat_inf from the preliminary estimator and
//! the thresholds from dc.
SelectionContext make_selection_context(const Estimator& est, int n_theta,
                                        const DerivedConstants& dc, double kernel_sup);

SelectionResult select(Point t, const SelectionContext& ctx);

//! Independent per-point selections, in input order, run concurrently.
std::vector<SelectionResult> estimate_on_grid(const std::vector<Point>& points,
                                              const SelectionContext& ctx);

} // namespace siren

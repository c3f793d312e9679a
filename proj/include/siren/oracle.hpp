#pragma once

#include "siren/estimators.hpp"
#include "siren/kernels.hpp"
#include "siren/links.hpp"

#include <cstdint>
#include <functional>
#include <optional>

namespace siren {

//! Delta(h, z) = sup_{delta <= h} | \int K(v) [f(z + delta v) - f(z)] dv |,
//! the sup taken over delta in {h 2^{-j/8} : j = 0..47}.
double approx_error(const LinkFunction& f, const Kernel1D& k, double h, double z);

//! Maximal function sup_a (2a)^{-1} \int_{y-a}^{y+a} Delta(h, z) dz over
//! a in {2^-j : j = 0..12}, together with the a -> 0 limit Delta(h, y).
double maximal_approx_error(const LinkFunction& f, const Kernel1D& k, double h, double y);

struct OracleReport
{
  double h_star;
  double delta_star_at_h_star;
  //! sqrt(n h*) Delta*(h*) - ||K||_inf sqrt(ln n); <= 0 unless at_floor.
  double criterion_slack;
  //! The criterion already fails at h_min.
  bool at_floor = false;
};

//! Largest h in [h_min, 1] with sqrt(n h) Delta*(h) <= ||K||_inf sqrt(ln n),
//! by bisection in log h to the given relative tolerance. delta_star is any
//! nondecreasing profile h -> Delta*(h).
OracleReport oracle_bandwidth_profile(const std::function<double(double)>& delta_star,
                                      double kernel_sup, std::int64_t n, double h_min,
                                      double rel_tol = 1e-4);

OracleReport oracle_bandwidth(const LinkFunction& f, const Kernel1D& k, std::int64_t n, double y,
                              double h_min, double rel_tol = 1e-4);

//! S_(theta,h)(t) = det(E) \int K(E(x - t)) F(x) dx with F(x) = f(x . theta_star);
//! E is E_(theta,h), or E_(theta,h)(nu,h) when pair_with = nu.
double bias_functional(const LinkFunction& f, Direction theta_star, const Kernel1D& k,
                       Direction theta, double h, Point t,
                       std::optional<Direction> pair_with = std::nullopt);

//! (mean over reps of |F_(theta*, h*)(t) - F(t)|^r)^{1/r}; make_estimator(rep)
//! supplies an independent sample per replication. Replications run concurrently.
double oracle_point_risk(const LinkFunction& f, Direction theta_star, double h_star, Point t,
                         double r, std::size_t reps,
                         const std::function<Estimator(std::size_t)>& make_estimator);

} // namespace siren

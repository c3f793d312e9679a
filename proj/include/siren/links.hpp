#pragma once

#include <functional>
#include <string>
#include <vector>

namespace siren {

//! Smoothness metadata: f in the Hoelder ball H(beta, L), and
//! ||f||_inf + [f]_{beta0} <= M.
struct LinkMeta
{
  std::string kind;
  double beta = 1.0;
  double L = 1.0;
  double beta0 = 1.0;
  double M = 1.0;
};

//! Univariate link f with the points where it fails to be smooth.
struct LinkFunction
{
  std::function<double(double)> f;
  LinkMeta meta;
  std::vector<double> breakpoints;

  double operator()(double z) const { return f(z); }
};

LinkFunction constant_link(double c);
LinkFunction linear_link(double slope);
//! |z|^a
LinkFunction power_link(double a);

//! Members of H(beta, L) that saturate their smoothness at z = 0, beta in (0, 2]:
//!   beta <= 1:  (L/2) min(|z|, 1)^beta
//!   beta > 1:   odd, with f'(z) = (L/2) min(|z|, 2 - |z|)_+^{beta - 1}
LinkFunction holder_link(double beta, double L);

//! f(z) = L h^beta w(z / h), w the bump exp(-1 / (1 - 4z^2)) on (-1/2, 1/2)
//! divided by its H(beta, 1) norm proxy.
LinkFunction bump_link(double beta, double L, double h_scale);

//! Normalising constant of the bump for a given beta: the max over
//! m <= m_beta of ||w0^(m)||_inf and the Hoelder proxy
//! (2 ||g||_inf)^{1-alpha} ||g'||_inf^alpha, g = w0^(m_beta), on a 10^4-point grid.
double bump_norm(double beta);

//! z -> f(scale z); used when the index vector is not a unit vector.
LinkFunction rescaled_argument(const LinkFunction& f, double scale);

//! "holder:beta=1,L=1", "bump:beta=1,L=1,h_scale=0.5", "power:a=0.5",
//! "constant:c=1", "linear:slope=1". Throws std::invalid_argument.
LinkFunction parse_link_spec(const std::string& spec);

} // namespace siren

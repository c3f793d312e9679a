#include "siren/rates.hpp"

#include <cmath>
#include <stdexcept>

namespace siren {

std::string to_string(Regime regime)
{
  switch (regime) {
    case Regime::dense:
      return "dense";
    case Regime::boundary:
      return "boundary";
    case Regime::sparse:
      return "sparse";
  }
  return "unknown";
}

namespace {

void check_common(const RateQuery& q)
{
  if (q.n < 3)
    throw std::invalid_argument("rates need n >= 3");
  if (!(q.beta > 0.0) || !(q.L > 0.0))
    throw std::invalid_argument("rates need beta > 0 and L > 0");
}

} // namespace

double pointwise_rate(const RateQuery& q)
{
  check_common(q);
  const double n = static_cast<double>(q.n);
  const double e = 1.0 / (2.0 * q.beta + 1.0);
  return std::pow(q.L, e) * std::pow(std::log(n) / n, q.beta * e);
}

GlobalRate global_rate(const RateQuery& q)
{
  check_common(q);
  if (!(q.p > 1.0) || !(q.beta * q.p > 1.0))
    throw std::invalid_argument("global rate needs p > 1 and beta p > 1");
  if (!(q.r >= 1.0))
    throw std::invalid_argument("global rate needs r >= 1");

  const double n = static_cast<double>(q.n);
  const double ln_n = std::log(n);
  const double e = 1.0 / (2.0 * q.beta + 1.0);
  const double psi = std::pow(q.L, e) * std::pow(ln_n / n, q.beta * e);

  Regime regime = Regime::dense;
  if (!std::isinf(q.p)) {
    const double lhs = (2.0 * q.beta + 1.0) * q.p;
    if (lhs == q.r)
      regime = Regime::boundary;
    else if (lhs < q.r)
      regime = Regime::sparse;
  }

  switch (regime) {
    case Regime::dense:
      return { psi, std::pow(q.L, e) * std::pow(n, -q.beta * e), regime };
    case Regime::boundary:
      return { psi * std::pow(ln_n, 1.0 / q.r), psi, regime };
    case Regime::sparse: {
      const double inv_p = 1.0 / q.p, inv_r = 1.0 / q.r;
      const double l_exp = (0.5 - inv_r) / (q.beta - inv_p + 0.5);
      const double n_exp = (q.beta - inv_p + inv_r) / (2.0 * q.beta - 2.0 * inv_p + 1.0);
      const double v = std::pow(q.L, l_exp) * std::pow(ln_n / n, n_exp);
      return { v, v, regime };
    }
  }
  throw std::logic_error("unreachable");
}

} // namespace siren

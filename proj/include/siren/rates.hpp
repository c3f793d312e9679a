#pragma once

#include <cstdint>
#include <string>

namespace siren {

struct RateQuery
{
  std::int64_t n;
  double beta;
  double L;
  double p; // +infinity selects the Hoelder case
  double r;
};

enum class Regime
{
  dense,    // (2 beta + 1) p > r
  boundary, // (2 beta + 1) p = r
  sparse    // (2 beta + 1) p < r
};

std::string to_string(Regime regime);

//! psi_n = L^{1/(2 beta + 1)} (ln n / n)^{beta / (2 beta + 1)}.
double pointwise_rate(const RateQuery& q);

struct GlobalRate
{
  double upper;
  double lower;
  Regime regime;
};

//! Adaptive upper rate and minimax lower rate over the Nikol'skii-type
//! single-index class. Throws std::invalid_argument unless beta p > 1, p > 1,
//! r >= 1, n >= 3.
GlobalRate global_rate(const RateQuery& q);

} // namespace siren

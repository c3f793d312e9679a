#pragma once

#include <vector>

namespace siren {

//! Dense univariate polynomial in the monomial basis, coeffs[k] multiplies x^k.
class Polynomial
{
public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coeffs);

  double operator()(double x) const;
  Polynomial derivative() const;
  Polynomial antiderivative() const;
  //! Exact integral over [a, b].
  double integrate(double a, double b) const;

  Polynomial operator*(const Polynomial& other) const;
  Polynomial operator+(const Polynomial& other) const;
  Polynomial scaled(double factor) const;
  //! p(x) * x^k
  Polynomial shifted_degree(int k) const;

  //! Real roots in [a, b], located by dense sign scanning plus bisection.
  std::vector<double> roots_in(double a, double b, int scan_points = 4096) const;
  //! max |p| over [a, b] (endpoints and stationary points).
  double max_abs_on(double a, double b) const;

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<double>& coeffs() const { return coeffs_; }

private:
  std::vector<double> coeffs_;
};

} // namespace siren

#include "siren/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace siren {

Polynomial::Polynomial(std::vector<double> coeffs)
  : coeffs_(std::move(coeffs))
{
  while (coeffs_.size() > 1 && coeffs_.back() == 0.0)
    coeffs_.pop_back();
  if (coeffs_.empty())
    coeffs_.push_back(0.0);
}

double Polynomial::operator()(double x) const
{
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
    acc = acc * x + *it;
  return acc;
}

Polynomial Polynomial::derivative() const
{
  if (coeffs_.size() <= 1)
    return Polynomial({ 0.0 });
  std::vector<double> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k)
    d[k - 1] = static_cast<double>(k) * coeffs_[k];
  return Polynomial(std::move(d));
}

Polynomial Polynomial::antiderivative() const
{
  std::vector<double> a(coeffs_.size() + 1, 0.0);
  for (std::size_t k = 0; k < coeffs_.size(); ++k)
    a[k + 1] = coeffs_[k] / static_cast<double>(k + 1);
  return Polynomial(std::move(a));
}

double Polynomial::integrate(double a, double b) const
{
  // sum of c_k (b^{k+1} - a^{k+1}) / (k+1), accumulated in long double
  long double acc = 0.0L;
  long double pa = a, pb = b;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    acc += static_cast<long double>(coeffs_[k]) * (pb - pa) /
           static_cast<long double>(k + 1);
    pa *= a;
    pb *= b;
  }
  return static_cast<double>(acc);
}

Polynomial Polynomial::operator*(const Polynomial& other) const
{
  std::vector<double> out(coeffs_.size() + other.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    for (std::size_t j = 0; j < other.coeffs_.size(); ++j)
      out[i + j] += coeffs_[i] * other.coeffs_[j];
  return Polynomial(std::move(out));
}

Polynomial Polynomial::operator+(const Polynomial& other) const
{
  std::vector<double> out(std::max(coeffs_.size(), other.coeffs_.size()), 0.0);
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    out[i] += coeffs_[i];
  for (std::size_t i = 0; i < other.coeffs_.size(); ++i)
    out[i] += other.coeffs_[i];
  return Polynomial(std::move(out));
}

Polynomial Polynomial::scaled(double factor) const
{
  auto out = coeffs_;
  for (auto& c : out)
    c *= factor;
  return Polynomial(std::move(out));
}

Polynomial Polynomial::shifted_degree(int k) const
{
  std::vector<double> out(static_cast<std::size_t>(k), 0.0);
  out.insert(out.end(), coeffs_.begin(), coeffs_.end());
  return Polynomial(std::move(out));
}

std::vector<double> Polynomial::roots_in(double a, double b, int scan_points) const
{
  std::vector<double> roots;
  if (degree() <= 0)
    return roots;
  const double step = (b - a) / scan_points;
  double x0 = a;
  double f0 = (*this)(x0);
  if (f0 == 0.0)
    roots.push_back(x0);
  for (int i = 1; i <= scan_points; ++i) {
    double x1 = (i == scan_points) ? b : a + i * step;
    double f1 = (*this)(x1);
    if (f1 == 0.0) {
      roots.push_back(x1);
    } else if (f0 != 0.0 && std::signbit(f0) != std::signbit(f1)) {
      double lo = x0, hi = x1, flo = f0;
      for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi)
          break;
        double fm = (*this)(mid);
        if (std::signbit(fm) == std::signbit(flo)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    x0 = x1;
    f0 = f1;
  }
  return roots;
}

double Polynomial::max_abs_on(double a, double b) const
{
  double best = std::max(std::abs((*this)(a)), std::abs((*this)(b)));
  for (double r : derivative().roots_in(a, b))
    best = std::max(best, std::abs((*this)(r)));
  return best;
}

} // namespace siren

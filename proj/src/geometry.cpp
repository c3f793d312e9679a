#include "siren/geometry.hpp"

#include <algorithm>
#include <stdexcept>

namespace siren {

Direction Direction::normalize(double x, double y)
{
  double norm = std::hypot(x, y);
  if (!(norm > 0.0) || !std::isfinite(norm))
    throw std::invalid_argument("cannot normalize a zero or non-finite vector");
  return Direction(x / norm, y / norm);
}

Direction Direction::checked(double x, double y)
{
  if (std::abs(x * x + y * y - 1.0) > 1e-12)
    throw std::invalid_argument("direction is not a unit vector");
  return Direction(x, y);
}

double Matrix2::sup_norm() const
{
  return std::max({ std::abs(a11), std::abs(a12), std::abs(a21), std::abs(a22) });
}

Matrix2 single_matrix(Direction theta, double h)
{
  if (!(h > 0.0) || h > 1.0)
    throw std::invalid_argument("bandwidth must lie in (0, 1]");
  return { theta.x() / h, theta.y() / h, -theta.y(), theta.x() };
}

Matrix2 pair_matrix(Direction theta, Direction nu, double h)
{
  if (!(h > 0.0) || h > 1.0)
    throw std::invalid_argument("bandwidth must lie in (0, 1]");
  double c = nu.dot(theta);
  Direction t = c < 0.0 ? -theta : theta;
  double s = 1.0 + std::abs(c);
  double sx = t.x() + nu.x();
  double sy = t.y() + nu.y();
  double top = 2.0 * h * s;
  double bottom = 2.0 * s;
  return { sx / top, sy / top, -sy / bottom, sx / bottom };
}

PairFrame pair_frame(Direction theta, Direction nu)
{
  double c = nu.dot(theta);
  if (c < 0.0)
    return { Direction::normalize(nu.x() - theta.x(), nu.y() - theta.y()), 1.0 - c };
  return { Direction::normalize(theta.x() + nu.x(), theta.y() + nu.y()), 1.0 + c };
}

bool class_membership(const Matrix2& e, double a, double big_a)
{
  double d = std::abs(e.det);
  return d <= big_a && e.sup_norm() <= d / std::sqrt(2.0 * a);
}

} // namespace siren

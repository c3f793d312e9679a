#pragma once

#include <cmath>

namespace siren {

struct Point
{
  double x = 0.0;
  double y = 0.0;
};

inline Point operator-(Point a, Point b) { return { a.x - b.x, a.y - b.y }; }

//! Unit vector in R^2.
class Direction
{
public:
  //! (1, 0)
  Direction() = default;

  static Direction from_angle(double phi) { return Direction(std::cos(phi), std::sin(phi)); }
  //! Normalizes (x, y); throws std::invalid_argument on the zero vector.
  static Direction normalize(double x, double y);
  //! Accepts (x, y) as-is; throws unless x^2 + y^2 = 1 within 1e-12.
  static Direction checked(double x, double y);

  double x() const { return x_; }
  double y() const { return y_; }
  double dot(Direction o) const { return x_ * o.x_ + y_ * o.y_; }
  double dot(Point p) const { return x_ * p.x + y_ * p.y; }
  //! Rotation by +pi/2: (-y, x).
  Direction perp() const { return Direction(-y_, x_); }
  Direction operator-() const { return Direction(-x_, -y_); }
  double angle() const { return std::atan2(y_, x_); }

private:
  Direction(double x, double y)
    : x_(x)
    , y_(y)
  {}

  double x_ = 1.0;
  double y_ = 0.0;
};

//! 2x2 matrix with cached determinant.
struct Matrix2
{
  Matrix2(double a11, double a12, double a21, double a22)
    : a11(a11)
    , a12(a12)
    , a21(a21)
    , a22(a22)
    , det(a11 * a22 - a12 * a21)
  {}

  Point apply(Point p) const { return { a11 * p.x + a12 * p.y, a21 * p.x + a22 * p.y }; }
  //! max_{i,j} |E_ij|
  double sup_norm() const;
  Matrix2 scaled(double c) const { return { c * a11, c * a12, c * a21, c * a22 }; }

  double a11, a12, a21, a22;
  double det;
};

//! E_(theta,h): rows (theta/h) and theta_perp; det = 1/h. Requires h in (0, 1].
Matrix2 single_matrix(Direction theta, double h);

//! E_(theta,h)(nu,h) with the sign rule (theta -> -theta when nu.theta < 0);
//! the nu.theta = 0 case takes the nonnegative branch.
Matrix2 pair_matrix(Direction theta, Direction nu, double h);

//! Pair matrix factored as (2s)^{-1/2} single_matrix(axis, h), where
//! s = 1 + |nu.theta| and axis = unit(theta + nu), or unit(nu - theta) when
//! nu.theta < 0.
struct PairFrame
{
  Direction axis;
  double s;
  //! sqrt(2s), the dilation of both window axes.
  double dilation() const { return std::sqrt(2.0 * s); }
};

PairFrame pair_frame(Direction theta, Direction nu);

//! Membership in the class E_{a,A}: |det E| <= A and |E|_inf <= |det E| / sqrt(2a).
bool class_membership(const Matrix2& e, double a, double big_a);

} // namespace siren

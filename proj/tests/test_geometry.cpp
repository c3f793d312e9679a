#include <doctest.h>

#include "siren/geometry.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

using namespace siren;

namespace {

// Entries written straight from the pair-matrix display, sign rule included.
Matrix2 pair_by_display(double t1, double t2, double n1, double n2, double h)
{
  double c = t1 * n1 + t2 * n2;
  if (c < 0) {
    t1 = -t1;
    t2 = -t2;
  }
  double d = 1.0 + std::abs(c);
  return { (t1 + n1) / (2 * h * d), (t2 + n2) / (2 * h * d), -(t2 + n2) / (2 * d),
           (t1 + n1) / (2 * d) };
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

bool same(const Matrix2& a, const Matrix2& b, double tol)
{
  return near(a.a11, b.a11, tol) && near(a.a12, b.a12, tol) && near(a.a21, b.a21, tol) &&
         near(a.a22, b.a22, tol);
}

} // namespace

TEST_SUITE("geometry")
{
  TEST_CASE("single matrix examples")
  {
    auto e = single_matrix(Direction(), 0.25);
    CHECK(e.a11 == 4.0);
    CHECK(e.a12 == 0.0);
    CHECK(e.a22 == 1.0);
    CHECK(e.det == 4.0);
    auto f = single_matrix(Direction::checked(0.0, 1.0), 1.0);
    CHECK(f.a12 == 1.0);
    CHECK(f.a21 == -1.0);
    CHECK(f.det == 1.0);
    CHECK_THROWS_AS(single_matrix(Direction(), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(single_matrix(Direction(), 1.5), std::invalid_argument);
  }

  TEST_CASE("pair matrix examples")
  {
    auto e = pair_matrix(Direction(), Direction(), 0.25);
    CHECK(e.a11 == 2.0);
    CHECK(e.a12 == 0.0);
    CHECK(e.a22 == 0.5);
    CHECK(e.det == doctest::Approx(1.0));

    auto g = pair_matrix(Direction(), Direction::checked(0.0, 1.0), 0.5);
    CHECK(g.det >= 1.0 / (4 * 0.5) - 1e-15);
    CHECK(g.det <= 1.0 / (2 * 0.5) + 1e-15);
    auto fr = pair_frame(Direction(), Direction::checked(0.0, 1.0));
    CHECK(same(g, single_matrix(fr.axis, 0.5).scaled(1.0 / fr.dilation()), 1e-15));

    auto a = pair_matrix(Direction(), Direction::checked(-1.0, 0.0), 0.25);
    CHECK(a.det == doctest::Approx(1.0));
    auto b = pair_matrix(Direction::checked(-1.0, 0.0), Direction::checked(-1.0, 0.0), 0.25);
    CHECK(same(a, b, 0));
  }

  TEST_CASE("orthogonal pair takes the nonnegative branch")
  {
    auto th = Direction::checked(0.0, 1.0);
    auto nu = Direction();
    CHECK(same(pair_matrix(th, nu, 0.3), pair_by_display(0, 1, 1, 0, 0.3), 0));
  }

  TEST_CASE("class membership")
  {
    Matrix2 e(4, 0, 0, 1);
    CHECK(class_membership(e, 1.0 / 8, 8));
    CHECK_FALSE(class_membership(e, 1.0 / 8, 2));
    CHECK_FALSE(class_membership(Matrix2(40, 0, 0, 0.01), 1.0 / 8, 8));
  }

  TEST_CASE("random property sweep")
  {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> ang(-M_PI, M_PI);
    const double h_min = 8.483036976765437e-3;
    std::uniform_real_distribution<double> logh(std::log(h_min), 0.0);
    for (int i = 0; i < 20000; ++i) {
      double a = ang(rng), b = ang(rng), h = std::exp(logh(rng));
      auto th = Direction::from_angle(a), nu = Direction::from_angle(b);
      auto s = single_matrix(th, h);
      CHECK(std::abs(s.det * h - 1.0) < 1e-12);
      auto p = pair_matrix(th, nu, h);
      CHECK(same(p, pair_by_display(th.x(), th.y(), nu.x(), nu.y(), h), 1e-15));
      CHECK(p.det >= 1.0 / (4 * h) * (1 - 1e-12));
      CHECK(p.det <= 1.0 / (2 * h) * (1 + 1e-12));
      auto q = pair_matrix(nu, th, h);
      CHECK((same(p, q, 1e-12) || same(p, q.scaled(-1.0), 1e-12)));
      auto fr = pair_frame(th, nu);
      CHECK(same(p, single_matrix(fr.axis, h).scaled(1.0 / fr.dilation()), 1e-12));
      CHECK(class_membership(s, 1.0 / 8, 1.0 / h_min));
      CHECK(class_membership(p, 1.0 / 8, 1.0 / h_min));
    }
  }

  TEST_CASE("directions")
  {
    CHECK_THROWS_AS(Direction::normalize(0, 0), std::invalid_argument);
    CHECK_THROWS_AS(Direction::checked(1, 1), std::invalid_argument);
    auto d = Direction::normalize(3, 4);
    CHECK(d.x() == doctest::Approx(0.6));
    CHECK(d.perp().dot(d) == 0.0);
    CHECK((-d).x() == -d.x());
  }
}

#include <doctest.h>

#include "siren/density_plugin.hpp"

#include <cmath>
#include <memory>
#include <random>
#include <stdexcept>

using namespace siren;

namespace {

std::vector<Point> uniform_points(std::size_t n, std::uint64_t seed, double half = 3.0)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-half, half);
  std::vector<Point> xs(n);
  for (auto& x : xs)
    x = { u(rng), u(rng) };
  return xs;
}

DensityEstimate exact_uniform(double a_n)
{
  DensityEstimate de;
  de.raw = std::make_shared<const std::function<double(Point)>>([](Point) { return 1.0 / 36; });
  de.bandwidth = 0.3;
  de.g_hat_min = 1.0 / 36;
  de.g_hat_sup = 1.0 / 36;
  de.b_n = 1e-3;
  de.a_n = a_n;
  de.truncation_active = false;
  return de;
}

} // namespace

TEST_SUITE("density_plugin")
{
  TEST_CASE("accuracy and truncation levels")
  {
    auto xs = uniform_points(500, 1);
    auto de = kde_truncated(xs, 10000, 2.0, build_triangular());
    CHECK(de.a_n == doctest::Approx(0.0972953071318615).epsilon(1e-13));
    CHECK(de.bandwidth == doctest::Approx(std::pow(std::log(1e4) / 1e4, 1.0 / 6)).epsilon(1e-13));
    auto e10 = kde_truncated(xs, 22026, 2.0, build_triangular());
    CHECK(e10.b_n == doctest::Approx(1e-3).epsilon(1e-5));
  }

  TEST_CASE("kde matches the direct sum")
  {
    auto xs = uniform_points(3000, 2);
    auto k = build_triangular();
    auto de = kde_truncated(xs, 3000, 2.0, k);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-3.5, 3.5);
    for (int i = 0; i < 200; ++i) {
      Point x{ u(rng), u(rng) };
      double total = 0.0;
      for (const auto& p : xs)
        total += k((p.x - x.x) / de.bandwidth) * k((p.y - x.y) / de.bandwidth);
      total /= xs.size() * de.bandwidth * de.bandwidth;
      CHECK((*de.raw)(x) == doctest::Approx(total).epsilon(1e-12).scale(1e-12));
      CHECK(de(x) == doctest::Approx(std::max(total, de.b_n)).epsilon(1e-12));
      CHECK(de(x) >= de.b_n);
    }
  }

  TEST_CASE("truncated estimate never drops below b_n")
  {
    auto de = kde_truncated(uniform_points(2000, 4), 2000, 2.0, build_triangular());
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-6, 6);
    for (int i = 0; i < 10000; ++i)
      CHECK(de({ u(rng), u(rng) }) >= de.b_n);
    CHECK(de.as_design().g_lower_on_core == de.lower());
  }

  TEST_CASE("truncation flag")
  {
    auto wide = kde_truncated(uniform_points(20000, 6), 20000, 2.0, build_triangular());
    CHECK_FALSE(wide.truncation_active);
    CHECK(wide.g_hat_min > wide.b_n);
    CHECK(wide.g_hat_sup == doctest::Approx(1.0 / 36).epsilon(0.5));
    auto narrow = kde_truncated(uniform_points(2000, 7, 1.0), 2000, 2.0, build_triangular());
    CHECK(narrow.truncation_active);
    CHECK(narrow.lower() == narrow.b_n);
    auto dc = derive_constants(2000, { 0.5, 0.5, 2.0 }, ProcedureParams{});
    CHECK(plugin_threshold(1.0, 2000, 1.0, narrow, dc, 2.0, 1.0).truncation_warning);
  }

  TEST_CASE("invalid inputs")
  {
    std::vector<Point> none;
    CHECK_THROWS_AS(kde_truncated(none, 100, 2.0, build_triangular()), std::invalid_argument);
    auto xs = uniform_points(10, 8);
    CHECK_THROWS_AS(kde_truncated(xs, 100, 0.0, build_triangular()), std::invalid_argument);
    CHECK_THROWS_AS(kde_truncated(xs, 2, 2.0, build_triangular()), std::invalid_argument);
  }

  TEST_CASE("responses of the auxiliary sample are never read")
  {
    auto xs = uniform_points(1000, 9);
    Sample a(xs, std::vector<double>(1000, 0.0));
    Sample b(xs, std::vector<double>(1000, 1e300));
    auto da = kde_truncated(a.xs(), 1000, 2.0, build_triangular());
    auto db = kde_truncated(b.xs(), 1000, 2.0, build_triangular());
    CHECK(da.g_hat_min == db.g_hat_min);
    CHECK(da.g_hat_sup == db.g_hat_sup);
    CHECK(da({ 0.3, 0.3 }) == db({ 0.3, 0.3 }));
  }

  TEST_CASE("plugin threshold")
  {
    auto de = kde_truncated(uniform_points(4000, 10), 4000, 2.0, build_triangular());
    ProcedureParams p;
    p.mode = ThresholdMode::calibrated;
    auto dc = derive_constants(4000, { 0.5, 0.5, 2.0 }, plugin_params(p, de));
    for (double eta : { 1.0, 0.25, 0.01 })
      for (double f : { 0.0, 1.0, 20.0 }) {
        double base = threshold(eta, 4000, f, dc, 2.0);
        auto th = plugin_threshold(eta, 4000, f, de, dc, 2.0, 1.0);
        CHECK(th.value >= base);
        CHECK(th.value - base ==
              doctest::Approx(2 * de.a_n / de.lower() * f).epsilon(1e-12).scale(1e-12));
        auto zero = de;
        zero.a_n = 0.0;
        CHECK(plugin_threshold(eta, 4000, f, zero, dc, 2.0, 1.0).value == base);
      }
  }

  TEST_CASE("exact uniform estimate gives larger constants than the known density")
  {
    auto de = exact_uniform(0.05);
    ProcedureParams p; // theory mode, g_lower = 1/36
    auto pp = plugin_params(p, de);
    // 8 g^-2 ||g||_inf = 8 / g >= 1 / g
    CHECK(1.0 / pp.g_lower == doctest::Approx(8.0 * 36).epsilon(1e-13));
    NoiseEnvelope noise{ 0.5, 0.5, 2.0 };
    for (std::int64_t n : { 100, 10000, 1000000 }) {
      auto known = derive_constants(n, noise, p);
      auto plug = derive_constants(n, noise, pp);
      CHECK(plug.C1 >= known.C1);
      CHECK(plug.C2 >= known.C2);
      CHECK(plug.C3 >= known.C3);
      CHECK(plug.C4 >= known.C4);
      CHECK(plug.C5 >= known.C5);
    }
  }

  TEST_CASE("exact density and zero accuracy reduce to the known-density procedure")
  {
    auto xs = uniform_points(2000, 11);
    std::vector<double> ys(2000);
    for (std::size_t i = 0; i < ys.size(); ++i)
      ys[i] = std::cos(xs[i].x - xs[i].y);
    Sample s(xs, ys);
    auto de = exact_uniform(0.0);
    Estimator known(s, DesignDensity::uniform_box(3), build_triangular());
    Estimator plug(s, de.as_design(), build_triangular());
    ProcedureParams p;
    p.mode = ThresholdMode::calibrated;
    p.g_lower = plugin_params(p, de).g_lower;
    auto dc = derive_constants(2000, { 0.5, 0.5, 2.0 }, p);
    auto a = make_selection_context(known, 16, dc, 2.0);
    auto b = make_plugin_context(plug, 16, dc, de, 2.0, 1.0);
    CHECK(a.thresholds == b.thresholds);
    auto ra = select({ 0.1, 0.1 }, a), rb = select({ 0.1, 0.1 }, b);
    CHECK(ra.estimate == rb.estimate);
    CHECK(ra.h_hat == rb.h_hat);
    CHECK(ra.objective == rb.objective);
  }
}
